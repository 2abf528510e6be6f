"""
Spec-file parsing, orchestration and reporting.

Spec grammar (line oriented, ``#`` starts a comment)::

    group <kind> ranks <k> [<l>]
    aut <name>
      x -> word
    inv <name>
      x -> word
    witness <name> <word>          # FkxFl: <x-probe> | <y-probe>
    run n <lo>..<hi> budget <N>
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import random
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .autos import Automorphism, ValidationError
from .certify import (MappingTorus, ShuffleBudgetError, TrivialProbe, WitnessBounds, area_oracle,
                      bg_lower_bound, choose_probe, random_identity_word, t_shuffle)
from .classify import DehnClass, InconclusiveGrowth, classify
from .groups import KINDS, make_group
from .growth import BudgetError, growth_table, loglog_slope
from .normalize import decompose_fkxfl, normalize_f2xz, normalize_z2astz
from .words import MalformedWord

DEFAULT_BUDGET = 200_000
BUDGET_ENV = "DEHNTORI_BUDGET"
SCHEMA_PATH = Path(__file__).with_name("report.schema.json")


class SpecParseError(ValueError):
    def __init__(self, line: int, col: int, msg: str):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line, self.col, self.msg = line, col, msg


class MissingInverse(SpecParseError):
    pass


class UndeclaredGenerator(SpecParseError):
    pass


@dataclass
class AutBlock:
    name: str
    images: Dict[str, str] = field(default_factory=dict)
    inverses: Optional[Dict[str, str]] = None
    line: int = 0


@dataclass
class SpecFile:
    kind: str
    ranks: Tuple[int, ...]
    auts: Dict[str, AutBlock]
    witnesses: Dict[str, str] = field(default_factory=dict)
    n_range: Optional[Tuple[int, int]] = None
    budget: Optional[int] = None

    def group(self):
        return group_for(self.kind, self.ranks)

    def automorphism(self, name: str) -> Automorphism:
        blk = self.auts[name]
        return Automorphism(self.group(), blk.images, blk.inverses, name=name)

    def __eq__(self, other):
        if not isinstance(other, SpecFile):
            return NotImplemented
        key = lambda s: (s.kind, s.ranks, {n: (b.images, b.inverses) for n, b in s.auts.items()},
                         s.witnesses, s.n_range, s.budget)
        return key(self) == key(other)


def group_for(kind: str, ranks):
    if kind in ("F2xZ", "Z2astZ"):
        return make_group(kind)
    if kind == "F2":
        return make_group("F2", 2)
    return make_group(kind, *ranks)


_KIND_LOOKUP = {k.lower(): k for k in KINDS}


def _check_word(G, text: str, line: int, col0: int) -> str:
    for m in re.finditer(r"\S+", text):
        try:
            G.alphabet.parse(m.group(0))
        except MalformedWord as e:
            cls = UndeclaredGenerator if "undeclared" in str(e) else SpecParseError
            raise cls(line, col0 + m.start(), str(e)) from None
    return " ".join(text.split())


def parse_spec(text: str) -> SpecFile:
    kind = ranks = None
    G = None
    auts: Dict[str, AutBlock] = {}
    witnesses: Dict[str, str] = {}
    n_range = budget = None
    block: Optional[Tuple[str, AutBlock]] = None     # ("aut" | "inv", block)
    for ln, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        indent = len(body) - len(body.lstrip())
        toks = body.split()
        head = toks[0]
        if "->" in body:
            if block is None:
                raise SpecParseError(ln, indent + 1, "mapping line outside an aut or inv block")
            lhs, rhs = body.split("->", 1)
            gname = lhs.strip()
            if gname not in G.alphabet.names:
                raise UndeclaredGenerator(ln, indent + 1, f"undeclared generator {gname!r}")
            which, blk = block
            dest = blk.images if which == "aut" else blk.inverses
            if gname in dest:
                raise SpecParseError(ln, indent + 1, f"{gname} mapped twice")
            dest[gname] = _check_word(G, rhs, ln, len(lhs) + 3)
            continue
        block = None
        if head == "group":
            if kind is not None:
                raise SpecParseError(ln, 1, "group declared twice")
            if len(toks) < 2 or toks[1].lower() not in _KIND_LOOKUP:
                raise SpecParseError(ln, body.find(toks[1]) + 1 if len(toks) > 1 else 1,
                                     f"unknown group kind; expected one of {', '.join(KINDS)}")
            kind = _KIND_LOOKUP[toks[1].lower()]
            ranks = ()
            if len(toks) > 2:
                if toks[2] != "ranks" or len(toks) < 4:
                    raise SpecParseError(ln, body.find(toks[2]) + 1, "expected 'ranks <k> [<l>]'")
                try:
                    ranks = tuple(int(x) for x in toks[3:])
                except ValueError:
                    raise SpecParseError(ln, body.find(toks[3]) + 1, "ranks must be integers") from None
            try:
                G = group_for(kind, ranks)
            except (ValueError, TypeError) as e:
                raise SpecParseError(ln, 1, f"bad ranks for {kind}: {e}") from None
            continue
        if kind is None:
            raise SpecParseError(ln, indent + 1, "group must be declared first")
        if head in ("aut", "inv"):
            if len(toks) != 2:
                raise SpecParseError(ln, indent + 1, f"expected '{head} <name>'")
            name = toks[1]
            if head == "aut":
                if name in auts:
                    raise SpecParseError(ln, indent + 1, f"automorphism {name} declared twice")
                auts[name] = AutBlock(name, line=ln)
            else:
                if name not in auts:
                    raise SpecParseError(ln, body.find(name) + 1, f"inv for undeclared automorphism {name}")
                if auts[name].inverses is not None:
                    raise SpecParseError(ln, indent + 1, f"inv {name} given twice")
                auts[name].inverses = {}
            block = (head, auts[name])
        elif head == "witness":
            if len(toks) < 3 or toks[1] not in auts:
                raise SpecParseError(ln, indent + 1, "expected 'witness <declared aut> <word>'")
            rest = body[body.find(toks[1]) + len(toks[1]):]
            col = body.find(toks[2]) + 1
            parts = [_check_word(G, p, ln, col) for p in rest.split("|")]
            witnesses[toks[1]] = " | ".join(parts)
        elif head == "run":
            i = 1
            while i < len(toks):
                key = toks[i]
                if i + 1 >= len(toks):
                    raise SpecParseError(ln, body.find(key) + 1, f"missing value for {key}")
                val = toks[i + 1]
                col = body.find(val) + 1
                if key == "n":
                    m = re.fullmatch(r"(\d+)\.\.(\d+)", val)
                    if not m or int(m.group(1)) > int(m.group(2)):
                        raise SpecParseError(ln, col, "expected n <lo>..<hi>")
                    n_range = (int(m.group(1)), int(m.group(2)))
                elif key == "budget":
                    if not val.isdigit():
                        raise SpecParseError(ln, col, "budget must be a positive integer")
                    budget = int(val)
                else:
                    raise SpecParseError(ln, body.find(key) + 1, f"unknown run directive {key!r}")
                i += 2
        else:
            raise SpecParseError(ln, indent + 1, f"unknown keyword {head!r}")
    if kind is None:
        raise SpecParseError(1, 1, "empty spec: no group declaration")
    if not auts:
        raise SpecParseError(1, 1, "spec declares no automorphisms")
    for blk in auts.values():
        if blk.inverses is None:
            raise MissingInverse(blk.line, 1, f"automorphism {blk.name} has no inv block")
        for dest, what in ((blk.images, "aut"), (blk.inverses, "inv")):
            missing = [g for g in G.alphabet.names if g not in dest]
            if missing:
                raise SpecParseError(blk.line, 1, f"{what} {blk.name} gives no image for {missing[0]}")
    return SpecFile(kind, ranks, auts, witnesses, n_range, budget)


def format_spec(spec: SpecFile) -> str:
    lines = [f"group {spec.kind}" + (" ranks " + " ".join(map(str, spec.ranks)) if spec.ranks else "")]
    for blk in spec.auts.values():
        lines.append(f"aut {blk.name}")
        lines += [f"  {g} -> {w}" for g, w in blk.images.items()]
        lines.append(f"inv {blk.name}")
        lines += [f"  {g} -> {w}" for g, w in blk.inverses.items()]
    for name, w in spec.witnesses.items():
        lines.append(f"witness {name} {w}")
    run = []
    if spec.n_range:
        run.append(f"n {spec.n_range[0]}..{spec.n_range[1]}")
    if spec.budget is not None:
        run.append(f"budget {spec.budget}")
    if run:
        lines.append("run " + " ".join(run))
    return "\n".join(lines) + "\n"


# -- reports ------------------------------------------------------------------------

@dataclass
class ReportBundle:
    records: List[dict]
    tables: Dict[str, List[List]]       # csv name -> rows (header first)
    exit_code: int

    def to_json(self) -> str:
        return json.dumps({"records": self.records, "exit_code": self.exit_code}, indent=2)


def _powers_of_two(lo: int, hi: int) -> List[int]:
    ns, n = [], 1
    while n <= hi:
        if n >= lo:
            ns.append(n)
        n *= 2
    return ns or [lo]


def _fit_annotation(ns, vals) -> dict:
    pts = [(n, v) for n, v in zip(ns, vals) if v > 0]
    if len(pts) < 2:
        return {}
    out = {"loglog_slope": round(loglog_slope(*zip(*pts)), 4)}
    ratios = [b / a for (_, a), (_, b) in zip(pts, pts[1:])]
    out["doubling_ratios"] = [round(r, 4) for r in ratios]
    return out


def _witness_table(Psi, witness: Optional[str], ns) -> dict:
    dec = decompose_fkxfl(Psi)
    G = Psi.group
    if witness and "|" in witness:
        k = G.ranks[0]
        xs, ys = (G.parse(p) for p in witness.split("|"))
        x, y = xs, tuple(g - k if g > 0 else g + k for g in ys)
    else:
        x, y = choose_probe(dec.phi1.inverse()), choose_probe(dec.phi2)
    wb = WitnessBounds(dec.phi1, dec.phi2, x, y)
    rows = []
    for n in ns:
        try:
            fam = wb(n)
        except BudgetError:
            break
        rows.append({"n": n, "length": fam.length, "bound": fam.total})
    return {"probes": [dec.phi1.group.format(x), dec.phi2.group.format(y)], "rows": rows,
            "fit": _fit_annotation([r["n"] for r in rows], [r["bound"] for r in rows])}


def _bg_table(Psi, ns) -> Optional[dict]:
    """Abelian-subgroup lower bounds for the normalized automorphism, when one applies."""
    G = Psi.group
    if G.kind == "F2xZ":
        nf = normalize_f2xz(Psi)
        xi = nf.normalized
        if nf.case == "UnitParabolic" and nf.k_b:
            K = [(2,), (3,)]
        elif nf.case == "FiniteOrderBase" and (nf.k_a or nf.k_b):
            K = [(1,), (3,)] if nf.k_a else [(2,), (3,)]
        else:
            return None
    elif G.kind == "Z2astZ":
        nf = normalize_z2astz(Psi)
        if nf.case != "UnitParabolic":
            return None
        xi, K = nf.normalized, [(1,), (2,)]
    else:
        return None
    rows = [{"n": n, "bound": bg_lower_bound(xi, K, n)} for n in ns]
    return {"normalized": xi.format(), "K": [G.format(k) for k in K], "rows": rows,
            "fit": _fit_annotation([r["n"] for r in rows], [r["bound"] for r in rows])}


def _normal_form(Psi) -> Optional[dict]:
    kind = Psi.group.kind
    if kind == "F2xZ":
        return normalize_f2xz(Psi).to_dict()
    if kind == "Z2astZ":
        return normalize_z2astz(Psi).to_dict()
    if kind == "FkxFl":
        return decompose_fkxfl(Psi).to_dict()
    return None


def _certificates(Psi, budget: int, oracle: str, samples: int = 3, seed: int = 0):
    torus = MappingTorus(Psi)
    rng = random.Random(seed)
    shuffles, oracles = [], []
    for _ in range(samples):
        max_len = 8 if oracle == "tiny" else 16
        w = random_identity_word(torus, rng, max_len=max_len if oracle != "off" else 40,
                                 n_relators=2 if oracle == "tiny" else 3, conj_len=1)
        try:
            cert = t_shuffle(w, torus, budget=budget)
            shuffles.append(cert.to_dict(torus))
        except ShuffleBudgetError as e:
            d = e.partial.to_dict(torus)
            d["budget_exhausted"] = True
            shuffles.append(d)
        if oracle != "off":
            res = area_oracle(w, torus.presentation(), budget=budget)
            oracles.append(res.to_dict(torus.alphabet))
    return shuffles, oracles


def run_report(spec: SpecFile, n_max: Optional[int] = None, budget: Optional[int] = None,
               oracle: str = "tiny") -> ReportBundle:
    budget = budget or spec.budget or int(os.environ.get(BUDGET_ENV, DEFAULT_BUDGET))
    lo, hi = spec.n_range or (8, 64)
    if n_max:
        hi = n_max
    ns = _powers_of_two(lo, hi)
    records, tables = [], {}
    code = 0
    for name in spec.auts:
        rec = {"name": name, "group": spec.kind, "ranks": list(spec.ranks), "input": None,
               "normal_form": None, "class": None, "provenance": None, "heuristic": False,
               "witnesses": {}, "certificates": {}, "errors": []}
        records.append(rec)
        try:
            Psi = spec.automorphism(name)
            rec["input"] = Psi.format()
            rec["normal_form"] = _normal_form(Psi)
            wit = spec.witnesses.get(name)
            wit_word = spec.group().parse(wit) if wit and "|" not in wit else None
            growth_kw = {"n_max": hi} if spec.kind == "FkxFl" else {}
            dc: DehnClass = classify(Psi, witness=wit_word, **growth_kw)
            rec["class"] = dc.to_dict()
            rec["provenance"] = dc.provenance
            rec["heuristic"] = dc.heuristic
            if dc.heuristic:
                code = max(code, 2)
            if spec.kind == "FkxFl":
                wt = _witness_table(Psi, wit, ns)
                rec["witnesses"]["lower_bounds"] = wt
                tables[f"{name}_witness"] = [["n", "length", "bound"]] + [
                    [r["n"], r["length"], r["bound"]] for r in wt["rows"]]
                dec = decompose_fkxfl(Psi)
                for i, phi in enumerate((dec.phi1, dec.phi2), 1):
                    tab = growth_table(phi, hi, strict=False)
                    tables[f"{name}_growth_phi{i}"] = list(csv.reader(
                        tab.to_csv(phi.group.alphabet).splitlines()))
            if wit_word is not None:
                rec["witnesses"]["fkxz"] = {"word": wit, "accepted": dc.kind == "Cubic"}
            bg = _bg_table(Psi, ns)
            if bg:
                rec["witnesses"]["abelian_subgroup"] = bg
                tables[f"{name}_bg"] = [["n", "bound"]] + [[r["n"], r["bound"]] for r in bg["rows"]]
            shuffles, oracles = _certificates(Psi, budget, oracle)
            rec["certificates"] = {"shuffle": shuffles, "oracle": oracles}
        except InconclusiveGrowth as e:
            rec["errors"].append(f"inconclusive: {e}")
            rec["heuristic"] = True
            code = max(code, 2)
        except (ValidationError, MalformedWord, ValueError, RuntimeError, TrivialProbe) as e:
            rec["errors"].append(f"{type(e).__name__}: {e}")
            code = 1
    return ReportBundle(records, tables, code)


def format_text(bundle: ReportBundle) -> str:
    out = []
    for rec in bundle.records:
        out.append(f"aut {rec['name']} on {rec['group']}: {rec['input']}")
        if rec["class"]:
            prov = rec["provenance"]
            flag = "  (heuristic growth)" if rec["heuristic"] else ""
            out.append(f"  class: {rec['class']['label']}  [{prov['rule']} / {prov['case']}]{flag}")
        for key, tab in rec["witnesses"].items():
            if "rows" in tab:
                pts = ", ".join(f"{r['n']}:{r['bound']}" for r in tab["rows"])
                slope = tab["fit"].get("loglog_slope")
                out.append(f"  {key}: {pts}" + (f"  slope {slope}" if slope is not None else ""))
        certs = rec["certificates"]
        if certs:
            ok = sum(1 for c in certs["shuffle"] if c["certified"])
            out.append(f"  shuffle: {ok}/{len(certs['shuffle'])} certified, counts "
                       f"{[c['relator_count'] for c in certs['shuffle']]}")
            if certs["oracle"]:
                out.append("  oracle: " + ", ".join(
                    f"{o['word']} -> {o['area'] if o['exact'] else (o['lower'], o['upper'])}"
                    for o in certs["oracle"]))
        for e in rec["errors"]:
            out.append(f"  error: {e}")
    return "\n".join(out) + "\n"


def write_tables(bundle: ReportBundle, directory: Path) -> List[Path]:
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, rows in bundle.tables.items():
        p = directory / f"{name}.csv"
        with open(p, "w", newline="") as fh:
            csv.writer(fh).writerows(rows)
        paths.append(p)
    return paths


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dehntori",
                                 description="Classify Dehn functions of mapping tori.")
    sub = ap.add_subparsers(dest="command")
    c = sub.add_parser("classify", help="classify every automorphism in a spec file")
    c.add_argument("file")
    c.add_argument("--json", dest="json_path")
    c.add_argument("--csv-dir")
    c.add_argument("--n-max", type=int)
    c.add_argument("--budget", type=int, help=f"search budget (default from ${BUDGET_ENV})")
    c.add_argument("--oracle", choices=("off", "tiny", "full"), default="tiny")
    f = sub.add_parser("format", help="parse a spec file and print it back normalized")
    f.add_argument("file")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if not args.command:
        ap.print_usage(sys.stderr)
        return 1
    try:
        spec = parse_spec(Path(args.file).read_text(encoding="utf-8"))
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except SpecParseError as e:
        print(f"{args.file}:{e.line}:{e.col}: {e.msg}", file=sys.stderr)
        return 1
    if args.command == "format":
        sys.stdout.write(format_spec(spec))
        return 0
    bundle = run_report(spec, n_max=args.n_max, budget=args.budget, oracle=args.oracle)
    sys.stdout.write(format_text(bundle))
    if args.json_path:
        Path(args.json_path).write_text(bundle.to_json())
    if args.csv_dir:
        write_tables(bundle, Path(args.csv_dir))
    return bundle.exit_code


if __name__ == "__main__":
    sys.exit(main())
