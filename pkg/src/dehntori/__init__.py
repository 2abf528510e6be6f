"""Dehn functions of mapping tori of small right-angled Artin groups."""

__version__ = "0.1.0"
