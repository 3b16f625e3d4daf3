"""Weighted finite automata over exact semirings: minimality predicates,
field minimisation, and bideterminisability decisions over fields and
tropical semirings."""

__version__ = "0.1.0"
