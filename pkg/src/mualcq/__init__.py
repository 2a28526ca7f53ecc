"""Reasoning toolkit for the description logic ALCQ extended with least and
greatest fixpoint concepts."""
from .errors import MuALCQError, ParseError
from .models import Interpretation, Signature, evaluate
from .parser import parse_concept, parse_tbox, print_concept
from .reasoning import implies_bounded, internalize, sat_bounded

__all__ = [
    "Interpretation",
    "MuALCQError",
    "ParseError",
    "Signature",
    "evaluate",
    "implies_bounded",
    "internalize",
    "parse_concept",
    "parse_tbox",
    "print_concept",
    "sat_bounded",
]
