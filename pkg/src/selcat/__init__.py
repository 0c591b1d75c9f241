"""Finite-horizon toolkit for selector functions of difference sequences
and for the constructions built on top of them."""

from .errors import (BranchInapplicable, ForcingViolated, HorizonExceeded, InvalidInput,
                     OutOfWindow, Pending, SelcatError)
from .numbering import (Enumeration, Horizon, canonical_index, canonical_set, join, member_at,
                        pair, split, unpair)
from .sequences import (DiffSequence, HatSet, Selector, Status, Verdict, check_selector,
                        check_weak_selector, hat_transform, interval_encode, tilde_normalize)

__all__ = [
    "BranchInapplicable",
    "ForcingViolated",
    "HorizonExceeded",
    "InvalidInput",
    "OutOfWindow",
    "Pending",
    "SelcatError",
    "Enumeration",
    "Horizon",
    "canonical_index",
    "canonical_set",
    "join",
    "member_at",
    "pair",
    "split",
    "unpair",
    "DiffSequence",
    "HatSet",
    "Selector",
    "Status",
    "Verdict",
    "check_selector",
    "check_weak_selector",
    "hat_transform",
    "interval_encode",
    "tilde_normalize",
]

__version__ = "0.1.0"
