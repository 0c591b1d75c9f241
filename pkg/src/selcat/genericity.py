"""Turing functionals on binary strings and the selector that can be read
off above a string forcing every answer to be right."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator

from .errors import ForcingViolated, InvalidInput
from .numbering import Horizon
from .sequences import DiffSequence, Selector


def _check_string(s: str) -> str:
    if any(c not in "01" for c in s):
        raise InvalidInput(f"not a binary string: {s!r}")
    return s


@dataclass(frozen=True)
class MonotoneFunctional:
    """Finite set of axioms (sigma, i, v): on any oracle extending sigma the
    functional outputs v at input i."""

    axioms: frozenset
    _by_input: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        axioms = frozenset((_check_string(s), int(i), int(v)) for s, i, v in self.axioms)
        by_input = {}
        for s, i, v in sorted(axioms):
            for t, w in by_input.get(i, ()):
                if (s.startswith(t) or t.startswith(s)) and v != w:
                    raise InvalidInput(f"axioms ({t!r},{i},{w}) and ({s!r},{i},{v}) disagree")
            by_input.setdefault(i, []).append((s, v))
        object.__setattr__(self, "axioms", axioms)
        object.__setattr__(self, "_by_input", by_input)

    @classmethod
    def of(cls, axioms: Iterable) -> MonotoneFunctional:
        return cls(frozenset(tuple(a) for a in axioms))

    def axioms_for(self, i: int) -> list:
        return list(self._by_input.get(i, ()))

    def inputs(self) -> list[int]:
        return sorted(self._by_input)


def apply(phi: MonotoneFunctional, sigma: str, i: int) -> int | None:
    """Output at i on oracle string sigma, or None when it diverges."""
    for s, v in phi.axioms_for(i):
        if sigma.startswith(s):
            return v
    return None


def is_bad(phi: MonotoneFunctional, S: DiffSequence, sigma: str, h: Horizon) -> bool:
    """Whether sigma already makes the functional land in some B_i."""
    for i in phi.inputs():
        if i < len(S):
            v = apply(phi, sigma, i)
            if v is not None and S.B(i).member_at(v, h.stages):
                return True
    return False


def strings(max_len: int, prefix: str = "") -> Iterator[str]:
    """Extensions of prefix up to length max_len in length-lexicographic order."""
    for n in range(len(prefix), max_len + 1):
        for tail in product("01", repeat=n - len(prefix)):
            yield prefix + "".join(tail)


def bad_strings(phi: MonotoneFunctional, S: DiffSequence, max_len: int, h: Horizon) -> frozenset:
    """W restricted to strings of length <= max_len."""
    out = set()
    for s, i, v in phi.axioms:
        if i < len(S) and len(s) <= max_len and S.B(i).member_at(v, h.stages):
            out.update(strings(max_len, s))
    return frozenset(out)


def forcing_counterexample(sigma: str, phi: MonotoneFunctional, S: DiffSequence,
                           max_len: int, h: Horizon) -> str | None:
    """Length-lex least extension of sigma of length <= max_len inside W, if any."""
    sigma = _check_string(sigma)
    hits = []
    for s, i, v in phi.axioms:
        if i < len(S) and S.B(i).member_at(v, h.stages):
            if sigma.startswith(s):
                return sigma
            if s.startswith(sigma) and len(s) <= max_len:
                hits.append(s)
    return min(hits, key=lambda s: (len(s), s), default=None)


def extract_selector(sigma: str, phi: MonotoneFunctional, S: DiffSequence, h: Horizon,
                     bound: int | None = None, max_len: int | None = None) -> Selector:
    """g(i) = phi^{sigma_i}(i) for the first sigma_i extending sigma whose
    output lies in A_i.

    Convergence above sigma comes only from axioms comparable with sigma, so
    the candidates are sigma itself and the longer axiom strings; they are
    searched in length-lexicographic order, up to length ``max_len``.
    """
    sigma = _check_string(sigma)
    bound = len(S) if bound is None else bound
    values, markers = {}, {}
    for i in range(bound):
        if i >= len(S):
            markers[i] = "index out of range"
            continue
        cands = set()
        for s, v in phi.axioms_for(i):
            if sigma.startswith(s):
                cands.add(sigma)
            elif s.startswith(sigma) and (max_len is None or len(s) <= max_len):
                cands.add(s)
        for tau in sorted(cands, key=lambda s: (len(s), s)):
            v = apply(phi, tau, i)
            if S.A(i).member_at(v, h.stages):
                if is_bad(phi, S, tau, h):
                    raise ForcingViolated(f"string {tau!r} found for index {i} lies in W", tau, i)
                values[i] = v
                break
        else:
            markers[i] = "horizon-exceeded"
    return Selector(values, bound, markers)
