"""Deficiency subsets and the nested chains V_1 >= V_2 >= ... >= V_k they
build, together with the two reductions that make the chain work:
A^V is computable from A, and an element of V outside both A^V and a
separator computes an initial segment of A."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import HorizonExceeded, InvalidInput
from .numbering import Enumeration, Horizon


def deficiency_subset(a: Enumeration, v: Enumeration, h: Horizon | None = None) -> Enumeration:
    """A^V = {v(s) | some t > s has a(t) < v(s)}.

    v(s) is listed at the later of its own entry stage and the entry stage of
    the first such a(t); with the default stage-per-argument listings this is
    just t.
    """
    if not (a.injective and v.injective):
        raise InvalidInput("deficiency subsets need injective listings")
    cutoff = len(a) if h is None else sum(1 for st in a.stages if st < h.stages)
    entries = {}
    for s, vs in enumerate(v.listing):
        for t in range(s + 1, cutoff):
            if a.listing[t] < vs:
                entries[vs] = max(a.stages[t], v.stages[s])
                break
    return Enumeration.from_entries(entries)


def reduce_to_source(x: int, a: Enumeration, v: Enumeration,
                     A_oracle: Callable[[int], bool]) -> bool:
    """Decide x in A^V from A below x.

    Find the least n with A restricted to x inside {a(0), ..., a(n)}; then
    x is in A^V iff x = v(s) > a(t) for some s < t <= n.
    """
    pos = {val: j for j, val in enumerate(a.listing)}
    n = -1
    for y in range(x):
        if A_oracle(y):
            if y not in pos:
                raise HorizonExceeded(f"{y} is in A but not listed by a within the horizon")
            n = max(n, pos[y])
    for t in range(1, n + 1):
        if a.listing[t] < x:
            for s in range(min(t, len(v))):
                if v.listing[s] == x:
                    return True
    return False


def compute_from_escapee(w: int, s: int, a: Enumeration) -> Callable[[int], bool]:
    """Membership in A below w, read off the first s+1 values of a.

    Valid when w = v(s) never entered A^V: then no later a(t) drops below w.
    """
    seen = frozenset(a.listing[:s + 1])

    def member(x: int) -> bool:
        if not 0 <= x < w:
            raise InvalidInput(f"escapee {w} only decides membership below itself, got {x}")
        return x in seen

    return member


def escapees(a: Enumeration, v: Enumeration, X: Iterable[int],
             h: Horizon | None = None) -> list[tuple[int, int]]:
    """Pairs (v(s), s) with v(s) outside A^V and outside X."""
    av = deficiency_subset(a, v, h).members()
    X = frozenset(X)
    return [(w, s) for s, w in enumerate(v.listing) if w not in av and w not in X]


@dataclass(frozen=True)
class DeficiencyChain:
    sets: tuple
    sources: tuple

    @property
    def V(self) -> Enumeration:
        return self.sets[0]

    @property
    def U(self) -> Enumeration:
        return self.sets[-1]

    def __len__(self):
        return len(self.sets)

    def nesting_violations(self) -> list[tuple[int, int]]:
        """(i, x) where x shows up in V_{i+1} before it shows up in V_i (1-based i)."""
        out = []
        for i in range(len(self.sets) - 1):
            big, small = self.sets[i], self.sets[i + 1]
            for x in small.listing:
                sb = big.entry_stage(x)
                if sb is None or sb > small.entry_stage(x):
                    out.append((i + 1, x))
        return out


def build_chain(sources: Sequence[Enumeration], h: Horizon | None = None) -> DeficiencyChain:
    if not sources:
        raise InvalidInput("a chain needs at least one source")
    sets = [sources[0]]
    for A in sources[1:]:
        sets.append(deficiency_subset(A, sets[-1], h))
    return DeficiencyChain(tuple(sets), tuple(sources))


def locate_cone(chain: DeficiencyChain, X: Iterable[int], exceptions: Iterable[int] = ()) -> int:
    """Least (1-based) i with V_i inside X up to the pinned finite exceptions.

    The separator X then computes A_i: for i = 1 because X agrees with V_1
    up to finitely many points, for i > 1 through the escapees of V_{i-1}.
    """
    X = frozenset(X) | frozenset(exceptions)
    for i, Vi in enumerate(chain.sets, start=1):
        if Vi.members() <= X:
            return i
    raise InvalidInput("X does not contain U up to the given exceptions")
