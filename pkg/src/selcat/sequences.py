"""Differences of c.e. sets C_i = A_i \\ B_i and selector checking.

Verdicts are horizon-relative: a value in A_i \\ B_i at the horizon is only
*confirmed*, since B_i may still grow later.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import HorizonExceeded, InvalidInput, OutOfWindow
from .numbering import Enumeration, Horizon, canonical_index, canonical_set, pair


class Status(enum.Enum):
    CONFIRMED = "confirmed"
    VIOLATED = "violated"
    PENDING = "pending"


@dataclass(frozen=True)
class Verdict:
    status: Status
    stage: int | None = None
    witness: str | None = None

    def __post_init__(self):
        if self.status is Status.VIOLATED and not self.witness:
            raise InvalidInput("a violated verdict needs a witness")


@dataclass(frozen=True)
class Selector:
    """Finite candidate selector: values on ``range(bound)``.

    Indices without a value carry a marker string explaining why (e.g. a
    search that ran off the horizon).
    """

    values: Mapping[int, int]
    bound: int
    markers: Mapping[int, str] = field(default_factory=dict)

    def __post_init__(self):
        values = dict(sorted(self.values.items()))
        markers = dict(sorted(self.markers.items()))
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "markers", markers)
        missing = [i for i in range(self.bound) if i not in values and i not in markers]
        if missing:
            raise InvalidInput(f"selector undefined and unmarked at {missing}")

    @classmethod
    def from_list(cls, values: Sequence[int]) -> Selector:
        return cls(dict(enumerate(values)), len(values))

    def __getitem__(self, i):
        return self.values[i]

    def __contains__(self, i):
        return i in self.values

    def extend(self, extra: Mapping[int, int]) -> Selector:
        """Fill marked indices with explicitly supplied values."""
        values = dict(self.values)
        values.update(extra)
        markers = {i: m for i, m in self.markers.items() if i not in extra}
        return Selector(values, self.bound, markers)


@dataclass(frozen=True)
class DiffSequence:
    """Indexed family of pairs (A_i, B_i) representing C_i = A_i \\ B_i.

    The sets may be :class:`Enumeration` objects or lazily computed views such
    as :class:`HatSet`; anything with ``member_at``, ``entry_stage`` and
    ``members`` works.
    """

    pairs: tuple

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((a, b) for a, b in self.pairs))

    @classmethod
    def from_sets(cls, pairs: Iterable[tuple[Iterable[int], Iterable[int]]]) -> DiffSequence:
        return cls(tuple((Enumeration.from_set(a), Enumeration.from_set(b)) for a, b in pairs))

    def __len__(self):
        return len(self.pairs)

    def A(self, i):
        return self.pairs[i][0]

    def B(self, i):
        return self.pairs[i][1]

    def difference(self, i: int, stage: int) -> frozenset[int]:
        """C_i as visible before ``stage``."""
        return self.A(i).members(stage) - self.B(i).members(stage)

    def value_bound(self) -> int:
        """One more than the largest value listed anywhere."""
        top = -1
        for a, b in self.pairs:
            for s in (a, b):
                m = s.members()
                if m:
                    top = max(top, max(m))
        return top + 1


def check_selector(f: Selector, S: DiffSequence, h: Horizon) -> dict[int, Verdict]:
    out = {}
    for i in range(f.bound):
        if i not in f:
            out[i] = Verdict(Status.PENDING, None, f.markers.get(i))
            continue
        v = f[i]
        if i >= len(S):
            out[i] = Verdict(Status.VIOLATED, None, f"index {i} out of range (length {len(S)})")
            continue
        A, B = S.pairs[i]
        try:
            if B.member_at(v, h.stages):
                s = B.entry_stage(v)
                out[i] = Verdict(Status.VIOLATED, s, f"f({i})={v} enumerated into B_{i} at stage {s}")
            elif A.member_at(v, h.stages):
                out[i] = Verdict(Status.CONFIRMED, A.entry_stage(v))
            else:
                out[i] = Verdict(Status.PENDING)
        except HorizonExceeded as exc:
            out[i] = Verdict(Status.PENDING, None, str(exc))
    return out


def all_confirmed(verdicts: Mapping[int, Verdict]) -> bool:
    return all(v.status is Status.CONFIRMED for v in verdicts.values())


def any_violated(verdicts: Mapping[int, Verdict]) -> bool:
    return any(v.status is Status.VIOLATED for v in verdicts.values())


@dataclass(frozen=True)
class HatSet:
    """The set {n | D_n is a subset of base}, limited to D_n inside [0, window).

    Entry stage of n is the latest entry stage among the members of D_n.
    """

    base: object
    window: int

    def entry_stage(self, n: int) -> int | None:
        if n >> self.window:
            raise OutOfWindow(f"canonical index {n} above window 2^{self.window}")
        stage = 0
        for x in canonical_set(n):
            s = self.base.entry_stage(x)
            if s is None:
                return None
            stage = max(stage, s)
        return stage

    def member_at(self, n: int, stage: int) -> bool:
        s = self.entry_stage(n)
        return s is not None and s < stage

    def __contains__(self, n):
        return self.entry_stage(n) is not None

    def members(self, stage: int | None = None) -> frozenset[int]:
        """Materialise the set; exponential in the size of the base."""
        base = sorted(x for x in self.base.members(stage) if x < self.window)
        out = {0} if stage is None or stage > 0 else set()
        for r in range(1, len(base) + 1):
            for combo in combinations(base, r):
                out.add(canonical_index(combo))
        return frozenset(out)


def hat_transform(S: DiffSequence, h: Horizon, window: int | None = None) -> DiffSequence:
    """Replace each A_i, B_i by the canonical indices of its finite subsets."""
    w = h.elements if window is None else window
    return DiffSequence(tuple((HatSet(a, w), HatSet(b, w)) for a, b in S.pairs))


def check_weak_selector(f: Selector, S: DiffSequence, h: Horizon,
                        window: int | None = None) -> dict[int, Verdict]:
    return check_selector(f, hat_transform(S, h, window), h)


def tilde_normalize(S: DiffSequence) -> DiffSequence:
    """Make the B_i nonempty subsets of the A_i, with pairwise disjoint A_i.

    Ã_i = {<i,0>} | {<i,x+1> | x in A_i},  B̃_i = {<i,0>} | {<i,x+1> | x in A_i & B_i}.
    """
    pairs = []
    for i, (A, B) in enumerate(S.pairs):
        a_entries = {pair(i, 0): 0}
        b_entries = {pair(i, 0): 0}
        for x in A.members():
            a_entries[pair(i, x + 1)] = A.entry_stage(x)
            sb = B.entry_stage(x)
            if sb is not None:
                b_entries[pair(i, x + 1)] = max(A.entry_stage(x), sb)
        pairs.append((Enumeration.from_entries(a_entries), Enumeration.from_entries(b_entries)))
    return DiffSequence(tuple(pairs))


def normalization_violations(S: DiffSequence, h: Horizon) -> list[str]:
    out = []
    owner = {}
    for i, (A, B) in enumerate(S.pairs):
        a = A.members(h.stages)
        b = B.members(h.stages)
        if not b:
            out.append(f"B_{i} is empty")
        if not b <= a:
            out.append(f"B_{i} not inside A_{i}: {sorted(b - a)}")
        for x in a:
            if x in owner:
                out.append(f"A_{owner[x]} and A_{i} share {x}")
            else:
                owner[x] = i
    return out


def is_normalized(S: DiffSequence, h: Horizon) -> bool:
    return not normalization_violations(S, h)


def interval_encode(U: Enumeration, V: Enumeration, h: Horizon) -> DiffSequence:
    """Encode separators U <= X <= V as selectors:
    A_i = {0} | {1 | i in V},  B_i = {0 | i in U}."""
    u = U.members(h.stages)
    v = V.members(h.stages)
    if not u <= v:
        raise InvalidInput(f"U not inside V at horizon: {sorted(u - v)}")
    pairs = []
    for i in range(h.elements):
        a = {0: 0}
        if i in v:
            a[1] = V.entry_stage(i)
        b = {0: U.entry_stage(i)} if i in u else {}
        pairs.append((Enumeration.from_entries(a), Enumeration.from_entries(b)))
    return DiffSequence(tuple(pairs))


def separator_to_selector(X: Iterable[int], bound: int, U=None, V=None) -> Selector:
    X = frozenset(X)
    if U is not None and not frozenset(U) <= X:
        raise InvalidInput("separator misses part of U")
    if V is not None and not X <= frozenset(V):
        raise InvalidInput("separator leaves V")
    return Selector({i: int(i in X) for i in range(bound)}, bound)


def selector_to_separator(f: Selector) -> frozenset[int]:
    return frozenset(i for i, v in f.values.items() if v == 1)


def interval_confirmed_mask(u, x, v, n: int):
    """Bitmask of indices where the 0/1 selector of X is confirmed on the
    interval encoding of (U, V), all three given as bitmasks over n indices.

    Works on Python ints and on numpy integer arrays alike.
    """
    full = (1 << n) - 1
    return ((x & v) | (~x & ~u)) & full
