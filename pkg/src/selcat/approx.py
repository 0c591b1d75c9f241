"""Delta^0_2 approximation tables F_s(x) and the sets built from them.

A table has rows s = 0..stages and columns x = 0..elements-1; the last row is
the limit. All derived sets are sets of Cantor codes <y, t> with t < stages.

Two families are built:

* drop sets (1 -> 0 changes), used when F is c.e. in a c.e. set E:
  ``f_tilde``, ``u_tilde``, ``v_tilde``;
* change sets (any change), used for n-c.e. style tables, with the layers
  split by change count: ``f_change``, ``u_change``, ``v_change``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Container, Iterable, Mapping

import numpy as np

from .errors import BranchInapplicable, HorizonExceeded, InvalidInput
from .numbering import Horizon, pair, unpair


class ApproxTable:
    """Immutable 0/1 matrix F[s, x] whose last row is the declared limit."""

    def __init__(self, rows, limit=None):
        arr = np.array(rows, dtype=np.uint8)
        if arr.ndim != 2 or arr.shape[0] < 3 or arr.shape[1] < 1:
            raise InvalidInput(f"table needs at least 3 rows and 1 column, got shape {arr.shape}")
        if arr.max(initial=0) > 1:
            raise InvalidInput("table entries must be 0 or 1")
        if limit is not None:
            lim = np.array(limit, dtype=np.uint8)
            if lim.shape != arr[-1].shape or not np.array_equal(lim, arr[-1]):
                raise InvalidInput("declared limit is not reached by the last row")
        arr.setflags(write=False)
        self.F = arr

    def __eq__(self, other):
        return isinstance(other, ApproxTable) and np.array_equal(self.F, other.F)

    def __hash__(self):
        return hash((self.F.shape, self.F.tobytes()))

    def __repr__(self):
        return f"ApproxTable(stages={self.stages}, elements={self.elements})"

    @property
    def stages(self) -> int:
        return self.F.shape[0] - 1

    @property
    def elements(self) -> int:
        return self.F.shape[1]

    @cached_property
    def limit(self) -> np.ndarray:
        return self.F[-1]

    def value(self, s: int, x: int) -> int:
        return int(self.F[s, x])

    @cached_property
    def changes(self) -> np.ndarray:
        """changes[s, x] is True when F_s(x) != F_{s+1}(x)."""
        return self.F[1:] != self.F[:-1]

    def flips(self, x: int) -> list[int]:
        return [int(s) for s in np.flatnonzero(self.changes[:, x])]

    def settling(self, x: int) -> int:
        f = self.flips(x)
        return f[-1] + 1 if f else 0

    def change_count(self, y: int, t: int) -> int:
        """c_t(y): number of s <= t with F_s(y) != F_{s+1}(y)."""
        if not 0 <= t < self.stages:
            raise HorizonExceeded(f"c_t needs t < {self.stages}, got {t}")
        return int(self.changes[: t + 1, y].sum())

    @cached_property
    def counts(self) -> np.ndarray:
        """Running change counts, counts[t, y] = c_t(y)."""
        return np.cumsum(self.changes, axis=0)

    def max_changes(self) -> int:
        return int(self.changes.sum(axis=0).max())

    def codes(self) -> Iterable[int]:
        """All codes <y, t> the derived sets can contain."""
        for y in range(self.elements):
            for t in range(self.stages):
                yield pair(y, t)

    # cached derived sets at the full horizon
    @cached_property
    def f_tilde(self):
        return build_F_tilde(self)

    @cached_property
    def u_tilde(self):
        return build_U_tilde(self)

    @cached_property
    def v_tilde(self):
        return build_V_tilde(self)

    @cached_property
    def f_change(self):
        return build_F_change(self)

    @cached_property
    def u_change(self):
        return build_U_change(self)

    @cached_property
    def v_change(self):
        return build_V_change(self)

    def to_json(self) -> dict:
        return {"rows": self.F.tolist(), "limit": self.limit.tolist()}

    @classmethod
    def from_json(cls, data: Mapping) -> ApproxTable:
        return cls(data["rows"], data.get("limit"))


def check_locality(T: ApproxTable):
    """Check that a change at x at stage s freezes every column y with
    x < y < s from stage s on.

    Returns ``(True, None)`` or ``(False, (x, y, s, t))`` with the
    lexicographically least violating quadruple.
    """
    last = T.stages
    for x in range(T.elements):
        fx = T.flips(x)
        for y in range(x + 1, T.elements):
            col = T.F[:, y]
            for s in fx:
                if s <= y:
                    continue
                later = np.flatnonzero(col[s + 1: last + 1] != col[s])
                if later.size:
                    return False, (x, y, s, s + 1 + int(later[0]))
    return True, None


def prefix_redefine(T: ApproxTable) -> ApproxTable:
    """Overwrite rows 0 and 1 with all ones and all zeros."""
    rows = np.array(T.F)
    rows[0] = 1
    rows[1] = 0
    return ApproxTable(rows)


def change_count(T: ApproxTable, y: int, t: int) -> int:
    return T.change_count(y, t)


def _last_row(T: ApproxTable, stage: int | None) -> int:
    if stage is None:
        return T.stages
    if not 1 <= stage <= T.stages:
        raise HorizonExceeded(f"stage {stage} outside 1..{T.stages}")
    return stage


def _flip_stages_below(T: ApproxTable, r: int) -> list[list[int]]:
    """For each y, the stages s with y < s, s+1 <= r, where some x < y changes."""
    out = []
    ch = T.changes
    for y in range(T.elements):
        if y == 0:
            out.append([])
            continue
        hits = np.flatnonzero(ch[:r, :y].any(axis=1))
        out.append([int(s) for s in hits if s > y])
    return out


def build_F_tilde(T: ApproxTable) -> frozenset:
    """{<y,t> | F_t(y) = F(y) = 1 and F_{t+1}(y) = 0}."""
    F = T.F
    out = set()
    for y in range(T.elements):
        if T.limit[y] != 1:
            continue
        for t in range(T.stages):
            if F[t, y] == 1 and F[t + 1, y] == 0:
                out.add(pair(y, t))
    return frozenset(out)


def build_U_tilde(T: ApproxTable, stage: int | None = None) -> frozenset:
    """Drops <y,t> with F_s(y) = F_t(y) = 1 at a stage s > y where some x < y
    changes. ``stage`` restricts to rows 0..stage (c.e. approximation)."""
    r = _last_row(T, stage)
    F = T.F
    below = _flip_stages_below(T, r)
    out = set()
    for y in range(T.elements):
        ones = [s for s in below[y] if F[s, y] == 1]
        if not ones:
            continue
        for t in range(r):
            if F[t, y] == 1 and F[t + 1, y] == 0:
                out.add(pair(y, t))
    return frozenset(out)


def build_V_tilde(T: ApproxTable, stage: int | None = None) -> frozenset:
    """Drops <y,t> with F_s(y) = 1 again at some s > t."""
    r = _last_row(T, stage)
    F = T.F
    out = set()
    for y in range(T.elements):
        col = F[: r + 1, y]
        for t in range(r):
            if col[t] == 1 and col[t + 1] == 0 and col[t + 1:].any():
                out.add(pair(y, t))
    return frozenset(out)


def build_F_change(T: ApproxTable) -> frozenset:
    """{<y,t> | F_t(y) = F(y) and F_{t+1}(y) != F_t(y)}."""
    F = T.F
    out = set()
    for y in range(T.elements):
        for t in T.flips(y):
            if F[t, y] == T.limit[y]:
                out.add(pair(y, t))
    return frozenset(out)


def build_U_change(T: ApproxTable, stage: int | None = None) -> frozenset:
    """Changes <y,t> with F_s(y) = F_t(y) at a stage s > y where some x < y changes."""
    r = _last_row(T, stage)
    F = T.F
    below = _flip_stages_below(T, r)
    out = set()
    for y in range(T.elements):
        vals = {int(F[s, y]) for s in below[y]}
        if not vals:
            continue
        for t in range(r):
            if F[t, y] != F[t + 1, y] and int(F[t, y]) in vals:
                out.add(pair(y, t))
    return frozenset(out)


def build_V_change(T: ApproxTable, stage: int | None = None) -> frozenset:
    """Changes <y,t> with F_s(y) = F_t(y) again at some s > t."""
    r = _last_row(T, stage)
    F = T.F
    out = set()
    for y in range(T.elements):
        col = F[: r + 1, y]
        for t in range(r):
            if col[t] != col[t + 1] and (col[t + 1:] == col[t]).any():
                out.add(pair(y, t))
    return frozenset(out)


@dataclass(frozen=True)
class LayerFamily:
    """Layers F~^1 .. F~^{n+1}; ``layers[i-1]`` is layer i."""

    n: int
    layers: tuple

    def __getitem__(self, i: int) -> frozenset:
        if i < 1:
            raise IndexError(i)
        if i > len(self.layers):
            return frozenset()
        return self.layers[i - 1]

    def union(self) -> frozenset:
        return frozenset().union(*self.layers)


def build_layers(T: ApproxTable, n: int) -> LayerFamily:
    if n < 1:
        raise InvalidInput("layer count needs n >= 1")
    worst = T.max_changes()
    if worst > n + 1:
        raise InvalidInput(f"a column changes {worst} times, more than n+1 = {n + 1}")
    layers = [set() for _ in range(n + 1)]
    counts = T.counts
    for z in T.f_change:
        y, t = unpair(z)
        layers[int(counts[t, y]) - 1].add(z)
    return LayerFamily(n, tuple(frozenset(l) for l in layers))


def _member(oracle, z) -> bool:
    return oracle(z) if callable(oracle) else z in oracle


def _next_flip(T: ApproxTable, y: int, t: int) -> int | None:
    for s in T.flips(y):
        if s > t:
            return s
    return None


def layer_ce_characterization(T: ApproxTable, i: int, next_layer) -> frozenset:
    """F~^i enumerated from F~^{i+1}: changes <y,t> with c_t(y) = i followed
    by a change <y,s>, c_s(y) = i+1, that is not in F~^{i+1}."""
    counts = T.counts
    out = set()
    for y in range(T.elements):
        fl = T.flips(y)
        for t in fl:
            if counts[t, y] != i:
                continue
            for s in fl:
                if s > t and counts[s, y] == i + 1 and not _member(next_layer, pair(y, s)):
                    out.add(pair(y, t))
                    break
    return frozenset(out)


@dataclass(frozen=True)
class EnumOperator:
    """Axioms (condition, element, stage): element is enumerated by stage w
    relative to an oracle containing the finite condition set, once w >= stage."""

    axioms: frozenset

    def __post_init__(self):
        object.__setattr__(self, "axioms", frozenset(
            (frozenset(int(c) for c in cond), int(y), int(st)) for cond, y, st in self.axioms))

    def enumerated(self, y: int, w: int, oracle) -> bool:
        """y in W_{e,w}^E."""
        return any(el == y and st <= w and all(_member(oracle, c) for c in cond)
                   for cond, el, st in self.axioms)

    def limit(self, oracle) -> frozenset:
        return frozenset(el for cond, el, _ in self.axioms
                         if all(_member(oracle, c) for c in cond))

    def to_json(self) -> list:
        return [{"condition": sorted(c), "element": y, "stage": s}
                for c, y, s in sorted(self.axioms, key=lambda a: (a[2], a[1], sorted(a[0])))]

    @classmethod
    def from_json(cls, data) -> EnumOperator:
        return cls(frozenset((tuple(d["condition"]), d["element"], d["stage"]) for d in data))


def sandwich_violations(lower: Iterable[int], Z: Iterable[int], upper: Container) -> list[str]:
    Z = frozenset(Z)
    out = [f"{unpair(z)} in lower set but not in Z" for z in sorted(frozenset(lower) - Z)]
    out += [f"{unpair(z)} in Z but not in upper set" for z in sorted(Z) if z not in upper]
    return out


def decide_membership(code: int, Z, E, op: EnumOperator, T: ApproxTable,
                      trace: list | None = None, validate: bool = True) -> bool:
    """Decide <y,t> in F~ from E (+) Z, assuming F~ <= Z <= V~.

    Outside Z the answer is no. Inside Z the column returns to 1 at some
    s > t; search w >= s for y entering W_{e,w}^E (answer yes) or a drop
    F_w(y) = 1, F_{w+1}(y) = 0, which has the same answer as <y,t> and is
    decided recursively. ``trace`` collects the codes visited.
    """
    if validate:
        bad = sandwich_violations(T.u_tilde, Z, T.v_tilde)
        if bad:
            raise InvalidInput("Z is not between U~ and V~: " + bad[0])
    F = T.F
    y, t = unpair(code)
    if y >= T.elements or t >= T.stages:
        raise HorizonExceeded(f"code {code} = <{y},{t}> beyond the table")
    while True:
        if trace is not None:
            trace.append(pair(y, t))
        if not _member(Z, pair(y, t)):
            return False
        ones = np.flatnonzero(F[t + 1:, y] == 1)
        if not ones.size:
            raise HorizonExceeded(f"<{y},{t}> in Z but column {y} never returns to 1")
        s = t + 1 + int(ones[0])
        for w in range(s, T.stages + 1):
            if op.enumerated(y, w, E):
                return True
            if w < T.stages and F[w, y] == 1 and F[w + 1, y] == 0:
                t = w
                break
        else:
            raise HorizonExceeded(f"search for <{y},{t}> ran off the table")


def escapee_recovery(Z, T: ApproxTable) -> tuple[frozenset, dict[int, int]]:
    """Y = {y | some <y,t> in F~ \\ Z}; each y in Y fixes F(x) = F_{y+1}(x) for x < y."""
    Y = sorted({unpair(z)[0] for z in T.f_tilde if not _member(Z, z)})
    return frozenset(Y), _values_below(T, Y)


def _values_below(T: ApproxTable, Y) -> dict[int, int]:
    values = {}
    Y = sorted(Y)
    for y in Y:
        if y + 1 > T.stages:
            raise HorizonExceeded(f"escapee {y} needs row {y + 1}, table has {T.stages}")
    j = 0
    for x in range(max(Y, default=0)):
        while Y[j] <= x:
            j += 1
        values[x] = int(T.F[Y[j] + 1, x])
    return values


@dataclass(frozen=True)
class LayeredReduction:
    """Outcome of the descending cascade; call it on x to get F(x)."""

    n: int
    layers: LayerFamily
    escapees: Mapping[int, frozenset]
    recovered: Mapping[int, int]
    branch: str = "finite"

    def __call__(self, x: int) -> bool:
        if self.branch in ("escapee", "auto") and x in self.recovered:
            return bool(self.recovered[x])
        if self.branch == "escapee":
            raise BranchInapplicable(f"no escapee above {x}")
        return pair(x, 0) in self.layers[1]


def layered_reduction(X, T: ApproxTable, n: int, branch: str = "finite",
                      validate: bool = True) -> LayeredReduction:
    """Decide F from a set X with U <= X <= V, one layer at a time from n down to 1.

    For a change <y,t> in X with c_t(y) = i, the next change w has
    c_w(y) = i+1 and <y,t> is in layer i iff <y,w> is not in layer i+1.
    Changes outside X belong to layer i only if they show up in Y^i, the
    finite part of the layer that X misses; the same escapees also give
    F(x) = F_{y+1}(x) for x < y directly.
    """
    if branch not in ("finite", "escapee", "auto"):
        raise InvalidInput(f"unknown branch {branch!r}")
    if T.max_changes() > n + 1:
        raise InvalidInput(f"a column changes more than n+1 = {n + 1} times")
    if validate:
        bad = sandwich_violations(T.u_change, X, T.v_change)
        if bad:
            raise InvalidInput("X is not between U and V: " + bad[0])
    counts = T.counts
    decided = {n + 1: frozenset()}
    escapees = {}
    for i in range(n, 0, -1):
        nxt = decided[i + 1]
        missed = {z for z in layer_ce_characterization(T, i, nxt) if not _member(X, z)}
        escapees[i] = frozenset(unpair(z)[0] for z in missed)
        layer = set()
        for y in range(T.elements):
            for t in T.flips(y):
                if counts[t, y] != i:
                    continue
                z = pair(y, t)
                if _member(X, z):
                    w = _next_flip(T, y, t)
                    if w is None:
                        raise BranchInapplicable(f"<{y},{t}> in X but no later change of {y}")
                    if pair(y, w) not in nxt:
                        layer.add(z)
                elif z in missed:
                    layer.add(z)
        decided[i] = frozenset(layer)
    fam = LayerFamily(n, tuple(decided[i] for i in range(1, n + 2)))
    ys = frozenset().union(*escapees.values())
    recovered = _values_below(T, ys) if branch != "finite" else {}
    return LayeredReduction(n, fam, escapees, recovered, branch)


def generate_table(n: int, seed, h: Horizon, redefine: bool = True,
                   flip_rate: float = 0.6) -> ApproxTable:
    """Random table with at most n changes per column (from an all-zero start)
    obeying the locality rule; redefined rows 0 and 1 by default.

    Each column draws a budget of 0..n changes. At each stage at most one
    unfrozen column with budget to spare flips; a flip at x at stage s
    freezes every y with x < y < s for good.
    """
    if n < 1:
        raise InvalidInput("generate_table needs n >= 1")
    attempt = 0
    while True:
        rng = np.random.default_rng([int(seed), attempt])
        T = _sample_table(n, rng, h, flip_rate)
        if redefine:
            T = prefix_redefine(T)
        ok, _ = check_locality(T)
        lo = int(T.changes.sum(axis=0).min())
        if ok and T.max_changes() <= (n + 1 if redefine else n) and (lo >= 1 or not redefine):
            return T
        attempt += 1


def _sample_table(n, rng, h, flip_rate) -> ApproxTable:
    cols = h.elements
    rows = np.zeros((h.stages + 1, cols), dtype=np.uint8)
    used = np.zeros(cols, dtype=int)
    budget = rng.integers(0, n + 1, size=cols)
    frozen = np.zeros(cols, dtype=bool)
    for s in range(h.stages):
        rows[s + 1] = rows[s]
        if rng.random() >= flip_rate:
            continue
        cands = np.flatnonzero(~frozen & (used < budget))
        if not cands.size:
            continue
        x = int(rng.choice(cands))
        rows[s + 1, x] ^= 1
        used[x] += 1
        frozen[x + 1: min(s, cols)] = True
    return ApproxTable(rows)
