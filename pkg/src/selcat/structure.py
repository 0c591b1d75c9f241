"""The rigid structure compiled from a normalized sequence, its defining
formulas, and the way back from defining formulas to a weak selector.

The structure lives on naturals and has unary functions e_k:

    e_k(4j+2) = 4i     if a(j) = k is in A_i
    e_k(4j+3) = 4i+1   if b(j) = k is in B_i
    e_k(n)    = n      otherwise

With finite listings a and b only finitely many points 4j+2, 4j+3 carry a
non-identity function; a fragment's domain is exactly the points that are
determined at the horizon.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import HorizonExceeded, InvalidInput, Pending
from .formulas import (TRUE, And, Apply, Eq, Exists, Formula, Neq, Var, conj, depth,
                       enumerate_formulas, instantiate, term_vars)
from .numbering import Enumeration, Horizon, canonical_index, canonical_set, pair
from .sequences import (DiffSequence, Selector, Status, check_weak_selector,
                        normalization_violations)


@dataclass(frozen=True)
class SequenceFunctions:
    """Listings a of the union of the A_i, b of the union of the B_i, and a
    choice h(i) in B_i."""

    a: Enumeration
    b: Enumeration
    h: Mapping[int, int]


def _union_listing(sets, stages: int) -> Enumeration:
    entries = {}
    for s in sets:
        for x in s.members(stages):
            entries[x] = s.entry_stage(x)
    return Enumeration.from_entries(entries)


def derive_functions(S: DiffSequence, hz: Horizon) -> SequenceFunctions:
    bad = normalization_violations(S, hz)
    if bad:
        raise InvalidInput("sequence is not normalized: " + "; ".join(bad))
    a = _union_listing((A for A, _ in S.pairs), hz.stages)
    b = _union_listing((B for _, B in S.pairs), hz.stages)
    h = {}
    for i, (_, B) in enumerate(S.pairs):
        if not B.member_at(pair(i, 0), hz.stages):
            raise InvalidInput(f"<{i},0> missing from B_{i}")
        h[i] = pair(i, 0)
    return SequenceFunctions(a, b, h)


@dataclass(frozen=True)
class StructureFragment:
    """Finite piece of a unary-function structure.

    ``values`` holds the non-identity entries (k, n) -> e_k(n); every other
    application is the identity. ``pending`` maps a point n to the symbol k
    whose value at n is not yet known.
    """

    domain: frozenset
    values: Mapping[tuple[int, int], int]
    constants: tuple = ()
    pending: Mapping[int, int] = field(default_factory=dict)
    _point: dict = field(default=None, init=False, repr=False, compare=False, hash=False)
    _pre: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "domain", frozenset(self.domain))
        object.__setattr__(self, "values", dict(sorted(self.values.items())))
        object.__setattr__(self, "pending", dict(sorted(self.pending.items())))
        object.__setattr__(self, "constants", tuple(self.constants))
        point, pre = {}, {}
        for (k, n), v in self.values.items():
            if n in point:
                raise InvalidInput(f"point {n} carries two non-identity functions")
            if n not in self.domain or v not in self.domain:
                raise InvalidInput(f"e_{k}({n})={v} leaves the domain")
            point[n] = (k, v)
            pre.setdefault((k, v), []).append(n)
        for n, k in self.pending.items():
            if n in point:
                raise InvalidInput(f"point {n} is both resolved and pending")
            if n not in self.domain:
                raise InvalidInput(f"pending point {n} outside the domain")
        bad = [c for c in self.constants if c not in self.domain]
        if bad:
            raise InvalidInput(f"constants {bad} outside the domain")
        object.__setattr__(self, "_point", point)
        object.__setattr__(self, "_pre", pre)

    def apply(self, k: int, n: int) -> int:
        hit = self._point.get(n)
        if hit is not None and hit[0] == k:
            return hit[1]
        if self.pending.get(n) == k:
            raise Pending(f"e_{k}({n}) not yet determined", [n])
        return n

    def point(self, n: int):
        """The (k, e_k(n)) pair for the one non-identity symbol at n, if any."""
        return self._point.get(n)

    def preimages(self, k: int, v: int) -> list[int]:
        """Points n with e_k(n) = v, plus pending points that might map there."""
        out = list(self._pre.get((k, v), ()))
        if v in self.domain and self._point.get(v, (None,))[0] != k:
            out.append(v)
        out.extend(n for n, pk in self.pending.items() if pk == k and n != v)
        return sorted(set(out))

    def symbols(self) -> frozenset[int]:
        return frozenset(k for k, _ in self.values) | frozenset(self.pending.values())

    def restrict(self, sub) -> StructureFragment:
        sub = frozenset(sub)
        if not sub <= self.domain:
            raise InvalidInput("restriction leaves the domain")
        values = {(k, n): v for (k, n), v in self.values.items() if n in sub}
        pending = {n: k for n, k in self.pending.items() if n in sub}
        return StructureFragment(sub, values, tuple(c for c in self.constants if c in sub), pending)

    def with_constants(self, constants) -> StructureFragment:
        return StructureFragment(self.domain, self.values, tuple(constants), self.pending)


def _owners(sets, stages: int) -> dict:
    out = {}
    for i, s in enumerate(sets):
        for x in s.members(stages):
            out.setdefault(x, i)
    return out


def build_structure(S: DiffSequence, fns: SequenceFunctions, hz: Horizon,
                    elements: int | None = None) -> StructureFragment:
    """Compile the structure. With ``elements`` given, the fragment is the
    closure of 0..elements-1 and every one of those points must be determined."""
    own_a = _owners((A for A, _ in S.pairs), hz.stages)
    own_b = _owners((B for _, B in S.pairs), hz.stages)
    domain = set()
    for i in range(len(S)):
        domain.update((4 * i, 4 * i + 1))
    values, pending = {}, {}
    for j, k in enumerate(fns.a.listing):
        n = 4 * j + 2
        domain.add(n)
        if k in own_a:
            values[(k, n)] = 4 * own_a[k]
        else:
            pending[n] = k
    for j, k in enumerate(fns.b.listing):
        n = 4 * j + 3
        domain.add(n)
        if k in own_b:
            values[(k, n)] = 4 * own_b[k] + 1
        else:
            pending[n] = k
    frag = StructureFragment(frozenset(domain), values, (), pending)
    if elements is None:
        return frag
    missing = [n for n in range(elements) if n not in domain]
    if missing:
        raise HorizonExceeded(f"points {missing[:8]} undetermined at the horizon")
    return frag.restrict(_close(frag, range(elements)))


def _close(frag: StructureFragment, seeds) -> frozenset:
    out = set(seeds)
    todo = list(out)
    stuck = []
    while todo:
        n = todo.pop()
        if n in frag.pending:
            stuck.append(n)
            continue
        hit = frag.point(n)
        if hit is not None and hit[1] not in out:
            out.add(hit[1])
            todo.append(hit[1])
    if stuck:
        raise Pending(f"closure reaches unresolved points {sorted(stuck)}", sorted(stuck))
    return frozenset(out)


def closure(s: int | None, frag: StructureFragment) -> frozenset:
    """D_c(s): the substructure generated by the domain points 0..s.

    ``s=None`` stands for the empty generating set.
    """
    if s is None:
        return frozenset()
    return _close(frag, (n for n in frag.domain if n <= s))


# -- formulas --------------------------------------------------------------

def _guarded(var: str, avoid: str, body: Formula) -> Exists:
    return Exists(var, Var(avoid), body)


def formulas_from_weak_selector(f: Selector, S: DiffSequence, fns: SequenceFunctions,
                                hz: Horizon) -> dict[int, Formula]:
    """Defining formulas for every point of the compiled structure.

    The point 4j+2 is defined through its image 4i' = e_{a(j)}(4j+2), where
    a(j) lies in A_{i'}; the extra conjunct e_{a(j)}(x) != x excludes the
    fixed point 4i' itself. Likewise for 4j+3 through 4i''+1.
    """
    verdicts = check_weak_selector(f, S, hz, window=S.value_bound())
    bad = {i: v for i, v in verdicts.items() if v.status is not Status.CONFIRMED}
    missing = [i for i in range(len(S)) if i not in verdicts]
    if bad or missing:
        raise InvalidInput(f"weak selector not confirmed at {sorted(bad) + missing}")
    x = Var("x")
    phi = {}
    for i in range(len(S)):
        ks = sorted(canonical_set(f[i]))
        base = conj(*(_guarded("z", "x", Eq(Apply(k, Var("z")), x)) for k in ks)) if ks else TRUE
        phi[4 * i] = base
        phi[4 * i + 1] = conj(_guarded("y", "x", instantiate(base, Var("y"))),
                              _guarded("z", "x", Eq(Apply(fns.h[i], Var("z")), x)))
    own_a = _owners((A for A, _ in S.pairs), hz.stages)
    own_b = _owners((B for _, B in S.pairs), hz.stages)
    for j, k in enumerate(fns.a.listing):
        if k in own_a:
            phi[4 * j + 2] = conj(Neq(Apply(k, x), x), instantiate(phi[4 * own_a[k]], Apply(k, x)))
    for j, k in enumerate(fns.b.listing):
        if k in own_b:
            phi[4 * j + 3] = conj(Neq(Apply(k, x), x),
                                  instantiate(phi[4 * own_b[k] + 1], Apply(k, x)))
    return dict(sorted(phi.items()))


def _term_value(t, frag, env):
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise InvalidInput(f"free variable {t.name} unassigned") from None
    return frag.apply(t.fn, _term_value(t.arg, frag, env))


def _candidates(var, body, frag, env):
    parts = body.parts if isinstance(body, And) else (body,)
    for p in parts:
        if not isinstance(p, Eq):
            continue
        for lhs, rhs in ((p.left, p.right), (p.right, p.left)):
            if var in term_vars(rhs):
                continue
            try:
                if isinstance(lhs, Apply) and lhs.arg == Var(var):
                    return frag.preimages(lhs.fn, _term_value(rhs, frag, env))
                if lhs == Var(var):
                    v = _term_value(rhs, frag, env)
                    return [v] if v in frag.domain else []
            except Pending:
                continue
    return sorted(frag.domain)


def eval_formula(phi: Formula, frag: StructureFragment, env: Mapping[str, int]) -> bool:
    """Satisfaction in the fragment, quantifiers ranging over its domain.

    Raises :class:`Pending` when the answer hinges on an undetermined value.
    """
    if isinstance(phi, Eq):
        return _term_value(phi.left, frag, env) == _term_value(phi.right, frag, env)
    if isinstance(phi, Neq):
        return _term_value(phi.left, frag, env) != _term_value(phi.right, frag, env)
    if isinstance(phi, And):
        stuck = None
        for p in sorted(phi.parts, key=depth):
            try:
                if not eval_formula(p, frag, env):
                    return False
            except Pending as exc:
                stuck = stuck or exc
        if stuck:
            raise stuck
        return True
    guard = _term_value(phi.guard, frag, env) if phi.guard is not None else None
    stuck = None
    inner = dict(env)
    for z in _candidates(phi.var, phi.body, frag, env):
        if z == guard:
            continue
        inner[phi.var] = z
        try:
            if eval_formula(phi.body, frag, inner):
                return True
        except Pending as exc:
            stuck = stuck or exc
    if stuck:
        raise stuck
    return False


def extract_weak_selector(phis: Mapping[int, Formula], frag: StructureFragment,
                          s_star: int | None = None, bound: int | None = None) -> Selector:
    """Read a weak selector off a defining family.

    For each i, find the least s > s_star whose generated substructure
    contains 4i and satisfies phi_{4i}(4i) there; D_f(i) is then the set of
    symbols k carrying some other point of that substructure onto 4i. Indices
    with 4i already generated by 0..s_star are left as markers.
    """
    if bound is None:
        bound = 1 + max((n // 4 for n in frag.domain if n % 4 == 0), default=-1)
    seed = closure(s_star, frag)
    start = -1 if s_star is None else s_star
    steps = sorted(n for n in frag.domain if n > start)
    cache = {}
    values, markers = {}, {}
    for i in range(bound):
        target = 4 * i
        if target in seed:
            markers[i] = "needs-manual-extension"
            continue
        for s in steps:
            if s not in cache:
                D = closure(s, frag)
                cache[s] = (D, frag.restrict(D))
            D, sub = cache[s]
            if target in D and eval_formula(phis[target], sub, {"x": target}):
                ks = set()
                for n in D:
                    hit = frag.point(n)
                    if n != target and hit is not None and hit[1] == target:
                        ks.add(hit[0])
                values[i] = canonical_index(ks)
                break
        else:
            raise HorizonExceeded(f"no stage defines point {target} within the fragment")
    return Selector(values, bound, markers)


def godel_formulas(frag: StructureFragment, max_size: int) -> list[Formula]:
    """Formulas in the fragment's symbols, free in x and the constants c0, c1, ..."""
    free = ("x",) + tuple(f"c{j}" for j in range(len(frag.constants)))
    return enumerate_formulas(frag.symbols(), max_size, free)


def sequence_from_structure(frag: StructureFragment, max_size: int) -> DiffSequence:
    """A_i = codes of formulas true at i, B_i = codes true at some j != i.

    Formula number c is enumerated at stage c. Indices run over
    0..max(domain); points outside the domain get an empty A_i.
    """
    if frag.pending:
        raise InvalidInput("fragment has undetermined values")
    formulas = godel_formulas(frag, max_size)
    env = {f"c{j}": c for j, c in enumerate(frag.constants)}
    top = max(frag.domain, default=-1) + 1
    sat = []
    for phi in formulas:
        holds = set()
        for j in sorted(frag.domain):
            env["x"] = j
            if eval_formula(phi, frag, env):
                holds.add(j)
        sat.append(holds)
    pairs = []
    for i in range(top):
        a = [c for c, holds in enumerate(sat) if i in holds]
        b = [c for c, holds in enumerate(sat) if holds - {i}]
        pairs.append((Enumeration(tuple(a), tuple(a)), Enumeration(tuple(b), tuple(b))))
    return DiffSequence(tuple(pairs))
