"""Seeded generators for the scenario corpora used by the suite and tests.

Every generator takes a ``random.Random`` (or a seed) and returns plain
library objects; the same seed always gives the same scenario.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .approx import ApproxTable, EnumOperator, generate_table
from .genericity import MonotoneFunctional
from .numbering import Enumeration, Horizon, canonical_index, pair
from .sequences import DiffSequence, Selector


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_enumeration(rng, values, h: Horizon) -> Enumeration:
    """Listing of the given values with random entry stages below the horizon."""
    return Enumeration.from_entries({v: rng.randrange(h.stages) for v in values})


def random_listing(rng, universe: int, length: int) -> Enumeration:
    """Injective listing, one value per stage."""
    return Enumeration(tuple(rng.sample(range(universe), min(length, universe))))


def random_sequence(seed, length: int, h: Horizon, max_size: int = 4,
                    nonempty: bool = True) -> DiffSequence:
    """Random A_i, B_i inside [0, h.elements); with ``nonempty`` every C_i keeps
    at least one element at the horizon."""
    rng = _rng(seed)
    pairs = []
    for _ in range(length):
        A = rng.sample(range(h.elements), rng.randint(1, max_size))
        keep = A[0] if nonempty else None
        B = {x for x in A[1:] if rng.random() < 0.5}
        B |= set(rng.sample(range(h.elements), rng.randint(0, 2)))
        B.discard(keep)
        pairs.append((random_enumeration(rng, A, h), random_enumeration(rng, sorted(B), h)))
    return DiffSequence(tuple(pairs))


def default_choices(S: DiffSequence, h: Horizon) -> list[list[int]]:
    """Least element of each C_i at the horizon (empty when C_i is empty)."""
    out = []
    for i in range(len(S)):
        c = S.difference(i, h.stages)
        out.append([min(c)] if c else [])
    return out


def tilde_weak_selector(S: DiffSequence, choices) -> Selector:
    """Weak selector for the tilde normalization of S: D_f(i) = {<i,x+1> | x in choices[i]}."""
    return Selector({i: canonical_index(pair(i, x + 1) for x in xs)
                     for i, xs in enumerate(choices)}, len(choices))


def random_choices(seed, S: DiffSequence, h: Horizon) -> list[list[int]]:
    """One element of C_i plus a random handful of A_i."""
    rng = _rng(seed)
    out = []
    for i in range(len(S)):
        c = sorted(S.difference(i, h.stages))
        pick = {rng.choice(c)} if c else set()
        pick |= {x for x in S.A(i).members(h.stages) if rng.random() < 0.3}
        out.append(sorted(pick))
    return out


@dataclass(frozen=True)
class GenericScenario:
    sequence: DiffSequence
    functional: MonotoneFunctional
    sigma: str
    oracle: str


def random_generic(seed, h: Horizon, length: int = 6, oracle_len: int = 12,
                   noise: int = 6) -> GenericScenario:
    """A consistent functional computing a selector along a random oracle X,
    with noise axioms off X and harmless axioms above sigma."""
    rng = _rng(seed)
    S = random_sequence(rng, length, h)
    X = "".join(rng.choice("01") for _ in range(oracle_len))
    m = rng.randint(0, oracle_len // 2)
    sigma = X[:m]
    axioms = []
    for i in range(length):
        good = sorted(S.difference(i, h.stages))
        axioms.append((X[: rng.randint(m, oracle_len)], i, rng.choice(good)))

    def consistent(ax):
        s, i, v = ax
        return all(not (i == j and (s.startswith(t) or t.startswith(s)) and v != w)
                   for t, j, w in axioms)

    for _ in range(noise):
        i = rng.randrange(length)
        if m and rng.random() < 0.5:
            j = rng.randrange(m)
            s = X[:j] + ("1" if X[j] == "0" else "0")
            s += "".join(rng.choice("01") for _ in range(rng.randint(0, 3)))
            pool = sorted(S.A(i).members() | S.B(i).members() | {0})
        else:
            j = rng.randint(m, oracle_len - 1)
            s = X[:j] + ("1" if X[j] == "0" else "0")
            pool = sorted(S.difference(i, h.stages))
        ax = (s, i, rng.choice(pool))
        if consistent(ax):
            axioms.append(ax)
    return GenericScenario(S, MonotoneFunctional.of(axioms), sigma, X)


def inject_bad_axiom(sc: GenericScenario, h: Horizon) -> GenericScenario:
    """Add an index whose only axiom sits on sigma and lands in its B set."""
    i = len(sc.sequence)
    v = 0
    bad = Enumeration((v,))
    S = DiffSequence(sc.sequence.pairs + ((bad, bad),))
    phi = MonotoneFunctional(sc.functional.axioms | {(sc.sigma, i, v)})
    return GenericScenario(S, phi, sc.sigma, sc.oracle)


def random_chain_sources(seed, k: int, h: Horizon) -> list[Enumeration]:
    rng = _rng(seed)
    n = min(h.elements, h.stages)
    return [random_listing(rng, h.elements, rng.randint(n // 2, n)) for _ in range(k)]


@dataclass(frozen=True)
class JoinScenario:
    """A table with a c.e. set E and an operator enumerating the limit from E."""

    table: ApproxTable
    E: Enumeration
    operator: EnumOperator
    n: int


def random_join_scenario(seed: int, n: int, h: Horizon) -> JoinScenario:
    rng = random.Random(seed)
    T = generate_table(n, seed, h)
    inE = sorted(x for x in range(h.elements) if rng.random() < 0.5)
    E = random_enumeration(rng, inE, h)
    outE = [x for x in range(h.elements) if x not in E]
    axioms = []
    for y in range(h.elements):
        if T.limit[y]:
            cond = rng.sample(inE, min(len(inE), rng.randint(0, 2)))
            axioms.append((tuple(cond), y, rng.randint(0, T.stages)))
        elif outE and rng.random() < 0.5:
            cond = [rng.choice(outE)] + rng.sample(inE, min(len(inE), rng.randint(0, 1)))
            axioms.append((tuple(cond), y, rng.randint(0, T.stages)))
    return JoinScenario(T, E, EnumOperator(frozenset(axioms)), n)


def random_between(seed, lower, upper) -> frozenset:
    """lower together with a random part of upper."""
    rng = _rng(seed)
    lower = frozenset(lower)
    return lower | frozenset(z for z in sorted(upper) if z not in lower and rng.random() < 0.5)
