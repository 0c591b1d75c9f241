"""Acceptance gate: one test per criterion, each at its stated size and time limit.

Every test records a single ``[PASS]``/``[FAIL]`` line; the lines are printed
in the terminal summary (and directly when this file is run as a script).
"""

import json
import random
import time
from contextlib import contextmanager

import numpy as np

from selcat import approx, chains, genericity, scenarios, sequences, structure, suite
from selcat.cli import run
from selcat.errors import ForcingViolated
from selcat.numbering import Enumeration, Horizon, canonical_index, canonical_set, unpair
from selcat.sequences import Selector, Status

RESULTS = {}


@contextmanager
def criterion(number, title, limit=None):
    """Time the body, record one line, and fail on an exceeded limit."""
    info = {}
    start = time.perf_counter()
    ok = False
    try:
        yield info
        ok = True
    finally:
        secs = time.perf_counter() - start
        if limit is not None and secs >= limit:
            ok = False
        budget = f" (limit {limit:g}s)" if limit is not None else ""
        detail = ", ".join(f"{k}={v}" for k, v in info.items())
        RESULTS[number] = (f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}: "
                           f"{detail}; {secs:.2f}s{budget}")
    assert limit is None or secs < limit, f"criterion {number} took {secs:.2f}s"


def test_01_canonical_coding():
    with criterion(1, "canonical coding round trip", 1.0) as info:
        n = 1 << 16
        for k in range(n):
            assert canonical_index(canonical_set(k)) == k
        info["indices"] = n


def _digit_table(n):
    """(u, x, v) bitmasks with u <= x <= v over n indices, one row per base-4
    code: digit 0 = outside V, 1 = in V only, 2 = in X but not U, 3 = in U."""
    codes = np.arange(4 ** n, dtype=np.int32)
    u, x, v = (np.zeros_like(codes) for _ in range(3))
    for i in range(n):
        d = (codes >> (2 * i)) & 3
        v |= (d >= 1).astype(np.int32) << i
        x |= (d >= 2).astype(np.int32) << i
        u |= (d == 3).astype(np.int32) << i
    return u, x, v


def _triples(n):
    """All 4^n triples, built from a low and a high half by broadcasting."""
    lo = min(n, 6)
    low, high = _digit_table(lo), _digit_table(n - lo)
    return tuple(((hi[:, None] << lo) | lw[None, :]).ravel() for hi, lw in zip(high, low))


def _general_interval(n):
    """Every U <= X <= V through the real encode/check/round-trip calls."""
    h = Horizon(n + 1, n)
    cases = 0
    for v in range(1 << n):
        V = Enumeration.from_set(i for i in range(n) if v >> i & 1)
        sub = [i for i in range(n) if v >> i & 1]
        for um in range(1 << len(sub)):
            Uset = {sub[j] for j in range(len(sub)) if um >> j & 1}
            S = sequences.interval_encode(Enumeration.from_set(Uset), V, h)
            free = [i for i in sub if i not in Uset]
            for xm in range(1 << len(free)):
                X = Uset | {free[j] for j in range(len(free)) if xm >> j & 1}
                f = sequences.separator_to_selector(X, n, Uset, V.members())
                assert sequences.selector_to_separator(f) == X
                assert sequences.separator_to_selector(sequences.selector_to_separator(f), n) == f
                assert sequences.all_confirmed(sequences.check_selector(f, S, h))
                cases += 1
            # selectors off the interval are caught
            for xo in range(1 << n):
                X = {i for i in range(n) if xo >> i & 1}
                if not (Uset <= X <= V.members()):
                    f = Selector.from_list([int(i in X) for i in range(n)])
                    assert not sequences.all_confirmed(sequences.check_selector(f, S, h))
    return cases


def test_02_interval_equivalence():
    with criterion(2, "interval encoding equivalence, universes up to 12", 10.0) as info:
        general = sum(_general_interval(n) for n in range(1, 7))
        masked = 0
        for n in range(1, 13):
            full = (1 << n) - 1
            u, x, v = _triples(n)
            assert len(u) == 4 ** n
            assert (sequences.interval_confirmed_mask(u, x, v, n) == full).all()
            masked += len(u)
            if n <= 8:
                # every X outside [U, V] leaves at least one index unconfirmed
                keep = np.unique(u * (1 << n) + v)
                uu, vv = keep >> n, keep & full
                for xo in range(1 << n):
                    inside = ((uu & ~xo) == 0) & ((xo & ~vv) == 0)
                    conf = sequences.interval_confirmed_mask(uu, xo, vv, n) == full
                    assert (conf == inside).all()
        info["general_triples"] = general
        info["mask_triples"] = masked


def _structure_scenario(seed, h):
    rng = random.Random(seed)
    S = scenarios.random_sequence(rng, rng.randint(2, 12), h)
    St = sequences.tilde_normalize(S)
    fns = structure.derive_functions(St, h)
    frag = structure.build_structure(St, fns, h)
    f = scenarios.tilde_weak_selector(S, scenarios.random_choices(rng, S, h))
    return St, fns, frag, structure.formulas_from_weak_selector(f, St, fns, h)


STRUCTURE_H = Horizon(128, 64)
STRUCTURE_SEEDS = range(100)


def test_03_structure_round_trip():
    with criterion(3, "structure round trip", 60.0) as info:
        evaluated = resolved = 0
        for seed in STRUCTURE_SEEDS:
            St, fns, frag, phis = _structure_scenario(seed, STRUCTURE_H)
            for m, phi in phis.items():
                for j in frag.domain:
                    assert structure.eval_formula(phi, frag, {"x": j}) == (j == m), (seed, m, j)
                    evaluated += 1
            g = structure.extract_weak_selector(phis, frag)
            v = sequences.check_weak_selector(g, St, STRUCTURE_H, window=St.value_bound())
            for i in g.values:
                assert v[i].status is Status.CONFIRMED, (seed, i)
                resolved += 1
        info["scenarios"] = len(STRUCTURE_SEEDS)
        info["evaluations"] = evaluated
        info["extracted"] = resolved


def test_04_rigidity():
    with criterion(4, "rigidity of the point formulas") as info:
        checked = 0
        for seed in STRUCTURE_SEEDS:
            St, fns, frag, phis = _structure_scenario(seed, STRUCTURE_H)
            for i in range(len(St)):
                phi = phis[4 * i]
                assert structure.eval_formula(phi, frag, {"x": 4 * i})
                assert not structure.eval_formula(phi, frag, {"x": 4 * i + 1})
                for j in frag.domain - {4 * i}:
                    assert not structure.eval_formula(phi, frag, {"x": j}), (seed, i, j)
                    checked += 1
        info["scenarios"] = len(STRUCTURE_SEEDS)
        info["elements"] = checked


def test_05_forcing_extraction():
    h = Horizon(64, 32)
    with criterion(5, "forcing extraction", 10.0) as info:
        rejected = 0
        count = 60
        for seed in range(count):
            sc = scenarios.random_generic(seed, h)
            assert genericity.forcing_counterexample(sc.sigma, sc.functional, sc.sequence, 16, h) is None
            g = genericity.extract_selector(sc.sigma, sc.functional, sc.sequence, h)
            assert not sequences.any_violated(sequences.check_selector(g, sc.sequence, h))
            bad = scenarios.inject_bad_axiom(sc, h)
            try:
                genericity.extract_selector(bad.sigma, bad.functional, bad.sequence, h)
            except ForcingViolated:
                rejected += 1
        assert rejected == count
        info["functionals"] = count
        info["bad_rejected"] = rejected


def test_06_deficiency_procedures():
    h = Horizon(64, 64)
    with criterion(6, "deficiency procedures", 30.0) as info:
        rng = random.Random(6)
        pairs = escapes = chain_count = 0
        for _ in range(120):
            a, v = scenarios.random_chain_sources(rng, 2, h)
            av = chains.deficiency_subset(a, v)
            direct = {vs for s, vs in enumerate(v.listing)
                      if any(a.listing[t] < vs for t in range(s + 1, len(a)))}
            assert av.members() == direct
            A = a.members()
            for x in range(64):
                assert chains.reduce_to_source(x, a, v, A.__contains__) == (x in direct)
            X = scenarios.random_between(rng, direct, v.members())
            for w, s in chains.escapees(a, v, X):
                member = chains.compute_from_escapee(w, s, a)
                assert all(member(x) == (x in A) for x in range(w))
                escapes += 1
            pairs += 1
        for k in (1, 2, 3, 4):
            for _ in range(25):
                chain = chains.build_chain(scenarios.random_chain_sources(rng, k, h))
                assert chain.nesting_violations() == []
                for big, small in zip(chain.sets, chain.sets[1:]):
                    assert all(small.members(s) <= big.members(s) for s in range(h.stages + 1))
                chain_count += 1
        info["pairs"] = pairs
        info["escapees"] = escapes
        info["chains"] = chain_count


TABLE_H = Horizon(64, 32)
JOINS = [scenarios.random_join_scenario(k, 1 + k % 4, TABLE_H) for k in range(200)]


def test_07_approximation_inclusions():
    with criterion(7, "approximation inclusions and layers") as info:
        for sc in JOINS:
            T, n = sc.table, sc.n
            assert T.u_tilde <= T.f_tilde <= T.v_tilde
            assert T.u_change <= T.f_change <= T.v_change
            L = approx.build_layers(T, n)
            assert L[n + 1] == frozenset() and L.union() == T.f_change
            assert sum(len(layer) for layer in L.layers) == len(T.f_change)
        info["tables"] = len(JOINS)
        info["n"] = sorted({sc.n for sc in JOINS})


def test_08_procedure_equivalence():
    with criterion(8, "procedure equivalence", 120.0) as info:
        decided = layers = reductions = deepest = 0
        for k, sc in enumerate(JOINS):
            T, n, E = sc.table, sc.n, sc.E.members()
            Z = scenarios.random_between(k, T.f_tilde, T.v_tilde)
            for z in T.codes():
                trace = []
                got = approx.decide_membership(z, Z, E, sc.operator, T, trace)
                y, _ = unpair(z)
                assert got == (z in T.f_tilde)
                assert len(trace) - 1 <= len(T.flips(y))
                deepest = max(deepest, len(trace) - 1)
                decided += 1
            L = approx.build_layers(T, n)
            for i in range(1, n + 1):
                assert approx.layer_ce_characterization(T, i, L[i + 1]) == L[i]
                layers += 1
            for X in (T.f_change, T.u_change, T.v_change,
                      scenarios.random_between(k, T.u_change, T.v_change)):
                red = approx.layered_reduction(X, T, n, branch="auto")
                assert all(red(x) == bool(T.limit[x]) for x in range(T.elements))
                reductions += 1
        info["codes"] = decided
        info["layers"] = layers
        info["reductions"] = reductions
        info["max_depth"] = deepest


def test_09_locality_validator():
    with criterion(9, "locality validator") as info:
        for sc in JOINS:
            T = sc.table
            assert approx.check_locality(T) == (True, None)
            counts = T.changes.sum(axis=0)
            assert counts.min() >= 1 and counts.max() <= sc.n + 1
        assert approx.check_locality(suite.hand_violating_table()) == (False, (0, 1, 3, 5))
        info["tables"] = len(JOINS)
        info["witness"] = "(0,1,3,5)"


def _suite_report():
    import io

    out, err = io.StringIO(), io.StringIO()
    code = run(["suite", "--seed", "0", "--horizon-stages", "64", "--horizon-elements", "32"], out, err)
    return code, out.getvalue().encode()


def test_10_determinism():
    with criterion(10, "deterministic suite report") as info:
        c1, first = _suite_report()
        c2, second = _suite_report()
        assert c1 == c2 == 0
        assert first == second
        assert json.loads(first)["passed"]
        info["bytes"] = len(first)


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            try:
                fn()
            except AssertionError:
                pass
    for key in sorted(RESULTS):
        print(RESULTS[key])
