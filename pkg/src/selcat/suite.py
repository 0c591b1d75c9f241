"""The invariant suite: every construction checked on seeded corpora.

Each check returns a plain dict with a stable key order so that reports
can be diffed byte for byte.
"""

from __future__ import annotations

import random
from itertools import product

from . import approx, chains, genericity, scenarios, sequences, structure
from .errors import ForcingViolated, SelcatError
from .numbering import (Enumeration, Horizon, canonical_index, canonical_set, join, pair,
                        split, unpair)
from .sequences import Status


def _result(name, cases, failure=None):
    return {"name": name, "passed": failure is None, "cases": cases,
            "counterexample": failure}


def check_coding(h: Horizon, seed: int) -> dict:
    bits = min(h.elements, 12)
    for n in range(1 << bits):
        if canonical_index(canonical_set(n)) != n:
            return _result("canonical-coding", n, {"n": n})
    seen = {}
    for x, y in product(range(h.elements), repeat=2):
        z = pair(x, y)
        if z in seen or unpair(z) != (x, y):
            return _result("canonical-coding", len(seen), {"x": x, "y": y})
        seen[z] = (x, y)
    return _result("canonical-coding", (1 << bits) + len(seen))


def check_enumerations(h: Horizon, seed: int, count: int = 20) -> dict:
    rng = random.Random(seed)
    cases = 0
    for _ in range(count):
        E = scenarios.random_enumeration(rng, rng.sample(range(h.elements), rng.randint(0, 8)), h)
        for x in range(h.elements):
            was = False
            for s in range(h.stages + 1):
                now = E.member_at(x, s)
                cases += 1
                if was and not now:
                    return _result("enumeration-monotone", cases, {"x": x, "stage": s})
                was = now
    return _result("enumeration-monotone", cases)


def check_interval(h: Horizon, seed: int, universe: int = 5) -> dict:
    hz = Horizon(max(h.stages, universe), universe)
    cases = 0
    for code in range(4 ** universe):
        U, X, V = set(), set(), set()
        for i in range(universe):
            d = (code >> (2 * i)) & 3
            if d >= 1:
                V.add(i)
            if d >= 2:
                X.add(i)
            if d == 3:
                U.add(i)
        S = sequences.interval_encode(Enumeration.from_set(U), Enumeration.from_set(V), hz)
        f = sequences.separator_to_selector(X, universe, U, V)
        cases += 1
        if (not sequences.all_confirmed(sequences.check_selector(f, S, hz))
                or sequences.selector_to_separator(f) != X):
            return _result("interval-equivalence", cases,
                           {"U": sorted(U), "X": sorted(X), "V": sorted(V)})
    return _result("interval-equivalence", cases)


def check_hat_and_tilde(h: Horizon, seed: int, count: int = 20) -> dict:
    rng = random.Random(seed)
    hz = Horizon(h.stages, min(h.elements, 10))
    cases = 0
    for _ in range(count):
        S = scenarios.random_sequence(rng, rng.randint(1, 5), hz)
        hat = sequences.hat_transform(S, hz)
        for i in range(len(S)):
            Ahat = hat.A(i).members(hz.stages)
            cases += 1
            if 0 not in Ahat:
                return _result("hat-and-tilde", cases, {"index": i, "missing": 0})
            for m in Ahat:
                for n in (canonical_index(sub) for sub in _subsets(canonical_set(m))):
                    if n not in Ahat:
                        return _result("hat-and-tilde", cases, {"index": i, "m": m, "n": n})
        St = sequences.tilde_normalize(S)
        bad = sequences.normalization_violations(St, hz)
        if bad:
            return _result("hat-and-tilde", cases, {"violations": bad})
    return _result("hat-and-tilde", cases)


def _subsets(s):
    s = sorted(s)
    for mask in range(1 << len(s)):
        yield [x for j, x in enumerate(s) if mask >> j & 1]


def check_verdict_monotone(h: Horizon, seed: int, count: int = 20) -> dict:
    rng = random.Random(seed)
    order = {Status.PENDING: 0, Status.CONFIRMED: 1, Status.VIOLATED: 2}
    cases = 0
    for _ in range(count):
        S = scenarios.random_sequence(rng, 4, h, nonempty=False)
        f = sequences.Selector.from_list([rng.randrange(h.elements) for _ in range(4)])
        prev = None
        for s in range(2, h.stages + 1):
            v = sequences.check_selector(f, S, Horizon(s, h.elements))
            cases += 1
            if prev is not None:
                for i in v:
                    if order[v[i].status] < order[prev[i].status]:
                        return _result("verdict-monotone", cases, {"index": i, "stage": s})
            prev = v
    return _result("verdict-monotone", cases)


def structure_case(seed: int, h: Horizon, max_length: int = 12) -> dict | None:
    """Compile, generate formulas, check definability and rigidity, extract back.

    Returns None on success or a counterexample dict.
    """
    rng = random.Random(seed)
    S = scenarios.random_sequence(rng, rng.randint(2, max_length), h)
    St = sequences.tilde_normalize(S)
    fns = structure.derive_functions(St, h)
    frag = structure.build_structure(St, fns, h)
    f = scenarios.tilde_weak_selector(S, scenarios.random_choices(rng, S, h))
    phis = structure.formulas_from_weak_selector(f, St, fns, h)
    dom = sorted(frag.domain)
    for m, phi in phis.items():
        for j in dom:
            if structure.eval_formula(phi, frag, {"x": j}) != (j == m):
                return {"seed": seed, "formula": m, "element": j}
    g = structure.extract_weak_selector(phis, frag, None)
    v = sequences.check_weak_selector(g, St, h, window=St.value_bound())
    if not sequences.all_confirmed(v):
        return {"seed": seed, "extraction": {i: x.status.value for i, x in v.items()}}
    return None


def check_structures(h: Horizon, seed: int, count: int = 10) -> dict:
    for k in range(count):
        bad = structure_case(seed * 1000 + k, h)
        if bad:
            return _result("structure-round-trip", k + 1, bad)
    return _result("structure-round-trip", count)


def check_generic(h: Horizon, seed: int, count: int = 20) -> dict:
    for k in range(count):
        sc = scenarios.random_generic(seed * 1000 + k, h)
        if genericity.forcing_counterexample(sc.sigma, sc.functional, sc.sequence, 16, h):
            return _result("forcing-extraction", k, {"seed": k, "reason": "sigma not forcing"})
        g = genericity.extract_selector(sc.sigma, sc.functional, sc.sequence, h)
        v = sequences.check_selector(g, sc.sequence, h)
        if sequences.any_violated(v) or g.markers:
            return _result("forcing-extraction", k, {"seed": k, "selector": dict(g.values)})
        bad = scenarios.inject_bad_axiom(sc, h)
        try:
            genericity.extract_selector(bad.sigma, bad.functional, bad.sequence, h)
        except ForcingViolated:
            pass
        else:
            return _result("forcing-extraction", k, {"seed": k, "reason": "bad axiom accepted"})
    return _result("forcing-extraction", count)


def check_deficiency(h: Horizon, seed: int, count: int = 20) -> dict:
    rng = random.Random(seed)
    cases = 0
    for k in range(count):
        a, v = scenarios.random_chain_sources(rng, 2, h)
        av = chains.deficiency_subset(a, v)
        amem = a.members()
        for x in range(h.elements):
            cases += 1
            if chains.reduce_to_source(x, a, v, amem.__contains__) != (x in av):
                return _result("deficiency-procedures", cases, {"case": k, "x": x})
        X = scenarios.random_between(rng, av.members(), v.members())
        for w, s in chains.escapees(a, v, X):
            member = chains.compute_from_escapee(w, s, a)
            for x in range(w):
                cases += 1
                if member(x) != (x in amem):
                    return _result("deficiency-procedures", cases, {"case": k, "escapee": w, "x": x})
        chain = chains.build_chain(scenarios.random_chain_sources(rng, rng.randint(1, 4), h))
        bad = chain.nesting_violations()
        if bad:
            return _result("deficiency-procedures", cases, {"case": k, "nesting": bad[:4]})
    return _result("deficiency-procedures", cases)


def check_tables(h: Horizon, seed: int, count: int = 12) -> dict:
    cases = 0
    for k in range(count):
        n = 1 + k % 4
        T = approx.generate_table(n, seed * 1000 + k, h)
        cases += 1
        ok, wit = approx.check_locality(T)
        counts = T.changes.sum(axis=0)
        if not ok or counts.min() < 1 or counts.max() > n + 1:
            return _result("approximation-inclusions", cases, {"table": k, "locality": wit})
        if not (T.u_tilde <= T.f_tilde <= T.v_tilde and T.u_change <= T.f_change <= T.v_change):
            return _result("approximation-inclusions", cases, {"table": k, "reason": "inclusion"})
        L = approx.build_layers(T, n)
        if L.union() != T.f_change or L[n + 1] or sum(map(len, L.layers)) != len(T.f_change):
            return _result("approximation-inclusions", cases, {"table": k, "reason": "layers"})
        if {y for y in range(T.elements) if pair(y, 0) in L[1]} != set(map(int, T.limit.nonzero()[0])):
            return _result("approximation-inclusions", cases, {"table": k, "reason": "layer 1"})
    return _result("approximation-inclusions", cases)


def check_procedures(h: Horizon, seed: int, count: int = 8) -> dict:
    cases = 0
    for k in range(count):
        n = 1 + k % 4
        sc = scenarios.random_join_scenario(seed * 1000 + k, n, h)
        T = sc.table
        Z = scenarios.random_between(k, T.f_tilde, T.v_tilde)
        Eset = sc.E.members()
        for z in T.codes():
            trace = []
            got = approx.decide_membership(z, Z, Eset, sc.operator, T, trace, validate=False)
            cases += 1
            y, t = unpair(z)
            if got != (z in T.f_tilde) or len(trace) - 1 > len(T.flips(y)):
                return _result("procedure-equivalence", cases, {"table": k, "code": [y, t]})
        L = approx.build_layers(T, n)
        for i in range(1, n + 1):
            cases += 1
            if approx.layer_ce_characterization(T, i, L[i + 1]) != L[i]:
                return _result("procedure-equivalence", cases, {"table": k, "layer": i})
        for X in (T.f_change, T.v_change, T.u_change,
                  scenarios.random_between(k, T.u_change, T.v_change)):
            red = approx.layered_reduction(X, T, n, branch="auto")
            cases += 1
            if any(red(x) != bool(T.limit[x]) for x in range(T.elements)):
                return _result("procedure-equivalence", cases, {"table": k, "reduction": True})
    return _result("procedure-equivalence", cases)


def hand_violating_table() -> approx.ApproxTable:
    """Column 0 changes between rows 3 and 4, column 1 changes at row 5."""
    rows = [[1, 1, 0], [0, 0, 0], [0, 0, 0], [0, 0, 0], [1, 0, 0], [1, 1, 0], [1, 1, 0]]
    return approx.ApproxTable(rows)


def check_locality_validator(h: Horizon, seed: int) -> dict:
    ok, wit = approx.check_locality(hand_violating_table())
    if ok or wit != (0, 1, 3, 5):
        return _result("locality-validator", 1, {"witness": wit})
    return _result("locality-validator", 1)


def check_join_split(h: Horizon, seed: int, universe: int = 4) -> dict:
    rng = random.Random(seed)
    cases = 0
    for _ in range(5):
        E = {x for x in range(universe) if rng.random() < 0.5}
        Ut = {x for x in range(universe) if rng.random() < 0.3}
        Vt = Ut | {x for x in range(universe) if rng.random() < 0.5}
        U, V = join(E, Ut), join(E, Vt)
        free = sorted(V - U)
        for mask in range(1 << len(free)):
            X = U | {z for j, z in enumerate(free) if mask >> j & 1}
            e, Z = split(X)
            cases += 1
            if e != E or not Ut <= Z <= Vt or join(e, Z) != X:
                return _result("join-decomposition", cases, {"X": sorted(X)})
    return _result("join-decomposition", cases)


CHECKS = (check_coding, check_enumerations, check_interval, check_hat_and_tilde,
          check_verdict_monotone, check_structures, check_generic, check_deficiency,
          check_tables, check_procedures, check_locality_validator, check_join_split)


def run_suite(h: Horizon, seed: int = 0) -> dict:
    results = []
    for check in CHECKS:
        try:
            results.append(check(h, seed))
        except SelcatError as exc:
            name = check.__name__.removeprefix("check_").replace("_", "-")
            results.append(_result(name, 0, {"error": type(exc).__name__, "message": str(exc)}))
    return {"seed": seed, "horizon": {"stages": h.stages, "elements": h.elements},
            "passed": all(r["passed"] for r in results), "checks": results}
