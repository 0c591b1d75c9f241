"""Command-line front door: ``selcat <subcommand> [scenario.json] [flags]``.

Exit status: 0 when every check passes, 1 when a counterexample is found,
2 on malformed input or a horizon error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import approx, chains, genericity, io, scenarios, sequences, structure, suite
from .errors import ForcingViolated, HorizonExceeded, InvalidInput, SelcatError
from .formulas import ParseError
from .numbering import Horizon, canonical_set, unpair

KINDS = {
    "check-selector": "sequence",
    "hat": "sequence",
    "normalize": "sequence",
    "compile-structure": "structure",
    "encode-interval": "interval",
    "extract-generic": "generic",
    "build-chain": "chain",
    "approx": "approx",
}


class ScenarioError(Exception):
    pass


def load_scenario(path: Path) -> dict:
    text = path.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ScenarioError(f"{path}: top level must be an object")
    if "payload" not in data:
        # bare payloads are accepted for hand-written files
        data = {"payload": data}
    return data


def _check(name, passed, detail=None):
    out = {"name": name, "passed": bool(passed)}
    if detail is not None:
        out["detail" if passed else "counterexample"] = detail
    return out


def _verdicts_json(verdicts):
    return [{"index": i, "status": v.status.value, "stage": v.stage, "witness": v.witness}
            for i, v in verdicts.items()]


def _differences(S, h):
    return [sorted(S.difference(i, h.stages)) for i in range(len(S))]


def run_check_selector(p, h, seed):
    S = io.sequence_from_json(p["sequence"])
    f = io.selector_from_json(p["selector"])
    weak = bool(p.get("weak", False))
    v = (sequences.check_weak_selector if weak else sequences.check_selector)(f, S, h)
    checks = [_check("no-violation", not sequences.any_violated(v),
                     None if not sequences.any_violated(v) else
                     [x for x in _verdicts_json(v) if x["status"] == "violated"])]
    return {"verdicts": _verdicts_json(v), "weak": weak}, checks


def run_hat(p, h, seed):
    S = io.sequence_from_json(p["sequence"])
    hat = sequences.hat_transform(S, h)
    out = [{"A": sorted(a.members(h.stages)), "B": sorted(b.members(h.stages))} for a, b in hat.pairs]
    closed = all(0 in r["A"] for r in out)
    return {"window": h.elements, "hat": out}, [_check("empty-set-member", closed)]


def run_normalize(p, h, seed):
    S = sequences.tilde_normalize(io.sequence_from_json(p["sequence"]))
    bad = sequences.normalization_violations(S, h)
    return ({"sequence": io.sequence_to_json(S)},
            [_check("normalized", not bad, bad or None)])


def run_compile_structure(p, h, seed):
    S = io.sequence_from_json(p["sequence"])
    choices = p.get("choices") or scenarios.default_choices(S, h)
    St = sequences.tilde_normalize(S)
    fns = structure.derive_functions(St, h)
    frag = structure.build_structure(St, fns, h)
    f = scenarios.tilde_weak_selector(S, choices)
    phis = structure.formulas_from_weak_selector(f, St, fns, h)
    wrong = []
    for m, phi in phis.items():
        for j in sorted(frag.domain):
            if structure.eval_formula(phi, frag, {"x": j}) != (j == m):
                wrong.append([m, j])
    g = structure.extract_weak_selector(phis, frag, p.get("s_star"))
    v = sequences.check_weak_selector(g, St, h, window=St.value_bound())
    resolved = {i: x for i, x in v.items() if i in g}
    artifacts = {
        "fragment": io.fragment_to_json(frag),
        "formulas": io.formulas_to_json(phis),
        "extracted": {"selector": [[i, sorted(canonical_set(x))] for i, x in g.values.items()],
                      "markers": [[i, m] for i, m in g.markers.items()]},
    }
    checks = [_check("defining-family", not wrong, wrong[:10] or None),
              _check("extraction-confirmed", sequences.all_confirmed(resolved),
                     None if sequences.all_confirmed(resolved) else _verdicts_json(resolved))]
    return artifacts, checks


def run_encode_interval(p, h, seed):
    U = io.enumeration_from_json(p["U"])
    V = io.enumeration_from_json(p["V"])
    S = sequences.interval_encode(U, V, h)
    art = {"sequence": io.sequence_to_json(S), "C": _differences(S, h)}
    checks = []
    if "X" in p:
        f = sequences.separator_to_selector(p["X"], h.elements, U.members(), V.members())
        v = sequences.check_selector(f, S, h)
        art["selector"] = [f[i] for i in range(f.bound)]
        checks.append(_check("separator-selector", sequences.all_confirmed(v),
                             None if sequences.all_confirmed(v) else _verdicts_json(v)))
    return art, checks


def run_extract_generic(p, h, seed):
    S = io.sequence_from_json(p["sequence"])
    phi = io.functional_from_json(p["functional"])
    sigma = p.get("sigma", "")
    max_len = int(p.get("max_len", 12))
    art = {"bad_strings": sorted(genericity.bad_strings(phi, S, max_len, h), key=lambda s: (len(s), s))}
    cex = genericity.forcing_counterexample(sigma, phi, S, max_len, h)
    checks = [_check("sigma-forces", cex is None, None if cex is None else {"extension": cex})]
    try:
        g = genericity.extract_selector(sigma, phi, S, h)
    except ForcingViolated as exc:
        checks.append(_check("extraction", False, {"forcing-violated": exc.sigma, "index": exc.index}))
        return art, checks
    v = sequences.check_selector(g, S, h)
    art["selector"] = io.selector_to_json(g)
    art["verdicts"] = _verdicts_json(v)
    checks.append(_check("extraction", not sequences.any_violated(v)))
    return art, checks


def run_build_chain(p, h, seed):
    sources = [io.enumeration_from_json(s) for s in p["sources"]]
    k = int(p.get("k", len(sources)))
    if not 1 <= k <= len(sources):
        raise InvalidInput(f"k={k} but {len(sources)} sources given")
    chain = chains.build_chain(sources[:k])
    art = {"chain": [io.enumeration_to_json(V) for V in chain.sets]}
    checks = [_check("nesting", not chain.nesting_violations(), chain.nesting_violations() or None)]
    bad_reduce, bad_escape = [], []
    for i in range(1, len(chain)):
        a, v, av = chain.sources[i], chain.sets[i - 1], chain.sets[i]
        amem = a.members()
        for x in range(h.elements):
            try:
                if chains.reduce_to_source(x, a, v, amem.__contains__) != (x in av):
                    bad_reduce.append([i + 1, x])
            except HorizonExceeded:
                bad_reduce.append([i + 1, x, "horizon-exceeded"])
        for w, s in chains.escapees(a, v, av.members()):
            member = chains.compute_from_escapee(w, s, a)
            bad_escape += [[i + 1, w, x] for x in range(w) if member(x) != (x in amem)]
    checks.append(_check("reduce-to-source", not bad_reduce, bad_reduce[:10] or None))
    checks.append(_check("escapee-computation", not bad_escape, bad_escape[:10] or None))
    return art, checks


def run_approx(p, h, seed):
    T = io.table_from_json(p["table"])
    if p.get("redefine", True):
        T = approx.prefix_redefine(T)
    n = int(p.get("n", max(1, T.max_changes() - 1)))
    ok, wit = approx.check_locality(T)
    art = {
        "table": io.table_to_json(T),
        "F_tilde": io.codes_to_json(T.f_tilde),
        "U_tilde": io.codes_to_json(T.u_tilde),
        "V_tilde": io.codes_to_json(T.v_tilde),
        "F_change": io.codes_to_json(T.f_change),
        "U_change": io.codes_to_json(T.u_change),
        "V_change": io.codes_to_json(T.v_change),
    }
    checks = [_check("locality", ok, None if ok else list(wit))]
    if not ok:
        return art, checks
    L = approx.build_layers(T, n)
    art["layers"] = [io.codes_to_json(l) for l in L.layers]
    checks.append(_check("inclusions", T.u_tilde <= T.f_tilde <= T.v_tilde
                         and T.u_change <= T.f_change <= T.v_change))
    checks.append(_check("layers-partition", L.union() == T.f_change and not L[n + 1]))
    ce_bad = [i for i in range(1, n + 1) if approx.layer_ce_characterization(T, i, L[i + 1]) != L[i]]
    checks.append(_check("layer-characterization", not ce_bad, ce_bad or None))

    if "operator" in p:
        E = io.enumeration_from_json(p.get("E", [])).members()
        op = io.operator_from_json(p["operator"])
    else:
        # trivial operator: enumerate each member of the limit at its settling stage
        E = frozenset()
        op = approx.EnumOperator(frozenset(((), y, T.settling(y))
                                           for y in range(T.elements) if T.limit[y]))
    if op.limit(E) != frozenset(int(y) for y in T.limit.nonzero()[0]):
        raise InvalidInput("operator does not enumerate the limit of the table")
    Z = io.codes_from_json(p["Z"]) if "Z" in p else T.f_tilde
    bad = approx.sandwich_violations(T.f_tilde, Z, T.v_tilde)
    if bad:
        raise InvalidInput("Z must lie between F~ and V~: " + bad[0])
    wrong = []
    for z in T.codes():
        trace = []
        got = approx.decide_membership(z, Z, E, op, T, trace, validate=False)
        y, t = unpair(z)
        if got != (z in T.f_tilde) or len(trace) - 1 > len(T.flips(y)):
            wrong.append([y, t])
    checks.append(_check("decide-membership", not wrong, wrong[:10] or None))
    Y, vals = approx.escapee_recovery(T.u_tilde, T)
    esc_bad = [x for x, b in vals.items() if b != T.limit[x]]
    checks.append(_check("escapee-recovery", not esc_bad, esc_bad or None))
    Xs = [io.codes_from_json(p["X"])] if "X" in p else [T.f_change, T.v_change, T.u_change]
    red_bad = []
    for X in Xs:
        red = approx.layered_reduction(X, T, n, branch="auto")
        red_bad += [x for x in range(T.elements) if red(x) != bool(T.limit[x])]
    checks.append(_check("layered-reduction", not red_bad, sorted(set(red_bad)) or None))
    return art, checks


RUNNERS = {
    "check-selector": run_check_selector,
    "hat": run_hat,
    "normalize": run_normalize,
    "compile-structure": run_compile_structure,
    "encode-interval": run_encode_interval,
    "extract-generic": run_extract_generic,
    "build-chain": run_build_chain,
    "approx": run_approx,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="selcat", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(RUNNERS) + ["suite"])
    parser.add_argument("scenario", nargs="?", type=Path, help="scenario JSON file")
    parser.add_argument("--horizon-stages", type=int)
    parser.add_argument("--horizon-elements", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--format", choices=("structured", "summary"), default="structured")
    parser.add_argument("--timing", action="store_true",
                        help="add wall-clock timing to the report (breaks byte-identity)")
    return parser


def _horizon(args, scenario) -> Horizon:
    hz = scenario.get("horizon", {})
    stages = args.horizon_stages or hz.get("stages", 64)
    elements = args.horizon_elements or hz.get("elements", 32)
    return Horizon(int(stages), int(elements))


def _summary(report) -> str:
    lines = [f"{report['command']}: {'PASS' if report['passed'] else 'FAIL'}"]
    for c in report["checks"]:
        lines.append(f"  [{'pass' if c['passed'] else 'FAIL'}] {c['name']}")
    if "error" in report:
        lines.append(f"  error: {report['error']['type']}: {report['error']['message']}")
    return "\n".join(lines)


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    report = {"command": args.command}
    code = 0
    try:
        if args.command == "suite":
            scenario = load_scenario(args.scenario) if args.scenario else {}
            h = _horizon(args, scenario)
            seed = args.seed if args.seed is not None else scenario.get("seed", 0)
            res = suite.run_suite(h, seed)
            report.update({"seed": seed, "horizon": res["horizon"], "passed": res["passed"],
                           "checks": res["checks"]})
        else:
            if args.scenario is None:
                raise ScenarioError(f"{args.command} needs a scenario file")
            scenario = load_scenario(args.scenario)
            kind = scenario.get("kind", KINDS[args.command])
            if kind != KINDS[args.command]:
                raise ScenarioError(f"{args.command} expects kind {KINDS[args.command]!r}, got {kind!r}")
            h = _horizon(args, scenario)
            seed = args.seed if args.seed is not None else scenario.get("seed", 0)
            artifacts, checks = RUNNERS[args.command](scenario["payload"], h, seed)
            report.update({"kind": kind, "seed": seed,
                           "horizon": {"stages": h.stages, "elements": h.elements},
                           "passed": all(c["passed"] for c in checks),
                           "checks": checks, "artifacts": artifacts})
        code = 0 if report["passed"] else 1
    except (ScenarioError, InvalidInput, HorizonExceeded, ParseError, KeyError, TypeError,
            ValueError, SelcatError, OSError) as exc:
        report.update({"passed": False, "checks": report.get("checks", []),
                       "error": {"type": type(exc).__name__, "message": str(exc)}})
        code = 2
    if args.timing:
        report["timing"] = {"seconds": round(time.perf_counter() - started, 3)}
    if args.format == "structured":
        json.dump(report, stdout, indent=1)
        stdout.write("\n")
        print(_summary(report), file=stderr)
    else:
        print(_summary(report), file=stdout)
    return code


def main():
    sys.exit(run())
