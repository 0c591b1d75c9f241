"""
Selectors computed from a generic oracle
========================================

A functional that computes a selector along some oracle, together with a
string sigma that no bad extension passes through, gives a selector that
needs no oracle at all: search above sigma.
"""

from selcat import scenarios
from selcat.errors import ForcingViolated
from selcat.genericity import bad_strings, extract_selector, forcing_counterexample
from selcat.numbering import Horizon
from selcat.sequences import check_selector

h = Horizon(64, 32)
sc = scenarios.random_generic(2, h)
print("sigma:", repr(sc.sigma), " axioms:", len(sc.functional.axioms))
print("bad strings up to length 6:", len(bad_strings(sc.functional, sc.sequence, 6, h)))
print("bad extension of sigma:", forcing_counterexample(sc.sigma, sc.functional, sc.sequence, 16, h))

g = extract_selector(sc.sigma, sc.functional, sc.sequence, h)
print({i: v.status.value for i, v in check_selector(g, sc.sequence, h).items()})

# put a wrong answer right on sigma and the search refuses it
bad = scenarios.inject_bad_axiom(sc, h)
try:
    extract_selector(bad.sigma, bad.functional, bad.sequence, h)
except ForcingViolated as exc:
    print("rejected:", exc)
