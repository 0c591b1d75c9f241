"""
Compiling a sequence into a rigid structure
===========================================

A normalized sequence becomes a structure with unary functions e_k. A weak
selector yields one existential formula per element that holds there and
nowhere else; reading the functions back recovers a weak selector.
"""

from selcat import scenarios
from selcat.formulas import to_text
from selcat.numbering import Horizon, canonical_set
from selcat.sequences import all_confirmed, check_weak_selector, tilde_normalize
from selcat.structure import (build_structure, closure, derive_functions, eval_formula,
                              extract_weak_selector, formulas_from_weak_selector)

h = Horizon(128, 64)
S = scenarios.random_sequence(4, 3, h)
St = tilde_normalize(S)
fns = derive_functions(St, h)
frag = build_structure(St, fns, h)
print("domain size:", len(frag.domain), " non-identity values:", len(frag.values))
print("closure of 0..2:", sorted(closure(2, frag)))

f = scenarios.tilde_weak_selector(S, scenarios.default_choices(S, h))
phis = formulas_from_weak_selector(f, St, fns, h)
for m in (0, 1, 2):
    print(m, to_text(phis[m]))

# each formula picks out exactly its own point
for m, phi in phis.items():
    assert [j for j in sorted(frag.domain) if eval_formula(phi, frag, {"x": j})] == [m]

g = extract_weak_selector(phis, frag)
print({i: sorted(canonical_set(v)) for i, v in g.values.items()})
print("confirmed:", all_confirmed(check_weak_selector(g, St, h, window=St.value_bound())))
