"""
Deficiency chains
=================

Elements of V listed before something smaller shows up in A form the
deficiency set; iterating gives a nested chain of c.e. sets.
"""

from selcat import scenarios
from selcat.chains import (build_chain, compute_from_escapee, deficiency_subset, escapees,
                           reduce_to_source)
from selcat.numbering import Enumeration, Horizon

a, v = Enumeration((3, 1, 4)), Enumeration((2, 5))
print("A^V:", sorted(deficiency_subset(a, v).members()))
print("2 from A:", reduce_to_source(2, a, v, {1, 3, 4}.__contains__))

h = Horizon(64, 64)
chain = build_chain(scenarios.random_chain_sources(1, 4, h))
print("sizes:", [len(V.members()) for V in chain.sets])
print("nesting violations:", chain.nesting_violations())

# 10 = v(2) is never undercut later, so A below 10 is whatever a listed by stage 2
a = Enumeration((0, 2, 5, 12, 11, 15))
v = Enumeration((1, 3, 10))
for w, s in escapees(a, v, deficiency_subset(a, v).members()):
    member = compute_from_escapee(w, s, a)
    print(f"escapee {w} at stage {s}:", [x for x in range(w) if member(x)],
          " truth:", sorted(x for x in a.members() if x < w))
