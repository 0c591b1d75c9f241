"""
Hat and tilde
=============

The hat transform replaces every A_i and B_i by the codes of their finite
subsets; a weak selector picks a finite subset of A_i not contained in B_i.
The tilde normalization makes the B_i nonempty, inside A_i, with disjoint A_i.
"""

from selcat.numbering import Horizon, canonical_index, canonical_set
from selcat.sequences import (DiffSequence, Selector, check_weak_selector, hat_transform,
                              is_normalized, tilde_normalize)

h = Horizon(16, 8)
S = DiffSequence.from_sets([({0, 2}, {2}), ({1, 3}, {1, 3})])

hat = hat_transform(S, h)
print("hat A_0:", sorted(hat.A(0).members()))
print("hat B_0:", sorted(hat.B(0).members()))

# C_1 is empty, yet {1, 3} is a finite subset of A_1 ... and it sits in B_1
f = Selector.from_list([canonical_index({0}), canonical_index({1, 3})])
for i, v in check_weak_selector(f, S, h).items():
    print(i, sorted(canonical_set(f[i])), v.status.value)

T = tilde_normalize(S)
print("normalized:", is_normalized(T, h))
for i in range(len(T)):
    print(i, sorted(T.A(i).members()), sorted(T.B(i).members()))
