"""
Approximation tables
====================

A 0/1 table F_s(x) under the locality rule, the sets of stages where a column
drops or changes, their layers by change count, and the procedures that get F
back from any set caught between the lower and upper bounds.
"""

import numpy as np

from selcat import scenarios
from selcat.approx import (build_layers, check_locality, decide_membership, escapee_recovery,
                           layered_reduction)
from selcat.numbering import Horizon, unpair
from selcat.suite import hand_violating_table

h = Horizon(24, 8)
sc = scenarios.random_join_scenario(3, 2, h)
T = sc.table
print(T.F[:8])
print("limit:", T.limit, " locality:", check_locality(T))
print("hand table:", check_locality(hand_violating_table()))

print("F~ :", sorted(unpair(z) for z in T.f_tilde))
print("U~ <= F~ <= V~:", T.u_tilde <= T.f_tilde <= T.v_tilde)

L = build_layers(T, 2)
for i in (1, 2, 3):
    print(f"layer {i}:", sorted(unpair(z) for z in L[i]))

# decide drop-set membership from E and any Z between F~ and V~
Z = T.v_tilde
answers = [decide_membership(z, Z, sc.E.members(), sc.operator, T) for z in sorted(T.codes())]
print("decided correctly:", answers == [z in T.f_tilde for z in sorted(T.codes())])

Y, values = escapee_recovery(T.u_tilde, T)
print("escapees:", sorted(Y), " recovered:", values)

red = layered_reduction(T.v_change, T, 2, branch="auto")
print("F from V:", np.array([red(x) for x in range(T.elements)], dtype=int))
