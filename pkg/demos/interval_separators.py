"""
Separators as selectors
=======================

A separator X between c.e. sets U and V (U inside X inside V) is the same thing
as a 0/1 selector for a sequence of two-element differences.
"""

from selcat.numbering import Enumeration, Horizon
from selcat.sequences import (check_selector, interval_encode, selector_to_separator,
                              separator_to_selector)

h = Horizon(stages=8, elements=5)
U = Enumeration((2,))
V = Enumeration((1, 2, 4))

# each C_i is {0}, {0,1} or {1} depending on where i sits
S = interval_encode(U, V, h)
for i in range(h.elements):
    print(i, sorted(S.difference(i, h.stages)))

# any X in the interval gives a selector that checks out
f = separator_to_selector({1, 2}, h.elements, U.members(), V.members())
print({i: v.status.value for i, v in check_selector(f, S, h).items()})
print("back to X:", sorted(selector_to_separator(f)))

# an X that misses part of U does not
from selcat.sequences import Selector

g = Selector.from_list([0, 1, 0, 0, 0])
print({i: v.status.value for i, v in check_selector(g, S, h).items()})
