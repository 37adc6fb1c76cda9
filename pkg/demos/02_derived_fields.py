"""Derived quantities of a single interface state.

For the small mode ``Vbar = eps exp(-i pi a)`` on a flat interface the
pressure coefficient and the frame velocity have closed forms, which the
numerics reproduce to roundoff.
"""

import numpy as np

from crestwave import derive, make_ic, random_state

eps = 0.05
s = make_ic(256, {"kind": "mode", "k": -1, "eps": eps})
d = derive(s)
x = s.grid.points

print("A1 - (1 + pi eps^2):        ", np.max(np.abs(d.A1 - (1 + np.pi * eps**2))))
print("b - 2 eps (1 + cos pi a):   ", np.max(np.abs(d.b - 2 * eps * (1 + np.cos(np.pi * x)))))

# A1 >= 1 holds for every state, not just this one
worst = min(derive(random_state(128, seed=i, amplitude=0.1)).A1.min() for i in range(50))
print("min A1 over 50 random states:", worst)
