"""The energy and its components, plus the norm-based characterization."""

from crestwave import characterization, derive, energy, random_state

s = random_state(256, seed=3, decay=5.0)
d = derive(s)
rep = energy(s, d)
for name in ("ea_1", "ea_23", "ea_4", "eb_1", "eb_2", "eb_3", "anchor", "total"):
    print(f"{name:7s} {getattr(rep, name):.6e}")

# the energy is comparable to the sum of squares of these seven norms
c = characterization(s, d)
print("norms:", ", ".join(f"{v:.3e}" for v in c.values()))
