"""Interfaces with an angled crest at the wall.

Near the corner ``1/Z_alpha`` behaves like ``|a + 1|^(1/r)``. Refining the
grid shows which crests keep the controlling norms bounded.
"""

from crestwave import crest_angle_scan

rows = crest_angle_scan([1.5, 2.5, 4.0], (128, 256, 512, 1024, 2048))
for r, n, a, b, label in rows:
    print(f"r={r:<4g} n={n:<5d} norm1={a:9.4f} norm2={b:11.4f} {label}")
