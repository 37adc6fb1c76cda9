"""A moderately nonlinear run with CFL stepping and the energy growth monitor.

``growth_bound`` reports sup |dE/dt| / (1 + E)^p along the run; a bounded
value that does not grow with resolution is the behaviour the a priori
estimate predicts.
"""

from crestwave import RunConfig, growth_bound, run

for n in (128, 256):
    cfg = RunConfig(grid_n=n, dt=None, t_end=1.0, output_cadence=0.05,
                    ic={"kind": "mode", "k": -1, "eps": 0.05})
    r = run(cfg)
    E = r.totals
    print(f"n={n}: steps={r.steps} E/E0 in [{E.min() / E[0]:.3f}, {E.max() / E[0]:.3f}] "
          f"growth={growth_bound(r.times, E, 2.0):.4g} min A1={r.min_A1:.6f}")
