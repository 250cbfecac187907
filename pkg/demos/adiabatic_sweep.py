"""How few steps does the ground-state sweep need?

Scans the total sweep time for the six-step discretization and shows the
familiar adiabatic trade-off: too fast and the state lags, too slow and
the coarse discretization itself dephases. A dense 200-step sweep at long
time serves as the converged reference.
"""
import numpy as np

from molphase import asp, molham

h2 = molham.build_h2()

print("six-step sweep, total time T scanned over [1, 30] a.u.\n")
print("  T      fidelity")
pairs = asp.scan_total_time(h2, 6, np.arange(1.0, 30.0 + 1e-9, 0.5))
for t, f in pairs:
    bar = "#" * int(round(40 * f))
    print(f"  {t:5.1f}  {f:.4f} {bar}")

best_t, best_f = max(pairs, key=lambda p: p[1])
print(f"\nbest six-step point: T = {best_t}, fidelity = {best_f:.4f}")

dense = asp.run_asp(asp.AdiabaticSchedule(steps=200, total_time=50.0, target=h2))
print(f"dense reference (200 steps, T = 50): fidelity = {dense.fidelity:.6f}")
