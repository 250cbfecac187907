"""Why the iteration stops delivering bits: operator error compounds.

Each iteration squares the evolution operator n times, so a coherent
imperfection of strength eps in U appears amplified by 2^(n k) in round k.
The per-round phase error grows eightfold until it crosses the +-5 degree
measurement bound, after which extra rounds add no precise bits. The same
shape appears in the pulse backend when every pulse over-rotates by 0.1%.
"""
from molphase import ipea, molham, nmrpulse, probe

h2 = molham.build_h2()
tau = molham.choose_tau(h2)
theta0 = ipea.oracle_phase(h2, tau)
config = ipea.IterationConfig(tau=tau)
errbd = config.phase_error_bound

for eps in (1e-5, 1e-4, 1e-3):
    noise = probe.NoiseModel(coherent_epsilon=eps)
    records, phase, _ = ipea.run_ipea(h2, config, noise=noise)
    errors = ipea.iteration_phase_errors(records, theta0, 3)
    print(f"coherent eps = {eps:g} hartree:")
    for k, err in enumerate(errors):
        marker = "  <-- exceeds readout bound" if err > errbd else ""
        print(f"  k={k}: phase-shift error {err:.3e}{marker}")
    print(f"  attainable bits: {ipea.precision_report(phase, theta0)}\n")

print("pulse backend, every pulse over-rotated by 0.1%:")
result = nmrpulse.run_pulse_backend(h2, ipea.IterationConfig(iterations=4, tau=tau),
                                    over_rotation=1e-3)
errors = ipea.iteration_phase_errors(result.records, theta0, 3)
for k, err in enumerate(errors):
    print(f"  k={k}: phase-shift error {err:.3e}")
ratios = ", ".join(f"{errors[i + 1] / errors[i]:.1f}" for i in range(len(errors) - 1))
print(f"  per-round growth: {ratios}  (2^n = 8)")
