"""Full pipeline walkthrough: prepare, interrogate, reconstruct.

Runs the complete ground-state-energy measurement as the hardware would:
adiabatic preparation of the molecular ground state, six rounds of
controlled-U interferometry with a +-5 degree readout bound, and the
recursive rebuild of the phase into an energy.
"""
import warnings

import numpy as np

from molphase import asp, ipea, molham, probe

h2 = molham.build_h2()
spec = molham.spectrum(h2)
tau = molham.choose_tau(h2)

print("=== system ===")
print(f"Hamiltonian {h2.label}:")
print(np.array_str(h2.matrix.real, precision=4))
print(f"exact energies: {spec.energies[0]:.6f}, {spec.energies[1]:.6f} hartree")
print(f"evolution time tau = {tau:.6f} (phase = {ipea.oracle_phase(h2, tau):.6f} turns)")

print("\n=== adiabatic preparation (6 steps, T = 9.5) ===")
result = asp.run_asp(asp.AdiabaticSchedule(steps=6, total_time=9.5, target=h2))
for m, f in enumerate(result.per_step_fidelities):
    print(f"  step {m}: instantaneous ground-state fidelity {f:.6f}")
print(f"prepared state fidelity vs exact ground state: {result.fidelity:.6f}")

print("\n=== iterative phase estimation (n = 3 bits/round, jittered readout) ===")
config = ipea.IterationConfig(bits_per_iteration=3, iterations=6,
                              phase_error_bound=5 / 360, tau=tau)
noise = probe.NoiseModel(phase_jitter_bound=5 / 360, rng_seed=7)
with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always")
    records, phase, energy = ipea.run_ipea(h2, config, prep=result.final_state, noise=noise)
for w in caught:
    print(f"  (warning: {w.message})")
print("  the imperfect preparation is harmless here: tau puts the leaked")
print("  configuration exactly half a turn away, so it re-phases onto the")
print("  ground phase as soon as the operator is squared")
for rec in records:
    print(f"  k={rec.k}: measured {rec.measured_phase:.6f}, clipped {rec.clipped_phase:.6f}, "
          f"operator power {rec.operator_power}")

print("\n=== result ===")
oracle = ipea.oracle_phase(h2, tau)
print(f"rebuilt phase: {phase.value:.9f}  (oracle {oracle:.9f})")
print(f"binary: 0.{phase.binary_digits}")
print(f"energy: {energy.energy:.7f} hartree (exact {energy.oracle_energy:.7f})")
print(f"correct bits: {ipea.precision_report(phase, oracle)} "
      f"(guaranteed by the error bound: {phase.guaranteed_bits})")
