"""Command-line front end.

Subcommands: ``eig``, ``ipea``, ``asp``, ``noise-sweep``, ``spectra``.
Angles accept a ``deg`` suffix (``5deg`` = 5/360 of a turn); bare numbers
are fractions of a turn. All validation happens before any computation and
no output file is written until a command has fully succeeded, so a given
configuration and seed always produce byte-identical outputs.

Exit codes: 0 success, 1 computation failure, 2 configuration or
validation failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import asp, ipea, molham, probe, qcore
from .errors import MolphaseError, ValidationError


def parse_angle(text: str) -> float:
    """Angle in fractions of a turn; a 'deg' suffix divides by 360."""
    t = text.strip().lower()
    try:
        if t.endswith("deg"):
            return float(t[:-3]) / 360.0
        return float(t)
    except ValueError:
        raise ValidationError(f"cannot parse angle {text!r} (use turns or e.g. '5deg')") from None


def load_source(source: str) -> molham.MolecularHamiltonian:
    """Resolve --hamiltonian: the built-in 'h2' or a JSON document path."""
    if source == "h2":
        return molham.build_h2()
    path = Path(source)
    if not path.is_file():
        raise ValidationError(f"Hamiltonian document not found: {source}")
    return molham.load_hamiltonian(path.read_text())


def resolve_tau(text: str, h: molham.MolecularHamiltonian) -> float:
    if text == "auto":
        return molham.choose_tau(h)
    try:
        tau = float(text)
    except ValueError:
        raise ValidationError(f"cannot parse tau {text!r} (number or 'auto')") from None
    if not tau > 0:
        raise ValidationError(f"tau must be positive, got {tau}")
    return tau


def _write(out_dir: str, name: str, text: str) -> Path:
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / name
    path.write_text(text)
    return path


def cmd_eig(args) -> int:
    h = load_source(args.hamiltonian)
    dec = qcore.hermitian_eig(h.matrix)
    report = {
        "label": h.label,
        "energies": [float(e) for e in dec.eigenvalues],
        "ground_state_re": [float(x) for x in dec.ground_state.real],
        "ground_state_im": [float(x) for x in dec.ground_state.imag],
        "metadata": dict(h.metadata),
    }
    path = _write(args.out, "eig_report.json", json.dumps(report, indent=2, sort_keys=True) + "\n")
    print(f"energies ({h.label}): " + ", ".join(f"{e:.6f}" for e in dec.eigenvalues))
    print(f"ground energy: {dec.ground_energy:.4f} hartree")
    print(f"report: {path}")
    return 0


def _bit_table(result: ipea.IpeaResult, n: int, oracle_ph: float | None) -> str:
    """Per-iteration bit strings, newest n bits bracketed."""
    lines = []
    for rec in result.records:
        running = ipea.reconstruct(result.records[: rec.k + 1], n)
        digits = running.binary_digits
        lines.append(f"k={rec.k}  0.{digits[: n * rec.k]} [{digits[n * rec.k:]}]")
    if oracle_ph is not None:
        lines.append(f"oracle 0.{ipea.to_binary(oracle_ph, n * len(result.records))}")
    return "\n".join(lines) + "\n"


def cmd_ipea(args) -> int:
    h = load_source(args.hamiltonian)
    tau = resolve_tau(args.tau, h)
    config = ipea.IterationConfig(
        bits_per_iteration=args.bits,
        iterations=args.iterations,
        phase_error_bound=parse_angle(args.errbd),
        tau=tau,
    )
    noise = None
    if args.jitter is not None:
        noise = probe.NoiseModel(phase_jitter_bound=parse_angle(args.jitter), rng_seed=args.seed)
    result = ipea.run_ipea(h, config, noise=noise)
    oracle_e = result.energy.oracle_energy
    oracle_ph = (-oracle_e * tau / (2.0 * np.pi)) % 1.0 if oracle_e is not None else None

    trace_path = _write(
        args.out,
        "ipea_trace.csv",
        ipea.trace_csv(result, args.bits, oracle_e, phase_error_bound=config.phase_error_bound),
    )
    table_path = _write(args.out, "ipea_table.txt", _bit_table(result, args.bits, oracle_ph))
    print(f"phase estimate: {result.phase.value:.17g}")
    print(f"energy: {result.energy.energy:.17g} hartree")
    if oracle_e is not None and oracle_ph is not None:
        bits = ipea.precision_report(result.phase, oracle_ph)
        print(f"oracle energy: {oracle_e:.17g} hartree (|dE| = {result.energy.abs_error:.3e})")
        print(f"correct bits vs oracle: {bits}")
    print(f"trace: {trace_path}")
    print(f"table: {table_path}")
    return 0


def cmd_asp(args) -> int:
    h = load_source(args.hamiltonian)
    if args.scan is not None:
        parts = args.scan.split(":")
        if len(parts) != 3:
            raise ValidationError(f"scan must be start:stop:step, got {args.scan!r}")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError:
            raise ValidationError(f"scan bounds must be numbers, got {args.scan!r}") from None
        if step <= 0 or stop < start:
            raise ValidationError(f"scan range is empty or descending: {args.scan!r}")
        grid = np.arange(start, stop + 1e-12, step)
    elif args.total_time is not None:
        grid = np.array([args.total_time])
    else:
        raise ValidationError("asp needs --total-time or --scan")
    pairs = asp.scan_total_time(h, args.steps, grid)
    lines = ["total_time,fidelity"]
    lines += [f"{t:.17g},{f:.17g}" for t, f in pairs]
    path = _write(args.out, "asp_scan.csv", "\n".join(lines) + "\n")
    best_t, best_f = max(pairs, key=lambda p: p[1])
    print(f"best: T = {best_t:.17g}, fidelity = {best_f:.17g} ({args.steps} steps)")
    print(f"scan: {path}")
    return 0


def cmd_noise_sweep(args) -> int:
    h = load_source(args.hamiltonian)
    tau = resolve_tau(args.tau, h)
    config = ipea.IterationConfig(
        bits_per_iteration=args.bits,
        iterations=args.iterations,
        phase_error_bound=parse_angle(args.errbd),
        tau=tau,
    )
    try:
        eps_values = [float(tok) for tok in args.epsilons.split(",") if tok.strip()]
    except ValueError:
        raise ValidationError(f"cannot parse epsilon grid {args.epsilons!r}") from None
    if not eps_values or any(e < 0 for e in eps_values):
        raise ValidationError(f"epsilon grid must be nonempty and nonnegative: {args.epsilons!r}")
    theta0 = ipea.oracle_phase(h, tau)

    rows = []
    summaries = []
    for eps in eps_values:
        noise = probe.NoiseModel(coherent_epsilon=eps, rng_seed=args.seed)
        result = ipea.run_ipea(h, config, noise=noise)
        errors = ipea.iteration_phase_errors(result.records, theta0, args.bits)
        bits = ipea.precision_report(result.phase, theta0)
        ratio = fit_growth_ratio(errors, config.phase_error_bound)
        ratio_txt = f"{ratio:.17g}" if ratio is not None else ""
        for k, err in enumerate(errors):
            rows.append(f"{eps:.17g},{k},{err:.17g},{ratio_txt},{bits}")
        summaries.append((eps, ratio, bits))
    header = "epsilon,k,phase_error,growth_ratio,attainable_bits"
    path = _write(args.out, "noise_sweep.csv", "\n".join([header] + rows) + "\n")
    for eps, ratio, bits in summaries:
        ratio_txt = f"{ratio:.3f}" if ratio is not None else "n/a"
        print(f"epsilon = {eps:g}: growth ratio = {ratio_txt}, attainable bits = {bits}")
    print(f"sweep: {path}")
    return 0


def fit_growth_ratio(errors, error_bound: float) -> float | None:
    """Geometric-mean per-iteration growth over the pre-saturation window."""
    cut = next((i for i, e in enumerate(errors) if e >= error_bound), len(errors))
    window = [e for e in errors[:cut] if e > 1e-15]
    if len(window) < 2:
        return None
    return float((window[-1] / window[0]) ** (1.0 / (len(window) - 1)))


def cmd_spectra(args) -> int:
    h = load_source(args.hamiltonian)
    tau = resolve_tau(args.tau, h)
    config = ipea.IterationConfig(
        bits_per_iteration=args.bits,
        iterations=args.iterations,
        phase_error_bound=parse_angle(args.errbd),
        tau=tau,
    )
    noise = None
    if args.jitter is not None:
        noise = probe.NoiseModel(phase_jitter_bound=parse_angle(args.jitter), rng_seed=args.seed)
    result = ipea.run_ipea(h, config, noise=noise)

    reference = probe.synthesize_spectrum(0.0)
    traces = [("spectrum_k-1.csv", -1, reference, 0.0)]
    for rec in result.records:
        trace = probe.synthesize_spectrum(rec.measured_phase)
        extracted = probe.extract_phase_from_spectrum(trace, reference)
        traces.append((f"spectrum_k{rec.k}.csv", rec.k, trace, extracted))
    manifest = {
        f"k={k}": {"file": name, "extracted_phase": float(phase)}
        for name, k, _, phase in traces
    }
    for name, _, trace, _ in traces:
        _write(args.out, name, trace.csv_text())
    _write(args.out, "spectra_manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    print(f"wrote {len(traces)} spectra and manifest to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="molphase",
        description="Iterative phase-estimation simulator for molecular ground-state energies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--hamiltonian", default="h2", help="built-in 'h2' or JSON document path")
    common.add_argument("--tau", default="auto", help="evolution time in a.u., or 'auto'")
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--seed", type=int, default=0, help="noise RNG seed")

    iteration = argparse.ArgumentParser(add_help=False)
    iteration.add_argument("--bits", type=int, default=3, help="bits per iteration (n)")
    iteration.add_argument("--iterations", type=int, default=6, help="iteration count (k_max)")
    iteration.add_argument("--errbd", default="5deg", help="phase error bound (turns or Ndeg)")

    p = sub.add_parser("eig", parents=[common], help="exact diagonalization report")
    p.set_defaults(func=cmd_eig)

    p = sub.add_parser("ipea", parents=[common, iteration], help="iterative phase estimation")
    p.add_argument("--jitter", default=None, help="measurement jitter bound (turns or Ndeg)")
    p.set_defaults(func=cmd_ipea)

    p = sub.add_parser("asp", parents=[common], help="adiabatic preparation fidelity scan")
    p.add_argument("--steps", type=int, default=6, help="discrete steps (M+1)")
    p.add_argument("--total-time", type=float, default=None, help="single total time T (a.u.)")
    p.add_argument("--scan", default=None, help="total-time grid start:stop:step")
    p.set_defaults(func=cmd_asp)

    p = sub.add_parser("noise-sweep", parents=[common, iteration],
                       help="coherent-error growth across epsilon values")
    p.add_argument("--epsilons", default="0,1e-5,1e-4,1e-3",
                   help="comma-separated perturbation strengths (hartree)")
    p.set_defaults(func=cmd_noise_sweep)

    p = sub.add_parser("spectra", parents=[common, iteration],
                       help="synthesize per-iteration spectra plus reference")
    p.add_argument("--jitter", default=None, help="measurement jitter bound (turns or Ndeg)")
    p.set_defaults(func=cmd_spectra)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MolphaseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
