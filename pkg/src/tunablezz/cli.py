"""Command-line front end.

Subcommands: zeta-sweep, find-zero-zeta, rb, iswap-fidelity, ptm,
spectrum, convergence, figure.  All delimited output goes through the
metadata-stamped CSV writer so reruns are byte-identical; the figure
recipes additionally render PNG plots next to their CSVs.
"""

from __future__ import annotations

import argparse
import math
import shlex
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .channels import DEFAULT_GATE_TIME, DEFAULT_LENGTHS, DEFAULT_TRIALS, Mode, RBMode, run_rb
from .coupler import (
    default_operating_point,
    find_zero_zeta,
    flux_of_omega_minus,
    zeta_slope,
)
from .csvio import metadata_block, write_csv
from .devices import device_source_hash, resolve_device
from .errors import DeviceFileError
from .figures import DEFAULT_SEED, RECIPE_NAMES, run_figure_recipe, zeta_sweep_rows
from .hilbert import TWO_PI, HilbertSpace
from .perturbation import iswap_derivative_ratio
from .spectrum import (
    build_hamiltonian,
    convergence_check,
    diagonalize,
    label_states,
    zeta_exact_details,
)
from .tomography import (
    DEFAULT_ISWAP_TIME,
    PAULI_LABELS_2Q,
    SQRT_ISWAP,
    ThermalGateModel,
    decohered_sqrt_iswap_channel,
    gate_fidelity,
    ptm_from_channel,
    ptm_of_unitary,
    thermal_iswap_fidelity,
    thermal_population,
)

GHZ = TWO_PI * 1e9
MHZ = TWO_PI * 1e6


def _dims(text: str) -> tuple[int, ...]:
    dims = tuple(int(x) for x in text.split(","))
    if len(dims) != 4:
        raise argparse.ArgumentTypeError("dims must be four comma-separated integers")
    return dims


def _lengths(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(","))


def _command_string(argv: list[str]) -> str:
    return "tunablezz " + " ".join(shlex.quote(a) for a in argv)


def _device_meta(args, spec: str):
    params, source = resolve_device(spec, getattr(args, "device_dir", None))
    try:
        sha = device_source_hash(spec if source.startswith("builtin:") else source)
    except OSError:
        sha = None
    return params, source, sha


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tunablezz",
        description=(
            "Simulator for two-qubit tunable-coupler circuits: static ZZ "
            "crosstalk, zero-crosstalk operating points, randomized "
            "benchmarking under crosstalk, and parametric half-swap fidelity."
        ),
    )
    parser.add_argument("--version", action="version", version=f"tunablezz {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help="seed echoed in output metadata (default %(default)s)")
    common.add_argument("--threads", type=int, default=1,
                        help="worker threads for grid sweeps (default 1)")
    common.add_argument("--device-dir", default=None,
                        help="directory searched for <name>.json device files "
                             "(default $TUNABLEZZ_DEVICE_DIR)")

    p = sub.add_parser("zeta-sweep", parents=[common],
                       help="sweep the ZZ rate versus coupler frequency")
    p.add_argument("--device", required=True)
    p.add_argument("--method", choices=["exact", "pert"], default="exact")
    p.add_argument("--from-ghz", type=float, required=True,
                   help="sweep start, as (omega_minus - omega_1)/2pi in GHz")
    p.add_argument("--to-ghz", type=float, required=True)
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--csv", "--out", dest="csv", required=True)
    p.add_argument("--dims", type=_dims, default=None,
                   help="Fock truncation q1,q2,bus,coupler (default 4,4,3,4)")
    p.set_defaults(handler=cmd_zeta_sweep)

    p = sub.add_parser("find-zero-zeta", parents=[common],
                       help="locate zero-crosstalk coupler biases")
    p.add_argument("--device", required=True)
    p.add_argument("--method", choices=["exact", "pert"], default="exact")
    p.add_argument("--from-ghz", type=float, default=None,
                   help="optional window start, (omega_minus - omega_1)/2pi GHz")
    p.add_argument("--to-ghz", type=float, default=None)
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--csv", "--out", dest="csv", default=None)
    p.set_defaults(handler=cmd_find_zero_zeta)

    p = sub.add_parser("rb", parents=[common],
                       help="randomized benchmarking under ZZ and decoherence")
    p.add_argument("--device", required=True)
    p.add_argument("--zeta-mhz", type=float, default=0.0)
    p.add_argument("--mode", choices=[m.value for m in RBMode], default="simultaneous")
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument("--lengths", type=_lengths, default=DEFAULT_LENGTHS)
    p.add_argument("--gate-ns", type=float, default=DEFAULT_GATE_TIME * 1e9)
    p.add_argument("--csv", "--out", dest="csv", required=True)
    p.add_argument("--png", default=None, help="optionally render the decay curves")
    p.set_defaults(handler=cmd_rb)

    p = sub.add_parser("iswap-fidelity", parents=[common],
                       help="half-swap fidelity versus coupler temperature")
    p.add_argument("--device", required=True)
    p.add_argument("--temp-mk-from", type=float, default=0.0)
    p.add_argument("--temp-mk-to", type=float, default=200.0)
    p.add_argument("--points", type=int, default=21)
    p.add_argument("--gate-ns", type=float, default=DEFAULT_ISWAP_TIME * 1e9)
    p.add_argument("--alpha-exponent", default="auto",
                   help="fractional-gate exponent for an excited coupler; "
                        "'auto' derives it from the interference ratio at the "
                        "default zero-crosstalk bias")
    p.add_argument("--csv", "--out", dest="csv", required=True)
    p.add_argument("--png", default=None)
    p.set_defaults(handler=cmd_iswap_fidelity)

    p = sub.add_parser("ptm", parents=[common],
                       help="Pauli transfer matrix of the half-swap channel")
    p.add_argument("--channel", choices=["ideal", "decohered"], required=True)
    p.add_argument("--device", default=None,
                   help="required for the decohered channel")
    p.add_argument("--gate-ns", type=float, default=DEFAULT_ISWAP_TIME * 1e9)
    p.add_argument("--csv", "--out", dest="csv", required=True)
    p.set_defaults(handler=cmd_ptm)

    p = sub.add_parser("spectrum", parents=[common],
                       help="labeled dressed levels at one coupler bias")
    p.add_argument("--device", required=True)
    p.add_argument("--detuning-ghz", type=float, required=True,
                   help="(omega_minus - omega_1)/2pi in GHz")
    p.add_argument("--levels", type=int, default=12)
    p.add_argument("--dims", type=_dims, default=None)
    p.add_argument("--csv", "--out", dest="csv", default=None)
    p.set_defaults(handler=cmd_spectrum)

    p = sub.add_parser("convergence", parents=[common],
                       help="ZZ rate versus Fock truncation")
    p.add_argument("--device", required=True)
    p.add_argument("--detuning-ghz", type=float, required=True)
    p.add_argument("--dims-list", default="3,3,2,3;4,4,3,4;5,5,3,5",
                   help="semicolon-separated truncations (default %(default)s)")
    p.add_argument("--csv", "--out", dest="csv", default=None)
    p.set_defaults(handler=cmd_convergence)

    p = sub.add_parser("figure", parents=[common],
                       help="reproduce a reference figure: CSV + PNG + summary")
    p.add_argument("name", choices=RECIPE_NAMES)
    p.add_argument("--outdir", required=True)
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(handler=cmd_figure)

    return parser


def cmd_zeta_sweep(args, command: str) -> int:
    params, source, sha = _device_meta(args, args.device)
    lo = params.omega1 + args.from_ghz * GHZ
    hi = params.omega1 + args.to_ghz * GHZ
    space = HilbertSpace.default(args.dims) if args.dims else None
    method = "perturbative" if args.method == "pert" else "exact"
    rows = zeta_sweep_rows(params, lo, hi, args.points, method,
                           space=space, threads=args.threads)
    csv_rows = [
        ((w - params.omega1) / GHZ, w / GHZ, z / MHZ, overlap)
        for (w, z, overlap) in rows
    ]
    meta = metadata_block(__version__, command, device=source, device_sha256=sha,
                          seed=args.seed, extra=[f"method: {method}"])
    write_csv(args.csv, ["detuning_ghz", "omega_minus_ghz", "zeta_mhz", "min_overlap"],
              csv_rows, meta)
    print(f"wrote {args.csv} ({len(csv_rows)} points, method {method})")
    return 0


def cmd_find_zero_zeta(args, command: str) -> int:
    params, source, sha = _device_meta(args, args.device)
    method = "perturbative" if args.method == "pert" else "exact"
    interval = None
    if args.from_ghz is not None and args.to_ghz is not None:
        interval = (params.omega1 + args.from_ghz * GHZ, params.omega1 + args.to_ghz * GHZ)
    roots = find_zero_zeta(params, method, interval, grid_points=args.points)
    print(f"{params.name}: {len(roots)} zero-crosstalk point(s), method {method}")
    if not roots:
        return 0
    default = default_operating_point(params, roots)
    rows = []
    for root in roots:
        slope = zeta_slope(params, root.omega_minus, method)
        marker = "  <- default operating point" if root is default else ""
        print(
            f"  detuning {(root.omega_minus - params.omega1) / GHZ:+.4f} GHz | "
            f"omega_minus {root.omega_minus / GHZ:.4f} GHz | "
            f"flux {root.phi:.4f} Phi0 | residual {abs(root.zeta) / TWO_PI:.1f} Hz | "
            f"|dzeta/domega| {abs(slope):.2e}{marker}"
        )
        rows.append(
            (
                (root.omega_minus - params.omega1) / GHZ,
                root.omega_minus / GHZ,
                root.phi,
                root.zeta / TWO_PI,
                abs(slope),
                "default" if root is default else "",
            )
        )
    if args.csv:
        meta = metadata_block(__version__, command, device=source, device_sha256=sha,
                              seed=args.seed, extra=[f"method: {method}"])
        write_csv(args.csv,
                  ["detuning_ghz", "omega_minus_ghz", "flux_phi0", "zeta_hz",
                   "abs_slope", "role"],
                  rows, meta)
        print(f"wrote {args.csv}")
    return 0


def cmd_rb(args, command: str) -> int:
    params, source, sha = _device_meta(args, args.device)
    result = run_rb(
        RBMode(args.mode),
        params,
        args.zeta_mhz * MHZ,
        lengths=args.lengths,
        trials=args.trials,
        seed=args.seed,
        gate_time=args.gate_ns * 1e-9,
    )
    active = result.mode.active_qubits
    rows = []
    for i, m in enumerate(result.lengths):
        p1 = result.mean_p0[Mode.Q1][i] if Mode.Q1 in active else math.nan
        p2 = result.mean_p0[Mode.Q2][i] if Mode.Q2 in active else math.nan
        sem = max(result.sem_p0[q][i] for q in active)
        rows.append((m, p1, p2, sem))
    fid_lines = [
        f"fidelity_{q.value}: {result.fidelity[q]:.6f}" for q in active
    ]
    meta = metadata_block(
        __version__, command, device=source, device_sha256=sha, seed=args.seed,
        extra=[f"mode: {result.mode.value}", f"zeta_mhz: {args.zeta_mhz:.6g}",
               f"gate_ns: {args.gate_ns:.6g}", f"trials: {result.trials}",
               f"pulses_per_clifford: {result.pulses_per_clifford:.6g}"] + fid_lines,
    )
    write_csv(args.csv, ["m", "mean_p0_q1", "mean_p0_q2", "sem"], rows, meta)
    for q in active:
        print(f"{result.mode.value} primary-pulse fidelity {q.value}: "
              f"{result.fidelity[q]:.6f}")
    if args.png:
        from . import plots

        plots.render_rb_decay(args.png, [{
            "label": f"{result.mode.value}, zeta/2pi = {args.zeta_mhz:.2f} MHz",
            "lengths": result.lengths,
            "means": {q.value: result.mean_p0[q] for q in active},
            "fits": {q.value: result.fit[q] for q in active},
        }])
        print(f"wrote {args.png}")
    print(f"wrote {args.csv}")
    return 0


def cmd_iswap_fidelity(args, command: str) -> int:
    params, source, sha = _device_meta(args, args.device)
    extra = [f"gate_ns: {args.gate_ns:.6g}"]
    roots = find_zero_zeta(params, "exact")
    if not roots:
        print("no zero-crosstalk bias found for this device", file=sys.stderr)
        return 1
    bias = default_operating_point(params, roots).omega_minus
    extra.append(f"bias_omega_minus_ghz: {bias / GHZ:.6f}")
    if args.alpha_exponent == "auto":
        alpha = iswap_derivative_ratio(params, bias)
        extra.append(f"alpha_exponent: {alpha:.6f} (auto)")
    else:
        alpha = float(args.alpha_exponent)
        extra.append(f"alpha_exponent: {alpha:.6f}")
    temps = np.linspace(args.temp_mk_from, args.temp_mk_to, args.points)
    rows = []
    for t_mk in temps:
        p = thermal_population(bias, t_mk * 1e-3)
        fid = thermal_iswap_fidelity(
            params,
            ThermalGateModel(p=p, alpha_exponent=alpha, gate_time=args.gate_ns * 1e-9),
        )
        rows.append((t_mk, p, fid))
    meta = metadata_block(__version__, command, device=source, device_sha256=sha,
                          seed=args.seed, extra=extra)
    write_csv(args.csv, ["temp_mk", "thermal_population", "fidelity"], rows, meta)
    print(f"wrote {args.csv} (bias {bias / GHZ:.4f} GHz, exponent {alpha:.3f})")
    if args.png:
        from . import plots

        plots.render_thermal_curves(args.png, [r[0] for r in rows], [{
            "title": f"{params.name} half-swap fidelity",
            "fidelity": [r[2] for r in rows],
            "fidelity_equal": [r[2] for r in rows],
        }])
        print(f"wrote {args.png}")
    return 0


def cmd_ptm(args, command: str) -> int:
    if args.channel == "ideal":
        ptm = ptm_of_unitary(SQRT_ISWAP)
        source, sha = "none", None
        extra = ["channel: ideal half-swap unitary"]
    else:
        if not args.device:
            print("--device is required for the decohered channel", file=sys.stderr)
            return 2
        params, source, sha = _device_meta(args, args.device)
        ptm = ptm_from_channel(
            decohered_sqrt_iswap_channel(params, gate_time=args.gate_ns * 1e-9)
        )
        fg = gate_fidelity(ptm, ptm_of_unitary(SQRT_ISWAP), 2)
        extra = [f"channel: decohered half-swap ({args.gate_ns:.6g} ns)",
                 f"gate_fidelity_vs_ideal: {fg:.6f}"]
        print(f"gate fidelity vs ideal: {fg:.6f}")
    rows = [(label, *ptm.r[i]) for i, label in enumerate(PAULI_LABELS_2Q)]
    meta = metadata_block(__version__, command, device=source, device_sha256=sha,
                          seed=args.seed, extra=extra)
    write_csv(args.csv, ["pauli_out"] + list(PAULI_LABELS_2Q), rows, meta)
    print(f"wrote {args.csv}")
    return 0


def cmd_spectrum(args, command: str) -> int:
    params, source, sha = _device_meta(args, args.device)
    omega_minus = params.omega1 + args.detuning_ghz * GHZ
    space = HilbertSpace.default(args.dims) if args.dims else HilbertSpace.default()
    labeled = label_states(*diagonalize(build_hamiltonian(params, space, omega_minus)), space)
    order = np.argsort(labeled.eigenvalues)
    ground = tuple(0 for _ in space.modes)
    rows = []
    for rank, idx in enumerate(order[: args.levels]):
        bare = next(occ for occ, i in labeled.labels.items() if i == idx)
        freq = (labeled.eigenvalues[idx] - labeled.eigenvalue(ground)) / GHZ
        rows.append((rank, freq, "".join(str(n) for n in bare), labeled.overlaps[bare]))
        print(f"  level {rank:3d}: {freq:9.5f} GHz  |{rows[-1][2]}>  "
              f"overlap {rows[-1][3]:.4f}")
    details = zeta_exact_details(params, omega_minus, space)
    print(f"zeta/2pi = {details.zeta / MHZ:.6f} MHz "
          f"(min computational overlap {details.min_overlap:.4f})")
    if args.csv:
        meta = metadata_block(__version__, command, device=source, device_sha256=sha,
                              seed=args.seed,
                              extra=[f"detuning_ghz: {args.detuning_ghz:.6g}",
                                     f"zeta_mhz: {details.zeta / MHZ:.8g}"])
        write_csv(args.csv, ["level", "frequency_ghz", "bare_label", "overlap"],
                  rows, meta)
        print(f"wrote {args.csv}")
    return 0


def cmd_convergence(args, command: str) -> int:
    params, source, sha = _device_meta(args, args.device)
    omega_minus = params.omega1 + args.detuning_ghz * GHZ
    dims_list = [_dims(part) for part in args.dims_list.split(";")]
    table = convergence_check(params, omega_minus, dims_list)
    rows = []
    for row in table.rows:
        rows.append(("x".join(map(str, row.dims)), row.zeta / MHZ, row.deviation / MHZ))
        print(f"  dims {rows[-1][0]:>10s}: zeta {rows[-1][1]:+.6f} MHz "
              f"(|delta| vs {('x'.join(map(str, table.reference_dims)))}: "
              f"{rows[-1][2]:.6f} MHz)")
    if args.csv:
        meta = metadata_block(__version__, command, device=source, device_sha256=sha,
                              seed=args.seed,
                              extra=[f"detuning_ghz: {args.detuning_ghz:.6g}"])
        write_csv(args.csv, ["dims", "zeta_mhz", "abs_deviation_mhz"], rows, meta)
        print(f"wrote {args.csv}")
    return 0


def cmd_figure(args, command: str) -> int:
    result = run_figure_recipe(
        args.name,
        args.outdir,
        seed=args.seed,
        plot=not args.no_plot,
        threads=args.threads,
        command=command,
    )
    print("\n".join(result.summary_lines()))
    return 0 if result.passed else 1


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    command = _command_string(argv)
    try:
        return args.handler(args, command)
    except DeviceFileError as err:
        print(f"device error: {err}", file=sys.stderr)
        return 2
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
