"""Command line interface.

Exit codes: 0 success, 2 input error, 3 not a state (not PSD),
4 verification failure.
"""

import argparse
import math
import sys

import numpy as np

from . import __version__
from .bipartite import BipartiteShape, as_shape, embedded_bell, maximally_entangled
from .criteria import analyze, p_label, ppt_test
from .exceptions import InvalidInputError, NotPSDError, NumericError, SepballError
from .extremal import ball_radius, npt_witness, pseudopure_bounds
from .io import (
    DECOMPOSITION_SCHEMA_VERSION,
    REPORT_SCHEMA_VERSION,
    dumps,
    read_matrix_file,
    write_matrix_file,
    write_text,
)
from .stategen import Stream, check_seed, default_seed, random_density, random_projector, random_pure
from .toeplitz import BlockToeplitz, separable_decomposition, verify_decomposition
from .validation import DEFAULT_TOL, check_p, check_tol

EXIT_OK, EXIT_INPUT, EXIT_NOT_STATE, EXIT_VERIFY = 0, 2, 3, 4
DEFAULT_BOUNDS_P = (1.0, 2.0, 3.0, math.inf)


class CommandError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "yes" if x else "no"
    if isinstance(x, (int, np.integer)):
        return str(x)
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.9g}"


def emit(args, payload, text_lines):
    if args.json:
        sys.stdout.write(dumps(payload))
    else:
        sys.stdout.write("\n".join(text_lines) + "\n")


def _resolve_shape(args, mf):
    if args.dims is not None:
        shape = BipartiteShape.parse(args.dims)
        if mf.shape is not None and mf.shape != shape:
            raise InvalidInputError(f"--dims {shape} contradicts the file's shape {mf.shape}")
    else:
        shape = mf.shape
    if mf.matrix.shape[0] != mf.matrix.shape[1]:
        raise InvalidInputError(f"matrix must be square, got {mf.matrix.shape}")
    return as_shape(shape, mf.matrix.shape[0])


def report_payload(report, digest, tol, label=None):
    payload = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "tool": "sepball",
        "version": __version__,
        "input_digest": digest,
        "tol": tol,
    }
    if label is not None:
        payload["label"] = label
    payload.update(report.to_dict())
    return payload


def report_lines(report):
    lines = [
        f"shape: {report.shape}",
        f"trace: {fmt(report.trace)}",
        f"min_eig: {fmt(report.min_eig)}",
        f"scaling_score: {fmt(report.scaling_score)}",
        f"purity: {fmt(report.purity)}",
        f"frobenius_distance: {fmt(report.frobenius_distance)}",
    ]
    for key, (dev, rad) in report.pball_margins.items():
        lines.append(f"pball_{key}: deviation {fmt(dev)} radius {fmt(rad)}")
    lines.append(f"ppt_min_eig: {fmt(report.ppt_min_eig)}")
    lines.append("passes: " + ", ".join(f"{k}={fmt(v)}" for k, v in report.passes.items()))
    lines.append(f"verdict: {report.verdict.value}")
    lines.append("triggered_by: " + (", ".join(report.triggered_by) or "-"))
    return lines


def cmd_analyze(args):
    mf = read_matrix_file(args.input)
    shape = _resolve_shape(args, mf)
    try:
        report = analyze(mf.matrix, shape, args.tol)
    except NotPSDError as exc:
        raise CommandError(f"not a state: min eigenvalue {exc.min_eig:.9g}", EXIT_NOT_STATE) from None
    emit(args, report_payload(report, mf.digest, args.tol, mf.label), report_lines(report))
    return EXIT_OK


def cmd_bounds(args):
    N = args.N
    if N < 2:
        raise InvalidInputError(f"N must be >= 2, got {N}")
    ps = [check_p(p) for p in args.p] if args.p else list(DEFAULT_BOUNDS_P)
    prof = pseudopure_bounds(N, refine=args.refine)
    radii = {p_label(p): ball_radius(N, p).radius for p in ps}
    consts = {
        "pure_scaling_threshold": prof.pure_scaling_threshold,
        "pure_ppt_threshold_bell": prof.pure_ppt_threshold_bell,
        "pseudopure_lower": prof.pseudopure_lower,
        "pseudopure_upper": prof.pseudopure_upper,
        "projector_negativity_max": prof.projector_negativity_max,
        "prior_pseudopure_lower": prof.prior_lower,
        "prior_pseudopure_upper": prof.prior_upper,
    }
    payload = {"N": N, "ball_radius": radii, **consts}
    lines = [f"N = {N}", "p         B(N,p)"]
    lines += [f"{k:<9} {fmt(v)}" for k, v in radii.items()]
    lines += [f"{k}: {fmt(v)}" for k, v in consts.items()]
    emit(args, payload, lines)
    return EXIT_OK


def cmd_witness(args):
    N, p, a, tol = args.N, check_p(args.p), args.a, args.tol
    if N < 2:
        raise InvalidInputError(f"N must be >= 2, got {N}")
    if not (math.isfinite(a) and a > 0):
        raise InvalidInputError(f"a must be positive, got {a}")
    radius = ball_radius(N, p).radius
    A = np.eye(N * N) + npt_witness(N, p, a)
    shape = BipartiteShape(N, N)
    pt_min, is_ppt = ppt_test(A, shape, tol)
    if abs(a - radius) <= tol * max(1.0, radius):
        status = "boundary"
    elif a < radius:
        status = "inside-separable-ball"
    else:
        status = "npt"
    # The construction must agree with a direct partial-transpose check.
    if (status == "npt") == is_ppt:
        raise CommandError(
            f"witness verification failed: a={a:.9g}, B={radius:.9g}, PT min eigenvalue {pt_min:.9g}",
            EXIT_VERIFY,
        )
    label = f"npt-witness N={N} p={p_label(p)} a={a!r}"
    write_matrix_file(args.out, A, shape, label)
    payload = {
        "N": N,
        "p": p_label(p),
        "a": a,
        "ball_radius": radius,
        "status": status,
        "ppt_min_eig": pt_min,
        "is_ppt": is_ppt,
        "out": args.out,
    }
    lines = [
        f"wrote {args.out}",
        f"a = {fmt(a)}, B(N,p) = {fmt(radius)}: {status}",
        f"ppt_min_eig: {fmt(pt_min)}",
    ]
    emit(args, payload, lines)
    return EXIT_OK


def cmd_decompose(args):
    mf = read_matrix_file(args.input)
    M = args.blocks
    if M < 1:
        raise InvalidInputError(f"--blocks must be >= 1, got {M}")
    if args.full:
        T = BlockToeplitz.from_matrix(mf.matrix, M, args.tol)
    else:
        T = BlockToeplitz.from_block_row(mf.matrix, M)
    if args.block_size is not None and args.block_size != T.block_dim:
        raise InvalidInputError(f"--block-size {args.block_size} but blocks are {T.block_dim}x{T.block_dim}")
    try:
        dec = separable_decomposition(T, args.tol)
    except NotPSDError as exc:
        raise CommandError(f"not PSD: min eigenvalue {exc.min_eig:.9g}", EXIT_NOT_STATE) from None
    except NumericError as exc:
        raise CommandError(str(exc), EXIT_VERIFY) from None
    target = T.assemble()
    residual = verify_decomposition(target, dec)
    bound = args.tol * max(1.0, float(np.linalg.norm(target)))
    doc = {
        "schema_version": DECOMPOSITION_SCHEMA_VERSION,
        "input_digest": mf.digest,
        **dec.to_dict(),
        "residual": residual,
        "tol": args.tol,
    }
    write_text(args.out, dumps(doc))
    payload = {"out": args.out, "terms": len(dec), "residual": residual, "tol": args.tol}
    emit(args, payload, [f"wrote {args.out}", f"terms: {len(dec)}", f"residual: {fmt(residual)}"])
    if residual > bound:
        sys.stderr.write(f"error: residual {residual:.3g} exceeds tolerance {bound:.3g}\n")
        return EXIT_VERIFY
    return EXIT_OK


def _sweep_state(N, kind, seed):
    if kind == "bell":
        return embedded_bell(N)
    if kind == "maxent":
        return maximally_entangled(N)
    return random_pure(BipartiteShape(N, N), seed)


def transition(grid, flags):
    """Last passing and first failing grid point, plus whether passes precede all failures."""
    flags = np.asarray(flags, dtype=bool)
    fails = np.flatnonzero(~flags)
    passes = np.flatnonzero(flags)
    first_fail = int(fails[0]) if fails.size else None
    last_pass = int(passes[-1]) if passes.size else None
    monotone = first_fail is None or last_pass is None or last_pass < first_fail
    return {
        "last_pass": None if last_pass is None else float(grid[last_pass]),
        "first_fail": None if first_fail is None else float(grid[first_fail]),
        "monotone": bool(monotone),
    }


SWEEP_CRITERIA = ("scaling", "purity", "frobenius_ball", "pball_1", "pball_2", "pball_inf", "ppt")


def sweep_pseudopure(N, kind="bell", steps=11, seed=0, eps_max=1.0, tol=DEFAULT_TOL):
    """Evaluate ``(1 - eps) I/d + eps rho`` on ``linspace(0, eps_max, steps)``.

    Each mixture is scaled by ``d`` before analysis so the p-ball tests see
    ``I + Delta`` with a trace-free deviation.
    """
    if N < 2:
        raise InvalidInputError(f"N must be >= 2, got {N}")
    if steps < 1:
        raise InvalidInputError(f"steps must be >= 1, got {steps}")
    if not (0 <= eps_max <= 1):
        raise InvalidInputError(f"eps-max must lie in [0, 1], got {eps_max}")
    psi = _sweep_state(N, kind, seed)
    rho = psi.density_matrix()
    d = N * N
    shape = BipartiteShape(N, N)
    grid = np.linspace(0.0, eps_max, steps)
    rows = []
    for eps in grid:
        sigma = (1 - eps) * np.eye(d) / d + eps * rho
        rep = analyze(d * sigma, shape, tol)
        row = {"eps": float(eps)}
        row.update({k: bool(rep.passes[k]) for k in SWEEP_CRITERIA})
        row["ppt_min_eig"] = rep.ppt_min_eig / d
        row["verdict"] = rep.verdict.value
        rows.append(row)
    transitions = {k: transition(grid, [r[k] for r in rows]) for k in SWEEP_CRITERIA}
    prof = pseudopure_bounds(N)
    return {
        "N": N,
        "state": kind,
        "steps": steps,
        "eps_max": eps_max,
        "pseudopure_lower": prof.pseudopure_lower,
        "pseudopure_upper": prof.pseudopure_upper,
        "transitions": transitions,
        "rows": rows,
    }


def cmd_sweep(args):
    seed = args.seed if args.seed is not None else default_seed()
    result = sweep_pseudopure(args.N, args.state, args.steps, seed, args.eps_max, args.tol)
    if args.summary:
        result = {k: v for k, v in result.items() if k != "rows"}
    lines = [
        f"N = {result['N']}, state = {result['state']}, steps = {result['steps']}",
        f"guaranteed separable for eps <= {fmt(result['pseudopure_lower'])}; "
        f"entangled mixture exists for eps > {fmt(result['pseudopure_upper'])}",
    ]
    if "rows" in result:
        lines.append("eps          " + " ".join(f"{k:>14}" for k in SWEEP_CRITERIA) + "  verdict")
        for r in result["rows"]:
            cells = " ".join(f"{('pass' if r[k] else 'fail'):>14}" for k in SWEEP_CRITERIA)
            lines.append(f"{fmt(r['eps']):<12} {cells}  {r['verdict']}")
    lines.append("transitions (last pass / first fail):")
    for k, t in result["transitions"].items():
        lp = "-" if t["last_pass"] is None else fmt(t["last_pass"])
        ff = "-" if t["first_fail"] is None else fmt(t["first_fail"])
        lines.append(f"  {k}: {lp} / {ff}" + ("" if t["monotone"] else " (not monotone)"))
    emit(args, result, lines)
    return EXIT_OK


def cmd_random(args):
    seed = args.seed if args.seed is not None else default_seed()
    stream = Stream(check_seed(seed))
    shape = BipartiteShape.parse(args.dims)
    d = shape.dim
    if args.kind == "pure":
        A = random_pure(shape, stream).density_matrix()
    elif args.kind == "mixed":
        A = random_density(d, args.rank if args.rank is not None else d, stream)
    else:
        if args.m is None:
            raise InvalidInputError("--m is required for kind=projector")
        A = random_projector(d, args.m, stream)
    label = f"random {args.kind} {shape} seed={seed}"
    write_matrix_file(args.out, A, shape, label)
    emit(args, {"out": args.out, "kind": args.kind, "shape": [*shape], "seed": seed}, [f"wrote {args.out}"])
    return EXIT_OK


def _seed_arg(text):
    try:
        return check_seed(int(text, 0))
    except (ValueError, SepballError):
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None


def _tol_arg(text):
    try:
        return check_tol(float(text))
    except (ValueError, SepballError):
        raise argparse.ArgumentTypeError(f"invalid tolerance {text!r}") from None


def _p_arg(text):
    try:
        return check_p(text)
    except SepballError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_global_flags(parser, suppress):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--tol", type=_tol_arg, default=default(DEFAULT_TOL),
                        help="relative tolerance for every decision (default 1e-9)")
    parser.add_argument("--json", action="store_true", default=default(False), help="emit JSON")
    parser.add_argument("--seed", type=_seed_arg, default=default(None),
                        help="random seed (default: $SEPBALL_SEED, else 0)")


def build_parser():
    parser = argparse.ArgumentParser(prog="sepball", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="run every separability criterion on a matrix file")
    p.add_argument("input")
    p.add_argument("--dims", help="local dimensions MxN (default: file shape or even split)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("bounds", help="print ball radii and threshold constants")
    p.add_argument("--N", "-N", type=int, required=True)
    p.add_argument("--p", type=_p_arg, action="append", help="exponent (repeatable; 'inf' allowed)")
    p.add_argument("--refine", action="store_true", help="solve the pseudopure purity condition numerically")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("witness", help="write I + Delta for the swap-direction witness")
    p.add_argument("--N", "-N", type=int, required=True)
    p.add_argument("--p", type=_p_arg, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("decompose", help="separable decomposition of a PSD block Toeplitz matrix")
    p.add_argument("input", help="first block row [R_0 ... R_{M-1}] (N x MN), or full matrix with --full")
    p.add_argument("--blocks", type=int, required=True, help="number of block rows M")
    p.add_argument("--block-size", type=int, help="block dimension N (checked if given)")
    p.add_argument("--full", action="store_true", help="input is the full MN x MN matrix")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("sweep-pseudopure", help="criterion outcomes along (1-eps) I/d + eps rho")
    p.add_argument("--N", "-N", type=int, required=True)
    p.add_argument("--state", choices=("bell", "maxent", "random"), default="bell")
    p.add_argument("--steps", type=int, default=11)
    p.add_argument("--eps-max", type=float, default=1.0)
    p.add_argument("--summary", action="store_true", help="omit the per-point rows")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("random", help="write a random state or projector")
    p.add_argument("--kind", choices=("pure", "mixed", "projector"), required=True)
    p.add_argument("--dims", required=True, help="local dimensions MxN")
    p.add_argument("--rank", type=int)
    p.add_argument("--m", type=int, help="projector rank")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_random)

    for subparser in sub.choices.values():
        _add_global_flags(subparser, suppress=True)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except CommandError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code
    except NotPSDError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NOT_STATE
    except NumericError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_VERIFY
    except (SepballError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
