"""Command line interface.

    tightcodes [--jobs K] search "<descriptor>" [--seed S] [--attempts A] -o pts
    tightcodes certify "<descriptor>" -i pts [--epsilon 1e-9] [--backend rational|interval] -o cert
    tightcodes verify-cert cert
    tightcodes stabilizer "<descriptor>" -i pts
    tightcodes dimension "<descriptor>" -i pts [--samples 1000] [--perturb 1e-3] [--seed S]
    tightcodes bounds <space> [--n N]
    tightcodes catalog <id> [--verify]
    tightcodes gale -i pts -o pts

Descriptor grammar: a keyword followed by key=value parameters.

    hp d=<d> n=<N>              N points in HP^(d-1)
    hp2-cyclic12 m=<m>          3m points, cyclic shift symmetry
    hp2-cyclic13 m=<m>          3m + 1 points, cyclic orbits plus a fixed point
    hp2-15                      15 points in HP^2
    op2 n=<N>                   N points in OP^2
    op2-cyclic24 m=<m>, op2-cyclic25 m=<m>, op2-27
    grass m=<m> n=<n> N=<N>     N generators in G(m, n)
    grass m=<m> n=<n> k=<N>-cyclic   or   grass-cyclic m=<m> n=<n> k=<k>

Spaces for `bounds` are written RP2, CP5, HP2, OP2 or G(2,5).

Exit codes: 0 success or PROVEN, 2 FAILED verdict or verification mismatch,
3 malformed input, 4 numerical divergence. Failures print one line
`error code=<n> kind=<kind> message=<text>` on stderr.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .analysis import Space, gale_min_size, max_size, tight_alpha
from .catalog import NAMED, build_named, mub_check, read_projector_blocks, verify_exact_simplex, verify_spectrum
from .certify import DEFAULT_EPSILON, certify, read_certificate, write_certificate
from .io import PointsFile, read_points, write_points
from .solver import SolverConfig, SolverDivergence, damped_newton, estimate_dimension, find_configuration
from .stabilizer import stabilizer_report
from .systems import SpaceDescriptor, build_system, decode_solution, encode
from .verify import verify_certificate

EXIT_OK, EXIT_FAILED, EXIT_MALFORMED, EXIT_DIVERGED = 0, 2, 3, 4
_KINDS = {EXIT_FAILED: "failed", EXIT_MALFORMED: "malformed-input", EXIT_DIVERGED: "divergence"}


class CommandError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _fail(code: int, message: str) -> int:
    text = " ".join(str(message).split())
    print(f"error code={code} kind={_KINDS[code]} message={text}", file=sys.stderr)
    return code


def _descriptor(text: str) -> SpaceDescriptor:
    try:
        return SpaceDescriptor.parse(text)
    except ValueError as exc:
        raise CommandError(EXIT_MALFORMED, exc) from exc


def _load_points(path: str, desc: SpaceDescriptor | None = None) -> PointsFile:
    try:
        pf = read_points(path)
    except (OSError, ValueError) as exc:
        raise CommandError(EXIT_MALFORMED, f"{path}: {exc}") from exc
    if desc is not None and pf.descriptor != desc:
        raise CommandError(EXIT_MALFORMED, f"{path} holds {pf.space!r}, not {desc.to_text()!r}")
    return pf


def _solution_vector(cs, pf: PointsFile) -> np.ndarray:
    """Encode the stored points and re-converge, which restores variables the file does not store (eta)."""
    try:
        x = encode(cs, pf.to_configuration())
    except (ValueError, IndexError) as exc:
        raise CommandError(EXIT_MALFORMED, f"points do not fit {pf.space}: {exc}") from exc
    try:
        res = damped_newton(cs, x, SolverConfig(residual_tol=1e-13, max_iters=100, seed=pf.seed))
    except SolverDivergence as exc:
        raise CommandError(EXIT_DIVERGED, exc) from exc
    if not res.converged:
        raise CommandError(EXIT_DIVERGED, f"stored points do not re-converge (residual {res.residual_linf:.3e})")
    return res.point


def cmd_search(args) -> int:
    desc = _descriptor(args.descriptor)
    cfg = SolverConfig(seed=args.seed)
    try:
        res = find_configuration(desc, attempts=args.attempts, cfg=cfg, jobs=args.jobs)
    except SolverDivergence as exc:
        raise CommandError(EXIT_DIVERGED, exc) from exc
    print(f"OUTCOME {res.outcome}")
    print(f"SEED {res.seed}")
    print(f"RESIDUAL {res.residual_linf:.3e}")
    print(f"ITERATIONS {res.iterations}")
    print(f"RANK_DEFICIENCY {res.rank_deficiency}")
    if res.rejected:
        print(f"REJECTED {'; '.join(res.rejected)}")
    if not res.converged or res.rejected:
        raise CommandError(EXIT_DIVERGED, f"no admissible solution in {args.attempts} attempts")
    cs = build_system(desc)
    config = decode_solution(cs, res.point)
    write_points(args.output, PointsFile.from_configuration(desc.to_text(), res.seed, config))
    print(f"WROTE {args.output}")
    return EXIT_OK


def cmd_certify(args) -> int:
    desc = _descriptor(args.descriptor)
    pf = _load_points(args.input, desc)
    try:
        epsilon = Fraction(args.epsilon)
    except ValueError as exc:
        raise CommandError(EXIT_MALFORMED, f"bad epsilon {args.epsilon!r}") from exc
    if epsilon <= 0:
        raise CommandError(EXIT_MALFORMED, "epsilon must be positive")
    cs = build_system(desc)
    x = _solution_vector(cs, pf)
    try:
        cert = certify(cs, x, epsilon, args.backend)
    except ValueError as exc:
        raise CommandError(EXIT_FAILED, exc) from exc
    write_certificate(cert, args.output)
    print(f"MANIFOLD_DIM {cert.manifold_dim}")
    print(f"MARGIN {float(cert.margin):.6e}")
    for side in cert.side_failures:
        print(f"SIDE {side}")
    print(f"VERDICT {cert.verdict}")
    return EXIT_OK if cert.proven else EXIT_FAILED


def cmd_verify_cert(args) -> int:
    try:
        cert = read_certificate(args.certificate)
    except (OSError, ValueError) as exc:
        raise CommandError(EXIT_MALFORMED, f"{args.certificate}: {exc}") from exc
    try:
        rep = verify_certificate(cert)
    except ValueError as exc:
        raise CommandError(EXIT_MALFORMED, exc) from exc
    for p in rep.problems:
        print(f"PROBLEM {p}")
    print(f"VERDICT {rep.verdict}")
    return EXIT_OK if rep.ok else EXIT_FAILED


def cmd_stabilizer(args) -> int:
    desc = _descriptor(args.descriptor)
    pf = _load_points(args.input, desc)
    try:
        rep = stabilizer_report(pf.to_configuration(), desc, Fraction(args.epsilon))
    except ValueError as exc:
        raise CommandError(EXIT_MALFORMED, exc) from exc
    print(f"RANK_LOWER_BOUND {rep.rank_lower_bound}")
    print(f"THRESHOLD {float(rep.threshold):.6e}")
    print(f"STABILIZER_DIM_AT_MOST {rep.stab_dim_upper}")
    return EXIT_OK


def cmd_dimension(args) -> int:
    desc = _descriptor(args.descriptor)
    pf = _load_points(args.input, desc)
    cs = build_system(desc)
    x = _solution_vector(cs, pf)
    try:
        s, dim = estimate_dimension(cs, x, samples=args.samples, perturb=args.perturb, seed=args.seed, jobs=args.jobs)
    except RuntimeError as exc:
        raise CommandError(EXIT_DIVERGED, exc) from exc
    print(f"SEED {args.seed}")
    print("SINGULAR_VALUES " + " ".join(f"{v:.6g}" for v in s))
    if 0 < dim < s.size:
        print(f"GAP {s[dim - 1] / s[dim]:.3f}")
    print(f"DIMENSION {dim}")
    return EXIT_OK


def cmd_bounds(args) -> int:
    try:
        sp = Space.parse(args.space)
    except ValueError as exc:
        raise CommandError(EXIT_MALFORMED, exc) from exc
    print(f"SPACE {sp}")
    print(f"MAX_SIZE {max_size(sp)}")
    if not sp.is_grassmann and sp.tag != "O":
        print(f"GALE_MIN_SIZE {gale_min_size(sp)}")
    if args.n is not None:
        try:
            print(f"ALPHA {tight_alpha(sp, args.n)}")
        except ValueError as exc:
            raise CommandError(EXIT_MALFORMED, exc) from exc
    return EXIT_OK


def _read_int_matrix(path: str) -> list:
    with open(path, encoding="ascii") as fh:
        return [[int(v) for v in ln.split()] for ln in fh if ln.strip() and not ln.startswith("#")]


def _catalog_external(args) -> int:
    if args.dim is None or args.alpha is None or args.rank is None:
        raise CommandError(EXIT_MALFORMED, "external projectors need --dim, --alpha and --rank")
    try:
        with open(args.projectors, encoding="ascii") as fh:
            mats = read_projector_blocks(fh.read(), args.dim)
        alpha = Fraction(args.alpha)
    except (OSError, ValueError) as exc:
        raise CommandError(EXIT_MALFORMED, exc) from exc
    check = verify_exact_simplex(mats, alpha, args.rank)
    for f in check.failures:
        print(f"PROBLEM {f}")
    print(f"POINTS {len(mats)}")
    print(f"VERIFIED {'yes' if check else 'no'}")
    return EXIT_OK if check else EXIT_FAILED


def cmd_catalog(args) -> int:
    if args.identifier == "list":
        for name in NAMED + ("difference_set", "steiner", "external"):
            print(name)
        return EXIT_OK
    if args.identifier == "external":
        return _catalog_external(args)
    params = {}
    try:
        if args.identifier == "difference_set":
            params = {"N": args.N, "S": [int(v) for v in args.S.split(",")], "mode": args.mode or "float"}
        elif args.identifier == "steiner":
            params = {"A": _read_int_matrix(args.incidence), "H": _read_int_matrix(args.hadamard)}
        elif args.identifier == "so4_17" and args.mode:
            params = {"mode": args.mode}
        code = build_named(args.identifier, **params)
    except (OSError, ValueError, TypeError, AttributeError) as exc:
        raise CommandError(EXIT_MALFORMED, exc) from exc
    print(f"CODE {code.identifier}")
    print(f"SPACE {code.space}")
    print(f"POINTS {code.N}")
    print("SPECTRUM " + " ".join(str(v) for v in code.spectrum))
    if not args.verify:
        return EXIT_OK
    checks = [("spectrum", verify_spectrum(code))]
    if code.kind == "grassmann":
        projs = [code.projector(i) for i in range(code.N)]
        checks.append(("exact-simplex", verify_exact_simplex(projs, code.spectrum[0], code.meta["m"])))
    if code.groups:
        checks.append(("mub", mub_check(code, len(code.groups[0]))))
    ok = True
    for name, check in checks:
        for f in check.failures[:20]:
            print(f"PROBLEM {name}: {f}")
        print(f"CHECK {name} {'pass' if check else 'fail'} ({code.mode})")
        ok = ok and bool(check)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_gale(args) -> int:
    from .analysis import gale_dual

    pf = _load_points(args.input)
    config = pf.to_configuration()
    try:
        dual = gale_dual(config)
    except ValueError as exc:
        raise CommandError(EXIT_FAILED, exc) from exc
    space = SpaceDescriptor.parse(f"hp d={dual.d} n={dual.N}").to_text()
    write_points(args.output, PointsFile.from_configuration(space, pf.seed, dual))
    print(f"SPACE {space}")
    print(f"WROTE {args.output}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    grammar = __doc__[__doc__.index("Descriptor grammar"):]
    p = argparse.ArgumentParser(prog="tightcodes", description="Search for and certify tight simplices.",
                                epilog=grammar, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--jobs", type=int, default=1, help="worker processes for independent attempts or samples")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("search", help="damped Newton search from random starts")
    s.add_argument("descriptor")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--attempts", type=int, default=3)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("certify", help="write a certificate for stored points")
    s.add_argument("descriptor")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("--epsilon", default=str(DEFAULT_EPSILON))
    s.add_argument("--backend", choices=("rational", "interval"), default="rational")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("verify-cert", help="independently re-check a certificate")
    s.add_argument("certificate")
    s.set_defaults(func=cmd_verify_cert)

    s = sub.add_parser("stabilizer", help="upper bound on the stabilizer dimension")
    s.add_argument("descriptor")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("--epsilon", default=str(DEFAULT_EPSILON))
    s.set_defaults(func=cmd_stabilizer)

    s = sub.add_parser("dimension", help="estimate the local dimension of the solution set")
    s.add_argument("descriptor")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--perturb", type=float, default=1e-3)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_dimension)

    s = sub.add_parser("bounds", help="simplex size bounds and the tight inner product")
    s.add_argument("space")
    s.add_argument("--n", type=int)
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("catalog", help="build and verify explicit codes ('list' shows the names)")
    s.add_argument("identifier")
    s.add_argument("--verify", action="store_true")
    s.add_argument("--mode", choices=("float", "interval", "exact"))
    s.add_argument("--N", type=int, help="group order for difference_set")
    s.add_argument("--S", help="comma separated difference set")
    s.add_argument("--incidence", help="0/1 incidence matrix file for steiner")
    s.add_argument("--hadamard", help="Hadamard matrix file for steiner")
    s.add_argument("--projectors", help="RA projector blocks for external")
    s.add_argument("--dim", type=int)
    s.add_argument("--alpha")
    s.add_argument("--rank", type=int)
    s.set_defaults(func=cmd_catalog)

    s = sub.add_parser("gale", help="Gale dual of a tight simplex")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_gale)
    return p


def run_command(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_MALFORMED
    if args.jobs < 1:
        return _fail(EXIT_MALFORMED, "--jobs must be at least 1")
    try:
        return args.func(args)
    except CommandError as exc:
        return _fail(exc.code, exc)


def main() -> None:
    sys.exit(run_command())
