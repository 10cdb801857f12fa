"""Command-line interface.

Exit status: 0 success, 1 I/O or parse failure, 2 domain error,
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import brachistochrone as br
from . import evolution as ev
from . import io
from . import pseudoherm as ph
from . import statespace as ss
from .errors import DomainError, PshError
from .verify import run_suites

EXIT_OK, EXIT_IO, EXIT_DOMAIN, EXIT_VERIFY = 0, 1, 2, 3


def _fmt_spectrum(values) -> str:
    return "[" + ", ".join(f"{v:.12g}" for v in np.real(values)) + "]"


def _sibling(path: Path, suffix: str) -> Path:
    return path.with_name(f"{path.stem}.{suffix}{path.suffix or '.json'}")


def _load_metric(path, dim: int) -> ph.MetricOperator:
    if path is None:
        return ph.MetricOperator.identity(dim)
    metric = ph.MetricOperator.from_matrix(io.read_matrix(path))
    metric.check_dim(dim)
    return metric


def cmd_metric(args) -> int:
    h = ph.Hamiltonian(io.read_matrix(args.input))
    eta = ph.build_metric_operator(h)
    out = Path(args.output)
    io.write_matrix(out, eta.eta, "eta")
    io.write_matrix(_sibling(out, "sqrt"), eta.eta_sqrt, "eta^1/2")
    io.write_matrix(_sibling(out, "inv_sqrt"), eta.eta_inv_sqrt, "eta^-1/2")
    print(f"spectrum: {_fmt_spectrum(h.energies)}")
    print(f"pseudo-Hermiticity residual: {eta.pseudo_hermiticity_residual(h):.3e}")
    return EXIT_OK


def cmd_hermitize(args) -> int:
    h = ph.Hamiltonian(io.read_matrix(args.input))
    eta = _load_metric(args.metric, h.dim) if args.metric else ph.build_metric_operator(h)
    herm = ph.hermitian_counterpart(h, eta)
    io.write_matrix(args.output, herm, "h")
    res = np.linalg.norm(herm - herm.conj().T) / max(np.linalg.norm(herm), 1e-300)
    spec_h = np.linalg.eigvalsh(0.5 * (herm + herm.conj().T))
    print(f"spectrum H: {_fmt_spectrum(h.energies)}")
    print(f"spectrum h: {_fmt_spectrum(spec_h)}")
    print(f"isospectrality deviation: {np.max(np.abs(spec_h - h.energies)):.3e}")
    print(f"Hermiticity residual: {res:.3e}")
    return EXIT_OK


def cmd_geodesic(args) -> int:
    psi1, psi2 = io.read_vector(args.state1), io.read_vector(args.state2)
    eta = _load_metric(args.metric, psi1.shape[0])
    s1, s2 = ss.project(psi1, eta), ss.project(psi2, eta)
    print(f"distance: {ss.geodesic_distance(s1, s2):.12g}")
    print(f"antipodal: {str(ss.is_antipodal(s1, s2)).lower()}")
    return EXIT_OK


def cmd_evolve(args) -> int:
    h = ph.Hamiltonian(io.read_matrix(args.hamiltonian))
    eta = _load_metric(args.metric, h.dim) if args.metric else ph.build_metric_operator(h)
    res = eta.pseudo_hermiticity_residual(h)
    if res > ph.PSEUDO_HERMITICITY_TOL:
        raise ph.MetricMismatch(f"metric does not fit the Hamiltonian (residual {res:.3g})")
    psi0 = io.read_vector(args.psi0)
    steps = args.steps
    if steps is None:
        spread = h.spread if h.spread > 0 else 1.0
        steps = max(2, math.ceil(1000 * args.t_final * spread / (math.pi * args.hbar)))
    traj = ev.path_length(h, eta, psi0, args.t_final, steps, args.hbar)
    mirror = ev.mirror_trajectory(traj)
    if args.out:
        io.write_trajectory(args.out, traj)
    diff = abs(traj.path_length - mirror.path_length)
    print(f"steps: {steps}")
    print(f"path length: {traj.path_length:.12g}")
    print(f"mirror path length: {mirror.path_length:.12g}")
    print(f"difference: {diff:.3e}")
    return EXIT_OK


def _parse_eta_params(text: str) -> ss.TwoLevelMetricParams:
    try:
        a, b1, b2, c = (float(x) for x in text.split(","))
    except ValueError as exc:
        raise io.FormatError(f"--eta-params expects a,b1,b2,c; got {text!r}") from exc
    return ss.TwoLevelMetricParams(a, b1, b2, c)


def cmd_brach(args) -> int:
    if args.metric:
        m = ss.TwoLevelMetricParams.from_matrix(io.read_matrix(args.metric))
    else:
        m = _parse_eta_params(args.eta_params)
    if not args.gap > 0 or not args.hbar > 0:
        raise DomainError("--gap and --hbar must be positive")
    prob = br.BrachistochroneProblem.antipodal(m, args.gap, args.hbar)
    bound = br.min_time_bound(prob)
    sol = br.optimal_hamiltonian(prob)
    report = br.sweep_hamiltonians(prob, args.samples, args.seed, workers=args.workers)
    print(f"metric: a={m.a:g} b1={m.b1:g} b2={m.b2:g} c={m.c:g} (d={m.d:g})")
    print(f"psi_F: {_fmt_complex(prob.final.vector)}")
    print(f"bound: {bound:.12g}")
    print(f"hbar*pi/gap: {math.pi * args.hbar / args.gap:.12g}")
    print("optimal H:")
    for row in sol.hamiltonian.matrix:
        print("  " + "  ".join(f"{z.real:+.9f}{z.imag:+.9f}j" for z in row))
    print(f"achieved travel time: {sol.travel_time:.12g}")
    print(f"achieves bound: {str(sol.achieves_bound).lower()}")
    print(f"sweep: samples={report.samples} rejected={report.rejected} "
          f"min={report.min:.12g} mean={report.mean:.12g}")
    print(f"violations: {report.violations}")
    if args.out:
        doc = {
            "params": {"a": m.a, "b1": m.b1, "b2": m.b2, "c": m.c},
            "gap": args.gap,
            "hbar": args.hbar,
            "bound": bound,
            "travel_time": sol.travel_time,
            "achieves_bound": sol.achieves_bound,
            "optimal_hamiltonian": io.matrix_to_doc(sol.hamiltonian.matrix, "H"),
            "sweep": report.to_dict(),
        }
        Path(args.out).write_text(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def _fmt_complex(v) -> str:
    return "(" + ", ".join(f"{z.real:.9g}{z.imag:+.9g}j" for z in v) + ")"


def cmd_verify(args) -> int:
    results = run_suites(args.seed, args.cases, args.dim_max, inject_fault=args.inject_fault)
    if args.cases == 0:
        print("no cases requested")
    for r in results:
        print(r.line())
    ok = all(r.passed for r in results)
    print("all suites passed" if ok else "verification FAILED")
    return EXIT_OK if ok else EXIT_VERIFY


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage errors are parse failures: exit 1, not argparse's default 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_IO, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="psh", description="Pseudo-Hermitian quantum mechanics toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("metric", help="build the metric operator of a Hamiltonian")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=cmd_metric)

    p = sub.add_parser("hermitize", help="equivalent Hermitian Hamiltonian")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--metric")
    p.set_defaults(func=cmd_hermitize)

    p = sub.add_parser("geodesic", help="distance between two states")
    p.add_argument("state1")
    p.add_argument("state2")
    p.add_argument("--metric")
    p.set_defaults(func=cmd_geodesic)

    p = sub.add_parser("evolve", help="trajectory and path length of an evolving state")
    p.add_argument("hamiltonian")
    p.add_argument("psi0")
    p.add_argument("--metric")
    p.add_argument("--t-final", type=float, required=True)
    p.add_argument("--steps", type=int)
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("brach", help="two-level antipodal brachistochrone")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--metric")
    g.add_argument("--eta-params", metavar="a,b1,b2,c")
    p.add_argument("--gap", type=float, default=1.0)
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_brach)

    p = sub.add_parser("verify", help="run the randomized property suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=20)
    p.add_argument("--dim-max", type=int, default=6)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (OSError, io.FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (PshError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
