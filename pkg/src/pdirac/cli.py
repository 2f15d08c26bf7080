"""Command-line front end.

    pdirac verify --suite all --seed 7 --report out.json
    pdirac prepare --p 2,1,0,0 --s 0,0,0,1 --l 0.5
    pdirac exchange --l 0.5 --n 0.5 --chi 0.3 --lambda 1.1
    pdirac amplitude --l 0.5 --n -0.5 --j 0.5 --k 0.5
    pdirac evolve --state state.json --dtau 1.0
    pdirac axis --momenta "1,0,0,0;2,0,0,1" --eps 0.1
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import propagation as pr
from . import schema
from . import states as st
from . import statistics as stats
from . import verify

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class CLIError(Exception):
    pass


def _vector(text: str) -> np.ndarray:
    try:
        values = [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad four-vector {text!r}") from exc
    if len(values) != 4:
        raise argparse.ArgumentTypeError(f"four-vector needs 4 comma-separated reals, got {text!r}")
    return np.array(values)


def _momenta(text: str) -> list[np.ndarray]:
    return [_vector(chunk) for chunk in text.split(";") if chunk.strip()]


def _spinor(text: str) -> np.ndarray:
    """``re,im;re,im;re,im;re,im``"""
    parts = [chunk.split(",") for chunk in text.split(";")]
    if len(parts) != 4 or any(len(p) != 2 for p in parts):
        raise argparse.ArgumentTypeError("spinor needs 4 're,im' pairs separated by ';'")
    return np.array([complex(float(a), float(b)) for a, b in parts])


def _emit(payload: dict, as_json: bool, lines: list[str]) -> None:
    if as_json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))


def _load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CLIError(f"cannot read {path}: {exc}") from exc


# --- verify -----------------------------------------------------------------

def cmd_verify(args) -> int:
    basis = verify.corrupted_basis() if args.inject_fault else None
    report = verify.run_suite(args.suite, args.trials, args.seed, args.tol, basis=basis, timing=args.timing)
    text = report.dumps()
    if args.report:
        try:
            with open(args.report, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise CLIError(f"cannot write report to {args.report}: {exc}") from exc
    print(text if args.json else report.table(), end="\n" if not args.json else "")
    return EXIT_OK if report.passed else EXIT_FAIL


# --- prepare ----------------------------------------------------------------

def default_w_plus(p) -> np.ndarray:
    w = st.energy_projection(p, 1) @ np.array([1, 0, 0, 0], dtype=complex)
    return w / np.linalg.norm(w)


def cmd_prepare(args) -> int:
    if args.input:
        data = _load_json(args.input)
        p, s, l = np.array(data["p"], float), np.array(data["s"], float), float(data.get("l", 0.5))
        w_plus = schema.decode_spinor(data["w_plus"]) if "w_plus" in data else default_w_plus(p)
    else:
        if args.p is None:
            raise CLIError("give --p (or --input)")
        p, s, l = args.p, args.s, args.l
        w_plus = args.w_plus if args.w_plus is not None else default_w_plus(p)
    try:
        w = st.prepare_rotation_eigenstate(w_plus, p, s, l)
    except st.DegenerateAxisError as exc:
        raise CLIError(str(exc)) from exc
    except ValueError as exc:
        raise CLIError(f"invalid input: {exc}") from exc
    w_minus = w - w_plus
    r, _, _ = st.rotation_operator(s)
    lam_minus = st.energy_projection(p, -1)
    eig_res = float(np.linalg.norm(r @ w - l * w))
    branch_res = float(np.linalg.norm(lam_minus @ w_minus - w_minus))
    payload = {
        "p": schema.encode_vector(p),
        "s": schema.encode_vector(s),
        "l": l,
        "w_plus": schema.encode_spinor(w_plus),
        "w_minus": schema.encode_spinor(w_minus),
        "w": schema.encode_spinor(w),
        "parallel": st.is_parallel(p, s),
        "rotation_residual": eig_res,
        "branch_residual": branch_res,
    }
    fmt = lambda v: "  ".join(f"{x.real:+.12f}{x.imag:+.12f}j" for x in v)
    _emit(payload, args.json, [
        f"w_plus  = {fmt(w_plus)}",
        f"w_minus = {fmt(w_minus)}",
        f"w       = {fmt(w)}",
        f"|R w - l w|              = {eig_res:.3e}",
        f"|L- w_minus - w_minus|   = {branch_res:.3e}",
    ])
    return EXIT_OK


# --- exchange / amplitude ---------------------------------------------------

_DEMO_P = np.array([2.0, 1.0, 0.0, 0.0])
_DEMO_Q = np.array([3.0, 0.0, 1.0, 1.0])
_Z_AXIS = np.array([0.0, 0.0, 0.0, 1.0])


def _demo_product(l, n, chi, lam) -> st.TwoParticleState:
    psi = st.single_mode(_DEMO_P, 1, default_w_plus(_DEMO_P), l=l, chi=chi)
    phi = st.single_mode(_DEMO_Q, 1, default_w_plus(_DEMO_Q), l=n, chi=lam)
    return st.TwoParticleState.product(psi, phi)


def cmd_exchange(args) -> int:
    if args.input:
        state = schema.decode_two_particle(_load_json(args.input))
    else:
        state = _demo_product(args.l, args.n, args.chi, args.lam)
    _, psi, phi = state.terms[0]
    try:
        factor = stats.exchange_factor(psi.l, phi.l, psi.chi, phi.chi)
        outcome = stats.homotopic_exchange(state)
    except ValueError as exc:
        raise CLIError(str(exc)) from exc
    anti = outcome.state.swap_residual(-1)
    sym = outcome.state.swap_residual(+1)
    payload = {
        "factor": schema.encode_complex(factor),
        "kappa": schema.encode_complex(outcome.kappa),
        "spin_class": outcome.spin_class,
        "antisymmetric": anti == 0.0,
        "symmetric": sym == 0.0,
        "antisymmetry_residual": anti,
        "state": schema.encode_two_particle(outcome.state),
    }
    kind = "antisymmetric" if anti == 0.0 else "symmetric" if sym == 0.0 else "neither symmetric nor antisymmetric"
    _emit(payload, args.json, [
        f"exchange factor = {factor.real:+.15f}{factor.imag:+.15f}j",
        f"kappa           = {outcome.kappa.real:+.15f}{outcome.kappa.imag:+.15f}j",
        f"spin class      = {outcome.spin_class}",
        f"exchanged state is {kind}",
    ])
    return EXIT_OK


def amplitude_scenario(l, n, j, k, chi, lam, alpha, beta, form: str = "canonical"):
    """Prepared eigenstates psi(l)@p, phi(n)@q (to-state) and xi(j)@p,
    zeta(k)@q (from-state) against the z axis."""

    def prepared(p, label, angle):
        state = st.rotation_eigenstate(p, default_w_plus(p), _Z_AXIS, label, chi=angle)
        return state.scaled(1 / np.linalg.norm(state.spinor_at(p)))

    psi, phi = prepared(_DEMO_P, l, chi), prepared(_DEMO_Q, n, lam)
    xi, zeta = prepared(_DEMO_P, j, alpha), prepared(_DEMO_Q, k, beta)
    product = st.TwoParticleState.product(psi, phi)
    if form == "homotopic":
        psi_s = stats.homotopic_exchange(product).state
    else:
        psi_s = stats.canonical_antisymmetrize(product)
    big_xi = st.TwoParticleState.product(xi, zeta)
    return psi_s, big_xi


def cmd_amplitude(args) -> int:
    if args.to_state or args.from_state:
        if not (args.to_state and args.from_state):
            raise CLIError("--to and --from must be given together")
        psi_s = schema.decode_two_particle(_load_json(args.to_state))
        big_xi = schema.decode_two_particle(_load_json(args.from_state))
    else:
        try:
            psi_s, big_xi = amplitude_scenario(
                args.l, args.n, args.j, args.k, args.chi, args.lam, args.alpha, args.beta, args.form
            )
        except ValueError as exc:
            raise CLIError(str(exc)) from exc
    f = stats.amplitude_f(psi_s, big_xi, args.tau)
    g = stats.amplitude_g(psi_s, stats.canonical_antisymmetrize(big_xi))
    payload = {"f": schema.encode_complex(f), "g": schema.encode_complex(g), "abs_f": abs(f), "abs_g": abs(g)}
    _emit(payload, args.json, [
        f"f   = {f.real:+.15e}{f.imag:+.15e}j   |f| = {abs(f):.15e}",
        f"g   = {g.real:+.15e}{g.imag:+.15e}j   |g| = {abs(g):.15e}",
    ])
    return EXIT_OK


# --- evolve / axis ----------------------------------------------------------

def cmd_evolve(args) -> int:
    data = _load_json(args.state)
    try:
        if "terms" in data:
            out = pr.evolve_two_particle_free(schema.decode_two_particle(data), args.dtau)
            payload = {"state": schema.encode_two_particle(out), "dtau": args.dtau}
            lines = [f"evolved two-particle state: {len(out.terms)} term(s) after dtau={args.dtau}"]
        else:
            out, report = pr.evolve_free(schema.decode_state(data), args.dtau)
            payload = {
                "state": schema.encode_state(out),
                "report": {"kept_modes": report.kept_modes, "dropped_modes": report.dropped_modes, "dtau": report.dtau},
            }
            lines = [f"kept {report.kept_modes} mode(s), dropped {report.dropped_modes} (dtau={report.dtau})"]
            lines += [
                f"  p={mode.p} branch={mode.branch:+d} coefficient={c.real:+.12f}{c.imag:+.12f}j"
                for c, mode in out.modes
            ]
    except (KeyError, ValueError) as exc:
        raise CLIError(f"invalid state file: {exc}") from exc
    _emit(payload, args.json, lines)
    return EXIT_OK


def cmd_axis(args) -> int:
    try:
        boost, s = st.choose_common_axis(args.momenta, args.eps)
    except (ValueError, RuntimeError) as exc:
        raise CLIError(str(exc)) from exc
    moved = [boost.apply(p) for p in args.momenta]
    transverse = [float(math.hypot(q[1], q[2])) for q in moved]
    payload = {
        "direction": list(boost.direction),
        "rapidity": boost.rapidity,
        "axis": schema.encode_vector(s),
        "momenta": [schema.encode_vector(q) for q in moved],
        "transverse_norms": transverse,
    }
    lines = [f"boost along {tuple(round(x, 6) for x in boost.direction)} with rapidity {boost.rapidity:.6f}"]
    lines += [f"  p' = {tuple(round(float(x), 6) for x in q)}  transverse {t:.6f}" for q, t in zip(moved, transverse)]
    lines.append(f"common axis in the new frame: {tuple(float(x) for x in s)}")
    _emit(payload, args.json, lines)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pdirac", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run an invariant battery")
    v.add_argument("--suite", default="all", choices=verify.SUITES + ("all",))
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--tol", type=float, default=None, help="override every tunable tolerance")
    v.add_argument("--report", metavar="PATH", help="also write the JSON report here")
    v.add_argument("--json", action="store_true", help="print the JSON report instead of a table")
    v.add_argument("--timing", action="store_true", help="record wall time (reports are then not byte-stable)")
    v.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)

    p = sub.add_parser("prepare", help="prepare a rotation eigenstate from a forward spinor")
    p.add_argument("--p", type=_vector)
    p.add_argument("--s", type=_vector, default=_Z_AXIS)
    p.add_argument("--l", type=float, default=0.5, choices=(0.5, -0.5))
    p.add_argument("--w-plus", type=_spinor, default=None, help="'re,im;re,im;re,im;re,im' (default: Lambda_+ e1, normalized)")
    p.add_argument("--input", metavar="FILE", help='JSON {"p", "s", "l", "w_plus"}')
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_prepare)

    e = sub.add_parser("exchange", help="homotopic exchange of two labelled particles")
    e.add_argument("--l", type=float, default=0.5)
    e.add_argument("--n", type=float, default=0.5)
    e.add_argument("--chi", type=float, default=0.3)
    e.add_argument("--lambda", dest="lam", type=float, default=1.1)
    e.add_argument("--input", metavar="FILE", help="single-term two-particle state JSON")
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_exchange)

    a = sub.add_parser("amplitude", help="transition amplitudes f and g")
    for name, default in (("l", 0.5), ("n", 0.5), ("j", 0.5), ("k", 0.5)):
        a.add_argument(f"--{name}", type=float, default=default, choices=(0.5, -0.5))
    for name, dest, default in (("chi", "chi", 0.3), ("lambda", "lam", 1.1), ("alpha", "alpha", 0.7), ("beta", "beta", 2.0)):
        a.add_argument(f"--{name}", dest=dest, type=float, default=default)
    a.add_argument("--form", choices=("canonical", "homotopic"), default="canonical")
    a.add_argument("--tau", type=float, default=0.0)
    a.add_argument("--to", dest="to_state", metavar="FILE", help="exchanged to-state JSON")
    a.add_argument("--from", dest="from_state", metavar="FILE", help="product from-state JSON")
    a.add_argument("--json", action="store_true")
    a.set_defaults(func=cmd_amplitude)

    ev = sub.add_parser("evolve", help="free tau-evolution of a state file")
    ev.add_argument("--state", required=True, metavar="FILE")
    ev.add_argument("--dtau", type=float, required=True)
    ev.add_argument("--json", action="store_true")
    ev.set_defaults(func=cmd_evolve)

    ax = sub.add_parser("axis", help="boost so every momentum is off the common axis")
    ax.add_argument("--momenta", type=_momenta, required=True, help="'p0,p1,p2,p3;...'")
    ax.add_argument("--eps", type=float, default=0.1)
    ax.add_argument("--json", action="store_true")
    ax.set_defaults(func=cmd_axis)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
