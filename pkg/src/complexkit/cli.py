"""Command-line front end.

Every subcommand prints (or writes to ``--out``) a JSON report with the
keys ``tool_version``, ``resolved_config``, ``checks`` and ``result``.
Reports are serialized with sorted keys and contain nothing that
depends on the clock or the environment, so identical arguments give
byte-identical output.

Exit codes: 0 success, 1 a check ran and failed, 2 usage error,
3 numeric error.

Complex vectors on the command line take one of three forms:

``0.3,0.4``          real components, comma separated;
``0.3,0+0,0.4``      ``re,im`` pairs joined by ``+``;
``0.3+0.1j,-0.4j``   Python complex literals, comma separated.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .automorphisms import isotropy_abelian_report, poincare_witness
from .bers import Poly, hom_from_map, morphism_audit
from .cauchy import cauchy_eval, pompeiu_eval
from .dbar import DbarProblem, boundedness_bound, cauchy_transform, dbar_residual
from .dirichlet import (
    BoundaryData,
    boundary_continuity_gap,
    harmonic_extension,
    harnack_lower_bound_check,
    laplacian_residual,
    poisson_kernel,
    sample_polar,
)
from .errors import AllMasksEmpty, ComplexKitError, NumericError
from .geometry import GridField, QuadratureSpec, annulus, disc
from .metrics import Kind, MetricQuery, Model, indicatrix_membership, metric_length
from .osgood import (
    SEQUENCES,
    boundedness_masks,
    cover_check,
    dense_ball_search,
    limit_holomorphy_residual,
)

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- parsing

def parse_complex_vector(text: str) -> np.ndarray:
    s = text.strip().replace(" ", "")
    if not s:
        raise UsageError("empty complex vector")
    try:
        if "j" in s:
            vals = [complex(p) for p in s.split(",")]
        elif "+" in s:
            vals = []
            for part in s.split("+"):
                nums = [float(x) for x in part.split(",")]
                if len(nums) not in (1, 2):
                    raise ValueError(part)
                vals.append(complex(nums[0], nums[1] if len(nums) == 2 else 0.0))
        else:
            vals = [complex(float(p)) for p in s.split(",")]
    except ValueError as e:
        raise UsageError(f"cannot parse complex vector {text!r}") from e
    return np.array(vals, dtype=complex)


def parse_complex(text: str) -> complex:
    v = parse_complex_vector(text)
    if v.size != 1:
        raise UsageError(f"expected one complex number, got {text!r}")
    return complex(v[0])


def read_boundary_csv(path: str) -> BoundaryData:
    """Rows ``psi,value`` on the uniform grid ``psi_k = 2 pi k / N``."""
    psi, vals = [], []
    seen_header = False
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().startswith("#"):
                continue
            try:
                psi.append(float(row[0]))
            except ValueError:
                if not psi and not seen_header:
                    seen_header = True
                    continue
                raise UsageError(f"bad row {row!r} in {path}") from None
            try:
                vals.append(complex(row[1].strip().replace(" ", "")))
            except (IndexError, ValueError):
                raise UsageError(f"bad value in row {row!r} of {path}") from None
    n = len(vals)
    if n < 8:
        raise UsageError("boundary data needs at least 8 rows")
    grid = 2 * np.pi * np.arange(n) / n
    if np.max(np.abs(np.asarray(psi) - grid)) > 1e-9:
        raise UsageError("psi column must be the uniform grid 2*pi*k/N")
    return BoundaryData(np.array(vals))


def _enc(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


# ---------------------------------------------------------------- registries

TEST_FUNCTIONS = {
    "exp": (np.exp, True),
    "sin": (np.sin, True),
    "cubic": (lambda z: z ** 3 - 2 * z + 1, True),
    "conj": (np.conj, False),
    "abs2": (lambda z: z * np.conj(z), False),
    "re": (lambda z: np.real(z) + 0j, False),
    "exp_conj2": (lambda z: np.exp(z) + np.conj(z) ** 2, False),
}

BOUNDARY_FUNCTIONS = {
    "cos2": lambda p: np.cos(2 * p),
    "one_minus_cos": lambda p: 1 - np.cos(p),
    "one_plus_cos": lambda p: 1 + np.cos(p),
    "abs_sin": lambda p: np.abs(np.sin(p)),
    "step": lambda p: (p < np.pi).astype(float),
}


def _alpha_registry(name: str):
    if name == "indicator":
        return lambda z: (np.abs(z) <= 1).astype(complex)
    if name == "bump":
        def bump(z):
            r2 = np.abs(z) ** 2 / 0.64
            return np.where(r2 < 1, (1 - r2) ** 3, 0) * (1 + 0.5j * np.real(z))
        return bump
    raise UsageError(f"unknown alpha {name!r}")


# ---------------------------------------------------------------- reports

class Report:
    def __init__(self, args: argparse.Namespace):
        self.config = {k: v for k, v in sorted(vars(args).items())
                       if k not in ("handler", "out")}
        self.checks: list = []
        self.result: dict = {}

    def check(self, name: str, ok: bool, value, tolerance) -> bool:
        self.checks.append({"name": name, "ok": bool(ok), "value": value,
                            "tolerance": tolerance})
        return bool(ok)

    @property
    def ok(self) -> bool:
        return all(c["ok"] for c in self.checks)

    def dumps(self) -> str:
        doc = {"tool_version": __version__, "resolved_config": self.config,
               "checks": self.checks, "result": self.result}
        return json.dumps(doc, sort_keys=True, indent=2, default=_default) + "\n"


def _default(o):
    if isinstance(o, complex):
        return _enc(o)
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not serializable: {type(o)}")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _domain(args):
    c = parse_complex(args.center)
    if args.domain == "disc":
        return disc(c, args.radius)
    return annulus(c, args.inner, args.outer)


# ---------------------------------------------------------------- handlers

def cmd_cauchy_eval(args) -> Report:
    rep = Report(args)
    f, holo = TEST_FUNCTIONS[args.function]
    d = _domain(args)
    q = QuadratureSpec(contour_nodes=args.nodes)
    pts = parse_complex_vector(args.points)
    vals = [cauchy_eval(f, d, complex(z), q) for z in pts]
    err = max(abs(v - complex(f(z))) for v, z in zip(vals, pts))
    rep.result = {"points": [_enc(z) for z in pts], "values": [_enc(v) for v in vals],
                  "holomorphic": holo}
    rep.check("reproduction_error", err <= args.tolerance, err, args.tolerance)
    return rep


def cmd_pompeiu_eval(args) -> Report:
    rep = Report(args)
    f, _ = TEST_FUNCTIONS[args.function]
    d = _domain(args)
    q = QuadratureSpec(contour_nodes=args.nodes, area_resolution=args.resolution)
    pts = parse_complex_vector(args.points)
    vals = np.atleast_1d(pompeiu_eval(f, d, pts, q))
    err = float(np.max(np.abs(vals - f(pts))))
    rep.result = {"points": [_enc(z) for z in pts], "values": [_enc(v) for v in vals]}
    rep.check("reproduction_error", err <= args.tolerance, err, args.tolerance)
    return rep


def cmd_dbar_solve(args) -> Report:
    rep = Report(args)
    if args.alpha_file:
        alpha = GridField.from_json(json.loads(Path(args.alpha_file).read_text()))
    else:
        alpha = _alpha_registry(args.alpha)
    p = DbarProblem(alpha, args.support_radius)
    q = QuadratureSpec(area_resolution=args.resolution)
    bound = boundedness_bound(p, q)
    out = {"bound": bound}
    worst = 0.0
    if args.points:
        pts = parse_complex_vector(args.points)
        vals = cauchy_transform(p, pts, q)
        worst = float(np.max(np.abs(vals)))
        out.update(points=[_enc(z) for z in pts], values=[_enc(v) for v in vals])
    if args.window:
        x0, y0, x1, y1 = (float(t) for t in args.window.split(","))
        h = args.spacing
        f_grid = GridField.window(lambda z: cauchy_transform(p, z.ravel(), q).reshape(z.shape),
                                  complex(x0, y0), complex(x1, y1), h)
        a_grid = GridField.window(p.alpha_fn, complex(x0, y0), complex(x1, y1), h)
        res = dbar_residual(f_grid, a_grid)
        worst = max(worst, float(np.max(np.abs(f_grid.values))))
        rep.check("dbar_residual", res <= args.tolerance, res, args.tolerance)
        if args.grid_out:
            Path(args.grid_out).write_text(f_grid.dumps())
    rep.check("bounded", worst <= bound, worst, bound)
    rep.result = out
    return rep


def cmd_dirichlet_solve(args) -> Report:
    rep = Report(args)
    if args.data:
        f = read_boundary_csv(args.data)
    else:
        f = BoundaryData.from_function(BOUNDARY_FUNCTIONS[args.function], args.count)
    u = harmonic_extension(f)
    out = {}
    if args.points:
        pts = parse_complex_vector(args.points)
        if np.any(np.abs(pts) > 1):
            raise UsageError("points must lie in the closed unit disc")
        out["points"] = [_enc(z) for z in pts]
        out["values"] = [_enc(v) for v in np.atleast_1d(u(pts))]
    n = args.resolution
    h = 2.0 / n
    r_max = 0.9
    g = GridField.sample(u, complex(-1 + h / 2, -1 + h / 2), h, n, n,
                         lambda z: np.abs(z) <= r_max)
    lap = laplacian_residual(g)
    rep.check("laplacian_residual", lap <= args.tolerance, lap, args.tolerance)
    th = 2 * np.pi * np.arange(4096) / 4096
    norm = max(abs(np.mean(poisson_kernel(r, th)) - 1) for r in (0.0, 0.5, 0.9, 0.99))
    rep.check("kernel_normalization", norm <= 1e-12, float(norm), 1e-12)
    s = f.samples
    if np.all(s.imag == 0) and np.all(s.real >= 0) and np.any(s.real > 0):
        hc = harnack_lower_bound_check(f, 0.5)
        rep.check("harnack_r0.5", hc.ok, hc.lhs - hc.rhs, 0.0)
    gaps = [boundary_continuity_gap(f, r) for r in (0.9, 0.99)]
    out["continuity_gaps"] = {"0.9": gaps[0], "0.99": gaps[1]}
    rep.check("continuity_gap_shrinks", gaps[1] < gaps[0], gaps[1], gaps[0])
    if args.grid_out:
        Path(args.grid_out).write_text(g.dumps())
    if args.polar_out:
        radii = r_max * np.arange(args.polar_radii) / max(args.polar_radii - 1, 1)
        field = sample_polar(f, radii, args.polar_angles)
        rows = ["r,theta,u_re,u_im"]
        for i, r in enumerate(field.radii):
            for j, t in enumerate(field.thetas):
                v = complex(field.values[i, j])
                rows.append(f"{float(r)!r},{float(t)!r},{v.real!r},{v.imag!r}")
        Path(args.polar_out).write_text("\n".join(rows) + "\n")
    rep.result = out
    return rep


def cmd_metric_eval(args) -> Report:
    rep = Report(args)
    qy = MetricQuery(Model(args.model), Kind(args.kind),
                     parse_complex_vector(args.p), parse_complex_vector(args.xi))
    rep.result = {"value": metric_length(qy)}
    return rep


def cmd_indicatrix_sample(args) -> str:
    m, k = Model(args.model), Kind(args.kind)
    rng = np.random.default_rng(args.seed)
    xs = args.scale * (rng.uniform(-1, 1, (args.count, m.dim))
                       + 1j * rng.uniform(-1, 1, (args.count, m.dim)))
    cols = []
    for i in range(m.dim):
        cols += [f"xi{i + 1}_re", f"xi{i + 1}_im"]
    lines = [",".join(cols + ["value", "inside"])]
    for xi in xs:
        v = metric_length(MetricQuery(m, k, np.zeros(m.dim), xi))
        parts = [repr(float(t)) for c in xi for t in (c.real, c.imag)]
        lines.append(",".join(parts + [repr(v), str(int(indicatrix_membership(m, k, xi)))]))
    return "\n".join(lines) + "\n"


def cmd_poincare_witness(args) -> Report:
    rep = Report(args)
    nums = [float(t) for t in args.matrix.split(",")]
    if len(nums) != 8:
        raise UsageError("--matrix takes 8 reals: re,im of L11, L12, L21, L22")
    L = np.array([complex(nums[i], nums[i + 1]) for i in range(0, 8, 2)]).reshape(2, 2)
    w = poincare_witness(L)
    rep.result = w.as_dict()
    if w.branch == "endpoint":
        gap = abs(w.image_norm - 1)
        rep.check("endpoint_off_sphere", gap > 1e-9, gap, 1e-9)
    else:
        rep.check("midpoint_inside", w.image_norm < 1 - 1e-9, w.image_norm, 1 - 1e-9)
    if args.isotropy_samples:
        iso = isotropy_abelian_report(args.isotropy_samples, args.seed)
        rep.result["isotropy"] = iso.as_dict()
        rep.check("bidisc_abelian", iso.bidisc_max_defect == 0, iso.bidisc_max_defect, 0.0)
        rep.check("ball_nonabelian", iso.ball_witness[2] > 0.1, iso.ball_witness[2], 0.1)
    return rep


def cmd_bers_verify(args) -> Report:
    rep = Report(args)
    coeffs = [complex(c) for c in parse_complex_vector(args.h)]
    # keep integer coefficients exact
    coeffs = [int(c.real) if c.imag == 0 and c.real.is_integer() else c for c in coeffs]
    h = Poly(coeffs)
    audit = morphism_audit(hom_from_map(h), args.trials, args.seed)
    rep.result = audit.as_dict()
    tol = args.tolerance
    for name in ("additive_defect", "multiplicative_defect", "unital_defect", "scalar_defect"):
        v = getattr(audit, name)
        rep.check(name, v < tol, v, tol)
    rep.check("recovered_h", audit.recovered_h == h, 0.0 if audit.recovered_h == h else 1.0, 0.0)
    if audit.composition_defect is not None:
        rep.check("composition_defect", audit.composition_defect < tol,
                  audit.composition_defect, tol)
    return rep


def cmd_osgood_analyze(args) -> Report:
    rep = Report(args)
    seq = SEQUENCES[args.sequence](args.j_max)
    n, R = args.resolution, args.radius
    h = 2 * R / (n - 1)
    grid = GridField.sample(lambda z: np.zeros(z.shape, complex), complex(-R, -R), h, n, n,
                            lambda z: np.abs(z) <= R + 1e-12)
    masks = boundedness_masks(seq, grid, args.k_max)
    covered, missing = cover_check(masks)
    rep.check("covered", covered, len(missing), 0)
    out = {"covered": covered, "uncovered_count": len(missing),
           "mask_counts": [int(m.mask.sum()) for m in masks], "spacing": h}
    if args.out_dir:
        d = Path(args.out_dir)
        d.mkdir(parents=True, exist_ok=True)
        for m in masks:
            (d / f"mask_k{int(m.k)}.pbm").write_text(m.to_pbm())
    try:
        ball = dense_ball_search(masks)
    except AllMasksEmpty:
        ball = None
        rep.check("ball_found", False, 0.0, h)
    if ball is not None:
        out["ball"] = {"k": ball.k, "center": _enc(ball.center), "radius": ball.radius}
        rep.check("ball_radius", ball.radius >= h - 1e-12, ball.radius, h)
        res = limit_holomorphy_residual(seq, ball, QuadratureSpec(contour_nodes=args.nodes))
        out["holomorphy_residual"] = res
        rep.check("holomorphy_residual", res <= args.tolerance, res, args.tolerance)
    rep.result = out
    return rep


def cmd_selftest(args) -> Report:
    from .selftest import run_selftest

    rep = Report(args)
    for name, ok, value, tol in run_selftest():
        rep.check(name, ok, value, tol)
    return rep


# ---------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _add_domain(p):
    p.add_argument("--domain", choices=["disc", "annulus"], default="disc")
    p.add_argument("--center", default="0")
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--inner", type=float, default=0.5)
    p.add_argument("--outer", type=float, default=2.0)


def _positive_int(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="complexkit", description=__doc__.split("\n")[0],
                 allow_abbrev=False)
    ap.add_argument("--version", action="version", version=__version__)
    top = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def group(name, help_):
        g = top.add_parser(name, help=help_, allow_abbrev=False)
        return g.add_subparsers(dest="action", required=True, parser_class=_Parser)

    def leaf(sub, name, handler, help_):
        p = sub.add_parser(name, help=help_, allow_abbrev=False)
        p.set_defaults(handler=handler)
        p.add_argument("--out", default=None, help="write output here instead of stdout")
        return p

    p = leaf(group("cauchy", "Cauchy integral formula"), "eval", cmd_cauchy_eval,
             "reproduce f at interior points from boundary values")
    _add_domain(p)
    p.add_argument("--function", choices=sorted(TEST_FUNCTIONS), default="exp")
    p.add_argument("--points", required=True)
    p.add_argument("--nodes", type=_positive_int, default=256)
    p.add_argument("--tolerance", type=float, default=1e-10)

    p = leaf(group("pompeiu", "Cauchy-Pompeiu formula"), "eval", cmd_pompeiu_eval,
             "boundary plus area reconstruction of a smooth f")
    _add_domain(p)
    p.add_argument("--function", choices=sorted(TEST_FUNCTIONS), default="conj")
    p.add_argument("--points", required=True)
    p.add_argument("--nodes", type=_positive_int, default=256)
    p.add_argument("--resolution", type=_positive_int, default=256)
    p.add_argument("--tolerance", type=float, default=5e-2)

    p = leaf(group("dbar", "inhomogeneous Cauchy-Riemann equation"), "solve", cmd_dbar_solve,
             "area Cauchy transform of alpha")
    p.add_argument("--alpha", choices=["indicator", "bump"], default="indicator")
    p.add_argument("--alpha-file", default=None, help="GridField JSON for alpha")
    p.add_argument("--support-radius", type=float, default=1.0)
    p.add_argument("--resolution", type=_positive_int, default=256)
    p.add_argument("--points", default=None)
    p.add_argument("--window", default=None, help="x0,y0,x1,y1 for a residual window")
    p.add_argument("--spacing", type=float, default=1 / 64)
    p.add_argument("--grid-out", default=None)
    p.add_argument("--tolerance", type=float, default=5e-2)

    p = leaf(group("dirichlet", "Dirichlet problem on the unit disc"), "solve",
             cmd_dirichlet_solve, "Poisson integral of boundary data")
    p.add_argument("--data", default=None, help="CSV with columns psi,value")
    p.add_argument("--function", choices=sorted(BOUNDARY_FUNCTIONS), default="cos2")
    p.add_argument("--count", type=_positive_int, default=256)
    p.add_argument("--points", default=None)
    p.add_argument("--resolution", type=_positive_int, default=128)
    p.add_argument("--grid-out", default=None, help="GridField JSON of u on the lattice")
    p.add_argument("--polar-out", default=None, help="CSV r,theta,u_re,u_im on a polar lattice")
    p.add_argument("--polar-radii", type=_positive_int, default=10)
    p.add_argument("--polar-angles", type=_positive_int, default=64)
    p.add_argument("--tolerance", type=float, default=1e-4)

    p = leaf(group("metric", "invariant metrics"), "eval", cmd_metric_eval,
             "Caratheodory or Kobayashi length")
    p.add_argument("--model", choices=[m.value for m in Model], required=True)
    p.add_argument("--kind", choices=[k.value for k in Kind], required=True)
    p.add_argument("--p", required=True)
    p.add_argument("--xi", required=True)

    p = leaf(group("indicatrix", "indicatrix point clouds"), "sample", cmd_indicatrix_sample,
             "CSV of random tangent vectors with metric values")
    p.add_argument("--model", choices=[m.value for m in Model], required=True)
    p.add_argument("--kind", choices=[k.value for k in Kind], default="kobayashi")
    p.add_argument("--count", type=_positive_int, default=1000)
    p.add_argument("--scale", type=float, default=1.2)
    p.add_argument("--seed", type=int, required=True)

    p = leaf(group("poincare", "ball versus bidisc"), "witness", cmd_poincare_witness,
             "certify that a linear map does not carry the bidisc onto the ball")
    p.add_argument("--matrix", required=True)
    p.add_argument("--isotropy-samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)

    p = leaf(group("bers", "algebra homomorphisms"), "verify", cmd_bers_verify,
             "audit the pullback by a polynomial h")
    p.add_argument("--h", required=True, help="coefficients, constant term first")
    p.add_argument("--trials", type=_positive_int, default=100)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--tolerance", type=float, default=1e-10)

    p = leaf(group("osgood", "boundedness sets"), "analyze", cmd_osgood_analyze,
             "masks, cover check and dense ball of a registered sequence")
    p.add_argument("--sequence", choices=sorted(SEQUENCES), required=True)
    p.add_argument("--j-max", type=_positive_int, default=64)
    p.add_argument("--k-max", type=_positive_int, default=8)
    p.add_argument("--resolution", type=_positive_int, default=65)
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--nodes", type=_positive_int, default=256)
    p.add_argument("--out-dir", default=None, help="directory for PBM masks")
    p.add_argument("--tolerance", type=float, default=1e-8)

    p = top.add_parser("selftest", help="run the built-in invariant checks",
                       allow_abbrev=False)
    p.set_defaults(handler=cmd_selftest)
    p.add_argument("--out", default=None)
    return ap


def _glue_negative_values(argv: list) -> list:
    """``--flag -0.3,1`` -> ``--flag=-0.3,1`` so values may start with a minus."""
    out = []
    for tok in argv:
        if (out and out[-1].startswith("--") and "=" not in out[-1]
                and len(tok) > 1 and tok[0] == "-" and (tok[1].isdigit() or tok[1] == ".")):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    ap = build_parser()
    argv = _glue_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = ap.parse_args(argv)
        rep = args.handler(args)
    except UsageError as e:
        print(f"complexkit: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except NumericError as e:
        print(f"complexkit: numeric error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ComplexKitError, ValueError, OSError) as e:
        print(f"complexkit: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:      # --help, --version
        return int(e.code or 0)
    if isinstance(rep, str):
        _emit(rep, args.out)
        return EXIT_OK
    _emit(rep.dumps(), args.out)
    return EXIT_OK if rep.ok else EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
