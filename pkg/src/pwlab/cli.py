"""Command-line front end. Every command prints one ReportEnvelope (JSON) or a CSV table."""
from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import math
import sys
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .betti import (EigenvalueData, divisor_cubic, lawton_relative_residual, nodal_lawton_cubic,
                    random_generic_lambda, sample_surface_point, singular_points)
from .errors import PWLabError
from .monodromy import (UIntegrals, build_monodromy, lawton_vector, trace_coords_closed_form,
                        trace_coords_matrix)
from .nerve import pw_verify
from .numerics.scaled import ScaledComplex
from .parallel import parallel_map
from .spectral import PolarParam, compute_periods, x_coordinate
from .stokes import (StokesRay, dominance_empirical, dominance_expected, sector_midpoint_phi,
                     sector_of)
from .transport import wkb_convergence_check

EXIT = {"pass": 0, "fail": 1, "invalid-input": 2}
RNG_NAME = "numpy.random.default_rng (PCG64)"


class InvalidInput(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    cbrt_R: float
    phi: float
    steps: int
    r: float
    seed: int
    tol: float
    u: list
    format: str
    out: str
    count: int
    random: int
    grid: list

    def validate(self):
        if not (self.cbrt_R > 0 and math.isfinite(self.cbrt_R)):
            raise InvalidInput("--cbrt-R must be positive")
        if self.steps < 1:
            raise InvalidInput("--steps must be >= 1")
        if not self.tol > 0:
            raise InvalidInput("--tol must be positive")
        if not 0 < self.r < 0.25:
            raise InvalidInput("--r must lie in (0, 1/4)")
        if not 0 <= self.seed < 2 ** 64:
            raise InvalidInput("--seed must be a 64-bit unsigned integer")
        if self.count < 1 or self.random < 0:
            raise InvalidInput("--count must be >= 1 and --random >= 0")
        if not math.isfinite(self.phi):
            raise InvalidInput("--phi must be finite")


def _cx(z):
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _scaled(s):
    return ScaledComplex.from_complex(s).to_json()


def _u_from(cfg):
    if cfg.u is None:
        return UIntegrals.zero()
    try:
        return UIntegrals.from_imag_parts(cfg.u)
    except ValueError as exc:
        raise InvalidInput(f"--u: {exc}") from None


def cmd_periods(cfg):
    periods = compute_periods(cfg.r, tol=cfg.tol)
    other = compute_periods(cfg.r / 2, tol=cfg.tol)
    oracle = 2 * math.sqrt(3) * math.gamma(1 / 3) ** 2 / math.gamma(2 / 3)
    diff = periods.diff
    rel = abs(abs(diff) - oracle) / oracle
    arg_err = abs(cmath.phase(diff) - 5 * math.pi / 6)
    r_shift = abs(other.diff - diff)
    checks = {"abs_diff_vs_gamma_oracle": rel <= 1e-8, "arg_diff_is_5pi_over_6": arg_err <= 1e-9,
              "r_independence": r_shift <= 1e-9}
    payload = {
        "pi0": _cx(periods.pi0), "pi1": _cx(periods.pi1), "abs_diff": abs(diff),
        "arg_diff": cmath.phase(diff), "oracle_abs_diff": oracle, "rel_err_abs_diff": rel,
        "arg_err": arg_err, "r_half_shift": r_shift, "checks": checks,
    }
    return all(checks.values()), payload


SWEEP_HEADER = ["phi", "log_abs_X", "arg_X", "log_abs_Y", "arg_Y", "log_abs_Z", "arg_Z",
                "sector", "dom_X", "dom_Y", "dom_Z"]


def cmd_sweep(cfg):
    periods = compute_periods(cfg.r)
    u = _u_from(cfg)

    def row(k):
        phi = 2 * math.pi * k / cfg.steps
        tc = trace_coords_closed_form(PolarParam(cfg.cbrt_R, phi), periods, u)
        where = sector_of(x_coordinate(periods, phi))
        dom = [max(range(3), key=lambda i: r[i]) + 1 for r in tc.real_exponents]
        vals = [phi]
        for c in tc.as_tuple():
            vals += [c.log_abs(), c.arg()]
        return vals + [str(where)] + dom, isinstance(where, StokesRay)

    out = parallel_map(row, range(cfg.steps))
    rows = [r for r, _ in out]
    ok = all(r[5] >= max(r[1], r[3]) for r, on_ray in out if not on_ray)
    return ok, {"header": SWEEP_HEADER, "rows": rows, "checks": {"Z_dominates_off_ray": ok}}


def cmd_sectors_table(cfg):
    periods = compute_periods(cfg.r)
    u = _u_from(cfg)
    rows = []
    ok = True
    for j in range(1, 13):
        phi = sector_midpoint_phi(j, periods)
        rep = dominance_empirical(PolarParam(cfg.cbrt_R, phi), periods, u)
        exp = dominance_expected(j)
        match = rep.record == exp
        ratio_ok = rep.max_log_ratio <= -0.1 * cfg.cbrt_R
        ok = ok and match and ratio_ok
        rows.append([j, phi, "".join(exp.ordering), "".join(rep.record.ordering),
                     "".join(map(str, exp.dominant)), "".join(map(str, rep.record.dominant)),
                     rep.max_log_ratio, match and ratio_ok])
    header = ["sector", "phi", "expected_order", "empirical_order", "expected_dominant",
              "empirical_dominant", "max_log_ratio", "match"]
    return ok, {"header": header, "rows": rows, "checks": {"all_sectors_match": ok}}


def cmd_betti_sample(cfg):
    rng = np.random.default_rng(cfg.seed)
    eig = EigenvalueData.special()
    rows = []
    for k in range(cfg.count):
        v, w = rng.normal(size=2) + 1j * rng.normal(size=2)
        s = sample_surface_point(eig, v, w, seed=int(rng.integers(2 ** 32)))
        x = lawton_vector(s.A, s.B)
        first_six = max(abs(t.to_complex()) for t in x[:6])
        rows.append([k, s.max_residual, first_six, lawton_relative_residual(*x[6:])])
    max_trace = max(r[1] for r in rows)
    max_six = max(r[2] for r in rows)
    max_lawton = max(r[3] for r in rows)
    checks = {"trace_constraints": max_trace <= 1e-9, "x1_to_x6_vanish": max_six <= 1e-9,
              "lawton_relation": max_lawton <= 1e-8}
    return all(checks.values()), {
        "header": ["sample", "max_trace_residual", "max_abs_x1_x6", "lawton_rel_residual"],
        "rows": rows, "max_trace_residual": max_trace, "max_lawton_rel_residual": max_lawton,
        "checks": checks}


def _sing_summary(rep):
    return {"points": [[_cx(v) for v in p.point] for p in rep.points], "kinds": rep.kinds,
            "starts": rep.starts, "converged": rep.converged, "failed": rep.failed}


def cmd_divisor_check(cfg):
    nodal = singular_points(nodal_lawton_cubic())
    nodal_ok = (nodal.kinds == ["node"]
                and np.allclose(nodal.points[0].point, (0, 0, 1), atol=1e-9))
    rng = np.random.default_rng(cfg.seed)
    rows = []
    for k in range(cfg.random):
        lam = random_generic_lambda(rng)
        rep = singular_points(divisor_cubic(lam))
        rows.append([k, *[v for z in lam for v in (z.real, z.imag)], len(rep.points),
                     ",".join(rep.kinds), rep.kinds == ["node"]])
    single = sum(1 for r in rows if r[-1])
    checks = {"lawton_cubic_single_node": bool(nodal_ok), "random_single_node": single == len(rows)}
    return all(checks.values()), {
        "nodal_cubic": _sing_summary(nodal),
        "header": ["index", "l1_re", "l1_im", "l2_re", "l2_im", "l3_re", "l3_im", "n_singular",
                   "kinds", "single_node"],
        "rows": rows, "single_node_count": single, "checks": checks}


def cmd_wkb_compare(cfg):
    periods = compute_periods(cfg.r)
    u = _u_from(cfg)
    param = PolarParam(cfg.cbrt_R, cfg.phi)
    A = build_monodromy(0, param, periods, u)
    B = build_monodromy(1, param, periods, u)
    mat = trace_coords_matrix(A, B)
    closed = trace_coords_closed_form(param, periods, u)
    rel = {k: a.rel_diff(b) for k, a, b in zip("XYZ", mat.as_tuple(), closed.as_tuple())}
    mag = {k: abs(a.log_abs() - b.log_abs()) for k, a, b in zip("XYZ", mat.as_tuple(), closed.as_tuple())}
    lawton = lawton_relative_residual(*lawton_vector(A, B)[6:])
    checks = {"routes_agree": max(rel.values()) <= cfg.tol, "lawton_matrix_route": lawton <= 1e-10}
    return all(checks.values()), {
        "matrix": {k: _scaled(v) for k, v in zip("XYZ", mat.as_tuple())},
        "closed_form": {k: _scaled(v) for k, v in zip("XYZ", closed.as_tuple())},
        "relative_difference": rel, "log_magnitude_difference": mag,
        "lawton_rel_residual": lawton, "checks": checks}


def cmd_transport_check(cfg):
    grid = cfg.grid or [2.0, 3.0, 4.0, 5.0]
    table = wkb_convergence_check("eta0", cfg.phi, grid, _u_from(cfg), cfg.r)
    rows = [[r.cbrt_R, *r.beta, *r.expected, r.max_abs_diff] for r in table.rows]
    checks = {"beta_matches_exponents": table.max_abs_diff <= cfg.tol,
              "alpha_route_matches": table.alpha_max_diff <= cfg.tol}
    return all(checks.values()), {
        "header": ["cbrt_R", "beta1", "beta2", "beta3", "exp1", "exp2", "exp3", "max_abs_diff"],
        "rows": rows, "alpha_route": list(table.alpha_route), "checks": checks}


def cmd_pw_verify(cfg):
    if cfg.steps < 360:
        raise InvalidInput("pw-verify needs --steps >= 360")
    rep = pw_verify(cfg.cbrt_R, _u_from(cfg), cfg.steps, periods=compute_periods(cfg.r))
    rows = [[d.phi, d.sector, *d.point, d.valid] for d in rep.diagnostics]
    return rep.passed, {
        "winding": rep.winding, "all_valid": rep.all_valid, "samples": rep.samples,
        "invalid_phis": list(rep.invalid_phis),
        "header": ["phi", "sector", "phi0", "phi1", "phi2", "valid"], "rows": rows,
        "checks": {"all_valid": rep.all_valid, "winding_is_unit": rep.passed}}


COMMANDS = {
    "periods": cmd_periods,
    "sweep": cmd_sweep,
    "sectors-table": cmd_sectors_table,
    "betti-sample": cmd_betti_sample,
    "divisor-check": cmd_divisor_check,
    "wkb-compare": cmd_wkb_compare,
    "transport-check": cmd_transport_check,
    "pw-verify": cmd_pw_verify,
}

DEFAULTS = {
    "sweep": {"steps": 360, "cbrt_R": 15.0},
    "sectors-table": {"cbrt_R": 15.0},
    "pw-verify": {"steps": 1440, "cbrt_R": 15.0},
    "transport-check": {"phi": math.pi / 2},
    "wkb-compare": {"phi": 1.0, "cbrt_R": 5.0},
}


def _float_list(text, name):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"{name} expects comma-separated numbers") from None


def build_parser():
    p = argparse.ArgumentParser(prog="pwlab", description="Numerical P=W verification toolkit")
    p.add_argument("--version", action="version", version=f"pwlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--cbrt-R", dest="cbrt_R", type=float, default=None,
                       help="|tau| = R^(1/3); the base point is t = cbrt_R^3 e^{i phi}")
        s.add_argument("--phi", type=float, default=None)
        s.add_argument("--steps", type=int, default=None)
        s.add_argument("--r", type=float, default=0.1, help="puncture disc radius")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--tol", type=float, default=1e-12)
        s.add_argument("--u", type=lambda t: _float_list(t, "--u"), default=None,
                       help="12 comma-separated imaginary parts: eta0, eta1, gamma0, gamma1")
        s.add_argument("--format", choices=["json", "csv"], default="json")
        s.add_argument("--out", default=None)
        s.add_argument("--count", type=int, default=100)
        s.add_argument("--random", type=int, default=20)
        s.add_argument("--grid", type=lambda t: _float_list(t, "--grid"), default=None)
        s.add_argument("--timing", action="store_true",
                       help="record wall time (makes output non-reproducible)")
    return p


def _config(ns):
    d = DEFAULTS.get(ns.command, {})
    return RunConfig(
        command=ns.command,
        cbrt_R=ns.cbrt_R if ns.cbrt_R is not None else d.get("cbrt_R", 10.0),
        phi=ns.phi if ns.phi is not None else d.get("phi", 0.0),
        steps=ns.steps if ns.steps is not None else d.get("steps", 360),
        r=ns.r, seed=ns.seed, tol=ns.tol, u=ns.u, format=ns.format, out=ns.out,
        count=ns.count, random=ns.random, grid=ns.grid,
    )


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, ScaledComplex):
        return obj.to_json()
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, complex):
        return _cx(obj)
    return obj


def render(envelope, fmt):
    if fmt == "json":
        return json.dumps(_clean(envelope), indent=2, sort_keys=False, allow_nan=False) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    payload = envelope.get("payload") or {}
    if "rows" in payload:
        w.writerow(payload["header"])
        for row in payload["rows"]:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    else:
        w.writerow(["key", "value"])
        w.writerow(["status", envelope["status"]])
        for k, v in payload.items():
            if k == "checks":
                continue
            w.writerow([k, json.dumps(_clean(v))])
        for k, v in payload.get("checks", {}).items():
            w.writerow([f"check:{k}", v])
    return buf.getvalue()


def run(argv=None):
    ns = build_parser().parse_args(argv)
    cfg = _config(ns)
    start = time.perf_counter()
    status = "invalid-input"
    payload = {}
    try:
        cfg.validate()
        ok, payload = COMMANDS[cfg.command](cfg)
        status = "pass" if ok else "fail"
    except InvalidInput as exc:
        payload = {"error": str(exc)}
    except (PWLabError, ValueError) as exc:
        payload = {"error": f"{type(exc).__name__}: {exc}"}
    envelope = {
        "tool": "pwlab",
        "version": __version__,
        "config": {**asdict(cfg), "rng": RNG_NAME},
        "wall_time_s": round(time.perf_counter() - start, 6) if ns.timing else None,
        "status": status,
        "payload": payload,
    }
    text = render(envelope, cfg.format)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT[status]


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
