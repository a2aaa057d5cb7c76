"""Command-line front end: gap-probability tables and limit scans as CSV.

Every subcommand prints a deterministic table: one `#` comment line that
records the engine version and the full flag set (the output path is
deliberately omitted so the same query writes identical bytes anywhere),
a column-name line, then the rows.  ``--json`` switches to a JSON document
carrying per-row convergence diagnostics.  Rows are computed in a thread
pool capped by the ``GAPDET_THREADS`` environment variable and are always
emitted in input order.

Exit codes: 0 success, 1 probe found no witness, 2 a row failed
numerically, 3 invalid arguments.
"""

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .errors import DomainError, GapdetError
from .gapprob import (airy_gap, pearcey_gap, tacnode_gap_direct,
                      tacnode_gap_ratio, tracy_widom_F2)
from .kernels import (ConditionedKernel, FormalTacnodeKernel, GapSpec,
                      PearceyParams, TacnodeParams)
from .quadrature import DomainComponent, gauss_legendre

__all__ = ["main", "run_tw", "run_pearcey", "run_tacnode",
           "run_scan_pearcey_airy", "run_scan_tacnode_pearcey",
           "run_scan_tacnode_airy", "run_positivity_probe",
           "pearcey_airy_endpoints", "tacnode_pearcey_times"]


# ---------------------------------------------------------------------------
# Worker-pool plumbing and row helpers

def _pool_size():
    raw = os.environ.get("GAPDET_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    return n if n > 0 else (os.cpu_count() or 1)


def _map_rows(worker, items):
    """Evaluate ``worker`` over ``items`` in a pool, preserving order."""
    if not items:
        return []
    with ThreadPoolExecutor(max_workers=min(_pool_size(), len(items))) as ex:
        return list(ex.map(worker, items))


def _guarded(worker):
    """Turn engine failures into an error field instead of aborting."""
    def wrapped(item):
        try:
            return worker(item)
        except (GapdetError, OverflowError) as exc:
            return {"error": "%s: %s" % (type(exc).__name__, exc)}
    return wrapped


def _diag(res):
    return {"err_estimate": res.err_estimate,
            "imag_residual": res.imag_residual,
            "m_used": list(res.m_used),
            "route": (res.parts or {}).get("route")}


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return "%.15g" % v
    return str(v)


def _render_csv(meta, columns, rows):
    lines = ["# " + meta, ",".join(columns)]
    for row in rows:
        err = row.get("error", "")
        cells = [_fmt(row.get(c)) for c in columns[:-1]]
        cells.append(err.replace(",", ";").replace("\n", " "))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _render_json(meta, columns, rows):
    doc = {"meta": meta, "columns": list(columns), "rows": rows}
    return json.dumps(doc, sort_keys=True, default=str) + "\n"


def _emit(args, meta, columns, rows):
    text = _render_json(meta, columns, rows) if args.json \
        else _render_csv(meta, columns, rows)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 2 if any("error" in row for row in rows) else 0


def _meta(args, command, flags):
    parts = ["gapdet", __version__, command]
    for name in flags:
        val = getattr(args, name.replace("-", "_"))
        if val is None:
            continue
        if isinstance(val, bool):
            if val:
                parts.append("--" + name)
        elif isinstance(val, (list, tuple)):
            parts.append("--" + name)
            parts.extend(_fmt(float(v)) for v in val)
        else:
            parts.append("--%s %s" % (name, _fmt(val)))
    return " ".join(parts)


# ---------------------------------------------------------------------------
# Parameter maps of the limit regimes

def pearcey_airy_endpoints(tau, rho, sigma):
    """Gap endpoints that push the Pearcey process to two Airy edges."""
    c = 2.0 * (tau / 3.0) ** 1.5
    w = (3.0 * tau) ** (1.0 / 6.0)
    return -c + w * rho, c - w * sigma


def tacnode_pearcey_times(sigma, taus_p, branch=1.0):
    """Tacnode times matching Pearcey times at overlap ``sigma`` < 0.

    The map has a sign ambiguity in its leading term; ``branch`` selects
    it.  The spatial scale (-8 sigma)^(1/8) that shrinks the endpoints is
    returned alongside.
    """
    if sigma >= 0.0:
        raise DomainError("the time map needs sigma < 0, got %g" % sigma)
    scale = (-8.0 * sigma) ** 0.125
    base = branch * math.sqrt(-sigma / 2.0)
    step = (-128.0 * sigma) ** 0.25
    return scale, tuple(base + tp / step for tp in taus_p)


# ---------------------------------------------------------------------------
# Row producers (pure; the cmd_* handlers only parse flags and render)

def run_tw(s_min, s_max, steps, m0=40, tol=1e-8):
    grid = np.linspace(s_min, s_max, steps + 1)

    @_guarded
    def worker(s):
        res = tracy_widom_F2(s, m0=m0, tol=tol)
        return {"s": float(s), "F2": res.real, "err": res.err_estimate,
                **_diag(res)}
    rows = _map_rows(worker, list(grid))
    for s, row in zip(grid, rows):
        row.setdefault("s", float(s))
    return ["s", "F2", "err", "error"], rows


def run_pearcey(tau, endpoints, m0=60, tol=1e-8):
    @_guarded
    def worker(_):
        params = PearceyParams(tau=tau, endpoints=tuple(endpoints))
        res = pearcey_gap(params, m0=m0, tol=tol)
        return {"tau": tau,
                "endpoints": ";".join(_fmt(float(a)) for a in endpoints),
                "F_P": res.real, "err": res.err_estimate, **_diag(res)}
    rows = _map_rows(worker, [0])
    rows[0].setdefault("tau", tau)
    return ["tau", "endpoints", "F_P", "err", "error"], rows


def _parse_intervals(text, n_times):
    """Per-time interval groups: 'a:b[:z],a:b;a:b' (';' splits times)."""
    if not text.strip():
        return [[] for _ in range(n_times)]
    groups = text.split(";")
    if len(groups) != n_times:
        raise ValueError("got %d interval groups for %d times"
                         % (len(groups), n_times))
    out = []
    for grp in groups:
        slot = []
        for item in filter(None, (s.strip() for s in grp.split(","))):
            fields = [float(f) for f in item.split(":")]
            if len(fields) not in (2, 3):
                raise ValueError("interval must be a:b or a:b:z, got %r"
                                 % item)
            slot.append(tuple(fields))
        out.append(slot)
    return out


def run_tacnode(sigma, times, intervals, route="ratio", m0=40, tol=1e-8,
                force_sigma=False):
    @_guarded
    def worker(_):
        params = TacnodeParams(sigma=sigma, times=tuple(times))
        spec = GapSpec(per_time=intervals)
        fn = tacnode_gap_ratio if route == "ratio" else tacnode_gap_direct
        res = fn(spec, params, m0=m0, tol=tol, force_sigma=force_sigma)
        return {"sigma": sigma, "F_tac": res.real, "err": res.err_estimate,
                **_diag(res)}
    rows = _map_rows(worker, [0])
    rows[0].setdefault("sigma", sigma)
    return ["sigma", "F_tac", "err", "error"], rows


def run_scan_pearcey_airy(tau, lo, hi, n, m0=60, tol=1e-8):
    grid = np.linspace(lo, hi, n)
    f2 = {float(v): tracy_widom_F2(v, m0=max(40, m0 // 2), tol=tol).real
          for v in grid}

    @_guarded
    def worker(pair):
        rho, sig = pair
        a, b = pearcey_airy_endpoints(tau, rho, sig)
        res = pearcey_gap(PearceyParams(tau=tau, endpoints=(a, b)),
                          m0=m0, tol=tol)
        ref = f2[sig] * f2[rho]
        return {"rho": rho, "sigma": sig, "F_P": res.real, "F2F2": ref,
                "reldiff": 1.0 - res.real / ref, "err": res.err_estimate,
                **_diag(res)}
    pairs = [(float(r), float(s)) for r in grid for s in grid]
    rows = _map_rows(worker, pairs)
    for (rho, sig), row in zip(pairs, rows):
        row.setdefault("rho", rho)
        row.setdefault("sigma", sig)
    return ["rho", "sigma", "F_P", "F2F2", "reldiff", "err", "error"], rows


def run_scan_tacnode_pearcey(sigmas, a_p, b_p, taus_p, branch=1.0, m0=40,
                             tol=1e-8, force_sigma=False):
    """Tacnode rows converging to a Pearcey gap as sigma drops.

    With one Pearcey time the reference F_P is computed once and a
    relative-difference column is emitted.  With several times no Pearcey
    reference exists here, so the discrepancy column reports the relative
    change from the previous row instead (a convergence indicator).
    """
    multi = len(taus_p) > 1
    f_p = None
    if not multi:
        f_p = pearcey_gap(PearceyParams(tau=taus_p[0], endpoints=(a_p, b_p)),
                          m0=max(60, m0), tol=tol).real

    @_guarded
    def worker(sigma):
        scale, taus = tacnode_pearcey_times(sigma, taus_p, branch)
        per_time = [[(a_p / scale, b_p / scale)] for _ in taus]
        res = tacnode_gap_ratio(GapSpec(per_time=per_time),
                                TacnodeParams(sigma=sigma, times=taus),
                                m0=m0, tol=tol, force_sigma=force_sigma)
        return {"sigma": sigma, "F_tac": res.real, "err": res.err_estimate,
                **_diag(res)}
    rows = _map_rows(worker, [float(s) for s in sigmas])
    prev = None
    for sigma, row in zip(sigmas, rows):
        row.setdefault("sigma", float(sigma))
        if "error" in row:
            prev = None
            continue
        if multi:
            if prev is not None:
                row["reldisc"] = abs(row["F_tac"] - prev) / abs(row["F_tac"])
            prev = row["F_tac"]
        else:
            row["F_P"] = f_p
            row["reldiff"] = 1.0 - row["F_tac"] / f_p
    cols = ["sigma", "F_tac", "reldisc"] if multi \
        else ["sigma", "F_tac", "F_P", "reldiff"]
    return cols + ["err", "error"], rows


def run_scan_tacnode_airy(a, b, mode, lo, hi, n, fixed=None, one_sided=False,
                          m0=40, tol=1e-8, force_sigma=False):
    """Tacnode rows approaching Airy laws for growing sigma or |tau|.

    Two-sided (default): gap [a - s - t^2, -b + s + t^2] against
    F2(a) F2(b).  One-sided: gap [a - s - t^2, b - s - t^2] against the
    Airy gap probability on [a, b].  A degenerate gap set gives the exact
    row F_tac = 1.
    """
    if fixed is None:
        fixed = 0.0 if mode == "sigma-sweep" else 1.0
    if one_sided:
        ref = airy_gap([(a, b)], m0=m0, tol=tol).real
    else:
        ref = (tracy_widom_F2(a, m0=m0, tol=tol).real
               * tracy_widom_F2(b, m0=m0, tol=tol).real)

    @_guarded
    def worker(param):
        sigma, tau = (param, fixed) if mode == "sigma-sweep" \
            else (fixed, param)
        shift = sigma + tau * tau
        if one_sided:
            gap_lo, gap_hi = a - shift, b - shift
        else:
            gap_lo, gap_hi = a - shift, -b + shift
        per_time = [[(gap_lo, gap_hi)]] if gap_lo < gap_hi else [[]]
        res = tacnode_gap_ratio(GapSpec(per_time=per_time),
                                TacnodeParams(sigma=sigma, times=(tau,)),
                                m0=m0, tol=tol, force_sigma=force_sigma)
        return {"param": param, "F_tac": res.real, "F2F2": ref,
                "reldiff": 1.0 - res.real / ref, "err": res.err_estimate,
                **_diag(res)}
    grid = [float(p) for p in np.linspace(lo, hi, n)]
    rows = _map_rows(worker, grid)
    for param, row in zip(grid, rows):
        row.setdefault("param", param)
    return ["param", "F_tac", "F2F2", "reldiff", "err", "error"], rows


def run_positivity_probe(sigma, tau, n_samples=40, seed=1234, m0=40,
                         m_inner=80):
    """Minors of the formal extended kernel conditioned on an empty edge.

    Conditions the auxiliary-line block on having no points in
    [sigma_tilde, inf), then evaluates 1x1 and 2x2 correlation
    determinants at a fixed cross-block grid plus seeded random points.
    A genuine determinantal kernel would keep every minor nonnegative;
    this one does not, and the probe reports the minimum found.
    """
    params = TacnodeParams(sigma=sigma, times=(tau,))
    base = FormalTacnodeKernel(params, m_inner=m_inner)
    ck = ConditionedKernel(base, DomainComponent.ray(params.sigma_tilde),
                           gauss_legendre(2 * m0), a_block=0)
    pts = [(blk, float(x)) for blk in (0, 1)
           for x in np.linspace(-3.0, 1.0, 5)]
    rng = np.random.default_rng(seed)
    for _ in range(n_samples):
        pts.append((int(rng.integers(0, 2)),
                    float(rng.uniform(-4.0, 2.0))))
    items = [(p,) for p in pts]
    items += [(p, q) for i, p in enumerate(pts) for q in pts[i + 1:]]

    @_guarded
    def worker(item):
        if len(item) == 1:
            (b1, x1), = item
            val = ck.value(b1, x1, b1, x1)
            return {"kind": "point", "b1": b1, "x1": x1,
                    "b2": b1, "x2": x1, "det": val}
        (b1, x1), (b2, x2) = item
        k11 = ck.value(b1, x1, b1, x1)
        k22 = ck.value(b2, x2, b2, x2)
        k12 = ck.value(b1, x1, b2, x2)
        k21 = ck.value(b2, x2, b1, x1)
        return {"kind": "pair", "b1": b1, "x1": x1, "b2": b2, "x2": x2,
                "det": k11 * k22 - k12 * k21}
    rows = _map_rows(worker, items)
    dets = [row["det"] for row in rows if "det" in row]
    min_det = min(dets) if dets else math.nan
    return (["kind", "b1", "x1", "b2", "x2", "det", "error"], rows,
            min_det, bool(dets) and min_det < 0.0)


# ---------------------------------------------------------------------------
# Argument parsing and dispatch

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write("error: %s\n" % message)
        raise SystemExit(3)


def _common(sub, m0_default):
    sub.add_argument("--m0", type=int, default=m0_default,
                     help="starting nodes per component")
    sub.add_argument("--tol", type=float, default=1e-8,
                     help="convergence tolerance")
    sub.add_argument("--json", action="store_true",
                     help="emit JSON with per-row diagnostics")
    sub.add_argument("--out", default=None, help="write output to a file")


def build_parser():
    top = _Parser(prog="gapdet",
                  description="Gap probabilities of the Airy, Pearcey and "
                              "tacnode processes.")
    top.add_argument("--version", action="version",
                     version="gapdet " + __version__)
    subs = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = subs.add_parser("tw", help="Tracy-Widom F2 over an s grid")
    p.add_argument("--s-min", type=float, default=-8.0)
    p.add_argument("--s-max", type=float, default=4.0)
    p.add_argument("--steps", type=int, default=12,
                   help="number of grid intervals (rows = steps + 1)")
    _common(p, 40)

    p = subs.add_parser("pearcey", help="one Pearcey gap probability")
    p.add_argument("--tau", type=float, default=0.0)
    p.add_argument("--endpoints", type=float, nargs="*", default=[-1.0, 1.0],
                   help="sorted gap endpoints, an even count")
    _common(p, 60)

    p = subs.add_parser("tacnode", help="one tacnode gap probability")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--times", type=float, nargs="+", default=[0.0])
    p.add_argument("--intervals", default="",
                   help="per-time groups 'a:b[:z],...;...' (';' splits times)")
    p.add_argument("--route", choices=("ratio", "direct"), default="ratio")
    p.add_argument("--force-sigma", action="store_true",
                   help="override the |sigma| stability window")
    _common(p, 40)

    p = subs.add_parser("scan-pearcey-airy",
                        help="Pearcey gaps against products of two F2")
    p.add_argument("--tau", type=float, default=5.314)
    p.add_argument("--lo", type=float, default=-3.0)
    p.add_argument("--hi", type=float, default=1.0)
    p.add_argument("--n", type=int, default=5, help="grid points per axis")
    _common(p, 60)

    p = subs.add_parser("scan-tacnode-pearcey",
                        help="tacnode gaps against a Pearcey gap")
    p.add_argument("--sigmas", type=float, nargs="+",
                   default=[-3.0, -5.0, -7.0, -9.0])
    p.add_argument("--a-p", type=float, default=-1.0)
    p.add_argument("--b-p", type=float, default=1.0)
    p.add_argument("--tau-p", type=float, nargs="+", default=[0.0])
    p.add_argument("--branch", choices=("plus", "minus"), default="plus",
                   help="sign of the leading term of the time map")
    p.add_argument("--force-sigma", action="store_true")
    _common(p, 40)

    p = subs.add_parser("scan-tacnode-airy",
                        help="tacnode gaps against Airy laws")
    p.add_argument("--a", type=float, default=-0.3)
    p.add_argument("--b", type=float, default=0.5)
    p.add_argument("--mode", choices=("sigma-sweep", "tau-sweep"),
                   default="sigma-sweep")
    p.add_argument("--lo", type=float, default=1.0)
    p.add_argument("--hi", type=float, default=5.0)
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--fixed", type=float, default=None,
                   help="the non-swept parameter (tau or sigma)")
    p.add_argument("--one-sided", action="store_true",
                   help="translate the gap instead of stretching it")
    p.add_argument("--force-sigma", action="store_true")
    _common(p, 40)

    p = subs.add_parser("positivity-probe",
                        help="search for negative minors of the formal "
                             "extended kernel")
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--tau", type=float, default=0.0)
    p.add_argument("--n-samples", type=int, default=40)
    p.add_argument("--seed", type=int, default=1234)
    p.add_argument("--m-inner", type=int, default=80)
    _common(p, 40)
    return top


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "tw":
            meta = _meta(args, "tw", ["s-min", "s-max", "steps", "m0", "tol"])
            cols, rows = run_tw(args.s_min, args.s_max, args.steps,
                                m0=args.m0, tol=args.tol)
        elif args.command == "pearcey":
            if len(args.endpoints) % 2:
                sys.stderr.write("error: endpoint count must be even\n")
                raise SystemExit(3)
            meta = _meta(args, "pearcey", ["tau", "endpoints", "m0", "tol"])
            cols, rows = run_pearcey(args.tau, args.endpoints,
                                     m0=args.m0, tol=args.tol)
        elif args.command == "tacnode":
            meta = _meta(args, "tacnode",
                         ["sigma", "times", "intervals", "route",
                          "force-sigma", "m0", "tol"])
            try:
                ivs = _parse_intervals(args.intervals, len(args.times))
            except ValueError as exc:
                sys.stderr.write("error: %s\n" % exc)
                raise SystemExit(3)
            cols, rows = run_tacnode(args.sigma, args.times, ivs,
                                     route=args.route, m0=args.m0,
                                     tol=args.tol,
                                     force_sigma=args.force_sigma)
        elif args.command == "scan-pearcey-airy":
            meta = _meta(args, "scan-pearcey-airy",
                         ["tau", "lo", "hi", "n", "m0", "tol"])
            cols, rows = run_scan_pearcey_airy(args.tau, args.lo, args.hi,
                                               args.n, m0=args.m0,
                                               tol=args.tol)
        elif args.command == "scan-tacnode-pearcey":
            meta = _meta(args, "scan-tacnode-pearcey",
                         ["sigmas", "a-p", "b-p", "tau-p", "branch",
                          "force-sigma", "m0", "tol"])
            branch = 1.0 if args.branch == "plus" else -1.0
            cols, rows = run_scan_tacnode_pearcey(
                args.sigmas, args.a_p, args.b_p, args.tau_p, branch=branch,
                m0=args.m0, tol=args.tol, force_sigma=args.force_sigma)
        elif args.command == "scan-tacnode-airy":
            meta = _meta(args, "scan-tacnode-airy",
                         ["a", "b", "mode", "lo", "hi", "n", "fixed",
                          "one-sided", "force-sigma", "m0", "tol"])
            cols, rows = run_scan_tacnode_airy(
                args.a, args.b, args.mode, args.lo, args.hi, args.n,
                fixed=args.fixed, one_sided=args.one_sided, m0=args.m0,
                tol=args.tol, force_sigma=args.force_sigma)
        else:
            meta = _meta(args, "positivity-probe",
                         ["sigma", "tau", "n-samples", "seed", "m-inner",
                          "m0"])
            cols, rows, min_det, found = run_positivity_probe(
                args.sigma, args.tau, n_samples=args.n_samples,
                seed=args.seed, m0=args.m0, m_inner=args.m_inner)
            meta += " | min_det %s negative_found %s" % (_fmt(min_det),
                                                         found)
            status = _emit(args, meta, cols, rows)
            if status:
                return status
            return 0 if found else 1
    except GapdetError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2
    return _emit(args, meta, cols, rows)


if __name__ == "__main__":
    sys.exit(main())
