"""Command-line interface: ``icehankel <subcommand> [flags]``.

Numbers are written as decimal strings, never binary floats, and every row
carries a ``digits`` field with the number of digits that were certified.
Exit codes: 0 ok, 1 computation error, 2 usage error, 3 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from importlib import metadata

import mpmath as mp
import numpy as np

from . import asm_exact, asymptotics, enumerator, equilibrium, hankel, verify
from .errors import CapExceeded, IceHankelError, PhaseError
from .params import ModelParams, make_params, weights_of
from .precision import adaptive_precision, scaled, start_bits_for

__all__ = ["RunConfig", "UsageError", "parse_args", "run", "main"]

log = logging.getLogger("icehankel")

EXIT_OK, EXIT_COMPUTE, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2, 3
DOUBLE_DIGITS = 15
COMMANDS = ("partition", "recurrence", "enumerate", "asymptotics", "equilibrium", "asm", "fit-kappa", "verify")
NEEDS_PARAMS = {"partition", "recurrence", "asymptotics", "equilibrium", "fit-kappa"}


class UsageError(Exception):
    """Bad command line; maps to exit code 2."""


@dataclass
class RunConfig:
    command: str
    gamma: str | None = None
    t: str = "0"
    n: int | None = None
    n_max: int | None = None
    bits: int | None = None
    digits: int = 30
    format: str = "csv"
    out: str | None = None
    cap: int = enumerator.DEFAULT_CAP
    tol: float | None = None
    threads: int = 1
    criteria: list = field(default_factory=list)
    params: ModelParams | None = None


def _default_digits() -> int:
    raw = os.environ.get("ICEHANKEL_DEFAULT_DIGITS", "30")
    try:
        d = int(raw)
    except ValueError:
        raise UsageError(f"ICEHANKEL_DEFAULT_DIGITS={raw!r} is not an integer") from None
    if d < 1:
        raise UsageError("ICEHANKEL_DEFAULT_DIGITS must be positive")
    return d


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive(name):
    def conv(s):
        try:
            v = int(s)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer, got {s!r}") from None
        if v < 1:
            raise argparse.ArgumentTypeError(f"{name} must be >= 1, got {v}")
        return v
    return conv


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--gamma", help="crossing angle: decimal or pi/3, pi/4, pi/6 ...")
    common.add_argument("--t", default="0", help="field angle t (default 0)")
    common.add_argument("--n", type=_positive("--n"))
    common.add_argument("--n-max", dest="n_max", type=_positive("--n-max"))
    common.add_argument("--bits", type=_positive("--bits"), help="starting binary precision")
    common.add_argument("--digits", type=_positive("--digits"), help="target certified digits")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--cap", type=_positive("--cap"), default=enumerator.DEFAULT_CAP)
    common.add_argument("--tol", type=float, help="pass/fail threshold where a subcommand has one")
    common.add_argument("--threads", type=_positive("--threads"), default=1)

    parser = _Parser(prog="icehankel", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "verify":
            sp.add_argument("criteria", nargs="*", type=int, help="criterion numbers (default all)")
    return parser


def parse_args(argv) -> RunConfig:
    """Parse and validate; raises :class:`UsageError` naming the offending flag."""
    ns = _build_parser().parse_args(list(argv))
    cfg = RunConfig(
        command=ns.command,
        gamma=ns.gamma,
        t=ns.t,
        n=ns.n,
        n_max=ns.n_max,
        bits=ns.bits,
        digits=ns.digits or _default_digits(),
        format=ns.format,
        out=ns.out,
        cap=ns.cap,
        tol=ns.tol,
        threads=ns.threads,
        criteria=list(getattr(ns, "criteria", []) or []),
    )
    if cfg.bits is not None and cfg.bits < 64:
        raise UsageError("--bits must be at least 64")
    if cfg.command in NEEDS_PARAMS:
        if cfg.gamma is None:
            raise UsageError(f"{cfg.command} needs --gamma")
        try:
            cfg.params = make_params(cfg.gamma, cfg.t)
        except (PhaseError, ValueError, TypeError) as exc:
            raise UsageError(f"--gamma/--t: {exc}") from None
    bad = [c for c in cfg.criteria if c not in verify.CRITERIA]
    if bad:
        raise UsageError(f"unknown criteria {bad}; choose from 1..{max(verify.CRITERIA)}")
    return cfg


# ---------------------------------------------------------------------------
# serialization

def _num(x, digits: int) -> str:
    if isinstance(x, (int, Fraction)):
        return str(x)
    if isinstance(x, (float, np.floating)):
        x, digits = mp.mpf(float(x)), min(digits, DOUBLE_DIGITS)
    digits = max(1, int(digits))
    # nstr formats at the context precision, so raise it to cover the digits
    with mp.workprec(int(digits * 3.33) + 16):
        return mp.nstr(x, digits, strip_zeros=False)


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


def _meta(cfg: RunConfig, **extra) -> dict:
    meta = {"command": cfg.command, "version": _version(), "digits": cfg.digits}
    if cfg.params is not None:
        meta["gamma"] = str(cfg.params.gamma_angle)
        meta["t"] = str(cfg.params.t_angle)
    if cfg.bits is not None:
        meta["bits"] = cfg.bits
    meta.update(extra)
    return meta


def _emit(cfg: RunConfig, meta: dict, rows: list) -> None:
    if cfg.format == "json":
        text = json.dumps({"meta": meta, "rows": rows}, indent=2) + "\n"
    else:
        buf = io.StringIO()
        cols = list(rows[0]) if rows else []
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        text = buf.getvalue()
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _pool_map(fn, items, threads: int):
    """Order-preserving map; a process pool when ``threads > 1``."""
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


# ---------------------------------------------------------------------------
# subcommands

def _partition_row(job):
    p, N, digits, start = job

    def at(bits):
        with mp.workprec(bits):
            z = hankel.partition_Z(p, N, bits).value
            F = hankel.free_energy_F(p, N, bits).value
            l = hankel.log_Z_over_N2(p, N, bits).value
            # F_N and N^-2 ln Z_N can vanish (Z_N = 1 on the free-fermion line): compare on an absolute scale
            return [z, scaled(F, 1), scaled(l, 1)]

    cert = adaptive_precision(at, target_digits=digits, start_bits=start or start_bits_for(N))
    d = int(min(digits, cert.digits))
    z, (F, _), (l, _) = cert.value
    return {"N": N, "Z_N": _num(z, d), "F_N": _num(F, d), "lnZ_over_N2": _num(l, d), "digits": d}


def _cmd_partition(cfg: RunConfig) -> int:
    n_max = cfg.n_max or cfg.n or 10
    jobs = [(cfg.params, N, cfg.digits, cfg.bits) for N in range(1, n_max + 1)]
    rows = _pool_map(_partition_row, jobs, cfg.threads)
    _emit(cfg, _meta(cfg, n_max=n_max), rows)
    return EXIT_OK


def _cmd_recurrence(cfg: RunConfig) -> int:
    n_max = cfg.n_max or cfg.n or 20
    if cfg.bits is not None:
        table = hankel.recurrence_table(cfg.params, n_max, cfg.bits)
    else:
        table = hankel.certified_recurrence_table(cfg.params, n_max, target_digits=cfg.digits)
    d = int(min(cfg.digits, table.certificate))
    scan = asymptotics.residual_scan(cfg.params, range(1, n_max + 1), table=table)
    rows = []
    with mp.workprec(table.bits):
        for n in range(n_max + 1):
            row = {"n": n, "h_n": _num(table.h[n], d), "R_n": _num(table.R[n], d), "Q_n": _num(table.Q[n], d)}
            if n >= 1:
                r = scan.rows[n - 1]
                row["predicted_R_n"] = _num(r.predicted, d)
                row["scaled_residual"] = _num(r.scaled, min(d, 10))
            else:
                row["predicted_R_n"] = row["scaled_residual"] = ""
            row["digits"] = d
            rows.append(row)
    _emit(cfg, _meta(cfg, n_max=n_max, bits=table.bits, certificate=round(table.certificate, 1)), rows)
    return EXIT_OK


def _cmd_enumerate(cfg: RunConfig) -> int:
    N = cfg.n or cfg.n_max or 4
    poly = enumerator.weight_polynomial(N, cap=cfg.cap, workers=cfg.threads)
    rows = [{"n_a": na, "n_b": nb, "n_c": nc, "count": k} for (na, nb, nc), k in sorted(poly.items())]
    extra = {"N": N, "asm_count": poly.total, "asm_count_product_formula": asm_exact.asm_count(N)}
    ok = poly.total == asm_exact.asm_count(N)
    if cfg.gamma is not None:
        try:
            p = make_params(cfg.gamma, cfg.t)
        except (PhaseError, ValueError) as exc:
            raise UsageError(f"--gamma/--t: {exc}") from None
        cfg.params = p
        bits = cfg.bits or 512
        w = weights_of(p, bits)
        with mp.workprec(bits):
            ze = enumerator.evaluate_Z(N, w.a, w.b, w.c, bits, cap=cfg.cap).value
            zh = hankel.partition_Z(p, N, bits).value
            rel = abs(zh / ze - 1)
        tol = cfg.tol if cfg.tol is not None else 1e-25
        extra.update(Z_enumerated=_num(ze, cfg.digits), Z_hankel=_num(zh, cfg.digits),
                     relative_difference=_num(rel, 5), tol=tol)
        ok = ok and rel < tol
    extra["agree"] = ok
    _emit(cfg, _meta(cfg, **extra), rows)
    if not ok:
        log.error("enumeration disagrees with the product formula or the Hankel determinant")
        return EXIT_VERIFY
    return EXIT_OK


def _cmd_asymptotics(cfg: RunConfig) -> int:
    bits = cfg.bits or max(asymptotics.DEFAULT_BITS, int(cfg.digits * 3.33) + 32)
    c = asymptotics.asymptotic_constants(cfg.params, bits)
    d = cfg.digits
    rows = [
        {"name": "R", "j": "", "value": _num(c.R.value, d)},
        {"name": "omega", "j": "", "value": _num(c.omega.value, d)},
        {"name": "c", "j": "", "value": _num(c.c.value, d)},
        {"name": "F", "j": "", "value": _num(c.F.value, d)},
        {"name": "f", "j": "", "value": _num(c.f.value, d)},
        {"name": "kappa", "j": "", "value": _num(c.kappa.value, d)},
        {"name": "kappa_exact", "j": "", "value": "" if c.kappa_exact is None else str(c.kappa_exact)},
    ]
    for j, y, kj, cj in c.modes:
        rows.append({"name": "y_j", "j": j, "value": _num(y.value, d)})
        rows.append({"name": "kappa_j", "j": j, "value": _num(kj.value, d)})
        # c_j comes from a double-precision-tolerance quadrature
        rows.append({"name": "c_j", "j": j, "value": _num(cj.value, min(d, 12))})
    for r in rows:
        r["digits"] = min(d, 12) if r["name"] == "c_j" else d
    _emit(cfg, _meta(cfg, bits=bits), rows)
    return EXIT_OK


def _cmd_equilibrium(cfg: RunConfig) -> int:
    p = cfg.params
    eq = equilibrium.endpoints(p)
    n = cfg.n or cfg.n_max or 21
    grid = [eq.alpha + (eq.beta - eq.alpha) * (k + 0.5) / n for k in range(n)]
    grid = [x for x in grid if x != 0]
    left, right = equilibrium.total_mass(p, eq)
    resid = equilibrium.equilibrium_residual(grid, p, eq)
    tol = cfg.tol if cfg.tol is not None else 1e-8
    d = min(cfg.digits, DOUBLE_DIGITS)
    rows = [{"mu": _num(x, d), "rho": _num(equilibrium.density(x, p, eq), d), "digits": d} for x in grid]
    meta = _meta(
        cfg,
        alpha=_num(eq.alpha, d),
        beta=_num(eq.beta, d),
        l=_num(eq.l, d),
        mass=_num(left + right, d),
        mass_right=_num(right, d),
        residual=_num(resid, 5),
        tol=tol,
    )
    meta["digits"] = d
    _emit(cfg, meta, rows)
    return EXIT_OK if resid < tol else EXIT_VERIFY


def _cmd_asm(cfg: RunConfig) -> int:
    n_max = cfg.n_max or cfg.n or 12
    rows = [{"N": N, "A_N": asm_exact.asm_count(N), "A_N_3": asm_exact.asm3_count(N), "digits": "exact"}
            for N in range(1, n_max + 1)]
    rep = asm_exact.asm_asymptotic_check()
    d = min(cfg.digits, 12)
    meta = _meta(
        cfg,
        n_max=n_max,
        coefficient_A=_num(rep.asm.c2, d),
        coefficient_A_target=str(asm_exact.A_COEFF),
        coefficient_A3_even=_num(rep.asm3_even.c2, d),
        coefficient_A3_odd=_num(rep.asm3_odd.c2, d),
        lnC=_num(rep.lnC, cfg.digits),
        lnC_fit=_num(rep.asm.L, d),
        lnC3=_num(rep.lnC3, cfg.digits),
        lnC3_fit_even=_num(rep.asm3_even.L, d),
        lnC3_fit_odd=_num(rep.asm3_odd.L, d),
        ratio_drift=_num(rep.ratio_drift, 5),
    )
    _emit(cfg, meta, rows)
    return EXIT_OK


def _cmd_fit_kappa(cfg: RunConfig) -> int:
    p = cfg.params
    target = asymptotics.kappa_rational(p)
    target_s = str(target) if target is not None else _num(asymptotics.kappa_exponent(p).value, cfg.digits)
    point = None
    if p.t_is_zero and p.gamma_over_pi in (Fraction(1, 3), Fraction(1, 6)):
        point = "asm" if p.gamma_over_pi == Fraction(1, 3) else "asm3"
    if point:
        n_max = cfg.n_max or 2000
        Ns = range(max(10, n_max // 10), n_max + 1, max(1, n_max // 20))
        pts, f = asymptotics.special_point_log_Z(point, Ns)
        source = f"product formula ({point})"
    else:
        n_max = cfg.n_max or 40
        Ns = list(range(max(5, n_max // 2), n_max + 1))
        bits = cfg.bits or start_bits_for(n_max)
        pts = [(N, hankel.partition_Z(p, N, bits).log().value) for N in Ns]
        f = asymptotics.free_energy_limits(p)[1].value
        source = "Hankel determinants"
    slope, intercept = asymptotics.fit_kappa(pts, f)
    rows = [{"slope": _num(slope, 12), "intercept": _num(intercept, 12), "target_kappa": target_s,
             "digits": 12}]
    _emit(cfg, _meta(cfg, source=source, N_min=min(N for N, _ in pts), N_max=max(N for N, _ in pts)), rows)
    return EXIT_OK


def _subcheck_row(s: verify.SubCheck) -> dict:
    row = asdict(s)
    for k in ("value", "tol"):
        if isinstance(row[k], float):
            row[k] = f"{row[k]:.6e}"
    return row


def _cmd_verify(cfg: RunConfig) -> int:
    results = verify.run_all(cfg.criteria or None, workers=cfg.threads)
    for r in results:
        log.info("criterion %d took %.1f s", r.number, r.seconds)
    if cfg.format == "json" or cfg.out:
        rows = [
            {"criterion": r.number, "name": r.name, "passed": r.passed, "detail": r.detail,
             "subchecks": [_subcheck_row(s) for s in r.subchecks]}
            for r in results
        ]
        if cfg.format == "csv":
            rows = [{k: v for k, v in row.items() if k != "subchecks"} for row in rows]
        _emit(cfg, _meta(cfg, passed=all(r.passed for r in results)), rows)
    else:
        for r in results:
            print(verify.format_result(r, verbose=True, timing=False))
    failed = [r.number for r in results if not r.passed]
    if failed:
        log.error("failed criteria: %s", ", ".join(map(str, failed)))
        return EXIT_VERIFY
    return EXIT_OK


DISPATCH = {
    "partition": _cmd_partition,
    "recurrence": _cmd_recurrence,
    "enumerate": _cmd_enumerate,
    "asymptotics": _cmd_asymptotics,
    "equilibrium": _cmd_equilibrium,
    "asm": _cmd_asm,
    "fit-kappa": _cmd_fit_kappa,
    "verify": _cmd_verify,
}


def run(cfg: RunConfig) -> int:
    """Dispatch a parsed config and map failures to exit codes."""
    try:
        return DISPATCH[cfg.command](cfg)
    except (UsageError, CapExceeded) as exc:
        log.error("usage: %s", exc)
        return EXIT_USAGE
    except (IceHankelError, ArithmeticError, ValueError) as exc:
        log.error("%s failed: %s: %s", cfg.command, type(exc).__name__, exc)
        return EXIT_COMPUTE


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = parse_args(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(f"icehankel: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(cfg)
