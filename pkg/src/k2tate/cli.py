"""Command-line driver: ``python -m k2tate <command> ...`` or ``k2tate <command> ...``.

Exit status is 0 on success, 2 on invalid input and 1 on an internal failure.
With ``--json`` every command prints one object with the keys ``command``,
``params``, ``result`` and ``precision``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import fourier, hecke, seriesfile, surface, tate, theta_symbols, zeta_count
from .rings import QQ, NotInvertibleError, build_unramified, zmod
from .series import LaurentSeries, SeriesUnit

THREADS_ENV = "K2TATE_THREADS"


class UsageError(ValueError):
    """Invalid parameters; reported with exit status 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# formatting


def format_terms(f: LaurentSeries, count: int | None = None) -> str:
    """``q^-1 + 744 + 196884 q``: the first ``count`` exponents from the valuation."""
    R = f.ring
    start = f.valuation() if not f.is_zero() else f.lo
    stop = f.prec if count is None else min(f.prec, start + count)
    out = ""
    for k in range(start, stop):
        c = f[k]
        if R.is_zero(c):
            continue
        cs = R.fmt(c)
        neg = cs.startswith("-")
        if neg:
            cs = cs[1:]
        mono = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
        term = cs if not mono else (mono if cs == "1" else f"{cs} {mono}")
        if not out:
            out = ("-" if neg else "") + term
        else:
            out += (" - " if neg else " + ") + term
    return out or "0"


def _coeff_json(c):
    if isinstance(c, tuple):
        return [_coeff_json(x) for x in c]
    if isinstance(c, Fraction):
        return str(c) if c.denominator != 1 else c.numerator
    return c


def series_json(f: LaurentSeries) -> dict:
    return {"ring": f.ring.name, "lo": f.lo, "prec": f.prec,
            "coeffs": [_coeff_json(c) for c in f.coeffs]}


def unit_json(h: SeriesUnit) -> dict:
    return {"order": h.order, "unit_part": series_json(h.unit_part)}


class Output:
    def __init__(self, command: str, params: dict, as_json: bool, stream=None):
        self.command, self.params, self.as_json = command, params, as_json
        self.stream = stream or sys.stdout

    def emit(self, result, precision: dict, text: str):
        if self.as_json:
            obj = {"command": self.command, "params": self.params,
                   "result": result, "precision": precision}
            self.stream.write(json.dumps(obj, sort_keys=True) + "\n")
        else:
            self.stream.write(text.rstrip("\n") + "\n")


def _header(**kw) -> str:
    return "# " + " ".join(f"{k}={v}" for k, v in kw.items())


# ---------------------------------------------------------------------------
# commands


def cmd_tate(args, out: Output):
    if args.prec < 1:
        raise UsageError("--prec must be positive")
    which = args.which
    if which == "j":
        f = tate.j_series(args.prec)
    else:
        exp = tate.tate_coefficients(args.prec + 2)
        f = getattr(exp, which)
    text = format_terms(f, args.prec)
    out.emit({"series": series_json(f), "text": text}, {"terms": args.prec}, text)


def _parse_coeff(x):
    if isinstance(x, bool):
        raise UsageError("booleans are not coefficients")
    if isinstance(x, (int, str)):
        try:
            return Fraction(x)
        except ValueError:
            raise UsageError(f"bad coefficient {x!r}") from None
    raise UsageError(f"bad coefficient {x!r}")


def _series_from_spec(spec, ring, N):
    """A number, or a list of ``[coefficient, exponent]`` pairs."""
    if isinstance(spec, list):
        terms = spec
    else:
        terms = [[spec, 0]]
    lo = min([int(e) for _, e in terms] + [0])
    coeffs = [ring.zero] * (N - lo)
    for c, e in terms:
        if not isinstance(e, int) or e >= N:
            raise UsageError(f"exponent {e!r} must be an integer below prec {N}")
        coeffs[e - lo] = ring.add(coeffs[e - lo], ring.from_rational(_parse_coeff(c)))
    return LaurentSeries(ring, coeffs, lo, N)


def _function_from_spec(spec, ring, N, period):
    if not isinstance(spec, dict):
        raise UsageError("each function must be a JSON object")
    kind = spec.get("kind", "theta")
    const = _series_from_spec(spec.get("const", 1), ring, N)
    if kind == "theta":
        prod = theta_symbols.CanonicalProduct(const, int(spec.get("u_power", 0)))
        for alpha, e in spec.get("theta", []):
            t = theta_symbols.canonical_of_theta(_series_from_spec(alpha, ring, N), N, period, ring)
            prod = prod * (t ** int(e))
        return prod
    if kind == "rational":
        roots = [(_series_from_spec(a, ring, N), int(e)) for a, e in spec.get("roots", [])]
        return theta_symbols.canonical_of_rational(const, roots, N, ring)
    raise UsageError(f"unknown function kind {kind!r}")


def _ring_from_spec(spec):
    r = spec.get("ring", "QQ")
    if r == "QQ":
        return QQ
    if isinstance(r, dict) and "p" in r and "nu" in r:
        return zmod(int(r["p"]), int(r["nu"]))
    raise UsageError('ring must be "QQ" or {"p": P, "nu": NU}')


def cmd_pair(args, out: Output):
    try:
        with open(args.spec) as fh:
            spec = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {args.spec}: {exc}") from None
    ring = _ring_from_spec(spec)
    N = int(spec.get("prec", 10))
    period = int(spec.get("period", 1))
    if N < 1 or period < 1:
        raise UsageError("prec and period must be positive")
    if "f" not in spec or "g" not in spec:
        raise UsageError("spec needs functions f and g")
    f = _function_from_spec(spec["f"], ring, N, period)
    g = _function_from_spec(spec["g"], ring, N, period)
    v = theta_symbols.pair(f, g, N)
    text = "\n".join([_header(ring=ring.name, prec=N, period=period),
                      f"order {v.order}", f"unit {v.unit_part}"])
    out.emit(unit_json(v), {"N": N, "period": period}, text)


def cmd_eisenstein(args, out: Output):
    try:
        a, b, c = (int(x) for x in args.abc.split(","))
    except ValueError:
        raise UsageError("--abc takes three comma-separated integers") from None
    if not 0 < a < b < c:
        raise UsageError("need 0 < a < b < c")
    if args.prec < 1:
        raise UsageError("--prec must be positive")
    v = theta_symbols.eisenstein_value(a, b, c, args.prec)
    result = {"value": unit_json(v)}
    lines = [_header(a=a, b=b, c=c, prec=args.prec), f"order {v.order}", f"unit {v.unit_part}"]
    if args.check:
        sym = theta_symbols.eisenstein_symbol(a, b, c, args.prec)
        w = theta_symbols.tau_infinity(sym, args.prec)
        same = w.order == v.order and w.unit_part.agrees(v.unit_part)
        flipped = w.order == v.order and w.unit_part.agrees(-v.unit_part)
        result["pairing"] = unit_json(w)
        result["agrees"] = same
        result["agrees_up_to_sign"] = same or flipped
        lines.append(f"pairing agrees {same}" + ("" if same else f" (up to sign {flipped})"))
    out.emit(result, {"N": args.prec}, "\n".join(lines))


def _load_series(args):
    try:
        with open(args.input) as fh:
            sf = seriesfile.parse(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from None
    except seriesfile.SeriesFormatError as exc:
        raise UsageError(str(exc)) from None
    if sf.p != args.p:
        raise UsageError(f"--p {args.p} disagrees with the file header p {sf.p}")
    ring, basis = build_unramified(args.p, args.root_order, sf.nu)
    try:
        return seriesfile.to_series(sf, ring), basis
    except seriesfile.SeriesFormatError as exc:
        raise UsageError(str(exc)) from None


def cmd_phi(args, out: Output):
    f, basis = _load_series(args)
    dec = fourier.decompose(f, basis)
    prec = {"N": dec.prec, "nu": dec.nu}
    if args.which == "decompose":
        a = {str(k): v for k, v in sorted(dec.a.items())}
        back = seriesfile.dumps(fourier.resum(dec))
        lines = [_header(p=dec.p, nu=dec.nu, root_order=basis.ring.root_order, prec=dec.prec),
                 "# k  a_k^(i) for basis exponents " + " ".join(map(str, basis.exponents))]
        lines += [f"{k} " + " ".join(map(str, v)) for k, v in sorted(dec.a.items())]
        out.emit({"basis_exponents": list(basis.exponents), "a": a,
                  "principal": {str(k): _coeff_json(c) for k, c in dec.principal.items()},
                  "resummed": back}, prec, "\n".join(lines))
        return
    K = dec.prec - 1 if args.kmax is None else args.kmax
    if K < 1 or K > dec.prec - 1:
        raise UsageError(f"--kmax must lie in 1..{dec.prec - 1}")
    phi = fourier.phi_mu(dec, K)
    nz = {k: v for k, v in phi.nonzero().items() if any(v)}
    prec["K_max"] = K
    lines = [_header(p=dec.p, nu=dec.nu, K_max=K), f"in_kernel {phi.is_zero()}"]
    lines += [f"{k} mod {phi.entries[k][0]}: " + " ".join(map(str, v)) for k, v in sorted(nz.items())]
    out.emit({"in_kernel": phi.is_zero(),
              "nonzero": {str(k): {"modulus": phi.entries[k][0], "values": v}
                          for k, v in sorted(nz.items())}}, prec, "\n".join(lines))


def _surface_config(args):
    try:
        ok, reason = zeta_count.admissible_prime(args.n, args.p)
    except ValueError:
        ok, reason = None, "n outside the tabulated set"
    kmax = getattr(args, "kmax", None)
    try:
        cfg = surface.SurfaceConfig(args.n, args.p, nu=args.nu, K_max=kmax)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return cfg, ok, reason


def _letters(d):
    return [chr(ord("a") + s) if d <= 26 else f"c{s}" for s in range(d)]


def _render_table(label: str, row_labels, rows, ks, d, per_block=2) -> list[str]:
    names = _letters(d)
    lines = []
    for start in range(0, len(ks), per_block):
        block = ks[start:start + per_block]
        cells = [[label] + [f"{nm}_{k}" for k in block for nm in names]]
        for lab, vals in zip(row_labels, rows):
            cells.append([str(lab)] + [str(x) for k in block for x in vals[k]])
        width = max(len(c) for row in cells for c in row)
        for r, row in enumerate(cells):
            parts = [row[0].rjust(len(label))]
            for j in range(len(block)):
                seg = row[1 + j * d: 1 + (j + 1) * d]
                parts.append(" ".join(c.rjust(width) for c in seg))
            lines.append(" | ".join(parts))
            if r == 0:
                lines.append("-" * len(lines[-1]))
        lines.append("")
    return lines


def cmd_surface(args, out: Output):
    cfg, ok, reason = _surface_config(args)
    prec = {"nu": cfg.nu, "K_max": cfg.K_max, "N": cfg.N}
    head = _header(n=cfg.n, p=cfg.p, nu=cfg.nu, K_max=cfg.K_max, N=cfg.N,
                   root_order=cfg.ring.root_order)
    if args.which == "table":
        cusp = args.cusp
        if not 1 <= cusp <= cfg.n:
            raise UsageError(f"--cusp must lie in 1..{cfg.n}")
        n = cfg.n
        order = list(range(1, n)) + [0]
        cusp_gens = [surface.FormGenerator.cusp((cusp + s - 1) % n + 1) for s in order]
        ftab = surface.phi_table(cfg, cusp, cusp_gens)
        gtab = surface.zeta_multiple_rows(cfg, cusp)
        d = cfg.ring.degree
        lines = [head + f" cusp={cusp} modulus={ftab.modulus}",
                 "# basis exponents " + " ".join(map(str, cfg.basis.exponents)),
                 "# rows b-i: the form dt/(t - zeta_n^b) dX/Y at cusp i", ""]
        lines += _render_table("b-i", order, [v for _, v in ftab.rows], ftab.ks, d)
        lines += [f"# rows r: zeta^r E4^(1/4) q dt/dq", ""]
        lines += _render_table("r", [g.e for g, _ in gtab.rows], [v for _, v in gtab.rows],
                               gtab.ks, d)
        result = {"f_table": {"row_labels": order, **ftab.as_dict()},
                  "g_table": {"row_labels": [g.e for g, _ in gtab.rows], **gtab.as_dict()},
                  "admissible": ok}
        out.emit(result, prec, "\n".join(lines))
        return
    cusps = args.cusp_list or [1]
    for i in cusps:
        if not 1 <= i <= cfg.n:
            raise UsageError(f"cusps must lie in 1..{cfg.n}")
    rb = surface.rank_bound(cfg, cusps, workers=args.threads)
    diag = dict(rb.diagnostics)
    diag["bound_by_K"] = {str(k): v for k, v in diag["bound_by_K"].items()}
    lines = [head, f"cusps {' '.join(map(str, cusps))}",
             f"admissible {ok}" + (f" ({reason})" if reason else ""),
             f"upper_bound {rb.upper}", f"lower_bound {rb.lower}",
             "bound_by_K " + " ".join(f"{k}:{v}" for k, v in diag["bound_by_K"].items())]
    out.emit({"upper_bound": rb.upper, "lower_bound": rb.lower, "admissible": ok,
              "diagnostics": diag}, prec, "\n".join(lines))


def cmd_zeta(args, out: Output):
    if args.which == "count":
        if args.m < 1:
            raise UsageError("--m must be positive")
        r = zeta_count.count_surface(args.n, args.l, args.m)
        weil = abs(r.power_sum) <= zeta_count.betti(args.n) * args.l ** args.m
        lines = [_header(n=args.n, l=args.l, m=args.m),
                 f"nu_affine {r.nu_affine}", f"nu_surface {r.nu_surface}",
                 f"power_sum {r.power_sum}", f"weil_bound_ok {weil}"]
        out.emit({**r.as_dict(), "weil_bound_ok": weil}, {}, "\n".join(lines))
    elif args.which == "admissible":
        ok, reason = zeta_count.admissible_prime(args.n, args.p)
        out.emit({"admissible": ok, "reason": reason}, {},
                 f"{str(ok).lower()}  ({reason})")
    else:
        r = zeta_count.newton_eigen_check(args.n, args.l, args.sign)
        d = r.as_dict()
        lines = [_header(n=args.n, l=args.l, sign=args.sign, B=r.B)]
        lines += [f"{k} {v}" for k, v in d.items() if k not in ("n", "l", "sign", "B")]
        out.emit(d, {}, "\n".join(lines))


def _hecke_input(path):
    try:
        with open(path) as fh:
            spec = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    try:
        N, k = int(spec["level"]), int(spec["weight"])
        ring = hecke.cyclotomic_integers(int(spec.get("root_order", 1)))
        ch = spec.get("character")
        if ch is None:
            chi = hecke.trivial_character(N, ring)
        else:
            chi = hecke.cyclic_character(N, int(ch["generator"]), ring.coerce(
                tuple(ch["value"]) if isinstance(ch["value"], list) else ch["value"]), ring)
        coeffs = [tuple(c) if isinstance(c, list) else c for c in spec["coeffs"]]
        return hecke.QExpansion(N, k, chi, coeffs)
    except KeyError as exc:
        raise UsageError(f"missing field {exc}") from None


def cmd_hecke(args, out: Output):
    f = _hecke_input(args.input)
    g = hecke.hecke_T(f, args.m)
    R = g.ring
    lines = [_header(level=g.level, weight=g.weight, m=args.m, bound=g.bound)]
    lines += [f"{n} {R.fmt(c)}" for n, c in enumerate(g.coeffs)]
    out.emit({"coeffs": [_coeff_json(c) for c in g.coeffs], "bound": g.bound},
             {"input_bound": f.bound, "output_bound": g.bound}, "\n".join(lines))


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit one JSON object")
    common.add_argument("--threads", type=int, default=None,
                        help=f"worker cap (default: ${THREADS_ENV} or 1)")
    p = _Parser(prog="k2tate", description="K2 of Tate curves and elliptic surfaces")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    t = sub.add_parser("tate", parents=[common], help="Tate curve q-expansions")
    t.add_argument("which", choices=["j", "a4", "a6"])
    t.add_argument("--prec", type=int, default=10, help="number of terms")
    t.set_defaults(func=cmd_tate)

    pr = sub.add_parser("pair", parents=[common], help="pairing of two theta products")
    pr.add_argument("--spec", required=True)
    pr.set_defaults(func=cmd_pair)

    e = sub.add_parser("eisenstein", parents=[common], help="Eisenstein symbol value")
    e.add_argument("--abc", required=True)
    e.add_argument("--prec", type=int, default=20)
    e.add_argument("--check", action="store_true", help="compare with the pairing of the symbol")
    e.set_defaults(func=cmd_eisenstein)

    ph = sub.add_parser("phi", parents=[common], help="Fourier decomposition and phi")
    ph.add_argument("which", choices=["decompose", "kernel"])
    ph.add_argument("--input", required=True)
    ph.add_argument("--p", type=int, required=True)
    ph.add_argument("--root-order", type=int, required=True)
    ph.add_argument("--kmax", type=int, default=None)
    ph.set_defaults(func=cmd_phi)

    s = sub.add_parser("surface", parents=[common], help="the family Y^2 = X^3 + X^2 + t^n")
    s.add_argument("which", choices=["table", "rank-bound"])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--nu", type=int, default=4)
    s.add_argument("--kmax", type=int, default=None)
    s.add_argument("--cusp", type=int, default=None,
                   help="cusp index (table: one, default 1; rank-bound: repeatable)",
                   action="append", dest="cusp_list")
    s.set_defaults(func=cmd_surface)

    z = sub.add_parser("zeta", parents=[common], help="point counts and eigenvalue checks")
    z.add_argument("which", choices=["count", "admissible", "weil0"])
    z.add_argument("--n", type=int, required=True)
    z.add_argument("--l", type=int)
    z.add_argument("--m", type=int, default=1)
    z.add_argument("--p", type=int)
    z.add_argument("--sign", type=int, choices=[-1, 1])
    z.set_defaults(func=cmd_zeta)

    h = sub.add_parser("hecke", parents=[common], help="Hecke operators on q-expansions")
    h.add_argument("which", choices=["apply"])
    h.add_argument("--m", type=int, required=True)
    h.add_argument("--input", required=True)
    h.set_defaults(func=cmd_hecke)
    return p


def _validate(args):
    if args.threads is None:
        env = os.environ.get(THREADS_ENV, "1")
        try:
            args.threads = int(env)
        except ValueError:
            raise UsageError(f"{THREADS_ENV} must be an integer") from None
    if args.threads < 1:
        raise UsageError("thread count must be positive")
    if args.command == "surface":
        if args.which == "table":
            if args.cusp_list and len(args.cusp_list) > 1:
                raise UsageError("surface table takes a single --cusp")
            args.cusp = (args.cusp_list or [1])[0]
    if args.command == "zeta":
        need = {"count": ["l"], "admissible": ["p"], "weil0": ["l", "sign"]}[args.which]
        for name in need:
            if getattr(args, name) is None:
                raise UsageError(f"zeta {args.which} needs --{name}")


def _params(args) -> dict:
    skip = {"func", "json", "command", "which", "cusp_list"}
    out = {k: v for k, v in vars(args).items() if k not in skip and v is not None}
    if getattr(args, "cusp_list", None):
        out["cusps"] = args.cusp_list
    return out


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        _validate(args)
        name = args.command + (f" {args.which}" if hasattr(args, "which") else "")
        out = Output(name, _params(args), args.json, stdout)
        args.func(args, out)
        return 0
    except UsageError as exc:
        stderr.write(f"error: {exc}\n")
        return 2
    except (ValueError, NotInvertibleError) as exc:
        stderr.write(f"error: {exc}\n")
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except Exception as exc:  # noqa: BLE001
        stderr.write(f"internal error: {type(exc).__name__}: {exc}\n")
        return 1


def main():
    sys.exit(run())
