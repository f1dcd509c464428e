"""perfectoid-lab: named experiments with exact JSON certificates.

    perfectoid-lab witt delta --p 3 --len 4 --x p
    perfectoid-lab torus run --nmax 3 --bound 2 --json
    perfectoid-lab domain cover --interval 0:1 --interval 1:inf --mode sampled

Exit status: 0 pass, 1 verification failure, 2 usage error, 3 precision or
depth exhaustion.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import json
import math
import random
import sys
from fractions import Fraction

from .. import banach, berkovich, cech, char0, verify, witt
from ..cones import Cone
from ..errors import LabError
from ..exact import INF, frac_str, rat_json
from ..oracles import witt_int_value
from .certificate import Certificate, encode
from .config import ConfigError, load_config, parse_rational
from .parser import parse_element, parse_poly


class UsageError(LabError):
    code = "E_USAGE"
    exit_code = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# ---- argument helpers ------------------------------------------------------------

def _rat_or_inf(text):
    text = text.strip()
    return INF if text in ("inf", "oo") else parse_rational(text)


def _interval(text):
    try:
        lo, hi = text.split(":")
    except ValueError:
        raise UsageError(f"interval {text!r} is not lo:hi") from None
    return _rat_or_inf(lo), _rat_or_inf(hi)


def _cone(text):
    if not text:
        return None
    return Cone(tuple(_interval(part) for part in text.split(",")))


def _max_q(src, side):
    return max((q for (q, _), _ in parse_poly(src, side).d.items()), default=Fraction(0))


def _nvars(*srcs):
    """Variables used across several expressions (at least one), so they share a ring."""
    used = 1
    for src in srcs:
        for (_, m), _ in parse_poly(src, "untilt").d.items():
            used = max([used] + [j + 1 for j, x in enumerate(m) if x])
    return used


def _untilt(src, cfg, exact=False, nvars=None):
    """Parse an untilt element; exact=True raises the precision above every written digit."""
    prec = cfg.prec
    if exact:
        prec = max(prec, math.floor(_max_q(src, "untilt")) + 1)
    return parse_element(src, "untilt", cfg.p, prec, cfg.depth, nvars)


def _tilt(src, cfg):
    return parse_element(src, "tilt", cfg.p, None, cfg.depth)


def _integer(src, p):
    """The integer written by an untilt expression without variables or fractional powers."""
    total = 0
    for (q, m), c in parse_poly(src, "untilt").d.items():
        if any(m) or q.denominator != 1 or q < 0:
            raise UsageError(f"{src!r} is not an integer expression")
        total += c * p ** int(q)
    return total


def _domain_parts(text):
    if text.count(";") != 1:
        raise UsageError(f"domain {text!r} is not 'f1,f2;g'")
    nums, den = text.split(";")
    return [s for s in nums.split(",") if s.strip()], den


def _domain(text, cfg, nvars=None):
    nums, den = _domain_parts(text)
    nvars = nvars or _nvars(den, *nums)
    fs = [_untilt(s, cfg, True, nvars) for s in nums]
    return berkovich.RationalDomainSpec(tuple(fs), _untilt(den, cfg, True, nvars))


def _domains_nvars(texts):
    srcs = []
    for t in texts:
        nums, den = _domain_parts(t)
        srcs += nums + [den]
    return _nvars(*srcs)


def _point(args, cfg):
    centers = [c for c in (args.center or "0").split(",")]
    ss = [_rat_or_inf(s) for s in (args.s or "0").split(",")]
    if len(centers) != len(ss):
        raise UsageError("--center and --s need the same number of coordinates")
    cs = [_untilt(c, cfg, True, 1) for c in centers]
    return berkovich.SeminormPoint(cfg.p, tuple(cs), tuple(ss))


def sample_grid(p, seed):
    """Seed 0 gives the standard grid; other seeds add two centers p^(k/p^2)."""
    if not seed:
        return berkovich.GridSpec()
    rng = random.Random(seed)
    extra = sorted({Fraction(rng.randint(1, 2 * p * p), p * p) for _ in range(2)})
    base = (Fraction(0), Fraction(1, p), Fraction(1))
    return berkovich.GridSpec(center_exps=tuple(sorted(set(base) | set(extra))))


def _norm(args):
    kind = args.norm
    if kind == "weighted":
        return banach.NormSpec.weighted()
    cone = _cone(args.cone)
    if kind == "lattice":
        if cone is None:
            raise UsageError("--norm lattice needs --cone")
        return banach.NormSpec.lattice(cone)
    return banach.NormSpec.gauss(cone)


# ---- commands ------------------------------------------------------------------
# each returns (result, provenance, witnesses, ok)

def _witt_elem(base, cfg, N, x, teich):
    v = witt.WittVec.from_int(base, _integer(x, cfg.p), N) if x else witt.WittVec.zero(base, N)
    if teich:
        v = v + witt.WittVec.teichmuller(base, _tilt(teich, cfg), N)
    return v


def _witt_show(v):
    digits = witt.teich_expansion(v)
    out = {"coords": list(v.coords), "teichmuller_digits": digits}
    if isinstance(v.base, witt.FpBase):
        mod = v.p**v.length
        val = witt_int_value(digits, v.p, v.length)
        out["integer"] = {"value": val, "modulus": mod, "balanced": val - mod if 2 * val > mod else val}
    return out


def cmd_witt(args, cfg):
    N = args.len
    if N < 1:
        raise UsageError("--len must be positive")
    tilt = args.teich or getattr(args, "yteich", None) or args.action == "theta"
    base = witt.TiltBase(cfg.p, cfg.depth) if tilt else witt.FpBase(cfg.p)
    x = _witt_elem(base, cfg, N, args.x, args.teich)
    res = {"base": base.descriptor(), "length": N, "x": _witt_show(x)}
    ok = True
    if args.action in ("add", "mul"):
        if not (args.y or args.yteich):
            raise UsageError(f"witt {args.action} needs --y or --yteich")
        y = _witt_elem(base, cfg, N, args.y, args.yteich)
        res["y"] = _witt_show(y)
        res["result"] = _witt_show(witt.witt_arith(x, y, args.action))
    elif args.action == "delta":
        if N < 2:
            raise UsageError("delta needs --len >= 2")
        res["result"] = _witt_show(witt.delta(x))
    elif args.action == "theta":
        res["result"] = witt.theta(x, parse_rational(args.N) if args.N else None)
    elif args.action == "distinguished":
        ans, cert = witt.is_distinguished(x)
        res["distinguished"] = ans
        res["a1"] = cert["a1"]
    return res, "exact", [], ok


def cmd_tilt(args, cfg):
    N = parse_rational(args.N) if getattr(args, "N", None) else cfg.prec
    if args.action == "sharp":
        x = _tilt(args.x, cfg)
        x = x.with_depth(x.depth + math.ceil(N))
        y = char0.sharp(x, N)
        return {"x": x, "N": N, "sharp": y}, "exact", [], True
    x = _untilt(args.x, cfg)
    if args.action == "reduce":
        return {"x": x, "reduction": char0.mod_omega_bridge(x, "reduce")}, "exact", [], True
    y = char0.pth_root_mod_p(x)
    P = min(Fraction(1), x.prec)
    ok = y.exact_pow(cfg.p).eq_at(x, P)
    return {"x": x, "root": y, "root_power_matches_mod_p": ok}, "exact", [], ok


def cmd_norm(args, cfg):
    f = _untilt(args.x, cfg, True, _nvars(args.x))
    n = _norm(args)
    res = {"x": f, "norm_kind": n.describe()}
    if args.action == "eval":
        res["norm"] = banach.norm_eval(f, n)
        return res, "exact", [], True
    if args.action == "rho":
        pts = sample_grid(cfg.p, cfg.sample_seed).points(cfg.p) if f.nvars == 1 else None
        rad = banach.spectral_radius(f, n, args.nmax, pts)
        res["spectral_radius"] = {"lo": rad["lo"], "hi": rad["hi"], "n_at_hi": rad["n_at_hi"]}
        prov = "interval" if rad["provenance"] == "interval" else "exact"
        return res, prov, [], True
    out = banach.is_powerbounded(f, n, args.nmax, args.m_budget)
    res["powerbounded"] = out
    wit = [{"n": out["witness_n"], "norm": out["witness_norm"]}] if "witness_n" in out else []
    return res, "exact", wit, True


def cmd_point(args, cfg):
    x = _point(args, cfg)
    res = {"point": x}
    if args.action == "eval":
        if not args.f:
            raise UsageError("point eval needs --f")
        f = _untilt(args.f, cfg, True, x.nvars)
        res["f"] = f
        v = berkovich.eval_valuation(f, x)
        res["valuation"] = v
        res["norm"] = berkovich.eval_point(f, x)
        # f is known modulo p^prec, so on |T| <= 1 only values below prec are determined
        res["known_modulo"] = {"p_power": f.prec}
        res["determined"] = v < f.prec if not any(f.laurent) else None
        return res, "exact", [], True
    if not args.den:
        raise UsageError("point member needs --den")
    V = _domain(f"{args.num or ''};{args.den}", cfg, x.nvars)
    member, margin = berkovich.in_domain(x, V)
    res.update(domain=str(V), member=member, margin=margin)
    return res, "exact", [], True


def cmd_domain(args, cfg):
    if args.action == "meet":
        if not (args.V and args.W):
            raise UsageError("domain meet needs --V and --W")
        k = _domains_nvars([args.V, args.W])
        V, W = _domain(args.V, cfg, k), _domain(args.W, cfg, k)
        M = berkovich.domain_meet(V, W)
        grid = sample_grid(cfg.p, cfg.sample_seed)
        bad = [x for x in grid.points(cfg.p)
               if berkovich._member_any(M, x) != (berkovich._member_any(V, x) and berkovich._member_any(W, x))]
        res = {"V": str(V), "W": str(W), "meet": str(M), "mismatches": len(bad)}
        return res, {"sampled": grid.describe()}, bad, not bad
    if args.action == "perfect":
        if not args.V:
            raise UsageError("domain perfect needs --V")
        V = _domain(args.V, cfg)
        P = berkovich.perfected_domain(V, sample_grid(cfg.p, cfg.sample_seed))
        res = {"V": str(V), "presentation": P.presentation(), "roots": [repr(r) for r in P.roots],
               "cone": P.cone, "membership_unchanged": P.membership_unchanged,
               "checked_points": P.checked_points}
        return res, "exact", [], P.membership_unchanged
    texts = args.domain or []
    k = _domains_nvars(texts) if texts else 1
    domains = [_domain(d, cfg, k) for d in texts]
    domains += [Cone((iv,)) for iv in (_interval(i) for i in args.interval or [])]
    if not domains:
        raise UsageError("domain cover needs --domain or --interval")
    grid = sample_grid(cfg.p, cfg.sample_seed)
    out = berkovich.cover_check(domains, args.mode, grid, cfg.p)
    wit = []
    if "witness" in out:
        wit.append(out.pop("witness"))
    if "witness_s" in out:
        wit.append({"s": out.pop("witness_s")})
    prov = "exact" if args.mode == "exact" else {"sampled": grid.describe()}
    return out, prov, wit, out["verdict"] != "fail"


def cmd_cech(args, cfg):
    bps = [parse_rational(b) for b in args.pieces.split(",")]
    amb = _cone(args.ambient)
    cover = cech.ToricCover.from_breakpoints(bps, amb)
    cx = cech.build_cech(cover, cfg.prec, cfg.depth, cfg.p)
    rep = cech.cohomology(cx, m_bound=parse_rational(args.mbound))
    res = {"complex": cx.describe(), "cohomology": rep,
           "almost_exactness": cech.almost_exactness(rep, v_omega=cfg.v_omega)}
    return res, "exact", [], cx.dd_checked


def cmd_torus(args, cfg):
    rep = cech.torus_perfectoid_complex(cfg.p, args.nmax, parse_rational(args.bound), cfg.prec)
    res = {
        "report": rep,
        "almost_exactness": {
            "all": cech.almost_exactness(rep, v_omega=cfg.v_omega),
            "non_integral": cech.almost_exactness(rep, v_omega=cfg.v_omega, integral=False),
        },
    }
    return res, "exact", [], True


def cmd_verify(args, cfg):
    names = set(args.only.split(",")) if args.only else None
    suites = [fn for fn in verify.SUITES if names is None or fn.__name__ in names]
    if not suites:
        raise UsageError(f"no suite matches {args.only!r}")
    results = verify.run_all(cfg.p, cfg.sample_seed, suites)
    failed = [r for r in results if not r.ok]
    res = {
        "passed": len(results) - len(failed),
        "failed": len(failed),
        "suites": [{"suite": fn.__name__, **r.to_json()} for fn, r in zip(suites, results)],
    }
    return res, {"sampled": {"seed": cfg.sample_seed}}, [r.to_json() for r in failed], not failed


COMMANDS = {
    "witt": (cmd_witt, ("add", "mul", "delta", "theta", "distinguished")),
    "tilt": (cmd_tilt, ("sharp", "reduce", "root")),
    "norm": (cmd_norm, ("eval", "rho", "powerbounded")),
    "point": (cmd_point, ("eval", "member")),
    "domain": (cmd_domain, ("meet", "perfect", "cover")),
    "cech": (cmd_cech, ("run",)),
    "torus": (cmd_torus, ("run",)),
    "verify": (cmd_verify, ("all",)),
}


def _command_args(group, action, sp):
    if group == "witt":
        sp.add_argument("--len", type=int, default=4, help="Witt vector length")
        sp.add_argument("--x", help="integer expression, e.g. p or 1+p")
        sp.add_argument("--teich", help="tilt expression added as a Teichmuller lift")
        if action in ("add", "mul"):
            sp.add_argument("--y")
            sp.add_argument("--yteich")
        if action == "theta":
            sp.add_argument("--N", help="target precision (default: the length)")
    elif group == "tilt":
        sp.add_argument("--x", required=True)
        if action == "sharp":
            sp.add_argument("--N", help="precision of the sharp image (default: --prec)")
    elif group == "norm":
        sp.add_argument("--x", required=True)
        sp.add_argument("--norm", choices=("gauss", "weighted", "lattice"), default="gauss")
        sp.add_argument("--cone", help="lo:hi per variable, comma separated")
        if action != "eval":
            sp.add_argument("--nmax", type=int, default=64)
        if action == "powerbounded":
            sp.add_argument("--m-budget", dest="m_budget", type=int, default=1)
    elif group == "point":
        sp.add_argument("--center", help="untilt expression per coordinate, comma separated")
        sp.add_argument("--s", help="log-radius per coordinate, comma separated")
        if action == "eval":
            sp.add_argument("--f")
        else:
            sp.add_argument("--num", help="numerators f1,f2,...")
            sp.add_argument("--den")
    elif group == "domain":
        if action in ("meet", "perfect"):
            sp.add_argument("--V", help="'f1,f2;g' for |f_j| <= |g|")
        if action == "meet":
            sp.add_argument("--W")
        if action == "cover":
            sp.add_argument("--domain", action="append")
            sp.add_argument("--interval", action="append", help="lo:hi in log-radius")
            sp.add_argument("--mode", choices=("exact", "sampled"), default="exact")
    elif group == "cech":
        sp.add_argument("--pieces", required=True, help="piece start points, e.g. 0,1/2")
        sp.add_argument("--ambient", help="lo:hi (default the unit disk 0:inf)")
        sp.add_argument("--mbound", default="2", help="largest |m| reported")
    elif group == "torus":
        sp.add_argument("--nmax", type=int, default=3)
        sp.add_argument("--bound", default="2")
    elif group == "verify":
        sp.add_argument("--only", help="comma separated suite names")


def _global_flags():
    g = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    g.add_argument("--p", type=int)
    g.add_argument("--v-omega", dest="v_omega")
    g.add_argument("--prec")
    g.add_argument("--depth", type=int)
    g.add_argument("--seed", dest="sample_seed", type=int)
    g.add_argument("--json", action="store_true")
    g.add_argument("--out")
    return g


def build_parser():
    flags = _global_flags()
    ap = _Parser(prog="perfectoid-lab", description=__doc__.splitlines()[0], parents=[flags])
    groups = ap.add_subparsers(dest="group", required=True, parser_class=_Parser)
    for group, (_, actions) in COMMANDS.items():
        gp = groups.add_parser(group)
        acts = gp.add_subparsers(dest="action", required=True, parser_class=_Parser)
        for action in actions:
            sp = acts.add_parser(action, parents=[flags])
            _command_args(group, action, sp)
    return ap


_GLOBAL = ("p", "v_omega", "prec", "depth", "sample_seed", "json", "out", "group", "action")


def _render_text(obj, indent=0):
    pad = "  " * indent
    lines = []
    if obj == {} or obj == []:
        return [pad + json.dumps(obj)]
    if isinstance(obj, dict) and set(obj) == {"num", "den"}:
        return [pad + frac_str(Fraction(obj["num"], obj["den"]))]
    if isinstance(obj, dict) and "expr" in obj:
        return [pad + obj["expr"]]
    if isinstance(obj, dict):
        for k in obj:
            v = obj[k]
            leaf = isinstance(v, dict) and (set(v) == {"num", "den"} or "expr" in v)
            if isinstance(v, (dict, list)) and not leaf and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_render_text(v)[0].strip()}")
        return lines
    if isinstance(obj, list):
        for v in obj:
            sub = _render_text(v, indent + 1)
            lines.append(pad + "- " + sub[0].strip())
            lines.extend(sub[1:])
        return lines or [pad + "[]"]
    return [pad + (json.dumps(obj) if not isinstance(obj, str) else obj)]


def run_command(argv, env=None):
    """Run one command; returns (exit_code, output_text)."""
    argv = list(argv)
    as_json = "--json" in argv
    buf = io.StringIO()
    try:
        with contextlib.redirect_stdout(buf):
            try:
                args = build_parser().parse_args(argv)
            except SystemExit as e:  # --help
                return (e.code or 0), buf.getvalue()
        as_json = getattr(args, "json", False)
        overrides = {k: getattr(args, k) for k in ("p", "v_omega", "prec", "depth", "sample_seed")
                     if hasattr(args, k)}
        cfg = load_config(overrides, env)
        as_json = as_json or cfg.output == "json"
        fn, _ = COMMANDS[args.group]
        result, prov, wit, ok = fn(args, cfg)
        cmd_args = {k: v for k, v in sorted(vars(args).items()) if k not in _GLOBAL and v is not None}
        cert = Certificate(
            command={"name": f"{args.group} {args.action}", "args": cmd_args},
            config=cfg.to_json(),
            result=result,
            provenance=prov,
            witnesses=list(wit),
            status="pass" if ok else "fail",
        )
        if as_json:
            text = cert.dumps()
        else:
            body = cert.to_json()
            head = [f"{body['command']['name']}  [{body['status']}]",
                    f"provenance: {json.dumps(body['provenance'], sort_keys=True)}"]
            text = "\n".join(head + _render_text(body["result"]) +
                             (["witnesses:"] + _render_text(body["witnesses"], 1) if body["witnesses"] else []))
        code = 0 if ok else 1
        out = getattr(args, "out", None)
    except LabError as e:
        code = e.exit_code
        err = {"error": {"code": e.code, "message": str(e)}}
        if isinstance(e, ConfigError) or isinstance(e, UsageError):
            code = 2
        text = json.dumps(err, sort_keys=True, indent=2) if as_json else f"error {e.code}: {e}"
        out = None
    except (ValueError, ZeroDivisionError) as e:
        code = 2
        err = {"error": {"code": "E_VALUE", "message": str(e)}}
        text = json.dumps(err, sort_keys=True, indent=2) if as_json else f"error E_VALUE: {e}"
        out = None
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    return code, text


def main(argv=None):
    code, text = run_command(sys.argv[1:] if argv is None else argv)
    stream = sys.stdout if code in (0, 1) else sys.stderr
    print(text, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
