"""Command line front end.

Exit codes: 0 on success, 2 when a verification-style check fails, 1 on
usage errors.  Output is deterministic (fixed seeds, canonical orders);
`report --all` against a builtin reproduces the committed golden files
byte for byte.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .arrangement import (Arrangement, ArrangementError, BUILTIN_FORMS,
                          builtin, parse_arrangement, poincare_polynomial)
from .circuits import circuit_relation, enumerate_circuits
from .divisors import (DivisorClass, divisor_DA, h0_fatpoints, h0_h1,
                       pairing, riemann_roch_chi)
from .exact import SEED_NAMESPACE
from .koszul import KoszulContext, b23_formula, betti_table, tor_dimension
from .orlik_terao import (OTPresentation, gradient_degree,
                          jacobian_containment, terao_series)
from .resonance import (is_neighborly, resonance_components,
                        search_multinets)
from .scroll import (en_prediction, is_one_generic, minor_span_dimension,
                     minors_in_ideal, multiplication_matrix)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _frac(x) -> str:
    return str(Fraction(x))


def _load_arrangement(args) -> Arrangement:
    if getattr(args, "builtin", None):
        return builtin(args.builtin)
    if getattr(args, "arrangement", None):
        try:
            with open(args.arrangement, "r", encoding="utf-8") as fh:
                return parse_arrangement(fh.read())
        except OSError as e:
            raise ArrangementError("cannot read %s: %s" % (args.arrangement, e))
    raise UsageError("need --builtin NAME or --arrangement FILE")


def _arrangement_meta(arr: Arrangement) -> dict:
    by_mu: dict = {}
    for f in arr.flats:
        by_mu[f.mu] = by_mu.get(f.mu, 0) + 1
    return {
        "name": arr.name,
        "d": arr.d,
        "forms": [[_frac(c) for c in f] for f in arr.forms],
        "flat_count": len(arr.flats),
        "flats_by_mu": {str(k): by_mu[k] for k in sorted(by_mu)},
    }


def _flat_dict(f) -> dict:
    return {"point": list(f.point),
            "lines": [i + 1 for i in f.lines],
            "mu": f.mu}


def _cert_dict(arr, cert) -> dict:
    return {
        "k": cert.k,
        "m": cert.m,
        "kind": ("net" if cert.is_net
                 else ("multinet" if cert.connected else "weak-multinet")),
        "blocks": [[i + 1 for i in b] for b in cert.blocks],
        "weights": list(cert.weights),
        "base_locus": [{"point": list(f.point), "n_p": cert.n_p[f]}
                       for f in cert.Z],
        "connected": cert.connected,
        "neighborly": is_neighborly(arr, cert.blocks),
        "identities": {
            "total_weight": sum(cert.weights),
            "km": cert.k * cert.m,
            "sum_np_sq": sum(v * v for v in cert.n_p.values()),
            "m_sq": cert.m * cert.m,
        },
    }


# ---------------------------------------------------------------------------
# subcommand implementations: each returns (results dict, exit code, lines)


def _cmd_info(arr, args):
    meta = _arrangement_meta(arr)
    lines = ["%s: %d lines, %d rank-two flats"
             % (arr.name or "arrangement", arr.d, len(arr.flats))]
    for f in arr.forms:
        lines.append("  " + " ".join(_frac(c) for c in f))
    lines.append("flats by multiplicity: " + ", ".join(
        "mu=%s: %s" % (k, v) for k, v in meta["flats_by_mu"].items()))
    return meta, 0, lines


def _cmd_flats(arr, args):
    res = {"flats": [_flat_dict(f) for f in arr.flats]}
    lines = ["%d rank-two flats:" % len(arr.flats)]
    for f in arr.flats:
        lines.append("  (%s) lines %s mu=%d"
                     % (":".join(str(c) for c in f.point),
                        ",".join(str(i + 1) for i in f.lines), f.mu))
    return res, 0, lines


def _cmd_poincare(arr, args):
    poly = poincare_polynomial(arr)
    res = {"coefficients": list(poly.coefficients),
           "projective": list(poly.projective_coefficients()),
           "text": str(poly)}
    return res, 0, [str(poly)]


def _cmd_circuits(arr, args):
    cs = enumerate_circuits(arr, args.max_size)
    res = {"count": len(cs), "circuits": [
        {"lines": [i + 1 for i in c.indices],
         "coefficients": list(c.coeffs),
         "relation": circuit_relation(c).to_string()}
        for c in cs]}
    lines = ["%d circuits (size <= %s)" % (len(cs), args.max_size or "d")]
    for c in cs:
        lines.append("  {%s}: %s" % (",".join(str(i + 1) for i in c.indices),
                                     list(c.coeffs)))
    return res, 0, lines


def _cmd_ot_hilbert(arr, args):
    pres = OTPresentation(arr)
    upto = args.upto
    ts = terao_series(arr, upto)
    dims = [pres.quotient_dimension(j) for j in range(upto + 1)]
    agree = tuple(dims) == ts.coefficients
    res = {"h_polynomial": list(ts.h_polynomial),
           "series_coefficients": list(ts.coefficients),
           "linear_algebra_dimensions": dims,
           "agree": agree}
    lines = ["h-polynomial: %s" % (list(ts.h_polynomial),),
             "series:       %s" % (list(ts.coefficients),),
             "linear alg:   %s" % (dims,),
             "agree: %s" % agree]
    return res, (0 if agree else 2), lines


def _cmd_betti(arr, args):
    ctx = KoszulContext(arr)
    table = betti_table(ctx, verify_regularity=args.verify_regularity)
    rep = b23_formula(arr, ctx.pres)
    res = {
        "totals": table.totals(),
        "entries": table.to_json_map(),
        "projective_dimension": table.projective_dimension,
        "regularity": table.regularity,
        "method": table.method,
        "quadratic_only": rep.quadratic_only,
        "b23_formula": rep.formula_value,
    }
    if table.certificate:
        res["reduction_certificate"] = table.certificate
    if table.strand3:
        res["strand3"] = {str(i): v for i, v in table.strand3.items()}
    lines = table.render_text().splitlines()
    if args.verify_regularity:
        lines.append("strand 3 homology (i<=4): %s"
                     % sorted(table.strand3.items()))
    code = 0
    if table.strand3 and any(v != 0 for v in table.strand3.values()):
        code = 2
    return res, code, lines


def _cmd_divisor_da(arr, args):
    da = divisor_DA(arr)
    h0, h1 = h0_h1(arr, da)
    chi = riemann_roch_chi(arr, da)
    res = {"m": da.m,
           "multiplicities": [{"point": list(p.point), "a": v}
                              for p, v in sorted(da.mults.items(),
                                                 key=lambda kv: kv[0].point)],
           "self_intersection": pairing(da, da),
           "chi": chi, "h0": h0, "h1": h1}
    ok = (h0 == arr.d)
    lines = ["D_A = %dE0 - sum a_p E_p; D_A^2 = %d; chi = %d; h0 = %d; h1 = %d"
             % (da.m, pairing(da, da), chi, h0, h1)]
    return res, (0 if ok else 2), lines


def _cmd_h0(arr, args):
    mults = [int(x) for x in args.mults.split(",")] if args.mults else []
    flats = arr.flats
    if len(mults) != len(flats):
        raise UsageError("--mults needs %d comma-separated integers (one per "
                         "canonical flat; see the flats subcommand)" % len(flats))
    div = DivisorClass(args.m, {p: a for p, a in zip(flats, mults)})
    sec = h0_fatpoints(arr, div)
    chi = riemann_roch_chi(arr, div)
    res = {"m": args.m, "mults": mults, "dimension": sec.dimension,
           "chi": chi, "h1": sec.dimension - chi,
           "conditions_shape": list(sec.conditions_shape),
           "basis": [p.to_string() for p in sec.basis]}
    lines = ["h0 = %d (chi = %d, conditions %dx%d)"
             % (sec.dimension, chi, *sec.conditions_shape)]
    return res, 0, lines


def _cmd_net_search(arr, args):
    ks = [args.k] if args.k else [3, 4]
    certs = []
    for k in ks:
        certs.extend(search_multinets(arr, k, args.max_weight))
    res = {"k": ks, "max_weight": args.max_weight,
           "certificates": [_cert_dict(arr, c) for c in certs]}
    lines = ["%d certificate(s)" % len(certs)]
    for c in certs:
        lines.append("  " + c.describe())
    return res, 0, lines


def _cmd_resonance(arr, args):
    comps = resonance_components(arr, max_weight=args.max_weight)
    out = []
    for c in comps:
        entry = {"kind": c.kind,
                 "projective_dimension": c.projective_dimension,
                 "span": [list(v) for v in c.vectors],
                 "oracle_h1": list(c.oracle_values)}
        if c.kind == "local":
            entry["flat"] = list(c.provenance.point)
        else:
            entry["certificate"] = _cert_dict(arr, c.provenance)
        out.append(entry)
    nloc = sum(1 for c in comps if c.kind == "local")
    ness = len(comps) - nloc
    res = {"local": nloc, "essential": ness, "components": out}
    lines = ["%d local + %d essential components" % (nloc, ness)]
    for c in comps:
        lines.append("  %s P^%d, oracle h1 %s"
                     % (c.kind, c.projective_dimension, list(c.oracle_values)))
    return res, 0, lines


def _cmd_scroll_check(arr, args):
    pres = OTPresentation(arr)
    nets = [c for c in search_multinets(arr, 3, 1) if c.connected]
    nets += [c for c in search_multinets(arr, 4, 1) if c.connected]
    checks = []
    ok = True
    ctx = KoszulContext(arr, pres)
    for cert in nets:
        gamma = multiplication_matrix(arr, cert, pres)
        one_gen = is_one_generic(gamma)
        in_ideal = minors_in_ideal(arr, gamma, pres)
        en = en_prediction(cert, arr.d)
        b23 = tor_dimension(ctx, 2, 3)
        match = (en.linear_syzygies == b23)
        ok = ok and one_gen and in_ideal and match
        checks.append({
            "certificate": _cert_dict(arr, cert),
            "gamma": [[e.to_string() for e in row] for row in gamma.entries],
            "shape": [2, gamma.ncols],
            "one_generic": one_gen,
            "minors_in_ideal": in_ideal,
            "minor_span_dimension": minor_span_dimension(arr, gamma),
            "en_b": en.b,
            "en_betti": list(en.betti),
            "computed_b23": b23,
            "en_matches_b23": match,
        })
    res = {"nets": len(nets), "checks": checks, "all_ok": ok}
    lines = ["%d net(s)" % len(nets)]
    for ch in checks:
        lines.append("  gamma 2x%d one-generic=%s minors-in-ideal=%s "
                     "EN beta1=%d b23=%d"
                     % (ch["shape"][1], ch["one_generic"],
                        ch["minors_in_ideal"], ch["en_betti"][1],
                        ch["computed_b23"]))
    return res, (0 if ok else 2), lines


def _cmd_jacobian_check(arr, args):
    ok = jacobian_containment(arr)
    res = {"jacobian_in_l_span": ok}
    return res, (0 if ok else 2), ["jacobian ideal contained: %s" % ok]


def _cmd_gradient_degree(arr, args):
    val = gradient_degree(arr)
    poly = poincare_polynomial(arr)
    b1, b2 = poly.coefficients[1], poly.coefficients[2]
    identity = b2 - b1 + 1
    res = {"gradient_degree": val, "b2_minus_b1_plus_1": identity,
           "agree": val == identity}
    return res, (0 if val == identity else 2), ["gradient degree: %d" % val]


def _cmd_report(arr, args):
    results = {}
    code = 0
    for name, fn, extra in (
            ("info", _cmd_info, {}),
            ("flats", _cmd_flats, {}),
            ("poincare", _cmd_poincare, {}),
            ("circuits", _cmd_circuits, {"max_size": None}),
            ("ot_hilbert", _cmd_ot_hilbert, {"upto": 5}),
            ("betti", _cmd_betti, {"verify_regularity": True}),
            ("divisor_da", _cmd_divisor_da, {}),
            ("net_search", _cmd_net_search, {"k": None, "max_weight": 2}),
            ("resonance", _cmd_resonance, {"max_weight": 2}),
            ("scroll_check", _cmd_scroll_check, {}),
            ("jacobian_check", _cmd_jacobian_check, {}),
            ("gradient_degree", _cmd_gradient_degree, {}),
    ):
        sub = argparse.Namespace(**extra)
        out, c, _ = fn(arr, sub)
        results[name] = out
        code = max(code, c)
    return results, code, [json.dumps(results, indent=2)]


_COMMANDS = {
    "info": _cmd_info,
    "flats": _cmd_flats,
    "poincare": _cmd_poincare,
    "circuits": _cmd_circuits,
    "ot-hilbert": _cmd_ot_hilbert,
    "betti": _cmd_betti,
    "divisor-da": _cmd_divisor_da,
    "h0": _cmd_h0,
    "net-search": _cmd_net_search,
    "resonance": _cmd_resonance,
    "scroll-check": _cmd_scroll_check,
    "jacobian-check": _cmd_jacobian_check,
    "gradient-degree": _cmd_gradient_degree,
    "report": _cmd_report,
}


def _build_parser() -> _Parser:
    parser = _Parser(prog="otb", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", metavar="command")
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--builtin", choices=sorted(BUILTIN_FORMS),
                       help="use a named builtin arrangement")
        p.add_argument("--arrangement", metavar="FILE",
                       help='JSON file {"name": ..., "forms": [[q,q,q],...]}')
        p.add_argument("--format", choices=("text", "json"), default="text")
        if name == "circuits":
            p.add_argument("--max-size", type=int, default=None, dest="max_size")
        if name == "ot-hilbert":
            p.add_argument("--upto", type=int, default=5)
        if name == "betti":
            p.add_argument("--verify-regularity", action="store_true",
                           dest="verify_regularity")
        if name == "h0":
            p.add_argument("--m", type=int, required=True)
            p.add_argument("--mults", type=str, default="",
                           help="comma-separated multiplicities in canonical "
                                "flat order")
        if name == "net-search":
            p.add_argument("--k", type=int, choices=(3, 4), default=None)
            p.add_argument("--max-weight", type=int, default=1,
                           dest="max_weight")
        if name == "resonance":
            p.add_argument("--max-weight", type=int, default=2,
                           dest="max_weight")
        if name == "report":
            p.add_argument("--all", action="store_true",
                           help="run every analysis (the golden-file payload)")
    return parser


def run(argv) -> int:
    """Dispatch; prints the report to stdout and returns the exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("missing subcommand")
        arr = _load_arrangement(args)
        results, code, lines = _COMMANDS[args.command](arr, args)
    except UsageError as e:
        print("usage error: %s" % e, file=sys.stderr)
        return 1
    except ArrangementError as e:
        print("error: %s" % e, file=sys.stderr)
        return 1
    except ValueError as e:
        print("error: %s" % e, file=sys.stderr)
        return 1
    if args.command == "report":
        payload = {
            "tool": "otb",
            "version": __version__,
            "seed": SEED_NAMESPACE,
            "arrangement": _arrangement_meta(arr),
            "results": results,
        }
        print(json.dumps(payload, indent=2))
        return code
    if args.format == "json":
        payload = {
            "tool": "otb",
            "version": __version__,
            "seed": SEED_NAMESPACE,
            "arrangement": {"name": arr.name, "d": arr.d},
            "command": args.command,
            "results": results,
        }
        print(json.dumps(payload, indent=2))
    else:
        for line in lines:
            print(line)
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
