"""Command-line front end.

Exit codes: 0 success / verification passed, 1 computed but verification
failed (witness on stdout), 2 usage or validation error.  All output is
canonical JSON: sorted keys, integers only.
"""

import argparse
import json
import sys

from .errors import HKGError


def _emit(obj):
    print(json.dumps(obj, sort_keys=True, separators=(",", ":")))


def _load_json(path):
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _series_from_arg(args, attr="series"):
    from .series import LaurentSeries
    return LaurentSeries.from_json(_load_json(getattr(args, attr)))


def _field(args):
    from .field import field_make
    return field_make(args.p, args.k)


def _cmd_phi(args):
    from .nottingham import build_phi
    phi = build_phi(_field(args), args.c, args.m, args.prec)
    _emit(phi.to_json())
    return 0


def _cmd_compose(args):
    from .nottingham import NottinghamElement
    lhs = NottinghamElement.from_json(_load_json(args.lhs))
    rhs = NottinghamElement.from_json(_load_json(args.rhs))
    _emit((lhs * rhs).to_json())
    return 0


def _cmd_invert(args):
    from .nottingham import NottinghamElement
    sigma = NottinghamElement.from_json(_load_json(args.series))
    _emit(sigma.inverse().to_json())
    return 0


def _cmd_order(args):
    from .nottingham import NottinghamElement, nott_order
    sigma = NottinghamElement.from_json(_load_json(args.series))
    res = nott_order(sigma)
    _emit({"order": res.order, "h": res.h, "precision": res.precision,
           "certified": res.certified})
    return 0 if not res.undetermined else 1


def _cmd_break(args):
    from .nottingham import NottinghamElement, ramification_break
    sigma = NottinghamElement.from_json(_load_json(args.series))
    _emit({"break": ramification_break(sigma)})
    return 0


def _cmd_conjugate(args):
    from .nottingham import NottinghamElement, conjugate
    from .series import LaurentSeries
    sigma = NottinghamElement.from_json(_load_json(args.series))
    phi = LaurentSeries.from_json(_load_json(args.by))
    result = conjugate(sigma, phi)
    if isinstance(result, NottinghamElement):
        _emit({"normalized": True, "series": result.to_json()})
    else:
        _emit({"normalized": False, "series": result.to_json()})
    return 0


def _cmd_semigroup(args):
    from .semigroup import NumericalSemigroup
    gens = [int(x) for x in args.gens.split(",")]
    sg = NumericalSemigroup(gens, args.p)
    gaps = sg.gaps()
    m, r = sg.first_prime_to_p()
    _emit({"gaps": len(gaps), "gap_list": gaps, "m_r": m, "r": r})
    return 0


def _cmd_module_basis(args):
    from .semigroup import module_basis
    poles = [int(x) for x in args.poles.split(",")]
    n = [int(x) for x in args.n.split(",")] if args.n else []
    mb = module_basis(args.p, poles, n, args.bound)
    _emit(mb.to_json())
    return 0


def _cmd_additive(args):
    from .additive import additive_from_moore, additive_from_span
    field = _field(args)
    w = [field(c) for c in json.loads(args.w)]
    build = additive_from_span if args.method == "span" else additive_from_moore
    _emit(build(w).to_json())
    return 0


def _load_tower(args):
    from .tower import TowerSpec
    return TowerSpec.from_json(_load_json(args.tower))


def _load_action(spec, args):
    from .tower import GroupAction
    return GroupAction.from_json(spec, _load_json(args.action))


def _cmd_tower_check(args):
    from .tower import compat_check
    spec = _load_tower(args)
    action = _load_action(spec, args)
    report = compat_check(spec, action)
    _emit(report.to_json())
    return 0 if report.ok else 1


def _cmd_tower_rescale(args):
    from .tower import TowerElement, rescale_generator
    spec = _load_tower(args)
    action = _load_action(spec, args)
    lam = spec.field(json.loads(args.scale))
    prefix = spec.prefix(args.step - 1)
    shift = (TowerElement.from_json(prefix, _load_json(args.shift))
             if args.shift else None)
    new_spec, new_action = rescale_generator(spec, action, args.step, lam,
                                             shift)
    _emit({"tower": new_spec.to_json(), "action": new_action.to_json()})
    return 0


def _cmd_tower_solve(args):
    from .tower import solve_compatible_cocycles
    spec = _load_tower(args)
    action = _load_action(spec, args)
    fam = solve_compatible_cocycles(spec, action, action.group, args.pole,
                                    args.n_i)
    out = {"empty": fam.is_empty, "dimension": fam.dimension,
           "P": fam.P.to_json()}
    if not fam.is_empty:
        try:
            new_spec, new_action = fam.build()
            out["sample"] = {"tower": new_spec.to_json(),
                             "action": new_action.to_json()}
        except HKGError as exc:
            out["sample_error"] = str(exc)
    _emit(out)
    return 0 if not fam.is_empty else 1


def _cmd_tower_rep_jumps(args):
    from .tower import representation_jumps
    spec = _load_tower(args)
    action = _load_action(spec, args)
    report = representation_jumps(spec, action)
    _emit(report.to_json())
    return 0 if report.shape_ok else 1


def _cmd_cohomology_h1(args):
    from .cohomology import LinearizedModule, h1_cyclic
    spec = _load_tower(args)
    action = _load_action(spec, args)
    module = LinearizedModule(spec, action, args.bound)
    _emit(h1_cyclic(module, args.sigma, args.order))
    return 0


def _cmd_cohomology_coboundary(args):
    from .cohomology import (Cocycle, LinearizedModule, cocycle_check,
                             coboundary_test)
    from .errors import NotCoboundary
    from .tower import TowerElement
    spec = _load_tower(args)
    action = _load_action(spec, args)
    module = LinearizedModule(spec, action, args.bound)
    raw = _load_json(args.cocycle)
    values = {int(s): TowerElement.from_json(spec, v) for s, v in raw.items()}
    cocycle = Cocycle(module, values)
    ok, witness = cocycle_check(module, cocycle)
    if not ok:
        _emit({"cocycle": False, "witness_pair": list(witness["pair"])})
        return 1
    try:
        b = coboundary_test(module, cocycle)
        _emit({"cocycle": True, "coboundary": True, "b": b.to_json()})
        return 0
    except NotCoboundary:
        _emit({"cocycle": True, "coboundary": False})
        return 1


def _cmd_cover_expand(args):
    from .covers import expand_as_cover
    cover = expand_as_cover(_field(args), args.m, args.prec)
    _emit(cover.to_json())
    return 0


def _cmd_cover_verify(args):
    from .covers import expand_as_cover, verify_action_transport
    field = _field(args)
    cover = expand_as_cover(field, args.m, args.prec)
    report = verify_action_transport(cover, field(args.c))
    _emit(report.to_json())
    return 0 if report.ok else 1


def _cmd_selftest(args):
    from .acceptance import run_all
    results = run_all(args.seed)
    for r in results:
        print(r.line())
    return 0 if all(r.passed for r in results) else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hkgtower",
        description="Exact computation with Artin-Schreier tower covers and "
                    "finite p-subgroups of the Nottingham group")
    sub = parser.add_subparsers(dest="command", required=True)

    def field_args(sp):
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--k", type=int, default=1)

    sp = sub.add_parser("phi", help="the element t(1 + c t^m)^(-1/m)")
    field_args(sp)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--c", type=int, required=True)
    sp.add_argument("--prec", type=int, default=64)
    sp.set_defaults(fn=_cmd_phi)

    sp = sub.add_parser("compose", help="compose two group elements")
    sp.add_argument("--lhs", required=True)
    sp.add_argument("--rhs", required=True)
    sp.set_defaults(fn=_cmd_compose)

    sp = sub.add_parser("invert", help="compositional inverse")
    sp.add_argument("--series", required=True)
    sp.set_defaults(fn=_cmd_invert)

    sp = sub.add_parser("order", help="p-power order at working precision")
    sp.add_argument("--series", required=True)
    sp.set_defaults(fn=_cmd_order)

    sp = sub.add_parser("break", help="ramification break")
    sp.add_argument("--series", required=True)
    sp.set_defaults(fn=_cmd_break)

    sp = sub.add_parser("conjugate", help="conjugate by a uniformizer change")
    sp.add_argument("--series", required=True)
    sp.add_argument("--by", required=True)
    sp.set_defaults(fn=_cmd_conjugate)

    sp = sub.add_parser("semigroup", help="gaps and first tame element")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--gens", required=True)
    sp.set_defaults(fn=_cmd_semigroup)

    sp = sub.add_parser("module-basis", help="bounded monomial module")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--poles", required=True)
    sp.add_argument("--n", default="")
    sp.add_argument("--bound", type=int, required=True)
    sp.set_defaults(fn=_cmd_module_basis)

    sp = sub.add_parser("additive", help="additive polynomial from a span")
    sp.add_argument("method", choices=["span", "moore"])
    field_args(sp)
    sp.add_argument("--w", required=True,
                    help="JSON list of field elements (coefficient lists)")
    sp.set_defaults(fn=_cmd_additive)

    sp = sub.add_parser("tower", help="tower operations")
    tsub = sp.add_subparsers(dest="tower_command", required=True)
    for name, fn in (("check", _cmd_tower_check),
                     ("rescale", _cmd_tower_rescale),
                     ("solve", _cmd_tower_solve),
                     ("rep-jumps", _cmd_tower_rep_jumps)):
        tsp = tsub.add_parser(name)
        tsp.add_argument("--tower", required=True)
        tsp.add_argument("--action", required=True)
        if name == "rescale":
            tsp.add_argument("--step", type=int, required=True)
            tsp.add_argument("--scale", required=True,
                             help="JSON field element")
            tsp.add_argument("--shift", default=None)
        if name == "solve":
            tsp.add_argument("--pole", type=int, required=True)
            tsp.add_argument("--n-i", type=int, default=1)
        tsp.set_defaults(fn=fn)

    sp = sub.add_parser("cohomology", help="cocycle and H^1 computations")
    csub = sp.add_subparsers(dest="cohomology_command", required=True)
    csp = csub.add_parser("h1")
    csp.add_argument("--tower", required=True)
    csp.add_argument("--action", required=True)
    csp.add_argument("--bound", type=int, required=True)
    csp.add_argument("--sigma", type=int, required=True)
    csp.add_argument("--order", type=int, required=True)
    csp.set_defaults(fn=_cmd_cohomology_h1)
    csp = csub.add_parser("coboundary")
    csp.add_argument("--tower", required=True)
    csp.add_argument("--action", required=True)
    csp.add_argument("--bound", type=int, required=True)
    csp.add_argument("--cocycle", required=True)
    csp.set_defaults(fn=_cmd_cohomology_coboundary)

    sp = sub.add_parser("cover", help="Artin-Schreier cover expansions")
    vsub = sp.add_subparsers(dest="cover_command", required=True)
    vsp = vsub.add_parser("expand")
    field_args(vsp)
    vsp.add_argument("--m", type=int, required=True)
    vsp.add_argument("--prec", type=int, default=512)
    vsp.set_defaults(fn=_cmd_cover_expand)
    vsp = vsub.add_parser("verify")
    field_args(vsp)
    vsp.add_argument("--m", type=int, required=True)
    vsp.add_argument("--c", type=int, required=True)
    vsp.add_argument("--prec", type=int, default=512)
    vsp.set_defaults(fn=_cmd_cover_verify)

    sp = sub.add_parser("selftest", help="run the acceptance suite")
    sp.add_argument("--seed", type=int, default=None)
    sp.set_defaults(fn=_cmd_selftest)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    if getattr(args, "seed", "missing") is None:
        from .acceptance import DEFAULT_SEED
        args.seed = DEFAULT_SEED
    try:
        return args.fn(args)
    except HKGError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)},
                         sort_keys=True), file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError, ValueError, KeyError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)},
                         sort_keys=True), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
