"""Command-line front end.

Subcommands:

- ``basis``        enumerate normal monomials by degree/charge
- ``act``          apply a mode operator to a state
- ``verify``       run an axiom sweep: borcherds | hexagon | locality |
                   vacuum | translation
- ``bracket``      print a generator lambda-bracket of the NLS table
- ``limit``        run the Poisson limit under both argument placements and
                   report which one reproduces the reference table
- ``gva``          extract generalized vertex algebra data from an s-matrix
- ``oracle-check`` straightening-vs-row-reduction equivalence sweep

Reports stream as JSON lines (one record per checked tuple, defect payloads
included); exit status is 0 when no defect was found, 1 otherwise, 2 on usage
errors.  Identical configurations produce byte-identical output.  Defaults
(degree 4, mode window 3, order 6) can be overridden by the environment
variables LOGVERTEX_DEGREE, LOGVERTEX_WINDOW and LOGVERTEX_ORDER.  --jobs is
accepted for interface compatibility; execution is single-process and the
merge order is deterministic either way.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import commutative, engine, nls, pva
from .scalars import GaussScalar, scalar_to_json
from .states import State, is_zero, unit


def _env_int(name: str, default: int) -> int:
    val = os.environ.get(name)
    return int(val) if val else default


def _instance(name: str):
    if name == "nls":
        return nls.nls_instance()
    if name == "nls-eps":
        return nls.nls_eps_instance()
    if name == "commutative":
        return commutative.commutative_instance()
    raise SystemExit(2)


def _key_str(inst, key) -> str:
    if inst.name in ("nls", "nls-eps"):
        return nls.mono_str(key)
    return str(key)


def _state_json(inst, s: State):
    return [
        [_key_str(inst, k), scalar_to_json(c)]
        for k, c in sorted(s.items(), key=lambda kv: _key_str(inst, kv[0]))
    ]


def _emit(record: dict, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(record, sort_keys=True) + "\n")
    else:
        out.write(" ".join(f"{k}={v}" for k, v in sorted(record.items())) + "\n")


def _basis_cmd(args, out) -> int:
    inst = _instance(args.instance)
    keys = inst.basis(args.degree, args.charge)
    for key in keys:
        if args.format == "json":
            out.write(json.dumps({"monomial": _key_str(inst, key)}) + "\n")
        else:
            out.write(_key_str(inst, key) + "\n")
    return 0


def _act_cmd(args, out) -> int:
    deformed = args.instance == "nls-eps"
    alg = nls.NLSAlgebra(deformed)
    state = unit(nls.mono_parse(args.state))
    result = alg.act(nls.LETTER_NAMES.index(args.letter), args.mode, state)
    if args.format == "json":
        inst = _instance(args.instance)
        out.write(json.dumps({"terms": _state_json(inst, result)}, sort_keys=True) + "\n")
    else:
        out.write(nls.state_str(result) + "\n")
    return 0


def _gen_states(inst):
    return sorted(inst.generator_states().items())


def _verify_cmd(args, out) -> int:
    inst = _instance(args.instance)
    degree = args.degree
    window = args.window
    fmt = args.format
    targets = [unit(k) for d in range(degree + 1) for k in inst.basis(d)]
    defects = 0

    def report(check, indices, defect_payload):
        nonlocal defects
        bad = bool(defect_payload)
        if bad:
            defects += 1
        _emit(
            {
                "check": check,
                "indices": list(indices),
                "defect": defect_payload if bad else None,
            },
            "json" if fmt == "json" else "text",
            out,
        )

    if args.target == "vacuum":
        recs = engine.check_vacuum(inst, degree, (-window, window))
        report("vacuum", [degree, window], [str(r) for r in recs] if recs else None)
    elif args.target == "borcherds":
        gens = _gen_states(inst)
        for na, a in gens:
            for nb, b in gens:
                for ck, c in enumerate(targets):
                    for m in range(-window, window + 1):
                        for n in range(-window, window + 1):
                            for k in range(-window, window + 1):
                                d = engine.check_borcherds(inst, a, b, c, m, n, k)
                                if not is_zero(d):
                                    report(
                                        "borcherds",
                                        [na, nb, ck, m, n, k],
                                        _state_json(inst, d),
                                    )
        report("borcherds-sweep", [degree, window], None if defects == 0 else ["see records"])
    elif args.target == "hexagon":
        gens = _gen_states(inst)
        for na, a in gens:
            for nb, b in gens:
                for ck, c in enumerate(targets):
                    for n in range(-window, window + 1):
                        d = engine.check_hexagon(inst, a, b, c, n)
                        if d:
                            report("hexagon", [na, nb, ck, n], [str(k) for k in d])
        report("hexagon-sweep", [degree, window], None if defects == 0 else ["see records"])
    elif args.target == "locality":
        gens = _gen_states(inst)
        lo, hi = -(degree + window + 2), window + 2
        for na, a in gens:
            for nb, b in gens:
                recs = engine.check_locality(inst, a, b, 0, targets, (lo, hi, lo, hi))
                for r in recs:
                    report(
                        "locality",
                        [na, nb, r["target"], str(r["exp1"]), str(r["exp2"])],
                        _state_json(inst, r["defect"]),
                    )
        report("locality-sweep", [degree, window], None if defects == 0 else ["see records"])
    elif args.target == "translation":
        gens = _gen_states(inst)
        lo, hi = -(degree + window + 2), window + 2
        for na, a in gens:
            recs = engine.check_translation_covariance(inst, a, targets, (lo, hi))
            for r in recs:
                report(
                    "translation",
                    [na, r["target"], str(r["exp"]), r["zeta"]],
                    _state_json(inst, r["defect"]),
                )
        report("translation-sweep", [degree, window], None if defects == 0 else ["see records"])
    else:
        raise SystemExit(2)
    return 1 if defects else 0


def _bracket_cmd(args, out) -> int:
    table = pva.nls_table()
    if (args.a, args.b) not in table.entries:
        print(f"unknown generator pair ({args.a}, {args.b})", file=sys.stderr)
        return 2
    series = table.bracket(args.a, args.b, args.order)
    if args.format == "json":
        out.write(json.dumps({"bracket": [args.a, args.b], "series": series.render()}) + "\n")
    else:
        out.write(series.render() + "\n")
    return 0


def _limit_cmd(args, out) -> int:
    inst = nls.nls_eps_instance()
    dico = pva.StateDictionary({nls.W: "w", nls.WB: "wb"})
    gens = {"w": unit(((nls.W, -1),)), "wb": unit(((nls.WB, -1),))}
    witnesses = pva.commutativity_witnesses(inst, 2, args.window)
    ref = pva.nls_table()
    matches = []
    for placement in (pva.PLACEMENT_FIRST, pva.PLACEMENT_SECOND):
        table = pva.basis_change(pva.poisson_limit(inst, dico, gens, args.order, placement))
        ok = all(
            table.bracket(a, b, args.order) == ref.bracket(a, b, args.order)
            for a in "uv"
            for b in "uv"
        )
        matches.append((placement, ok))
        _emit(
            {"check": "limit", "indices": [placement, args.order], "defect": None if ok else ["mismatch"]},
            args.format,
            out,
        )
    winners = [p for p, ok in matches if ok]
    _emit(
        {
            "check": "limit-summary",
            "indices": [args.order],
            "defect": None if len(winners) == 1 and not witnesses else ["ambiguous or witnesses"],
            "matching_placement": winners,
        },
        args.format,
        out,
    )
    return 0 if len(winners) == 1 and not witnesses else 1


def _gva_cmd(args, out) -> int:
    if args.matrix:
        raw = json.loads(args.matrix)
        labels = raw["labels"]
        matrix = [
            [GaussScalar(Fraction(x[0]), Fraction(x[1])) for x in row]
            for row in raw["matrix"]
        ]
    else:
        labels = ["w", "wb"]
        matrix = [
            [GaussScalar(-1), GaussScalar(1)],
            [GaussScalar(1), GaussScalar(-1)],
        ]
    data = engine.gva_extract(labels, matrix)
    record = {
        "labels": list(data.labels),
        "classes": [list(cls) for cls in data.classes],
        "delta": {f"{i},{j}": repr(v) for (i, j), v in sorted(data.delta.items())},
        "eta": 1,
        "group_table": {f"{i},{j}": v for (i, j), v in sorted(data.group_table.items())},
        "neutral": data.neutral,
        "partial": data.partial,
    }
    out.write(json.dumps(record, sort_keys=True) + "\n")
    return 0


def _oracle_cmd(args, out) -> int:
    deformed = args.instance == "nls-eps"
    degree = args.degree
    window = args.window
    table = nls.oracle_reduce(degree + window, deformed)
    alg = nls.NLSAlgebra(deformed)
    defects = 0
    for d in range(0, degree + 1):
        for v in nls.enumerate_basis(d, None, deformed):
            for g in (nls.W, nls.WB):
                for n in range(-window, window + 1):
                    got = alg.act(g, n, unit(v))
                    want = table.apply(g, n, unit(v))
                    if got != want:
                        defects += 1
                        _emit(
                            {
                                "check": "oracle",
                                "indices": [nls.LETTER_NAMES[g], n, nls.mono_str(v)],
                                "defect": nls.state_str(got) + " != " + nls.state_str(want),
                            },
                            args.format,
                            out,
                        )
    _emit(
        {"check": "oracle-sweep", "indices": [degree, window], "defect": None if defects == 0 else ["see records"]},
        args.format,
        out,
    )
    return 1 if defects else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logvertex",
        description="exact computations in braided logarithmic vertex algebras",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, instance=True):
        if instance:
            p.add_argument(
                "--instance",
                choices=["nls", "nls-eps", "commutative"],
                default="nls",
            )
        p.add_argument("--degree", type=int, default=_env_int("LOGVERTEX_DEGREE", 4))
        p.add_argument("--window", type=int, default=_env_int("LOGVERTEX_WINDOW", 3))
        p.add_argument("--order", type=int, default=_env_int("LOGVERTEX_ORDER", 6))
        p.add_argument("--format", choices=["text", "json"], default="text")
        p.add_argument("--seed", type=int, default=0, help="seed for sampled sweeps")
        p.add_argument(
            "--jobs",
            type=int,
            default=1,
            help="accepted for compatibility; execution is single-process",
        )

    p = sub.add_parser("basis", help="enumerate normal monomials")
    common(p)
    p.add_argument("--charge", type=int, default=None)
    p.set_defaults(fn=_basis_cmd)

    p = sub.add_parser("act", help="apply a mode operator to a state")
    common(p)
    p.add_argument("letter", choices=["w", "wb"])
    p.add_argument("mode", type=int)
    p.add_argument("--state", default="|0>", help="monomial like 'w[-2] wb[-1] |0>'")
    p.set_defaults(fn=_act_cmd)

    p = sub.add_parser("verify", help="run an axiom sweep")
    common(p)
    p.add_argument(
        "target",
        choices=["borcherds", "hexagon", "locality", "vacuum", "translation"],
    )
    p.set_defaults(fn=_verify_cmd)

    p = sub.add_parser("bracket", help="NLS table lambda-bracket")
    common(p, instance=False)
    p.add_argument("a", choices=["u", "v"])
    p.add_argument("b", choices=["u", "v"])
    p.set_defaults(fn=_bracket_cmd)

    p = sub.add_parser("limit", help="Poisson limit vs the reference table")
    common(p, instance=False)
    p.set_defaults(fn=_limit_cmd)

    p = sub.add_parser("gva", help="generalized VA data from an s-matrix")
    common(p, instance=False)
    p.add_argument(
        "--matrix",
        default=None,
        help='JSON {"labels":[...],"matrix":[[[re,im],...],...]} with rational strings',
    )
    p.set_defaults(fn=_gva_cmd)

    p = sub.add_parser("oracle-check", help="straightening vs row reduction")
    common(p)
    p.set_defaults(fn=_oracle_cmd)
    return parser


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0,) else 0
    if args.jobs < 1 or args.degree < 0 or args.window < 0 or args.order < 1:
        print("invalid window/order/jobs configuration", file=sys.stderr)
        return 2
    return args.fn(args, out)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
