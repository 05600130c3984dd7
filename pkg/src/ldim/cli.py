"""Command-line entry point: ``ldim <subcommand> ...``.

Exit codes: 0 success, 1 invalid input (or an invalid realiser on verify),
2 when an exact search exceeds its budget.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import codec, constructions, exact, experiments, order, realiser
from .errors import Exceeded, LdimError, ParameterError


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _emit(text: str, path: str | None) -> None:
    if path and path != "-":
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _host(args) -> order.BasePoset:
    if getattr(args, "poset", None):
        return order.parse_poset(_read(args.poset))
    if args.n is not None and args.l is not None and args.k is not None:
        return order.LayerPoset(args.n, args.l, args.k)
    raise ParameterError("give --poset FILE or --n/--l/--k for a layer poset")


def _load_realiser(host, path) -> realiser.LocalRealiser:
    n, lists = realiser.parse_realiser(_read(path))
    if n != host.n:
        raise ParameterError(f"realiser is for {n} elements, host has {host.n}")
    return realiser.LocalRealiser(host, lists)


def _stats_footer(stats: dict) -> str:
    return "".join(f"# {k} {v}\n" for k, v in stats.items())


# -- subcommands -----------------------------------------------------------------


def cmd_construct(args) -> int:
    kind = args.kind
    index = None
    if kind == "far-layers":
        R = constructions.far_layers_realiser(args.n, args.l, args.top)
    elif kind == "bipartite":
        G = constructions.default_bipartite_graph(args.n, args.l)
        R = constructions.bipartite_realiser(G, args.l, args.k)
    elif kind == "hypercube":
        G = constructions.hypercube_graph_union(args.m, args.l)
        R = constructions.bipartite_realiser(G, args.l, args.k)
    else:
        P = order.parse_poset(_read(args.poset))
        L_P = _load_realiser(P, args.realiser)
        if args.summand:
            Qx = order.parse_poset(_read(args.summand))
        else:
            Qx = order.antichain(args.m or 2)
        Q = {x: Qx for x in P.elements()}
        if kind == "lex-subst":
            _, lists = exact.exact_dim_witness(Qx)
            R, index = constructions.lex_realiser_subst(L_P, Q, {x: lists for x in P.elements()})
        else:
            _, Rx = exact.exact_ldim_witness(Qx)
            R, index = constructions.lex_realiser_add(L_P, Q, {x: Rx.lists for x in P.elements()})
    stats = constructions.layer_stats(R)
    if args.poset_out:
        _emit(order.format_poset(R.host), args.poset_out)
    if args.json:
        out = {"stats": stats, "n": R.host.n, "lists": [list(L) for L in R.lists]}
        if index is not None:
            out["index"] = [[x, y, i] for (x, y), i in index.items()]
        _emit(json.dumps(out) + "\n", args.output)
    else:
        _emit(realiser.format_realiser(R) + _stats_footer(stats), args.output)
    return 0


def cmd_verify(args) -> int:
    host = _host(args)
    R = _load_realiser(host, args.realiser)
    rep = realiser.verify(R)
    if args.json:
        print(
            json.dumps(
                {
                    "valid": rep.valid,
                    "max_multiplicity": rep.max_multiplicity,
                    "list_count": rep.list_count,
                    "uncovered_count": rep.uncovered_count,
                    "uncovered": sorted(rep.uncovered)[: args.show],
                    "multiplicity": {str(k): v for k, v in rep.multiplicity.items()},
                }
            )
        )
    else:
        print(rep.summary())
        print(f"lists {rep.list_count}")
        print(f"uncovered {rep.uncovered_count}")
        for x, y in sorted(rep.uncovered)[: args.show]:
            print(f"uncovered_pair {x} {y}")
    return 0 if rep.valid else 1


def cmd_encode(args) -> int:
    n, lists = realiser.parse_realiser(_read(args.realiser))
    host = order.antichain(n) if args.poset is None else order.parse_poset(_read(args.poset))
    R = realiser.LocalRealiser(host, lists)
    if args.poset is not None:
        rep = realiser.verify(R)
        if not rep.valid:
            raise ParameterError("realiser does not cover its poset")
    if args.drop_trivial:
        R = R.drop_trivial()
    list_order = [int(t) for t in args.order.split(",")] if args.order else None
    w = codec.crespelle_encode(R, list_order)
    if args.json:
        _emit(json.dumps({"codeword": w.text(), "symbols": len(w), "bits": codec.codeword_bit_cost(w, n)}) + "\n", args.output)
    else:
        _emit(codec.format_codeword(w), args.output)
    return 0


def cmd_decode(args) -> int:
    w = codec.parse_codeword(_read(args.code), args.n)
    lists, P = codec.crespelle_decode(w)
    if args.poset_out:
        _emit(order.format_poset(P), args.poset_out)
    if args.json:
        _emit(json.dumps({"n": w.n, "lists": [list(L) for L in lists], "relations": list(P.relations())}) + "\n", args.output)
    else:
        _emit(realiser.format_realiser(realiser.LocalRealiser(P, lists)), args.output)
    return 0


def cmd_exact(args) -> int:
    P = order.parse_poset(_read(args.poset))
    budget = exact.SearchBudget(d_max=args.max_d, node_limit=args.node_limit, time_limit=args.time_limit)
    try:
        if args.what == "ldim":
            d, W = exact.exact_ldim_witness(P, budget)
            witness = [list(L) for L in W.lists]
        elif args.what == "dim":
            d, witness = exact.exact_dim_witness(P, budget=budget)
        else:
            d, images = exact.exact_twodim_witness(P, budget)
            witness = [sorted(s) for s in images]
    except Exceeded as e:
        if args.json:
            print(json.dumps({"exceeded": True, "lower_bound": e.lower_bound, "reason": e.reason}))
        else:
            print(f"exceeded lower_bound={e.lower_bound}")
        return 2
    if args.json:
        print(json.dumps({"value": d, "witness": witness}))
    else:
        print(f"value {d}")
        if args.witness:
            for W in witness:
                print("witness " + " ".join(map(str, W)))
    return 0


def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def cmd_bounds(args) -> int:
    rep = experiments.bound_table(args.n, args.l, args.k, args.t)
    if args.json:
        print(json.dumps(rep.to_dict()))
        return 0
    bounds = rep.bounds()
    w = max(len(name) for name in bounds)
    print(f"{'bound':<{w}}  {'value':>14}  applicable  asymptotic  note")
    for name, b in bounds.items():
        print(f"{name:<{w}}  {_fmt(b.value):>14}  {str(b.applicable).lower():<10}  {str(b.asymptotic).lower():<10}  {b.note}")
    for name, b in bounds.items():
        if b.applicable:
            print(f"metric {name} {_fmt(b.value)}")
    return 0


def cmd_sample(args) -> int:
    if args.kind == "two-layer":
        P = experiments.sample_two_layer(args.n, args.seed)
    else:
        m = args.m if args.m is not None else experiments.default_m(args.n, args.l)
        P = experiments.sample_layer_model(args.n, args.l, args.k, m, args.seed)
        if args.dedup:
            P = experiments.dedup_neighbourhoods(P)
    _emit(order.format_poset(P), args.output)
    return 0


def cmd_experiment(args) -> int:
    kind = {"avg-ldim": "avg_ldim", "shannon": "shannon_length", "unimodal": "unimodal"}[args.kind]
    params = {"n": args.n, "samples": args.samples}
    rep = experiments.run_experiment(kind, params, args.seed)
    if args.json:
        print(json.dumps({"kind": rep.kind, "params": rep.params, "seed": rep.seed, "metrics": rep.metrics, "rows": rep.rows}))
        return 0
    if rep.rows:
        cols = list(rep.rows[0])
        print("  ".join(f"{c:>12}" for c in cols))
        for r in rep.rows:
            print("  ".join(f"{_fmt(r[c]):>12}" for c in cols))
    for name, v in rep.metrics.items():
        print(f"metric {name} {_fmt(v) if not isinstance(v, bool) else str(v).lower()}")
    return 0


def cmd_embed(args) -> int:
    if args.kind == "shift12":
        e = constructions.shift_embedding_12(args.n, args.k)
    elif args.kind == "up":
        e = constructions.shift_embedding_up(args.n, args.l, args.k)
    else:
        e = constructions.divisibility_embedding(args.k, args.n)
    ok = e.is_valid()
    if args.json:
        _emit(json.dumps({"valid": ok, "f": [[a, e.f[a]] for a in e.source.elements()]}) + "\n", args.output)
    else:
        _emit("\n".join(e.lines()) + f"\nvalid {str(ok).lower()}\n", args.output)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ldim", description="Local dimension toolkit for posets.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, output=True):
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        if output:
            sp.add_argument("-o", "--output", default=None, help="output file (default stdout)")

    c = sub.add_parser("construct", help="build an explicit local realiser")
    c.add_argument("kind", choices=["far-layers", "bipartite", "hypercube", "lex-subst", "lex-add"])
    c.add_argument("--n", type=int)
    c.add_argument("--l", type=int, default=1)
    c.add_argument("--k", type=int)
    c.add_argument("--top", type=int)
    c.add_argument("--m", type=int)
    c.add_argument("--poset")
    c.add_argument("--realiser")
    c.add_argument("--summand", help="poset file used as every summand (default: --m antichain)")
    c.add_argument("--poset-out", help="also write the host poset here")
    common(c)
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="check a realiser against a poset")
    v.add_argument("--poset")
    v.add_argument("--n", type=int)
    v.add_argument("--l", type=int)
    v.add_argument("--k", type=int)
    v.add_argument("--realiser", required=True)
    v.add_argument("--show", type=int, default=20, help="uncovered pairs to list")
    common(v, output=False)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("encode", help="realiser file -> Crespelle codeword")
    e.add_argument("--realiser", required=True)
    e.add_argument("--poset", help="optional host, checked before encoding")
    e.add_argument("--order", help="comma-separated list order (0-based)")
    e.add_argument("--drop-trivial", action="store_true")
    common(e)
    e.set_defaults(func=cmd_encode)

    d = sub.add_parser("decode", help="Crespelle codeword -> realiser file")
    d.add_argument("--code", required=True)
    d.add_argument("--n", type=int)
    d.add_argument("--poset-out")
    common(d)
    d.set_defaults(func=cmd_decode)

    x = sub.add_parser("exact", help="exact ldim / dim / 2-dim by search")
    x.add_argument("what", choices=["ldim", "dim", "twodim"])
    x.add_argument("--poset", required=True)
    x.add_argument("--max-d", type=int, default=32)
    x.add_argument("--node-limit", type=int, default=20_000_000)
    x.add_argument("--time-limit", type=float, default=300.0)
    x.add_argument("--witness", action="store_true")
    common(x, output=False)
    x.set_defaults(func=cmd_exact)

    b = sub.add_parser("bounds", help="evaluate every closed-form bound")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--l", type=int, default=1)
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--t", type=int, default=2)
    common(b, output=False)
    b.set_defaults(func=cmd_bounds)

    s = sub.add_parser("sample", help="draw a random poset")
    s.add_argument("kind", choices=["two-layer", "layer"])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--l", type=int, default=1)
    s.add_argument("--k", type=int)
    s.add_argument("--m", type=int)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--dedup", action="store_true")
    common(s)
    s.set_defaults(func=cmd_sample)

    r = sub.add_parser("experiment", help="desk-scale empirical checks")
    r.add_argument("kind", choices=["avg-ldim", "shannon", "unimodal"])
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--samples", type=int, default=100)
    r.add_argument("--seed", type=int)
    common(r, output=False)
    r.set_defaults(func=cmd_experiment)

    m = sub.add_parser("embed", help="build and check an order embedding")
    m.add_argument("kind", choices=["shift12", "up", "divisibility"])
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--l", type=int, default=1)
    m.add_argument("--k", type=int, required=True)
    common(m)
    m.set_defaults(func=cmd_embed)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "construct":
        need = {"far-layers": ("n", "top"), "bipartite": ("n", "k"), "hypercube": ("m", "k")}.get(args.kind, ("poset", "realiser"))
        missing = [f"--{a}" for a in need if getattr(args, a) is None]
        if missing:
            parser.error(f"construct {args.kind} needs {' '.join(missing)}")
    if args.command == "sample" and args.kind == "layer" and args.k is None:
        parser.error("sample layer needs --k")
    try:
        return args.func(args)
    except LdimError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
