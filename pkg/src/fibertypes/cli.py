"""Command line driver: verify, fiber, table, ledger."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys

from .verify import SUITES, ConfigError, RunConfig, run

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _dump_json(obj):
    return json.dumps(obj, sort_keys=True, indent=2, default=_jsonable) + "\n"


def _jsonable(x):
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return str(x)


def _emit(text, out):
    if out:
        try:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise ConfigError(f"cannot write {out}: {exc}") from None
    else:
        sys.stdout.write(text)


def _config(args, suites=SUITES):
    cfg = RunConfig(
        p=args.p,
        f=args.f,
        n_max=getattr(args, "n_max", 0),
        radius=getattr(args, "radius", None),
        suites=tuple(suites),
        fmt=getattr(args, "format", "json"),
        out=getattr(args, "out", None),
    )
    cfg.validate()
    for w in cfg.warnings:
        logging.warning(w)
    return cfg


def cmd_verify(args):
    cfg = _config(args, args.suite or SUITES)
    rep = run(cfg)
    if cfg.fmt == "json":
        text = _dump_json(rep.to_dict())
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id", "anchor", "status", "observed", "expected"])
        for c in rep.checks:
            w.writerow([c.id, c.anchor, c.status, json.dumps(c.observed, sort_keys=True, default=_jsonable),
                        json.dumps(c.expected, sort_keys=True, default=_jsonable)])
        text = buf.getvalue()
    _emit(text, cfg.out)
    for c in rep.failed:
        logging.error("check %s failed: observed %s, expected %s", c.id, c.observed, c.expected)
    return EXIT_FAIL if rep.failed else EXIT_OK


def cmd_fiber(args):
    from .fibers import build_fiber
    from .ring import ring_make
    from .tree import tree_ball

    cfg = _config(args, ())
    radius = max(args.radius or 0, args.n // 2 + 1, 1)
    T = tree_ball(ring_make(cfg.p, cfg.f, 3), radius)
    _emit(build_fiber(T, args.n).export_edge_list(), args.out)
    return EXIT_OK


def cmd_table(args):
    from .pgl2 import pgl2q_character_table

    cfg = _config(args, ("characters",))
    G, _, chars = pgl2q_character_table(cfg.q)
    reps = G.class_reps()
    classes = [{"rep": [[list(x) for x in row] for row in G.matrices[r]], "size": len(c)} for r, c in zip(reps, G.classes)]
    rows = [
        {"label": c.label, "degree": round(c.degree), "values": [[round(v.real, 9) + 0.0, round(v.imag, 9) + 0.0] for v in c.values]}
        for c in chars
    ]
    if cfg.fmt == "json":
        text = _dump_json({"q": cfg.q, "order": G.order, "classes": classes, "characters": rows})
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["label"] + [f"class{i}" for i in range(len(reps))])
        for r in rows:
            w.writerow([r["label"]] + [f"{re:g}{im:+g}i" for re, im in r["values"]])
        text = buf.getvalue()
    _emit(text, cfg.out)
    return EXIT_OK


def cmd_ledger(args):
    from .ledger import LedgerError, types_ledger

    cfg = _config(args, ("ledger",))
    try:
        L = types_ledger(cfg.n_max, cfg.p, cfg.f, strict=False)
    except LedgerError as exc:
        logging.error("%s", exc)
        return EXIT_FAIL
    _emit(L.to_json() if cfg.fmt == "json" else L.to_csv(), cfg.out)
    for f in L.failures:
        logging.error("ledger failure: %s", f)
    return EXIT_FAIL if L.failures else EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="fibertypes", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, n_max=True):
        sp.add_argument("--p", type=int, default=3)
        sp.add_argument("--f", type=int, default=1)
        if n_max:
            sp.add_argument("--n-max", dest="n_max", type=int, default=3)
        sp.add_argument("--radius", type=int, default=None)
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--out", default=None)

    sp = sub.add_parser("verify", help="run verification suites")
    common(sp)
    sp.add_argument("--suite", action="append", choices=SUITES, help="repeatable; default all")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("fiber", help="dump the edge list of Sigma_n")
    common(sp, n_max=False)
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_fiber)

    sp = sub.add_parser("table", help="character table of PGL(2, F_q)")
    common(sp, n_max=False)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("ledger", help="types ledger up to n_max")
    common(sp)
    sp.set_defaults(func=cmd_ledger)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        logging.error("invalid configuration: %s", exc)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
