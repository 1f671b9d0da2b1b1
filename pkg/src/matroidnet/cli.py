"""Command-line entry point: construct, verify, reproduce, bench, export-dot.

Exit status is 0 on success, 1 when a verification or construction fails
(the witness is printed) and 2 on usage or input errors.  Primary output
goes to stdout and is deterministic for fixed flags; timings go to stderr.
"""
from __future__ import annotations

import argparse
import sys
import time

from .construct import (BuildParams, ConstructionFailed, ReplayError, construct,
                        read_trace, replay, write_trace)
from .field import FieldError, field as make_field
from .fileio import write_matroid
from .matroidal import MatroidalError, check_definition5, code_to_matroid
from .network import (NetworkError, export_dot, read_code, read_network,
                      write_network)
from .verifier import check_detecting, decoding_matrix


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _write(path: str, text: str):
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from exc


def _ints(text: str) -> tuple:
    try:
        return tuple(int(t) for t in text.split(",") if t)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _timed(label):
    t0 = time.monotonic()
    return lambda: print(f"{label}: {time.monotonic() - t0:.2f} s", file=sys.stderr)


# ----------------------------------------------------------------------
# construct


def cmd_construct(a) -> int:
    make_field(a.field)
    common = dict(alpha=a.alpha, nc=a.nc, field=a.field, seed=a.seed, ec_size=a.ec_size,
                  trial_budget=a.budget, minimize=a.minimize_sinks)
    if a.mode == "multicast":
        p = BuildParams(mode="multicast", sources=a.sources, sinks=a.sinks, **common)
    else:
        p = BuildParams.unicast(a.n, **common)
    done = _timed("construct")
    try:
        if a.replay:
            rows = read_trace(_read(a.replay))
            p.nc = len(rows)
            res = replay(p, rows)
        else:
            res = construct(p)
    except (ConstructionFailed, ReplayError) as exc:
        done()
        print(f"FAIL construction: {exc}")
        return 1
    done()
    rows = res.state.trace if not a.replay else rows
    print(f"# {p.mode} over {res.state.F.name}, alpha={p.alpha}, seed={p.seed}")
    print(write_trace(rows), end="")
    net = res.net
    print(f"network: {len(net.nodes)} nodes, {net.n_edges} edges, {len(net.eligible)} error-eligible")
    for s in res.state.sinks:
        print(f"sink {s.id}: " + ",".join(f"e{i + 1}" for i in s.inputs))
    chk = check_detecting(net, res.code, 2 * p.alpha, jobs=a.jobs)
    print(f"verify: {chk.verdict()}")
    if a.out_network:
        _write(a.out_network, write_network(net, res.code))
    if a.out_matroid:
        _write(a.out_matroid, write_matroid(res.matroid))
    if a.out_trace:
        _write(a.out_trace, write_trace(rows))
    return 0 if chk.ok else 1


# ----------------------------------------------------------------------
# verify


def cmd_verify(a) -> int:
    net, code = read_network(_read(a.network))
    if a.code:
        code = read_code(net, _read(a.code))
    if code is None:
        raise UsageError("no code: the network file has no A/K lines and --code was not given")
    beta = a.beta if a.beta is not None else 2 * a.alpha
    done = _timed("verify")
    res = check_detecting(net, code, beta, jobs=a.jobs)
    done()
    print(res.verdict())
    ok = res.ok
    if a.as_matroid:
        if not res.ok:
            print("matroid: skipped, the code does not pass")
        else:
            m, f, B = code_to_matroid(net, code, beta, check=False)
            d5 = check_definition5(net, m, f, B, beta)
            print(f"matroid: {m.rep.rows}x{m.rep.cols} over {m.F.name}, "
                  f"conditions {'hold' if d5.ok else 'fail at ' + str(d5.condition)}")
            if not d5.ok:
                print(f"  {d5.detail}")
            ok &= d5.ok
    if a.decoders and res.ok:
        for t in net.sinks:
            X = decoding_matrix(net, code, t.id, [])
            print(f"decoder {t.id} (rows follow In({t.id})):")
            for row in X.a.tolist():
                print("  " + " ".join(str(v) for v in row))
    return 0 if ok else 1


# ----------------------------------------------------------------------
# reproduce and bench


def cmd_reproduce(a) -> int:
    if a.example == "insufficiency":
        return _bench(False, a.budget_min, a.jobs)
    from .reproduce import run_example
    done = _timed(f"reproduce {a.example}")
    rep = run_example(a.example, jobs=a.jobs)
    done()
    print(rep.text(), end="")
    return 0 if rep.ok else 1


def _bench(full, budget_min, jobs) -> int:
    from .insufficiency import bench
    done = _timed("bench insufficiency")
    claims = bench(full=full, budget_min=budget_min, jobs=jobs,
                   log=lambda m: print(m, file=sys.stderr))
    done()
    ok = all(c.ok for c in claims)
    print(f"insufficiency: {'PASS' if ok else 'FAIL'}")
    for c in claims:
        print(f"[{'PASS' if c.ok else 'FAIL'}] {c.key}: {c.text}")
        print(f"       {c.detail}")
    print("no field gives a linear single-edge detecting code for n3: the n1 part needs "
          "characteristic two and the n2 part excludes it")
    return 0 if ok else 1


def cmd_bench(a) -> int:
    return _bench(a.full, a.budget_min, a.jobs)


def cmd_export_dot(a) -> int:
    net, code = read_network(_read(a.network))
    if a.code:
        code = read_code(net, _read(a.code))
    text = export_dot(net, code if a.labels else None)
    if a.out:
        _write(a.out, text)
    else:
        print(text, end="")
    return 0


# ----------------------------------------------------------------------


def parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="matroidnet", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("construct", help="grow an error-correcting network")
    c.add_argument("mode", choices=["multicast", "unicast"])
    c.add_argument("--sources", type=_ints, default=(1,), help="messages per source, e.g. 2,1 (multicast)")
    c.add_argument("--sinks", type=int, default=1, help="number of sinks (multicast)")
    c.add_argument("--n", type=int, default=3, help="number of source-sink pairs (unicast)")
    c.add_argument("--alpha", type=int, default=1)
    c.add_argument("--nc", type=int, default=4, help="coding nodes to add")
    c.add_argument("--ec-size", type=int, default=2, help="edges combined per coding node")
    c.add_argument("--field", default="gf8")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--budget", type=int, default=10 ** 6, help="coefficient trials per edge subset")
    c.add_argument("--minimize-sinks", action="store_true")
    c.add_argument("--replay", metavar="TRACE", help="rebuild from a trace instead of searching")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--out-network")
    c.add_argument("--out-matroid")
    c.add_argument("--out-trace")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="check a network code for error detection/correction")
    v.add_argument("--network", required=True)
    v.add_argument("--code", help="code file (A/K lines) if not inside the network file")
    g = v.add_mutually_exclusive_group(required=True)
    g.add_argument("--alpha", type=int, help="errors to correct")
    g.add_argument("--beta", type=int, help="errors to detect")
    v.add_argument("--as-matroid", action="store_true", help="also check the associated matroid")
    v.add_argument("--decoders", action="store_true", help="print error-free decoding matrices")
    v.add_argument("--jobs", type=int, default=1)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("reproduce", help="rebuild a shipped example and diff it")
    r.add_argument("--example", required=True,
                   choices=["fig3", "fig5", "fig10", "table1", "table2", "insufficiency"])
    r.add_argument("--jobs", type=int, default=1)
    r.add_argument("--budget-min", type=float, default=30)
    r.set_defaults(func=cmd_reproduce)

    b = sub.add_parser("bench", help="benchmarks")
    b.add_argument("suite", choices=["insufficiency"])
    b.add_argument("--full", action="store_true", help="add the GF(2) search on n2")
    b.add_argument("--budget-min", type=float, default=30)
    b.add_argument("--jobs", type=int, default=1)
    b.set_defaults(func=cmd_bench)

    d = sub.add_parser("export-dot", help="Graphviz text for a network")
    d.add_argument("--network", required=True)
    d.add_argument("--code")
    d.add_argument("--labels", action="store_true", help="label edges with global vectors")
    d.add_argument("--out", "-o")
    d.set_defaults(func=cmd_export_dot)
    return ap


def run(argv=None) -> int:
    ap = parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return a.func(a)
    except (UsageError, NetworkError, FieldError, MatroidalError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
