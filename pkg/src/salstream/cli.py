"""Command-line entry point.

Exit codes: 0 success, 1 lexical/syntax error, 2 semantic error,
3 input/output or configuration error.

The kernel backend is chosen with the SAL_BACKEND environment variable
(numba when available, else the pure numpy path); SAL_SEED overrides any
--seed flag.
"""

from __future__ import annotations

import argparse
import json
import os
import socket
import sys
import time

from .bench import run_sweep
from .cluster import run_cluster, parse_topology, read_frames
from .cluster.runner import make_engine
from .csvio import CsvSource, FeatureWriter, InputFormatError
from .errors import SalError, SalSemanticError, SalSyntaxError
from .lang import parse_program, pretty, validate
from .pipelines import DEFAULT_FIELDS, DEFAULT_GROUPINGS, gen_pipeline
from .sketch.backend import default_backend
from .split import SplitError, split_csv
from .tuples import FIELD_NAMES, Block, format_cell, parse_line

EXIT_OK = 0
EXIT_SYNTAX = 1
EXIT_SEMANTIC = 2
EXIT_IO = 3


def _perr(msg: str) -> None:
    print(msg, file=sys.stderr)


def _load_program(path: str, want_ast: bool = False):
    """Parse and validate, or exit with the right code."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            src = fh.read()
    except OSError as e:
        _perr(f"{path}: {e.strerror}")
        raise SystemExit(EXIT_IO)
    name = os.path.basename(path)
    try:
        prog = parse_program(src, name)
    except SalSyntaxError as e:
        for d in e.diagnostics:
            _perr(str(d))
        raise SystemExit(EXIT_SYNTAX)
    try:
        typed = validate(prog, name)
    except SalSemanticError as e:
        for d in e.diagnostics:
            _perr(str(d))
        raise SystemExit(EXIT_SEMANTIC)
    return (prog, typed) if want_ast else typed


def _seed(args) -> int:
    env = os.environ.get("SAL_SEED")
    return int(env) if env else args.seed


# --- check ----------------------------------------------------------------


def cmd_check(args) -> int:
    prog, typed = _load_program(args.program, want_ast=True)
    from .engine import compile_program

    graph = compile_program(typed)
    for w in graph.warnings:
        _perr(str(w))
    if args.print:
        sys.stdout.write(pretty(prog))
    _perr(
        f"{os.path.basename(args.program)}: ok "
        f"({len(typed.streams) - 1} streams, {len(typed.features)} features)"
    )
    return EXIT_OK


# --- run --------------------------------------------------------------------


def _write_metrics(path: str | None, payload: dict) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")


def cmd_run(args) -> int:
    typed = _load_program(args.program)
    if args.output and args.nodes != 1:
        _perr("--output feature emission requires --nodes 1 (per-tuple rows are node-local)")
        return EXIT_IO
    try:
        src = CsvSource(args.input, batch=args.batch)
    except InputFormatError as e:
        _perr(str(e))
        return EXIT_IO
    if args.mode == "train" and not src.labeled:
        _perr(f"{args.input}: train mode requires a labeled input file")
        return EXIT_IO

    topology = None
    if args.topology:
        try:
            with open(args.topology, "r", encoding="utf-8") as fh:
                topology = parse_topology(fh.read())
        except (OSError, ValueError) as e:
            _perr(f"{args.topology}: {e}")
            return EXIT_IO
        if len(topology) != args.nodes:
            _perr(f"topology lists {len(topology)} nodes but --nodes is {args.nodes}")
            return EXIT_IO

    t0 = time.perf_counter()
    try:
        if args.nodes == 1:
            result = _run_single(typed, src, args)
        else:
            cluster = run_cluster(
                typed,
                [src.blocks()] + [None] * (args.nodes - 1),
                n_nodes=args.nodes,
                transport=args.transport,
                engine=args.engine,
                eps=args.eps,
                batch=args.batch,
                labeled=src.labeled,
                topology=topology,
            )
            result = {
                "engine": cluster.engine_kind,
                "dump": cluster.merged_dump,
                "rows_emitted": 0,
                "per_node": [m.as_dict() for m in cluster.nodes],
                "deliveries": cluster.total_deliveries,
            }
    except InputFormatError as e:
        _perr(str(e))
        return EXIT_IO
    except (ConnectionError, OSError) as e:
        _perr(f"transport failure: {e}")
        return EXIT_IO
    wall = time.perf_counter() - t0

    if args.dump:
        with open(args.dump, "w", encoding="utf-8") as fh:
            for line in result["dump"]:
                fh.write(line + "\n")

    payload = {
        "command": "run",
        "program": os.path.basename(args.program),
        "mode": args.mode,
        "nodes": args.nodes,
        "transport": args.transport if args.nodes > 1 else "local",
        "engine": result["engine"],
        "backend": default_backend(),
        "tuples_read": src.total,
        "malformed_lines": src.malformed,
        "rows_emitted": result["rows_emitted"],
        "wall_seconds": round(wall, 4),
        "throughput_tuples_per_second": round((src.total - src.malformed) / wall, 1)
        if wall > 0
        else None,
    }
    for k in ("per_node", "deliveries", "drops"):
        if k in result:
            payload[k] = result[k]
    _write_metrics(args.metrics, payload)
    _perr(
        f"processed {src.total - src.malformed} tuples "
        f"({src.malformed} malformed skipped) in {wall:.2f}s"
    )
    return EXIT_OK


def _run_single(typed, src: CsvSource, args) -> dict:
    engine = make_engine(
        typed, n_nodes=1, eps=args.eps, engine=args.engine, emit=bool(args.output)
    )
    writer = None
    if args.output:
        names = [f.name for f in engine.graph.emitted_features()]
        writer = FeatureWriter(args.output, names, with_label=args.mode == "train")
    try:
        for block in src.blocks():
            if writer is None:
                engine.process_block(block)
                continue
            base_cols = [block.cols[n] for n in FIELD_NAMES]
            labels = block.cols["Label"] if src.labeled else None
            for i in range(block.n):
                cells = engine.process_row(block.row(i))
                writer.write_row(
                    [format_cell(c[i]) for c in base_cols],
                    cells,
                    str(labels[i]) if labels is not None else None,
                )
    finally:
        if writer is not None:
            writer.close()
    out = {
        "engine": type(engine).__name__,
        "dump": engine.dump_lines(),
        "rows_emitted": writer.rows if writer else 0,
    }
    if hasattr(engine, "metrics"):
        out["drops"] = engine.metrics.as_dict()
    return out


# --- gen-pipeline ------------------------------------------------------------


def cmd_gen_pipeline(args) -> int:
    try:
        text = gen_pipeline(
            fields=args.fields.split(",") if args.fields else DEFAULT_FIELDS,
            groupings=args.groupings.split(",") if args.groupings else DEFAULT_GROUPINGS,
            window=args.window,
            host=args.host,
            port=args.port,
        )
    except ValueError as e:
        _perr(str(e))
        return EXIT_SEMANTIC
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --- split ---------------------------------------------------------------------


def cmd_split(args) -> int:
    try:
        report = split_csv(args.input, args.out_first, args.out_second)
    except (InputFormatError, SplitError) as e:
        _perr(str(e))
        return EXIT_IO
    payload = {"command": "split", "input": args.input, **report.as_dict()}
    if args.report:
        _write_metrics(args.report, payload)
    print(json.dumps(payload, sort_keys=True))
    return EXIT_OK


# --- bench -----------------------------------------------------------------------


def cmd_bench(args) -> int:
    n_list = [int(x) for x in args.nodes.split(",")]
    reports = run_sweep(
        n_list,
        tuples_per_node=args.tuples_per_node,
        gen_mode=args.generator,
        seed=_seed(args),
        batch=args.batch,
        n_keys=args.keys,
        window=args.window,
    )
    lines = [json.dumps(r, sort_keys=True) for r in reports]
    if args.metrics:
        with open(args.metrics, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    for r in reports:
        print(
            f"n={r['nodes']:<2d} gen={r['generator']:<8s} "
            f"wall={r['wall_seconds']:8.2f}s "
            f"tput={r['throughput_tuples_per_second']:>10,.0f}/s "
            f"E_wall={r['e_wall']:.3f} E_crit={r['e_crit']:.3f} "
            f"E_load={r['e_load']:.3f}"
        )
    return EXIT_OK


# --- serve -----------------------------------------------------------------------


def cmd_serve(args) -> int:
    typed = _load_program(args.program)
    conn = typed.connection
    engine = make_engine(typed, n_nodes=1, eps=args.eps, engine=args.engine)
    host = args.host or conn.host
    port = args.port or conn.port
    srv = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    srv.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        srv.bind((host, port))
    except OSError as e:
        _perr(f"cannot listen on {host}:{port}: {e.strerror}")
        return EXIT_IO
    srv.listen(1)
    _perr(f"listening on {host}:{port}")
    peer, addr = srv.accept()
    total = malformed = 0
    rows = []
    t0 = time.perf_counter()
    for payload in read_frames(peer):
        total += 1
        row = parse_line(payload.decode("utf-8"), args.labeled)
        if row is None:
            malformed += 1
            continue
        rows.append(row)
        if len(rows) >= args.batch:
            engine.process_block(Block.from_rows(rows, args.labeled))
            rows = []
    if rows:
        engine.process_block(Block.from_rows(rows, args.labeled))
    wall = time.perf_counter() - t0
    peer.close()
    srv.close()
    if args.dump:
        with open(args.dump, "w", encoding="utf-8") as fh:
            for line in engine.dump_lines():
                fh.write(line + "\n")
    _write_metrics(
        args.metrics,
        {
            "command": "serve",
            "tuples_read": total,
            "malformed_lines": malformed,
            "wall_seconds": round(wall, 4),
            "backend": default_backend(),
        },
    )
    _perr(f"ingested {total - malformed} tuples ({malformed} malformed) in {wall:.2f}s")
    return EXIT_OK


# --- argument plumbing --------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sal",
        description="Streaming analytics pipelines over netflow tuples.",
        epilog="Environment: SAL_BACKEND=numba|python selects the kernel "
        "backend; SAL_SEED overrides --seed.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="parse and validate a program")
    c.add_argument("program")
    c.add_argument("--print", action="store_true", help="print the canonical form")
    c.set_defaults(fn=cmd_check)

    r = sub.add_parser("run", help="execute a program over a CSV input")
    r.add_argument("program")
    r.add_argument("--input", required=True, help="netflow CSV (header required)")
    r.add_argument("--mode", choices=("train", "test", "features-only"), default="features-only")
    r.add_argument("--nodes", type=int, default=1)
    r.add_argument("--transport", choices=("inproc", "tcp"), default="inproc")
    r.add_argument("--topology", help="topology file of 'nodeId host basePort' lines")
    r.add_argument("--engine", choices=("auto", "general", "columnar"), default="auto")
    r.add_argument("--output", help="feature CSV path (one row per tuple; nodes=1 only)")
    r.add_argument("--dump", help="write the final feature-map dump here")
    r.add_argument("--metrics", help="write run metrics JSON here")
    r.add_argument("--batch", type=int, default=1000)
    r.add_argument("--eps", type=float, default=0.01)
    r.add_argument("--seed", type=int, default=0)
    r.set_defaults(fn=cmd_run)

    g = sub.add_parser("gen-pipeline", help="emit the standard ave/var feature program")
    g.add_argument("--fields", help="comma-separated numeric fields")
    g.add_argument("--groupings", help="comma-separated string key fields")
    g.add_argument("--window", type=int, default=10_000)
    g.add_argument("--host", default="localhost")
    g.add_argument("--port", type=int, default=9999)
    g.add_argument("-o", "--output")
    g.set_defaults(fn=cmd_gen_pipeline)

    s = sub.add_parser("split", help="balanced temporal split of a labeled CSV")
    s.add_argument("--input", required=True)
    s.add_argument("--out-first", required=True)
    s.add_argument("--out-second", required=True)
    s.add_argument("--report", help="write the split report JSON here")
    s.set_defaults(fn=cmd_split)

    b = sub.add_parser("bench", help="weak-scaling benchmark over synthetic streams")
    b.add_argument("--nodes", default="1,2,4,8", help="comma-separated sweep, baseline first")
    b.add_argument("--tuples-per-node", type=int, default=1_000_000)
    b.add_argument("--generator", choices=("uniform", "powerlaw"), default="uniform")
    b.add_argument("--keys", type=int, help="key-pool size (default per generator)")
    b.add_argument("--window", type=int, default=10_000)
    b.add_argument("--batch", type=int, default=1000)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--metrics", help="write one JSON line per run here")
    b.set_defaults(fn=cmd_bench)

    v = sub.add_parser("serve", help="listen for framed tuples on the program's port")
    v.add_argument("program")
    v.add_argument("--host", help="override the program's connection host")
    v.add_argument("--port", type=int, help="override the program's connection port")
    v.add_argument("--labeled", action="store_true", help="expect Label as a 15th column")
    v.add_argument("--engine", choices=("auto", "general", "columnar"), default="auto")
    v.add_argument("--dump")
    v.add_argument("--metrics")
    v.add_argument("--batch", type=int, default=1000)
    v.add_argument("--eps", type=float, default=0.01)
    v.set_defaults(fn=cmd_serve)

    return p


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SystemExit as e:
        return int(e.code or 0)
    except SalError as e:  # defensive: all paths above should have mapped these
        for d in e.diagnostics:
            _perr(str(d))
        return EXIT_SEMANTIC


if __name__ == "__main__":
    sys.exit(main())
