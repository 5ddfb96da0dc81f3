"""``cport`` command-line interface.

Exit statuses: 0 success, 2 input validation, 3 undefined mathematical
operation (null C-Port Vector), 4 unknown reference.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any

from cport import __version__
from cport import catalog as cat
from cport.errors import (
    CPortError,
    DomainError,
    NullVectorError,
    UnknownReferenceError,
    ValidationError,
)
from cport.ingest import (
    PortSnapshot,
    ProjectRecord,
    TimeWindow,
    build_matrix,
    default_weights,
    guess_format,
    ingest_summary,
    parse_ledger,
    parse_portfolio,
    parse_weights,
    port_ids,
    resolve_port,
)
from cport.metrics import rank_ports
from cport.report import (
    ReportDocument,
    comparison_payload,
    dumps,
    render_human,
    snapshot_payload,
    trajectory_csv,
    trajectory_payload,
    vector_payload,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_UNDEFINED = 3
EXIT_UNKNOWN_REF = 4


class Inputs:
    """Reads input files once and remembers them for the report digests."""

    def __init__(self) -> None:
        self.used: list[tuple[str, str]] = []

    def read(self, path: str, role: str) -> bytes:
        try:
            with open(path, "rb") as fh:
                data = fh.read()
        except OSError as exc:
            raise ValidationError(f"cannot read {role} file {path!r}: {exc.strerror}") from None
        if (role, path) not in self.used:
            self.used.append((role, path))
        return data

    def portfolio(self, path: str) -> list[ProjectRecord]:
        return parse_portfolio(self.read(path, "portfolio"), guess_format(path), source=path)

    def weights(self, path: str | None):
        if path is None:
            return default_weights()
        return parse_weights(self.read(path, "weights"), source=path)

    def snapshot(
        self,
        records: list[ProjectRecord],
        window: TimeWindow,
        port_id: str | None,
        ledger_path: str | None,
        rho: float | None,
        weights_path: str | None,
    ) -> PortSnapshot:
        port = resolve_port(records, port_id)
        a, w = self.weights(weights_path)
        if rho is not None:
            ledger = None
        elif ledger_path is not None:
            ledger = parse_ledger(self.read(ledger_path, "ledger"), source=ledger_path)
        else:
            raise ValidationError(
                "rho is not assumed: give a standards ledger (--ledger) or an explicit --rho"
            )
        return PortSnapshot(
            port_id=port,
            window=window,
            matrix=build_matrix(records, window, port),
            a=a,
            w=w,
            ledger=ledger,
            rho_override=rho,
        )


def _window(text: str) -> TimeWindow:
    try:
        return TimeWindow.parse(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _emit(args: argparse.Namespace, doc: ReportDocument) -> None:
    if args.format == "json":
        sys.stdout.write(doc.to_json(reproducible=args.reproducible))
    else:
        sys.stdout.write(render_human(doc))


# -- commands ---------------------------------------------------------------


def cmd_ingest_check(args: argparse.Namespace) -> int:
    inputs = Inputs()
    records = inputs.portfolio(args.portfolio)
    if args.ledger:
        parse_ledger(inputs.read(args.ledger, "ledger"), source=args.ledger)
    inputs.weights(args.weights)
    ports = [args.port] if args.port else port_ids(records)
    summaries = [ingest_summary(records, args.window or [], p).to_dict() for p in ports]
    if args.format == "json":
        sys.stdout.write(dumps({"records": len(records), "ports": summaries}))
    else:
        print(f"{args.portfolio}: {len(records)} valid records, {len(ports)} port(s)")
        for s in summaries:
            years = ", ".join(f"{y}:{n}" for y, n in s["records_per_year"].items())
            print(f"  {s['port_id']}: {s['records_for_port']} records ({years})")
            for label, n in s["in_window"].items():
                print(f"    window {label}: {n} records")
            if args.window:
                print(f"    outside every window: {s['excluded_outside_windows']}")
    return EXIT_OK


def cmd_compute(args: argparse.Namespace) -> int:
    inputs = Inputs()
    records = inputs.portfolio(args.portfolio)
    snap = inputs.snapshot(records, args.window, args.port, args.ledger, args.rho, args.weights)
    summary = ingest_summary(records, [args.window], snap.port_id)
    _emit(args, ReportDocument("snapshot", snapshot_payload(snap, summary), inputs.used))
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    inputs = Inputs()
    records = inputs.portfolio(args.portfolio)
    left = inputs.snapshot(records, args.window, args.port, args.ledger, args.rho, args.weights)
    other = inputs.portfolio(args.against_portfolio) if args.against_portfolio else records
    right = inputs.snapshot(
        other,
        args.against,
        args.against_port or (left.port_id if other is records else None),
        args.against_ledger or args.ledger,
        args.against_rho if args.against_rho is not None else args.rho,
        args.weights,
    )
    payload = comparison_payload(left, right)
    _emit(args, ReportDocument("comparison", payload, inputs.used))
    if payload["angle_degrees"] is None:
        print(f"cport: {NullVectorError()} ({payload['note']})", file=sys.stderr)
        return EXIT_UNDEFINED
    return EXIT_OK


def cmd_trajectory(args: argparse.Namespace) -> int:
    if len(args.window) < 2:
        raise ValidationError("trajectory needs at least two --window values")
    inputs = Inputs()
    records = inputs.portfolio(args.portfolio)
    snaps = [
        inputs.snapshot(records, w, args.port, args.ledger, args.rho, args.weights)
        for w in args.window
    ]
    payload = trajectory_payload(snaps)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(trajectory_csv(payload))
    _emit(args, ReportDocument("trajectory", payload, inputs.used))
    return EXIT_OK


def _manifest_path(base: str, path: str | None) -> str | None:
    if path is None or os.path.isabs(path):
        return path
    return os.path.join(os.path.dirname(base), path)


def cmd_rank(args: argparse.Namespace) -> int:
    inputs = Inputs()
    raw = inputs.read(args.manifest, "manifest")
    try:
        manifest = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ValidationError(f"manifest is not valid JSON: {exc}", args.manifest) from None
    if not isinstance(manifest, dict) or not isinstance(manifest.get("ports"), list) or not manifest["ports"]:
        raise ValidationError('manifest needs a non-empty "ports" array', args.manifest)
    window = args.window
    if window is None:
        if "window" not in manifest:
            raise ValidationError("no window: pass --window or set \"window\" in the manifest")
        window = TimeWindow.parse(str(manifest["window"]))

    vectors = []
    warnings = []
    for i, entry in enumerate(manifest["ports"]):
        label = entry.get("port_id", f"ports[{i}]") if isinstance(entry, dict) else f"ports[{i}]"
        try:
            if not isinstance(entry, dict) or "portfolio" not in entry:
                raise ValidationError('each port entry needs "port_id" and "portfolio"')
            rho = entry.get("rho", args.rho)
            if rho is not None and (isinstance(rho, bool) or not isinstance(rho, (int, float))):
                raise ValidationError(f"rho must be a number, got {rho!r}")
            records = inputs.portfolio(_manifest_path(args.manifest, entry["portfolio"]))
            snap = inputs.snapshot(
                records,
                window,
                entry.get("port_id"),
                _manifest_path(args.manifest, entry.get("ledger")) or args.ledger,
                rho,
                _manifest_path(args.manifest, entry.get("weights")) or args.weights,
            )
        except CPortError as exc:
            warnings.append(f"{label}: skipped: {exc}")
            continue
        vectors.append((snap.port_id, snap.vector()))

    if not vectors:
        raise ValidationError(["no port could be evaluated"] + warnings, args.manifest)
    by_port = dict(vectors)
    ranking = []
    for entry in rank_ports(vectors):
        vp = vector_payload(by_port[entry.port_id])
        ranking.append(
            {
                "rank": entry.rank,
                "port_id": entry.port_id,
                "magnitude": entry.magnitude,
                "components": vp["components"],
                "rho": vp["rho"],
                "squared_share": vp["squared_share"],
            }
        )
    payload = {
        "window": window.label,
        "indicator": "euclidean magnitude of the C-Port Vector",
        "ranking": ranking,
        "warnings": warnings,
    }
    for w in warnings:
        print(f"cport: warning: {w}", file=sys.stderr)
    _emit(args, ReportDocument("ranking", payload, inputs.used))
    return EXIT_OK


def _catalog_rows(entries: list[cat.ServiceEntry]) -> str:
    lines = [f"{'CODE':<5} {'DAY':<8} {'BUNDLE':<7} NAME"]
    for e in entries:
        lines.append(f"{e.code:<5} {e.day.label:<8} {e.bundle.value:<7} {e.name}")
    return "\n".join(lines) + "\n"


def cmd_catalog_list(args: argparse.Namespace) -> int:
    entries = cat.query(
        cat.builtin_catalog(),
        bundle=args.bundle,
        day=args.day,
        stakeholder=args.stakeholder,
        ket=args.ket,
    )
    if args.format == "json":
        sys.stdout.write(dumps([e.to_dict() for e in entries]))
    else:
        sys.stdout.write(_catalog_rows(entries))
    return EXIT_OK


def cmd_catalog_show(args: argparse.Namespace) -> int:
    entry = cat.find(cat.builtin_catalog(), args.code)
    if args.format == "json":
        sys.stdout.write(dumps(entry.to_dict()))
        return EXIT_OK
    d = entry.to_dict()
    print(f"{entry.code} {entry.name}")
    print(f"  bundle        {entry.bundle.value} ({entry.bundle.long_name})")
    print(f"  day           {entry.day.label}")
    print("  enabling      " + "; ".join(f["label"] for f in d["enabling_functions"]))
    print("  missing       " + ("; ".join(f["label"] for f in d["missing_functions"]) or "None"))
    print("  stakeholders  " + ", ".join(entry.stakeholders))
    print("  KETs          " + (", ".join(d["kets"]) or "none attributed"))
    for note in entry.ket_notes:
        print(f"    note: {note}")
    return EXIT_OK


def cmd_catalog_gap(args: argparse.Namespace) -> int:
    inputs = Inputs()
    raw = inputs.read(args.capabilities, "capabilities")
    try:
        doc = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ValidationError(f"capability manifest is not valid JSON: {exc}", args.capabilities) from None
    caps = doc.get("capabilities") if isinstance(doc, dict) else None
    if not isinstance(caps, list) or not all(isinstance(c, str) for c in caps):
        raise ValidationError('capability manifest must be {"capabilities": [strings]}', args.capabilities)
    report = cat.gap_report(cat.builtin_catalog(), caps)
    _emit(args, ReportDocument("gap", report.to_dict(), inputs.used))
    return EXIT_OK


def cmd_catalog_export(args: argparse.Namespace) -> int:
    text = dumps([e.to_dict() for e in cat.builtin_catalog()])
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def _global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    def default(value: Any) -> Any:
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--format", choices=("human", "json"), default=default("human"),
                        help="output format (default: human)")
    parser.add_argument("--reproducible", action="store_true", default=default(False),
                        help="omit the timestamp so JSON reports are byte-identical across runs")
    parser.add_argument("--weights", metavar="PATH", default=default(None),
                        help='weights JSON {"a_raw": [4], "w_raw": [3]}; default uniform a=(2,2,2,2), w=(sqrt3,sqrt3,sqrt3)')
    parser.add_argument("--ledger", metavar="PATH", default=default(None),
                        help='standards ledger JSON {"applicable": [...], "adopted": [...]}')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cport",
        description="Compute, compare and rank C-Port Vectors; query the C-Port service catalog.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_options(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)

    sub = parser.add_subparsers(dest="command", required=True)

    def snapshot_args(p: argparse.ArgumentParser, windows: str = "one") -> None:
        p.add_argument("portfolio", help="portfolio file (.json or .csv)")
        p.add_argument("--port", help="port id (optional when the portfolio holds one port)")
        p.add_argument("--rho", type=float, help="explicit standardization merit factor in [0, 1], instead of --ledger")
        if windows == "one":
            p.add_argument("--window", type=_window, required=True, metavar="START:END")
        else:
            p.add_argument("--window", type=_window, action="append", required=True,
                           metavar="START:END", help="repeat for each window, in order")

    p = sub.add_parser("ingest-check", parents=[common], help="validate input files and summarize records")
    p.add_argument("portfolio")
    p.add_argument("--port")
    p.add_argument("--window", type=_window, action="append", metavar="START:END",
                   help="count records per window (repeatable)")
    p.set_defaults(func=cmd_ingest_check)

    p = sub.add_parser("compute", parents=[common], help="compute one C-Port Vector snapshot")
    snapshot_args(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("compare", parents=[common], help="angle between two snapshots")
    snapshot_args(p)
    p.add_argument("--against", type=_window, required=True, metavar="START:END",
                   help="window of the second snapshot")
    p.add_argument("--against-portfolio", help="portfolio of the second snapshot (default: same file)")
    p.add_argument("--against-port", help="port of the second snapshot (default: same port)")
    p.add_argument("--against-ledger", help="ledger of the second snapshot (default: --ledger)")
    p.add_argument("--against-rho", type=float, help="rho of the second snapshot (default: --rho)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("rank", parents=[common], help="rank several ports by |C-PV|")
    p.add_argument("manifest", help='JSON {"window": "START:END", "ports": [{"port_id", "portfolio", "ledger"|"rho", "weights"?}]}')
    p.add_argument("--window", type=_window, metavar="START:END", help="overrides the manifest window")
    p.add_argument("--rho", type=float, help="rho for ports without their own ledger or rho")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("trajectory", parents=[common], help="C-Port Vector over a sequence of windows")
    snapshot_args(p, windows="many")
    p.add_argument("--csv", metavar="PATH", help="also write flat plot data as CSV")
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("catalog", parents=[common], help="query the built-in C-Port service catalog")
    csub = p.add_subparsers(dest="catalog_command", required=True)
    q = csub.add_parser("list", parents=[common], help="list services, optionally filtered")
    q.add_argument("--bundle", help="Nv, Fr, Mb, St (or A-D)")
    q.add_argument("--day", help="1, 1.5 or 2")
    q.add_argument("--stakeholder", help='e.g. "INSURANCE COMPANIES"')
    q.add_argument("--ket", help="5G, IoT, Blockchain, AI/ML, SatCom, SatEO, SatNav")
    q.set_defaults(func=cmd_catalog_list)
    q = csub.add_parser("show", parents=[common], help="show one service")
    q.add_argument("code", help="service code, e.g. A.2")
    q.set_defaults(func=cmd_catalog_show)
    q = csub.add_parser("gap", parents=[common], help="readiness gap report against a capability manifest")
    q.add_argument("--capabilities", required=True, metavar="PATH", help='JSON {"capabilities": [tokens]}')
    q.set_defaults(func=cmd_catalog_gap)
    q = csub.add_parser("export", parents=[common], help="export the catalog as JSON")
    q.add_argument("--output", metavar="PATH")
    q.set_defaults(func=cmd_catalog_export)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return int(args.func(args))
    except NullVectorError as exc:
        print(f"cport: {exc}", file=sys.stderr)
        return EXIT_UNDEFINED
    except UnknownReferenceError as exc:
        print(f"cport: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN_REF
    except (ValidationError, DomainError) as exc:
        print(f"cport: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
