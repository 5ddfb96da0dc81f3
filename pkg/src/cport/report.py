"""Report documents: payload builders, JSON/CSV serialization, human rendering.

Human output rounds angles to 1 decimal, shares to 2 and money (M EUR) to 3;
JSON carries full float precision.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any

from cport import __version__
from cport.errors import NullVectorError
from cport.ingest import IngestSummary, PortSnapshot
from cport.metrics import Bundle, CPortVector, angle_degrees, squared_share, total_investment

REPORT_KINDS = ("snapshot", "comparison", "ranking", "trajectory", "gap")
BUNDLES = tuple(b.value for b in Bundle)


def file_digest(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class ReportDocument:
    kind: str
    payload: dict[str, Any]
    inputs: list[tuple[str, str]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.kind not in REPORT_KINDS:
            raise ValueError(f"unknown report kind {self.kind!r}")

    def meta(self, reproducible: bool = False) -> dict[str, Any]:
        meta: dict[str, Any] = {
            "tool": "cport",
            "version": __version__,
            "inputs": [
                {"role": role, "path": path, "sha256": file_digest(path)}
                for role, path in self.inputs
            ],
        }
        if not reproducible:
            meta["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
        return meta

    def to_dict(self, reproducible: bool = False) -> dict[str, Any]:
        return {"kind": self.kind, "meta": self.meta(reproducible), "payload": self.payload}

    def to_json(self, reproducible: bool = False) -> str:
        return dumps(self.to_dict(reproducible))


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False, allow_nan=False) + "\n"


# -- payloads ---------------------------------------------------------------


def _shares(v: CPortVector) -> dict[str, float] | None:
    if v.is_null:
        return None
    return dict(zip(BUNDLES, (float(s) for s in squared_share(v))))


def vector_payload(v: CPortVector) -> dict[str, Any]:
    return {
        "window": v.window,
        "rho": v.rho,
        "components": v.to_dict(),
        "magnitude": v.magnitude,
        "squared_share": _shares(v),
    }


def snapshot_payload(snap: PortSnapshot, summary: IngestSummary | None = None) -> dict[str, Any]:
    v = snap.vector()
    payload = {
        "port_id": snap.port_id,
        "window": {
            "label": snap.window.label,
            "start_year": snap.window.start_year,
            "end_year": snap.window.end_year,
        },
        "rho": snap.rho,
        "rho_source": "override" if snap.rho_override is not None else "ledger",
        "weights": {"a": snap.a.tolist(), "w": snap.w.tolist()},
        "matrix_meur": snap.matrix.to_dict(),
        "cport_vector": v.to_dict(),
        "magnitude": v.magnitude,
        "squared_share": _shares(v),
        "total_investment_meur": total_investment(snap.matrix),
    }
    if snap.ledger is not None:
        payload["standards"] = {
            "applicable": len(snap.ledger.applicable),
            "adopted": len(snap.ledger.adopted),
        }
    if summary is not None:
        payload["ingest"] = summary.to_dict()
    return payload


def comparison_payload(left: PortSnapshot, right: PortSnapshot) -> dict[str, Any]:
    """Both vectors and their angle; the angle is None (with a note) if either is null."""
    lv, rv = left.vector(), right.vector()
    notes = []
    for side, snap, v in (("left", left, lv), ("right", right, rv)):
        if snap.rho == 0:
            notes.append(f"{side} snapshot has rho = 0 (no standard adopted); comparison refused")
        elif v.is_null:
            notes.append(f"{side} snapshot {snap.port_id} {snap.window.label} has no investment")
    alpha = None if notes else angle_degrees(lv, rv)
    return {
        "left": {"port_id": left.port_id, **vector_payload(lv)},
        "right": {"port_id": right.port_id, **vector_payload(rv)},
        "angle_degrees": alpha,
        "note": "; ".join(notes) or None,
    }


def trajectory_payload(snaps: list[PortSnapshot]) -> dict[str, Any]:
    vectors = [s.vector() for s in snaps]
    angles = []
    for prev, cur in zip(vectors, vectors[1:]):
        try:
            alpha, note = angle_degrees(prev, cur), None
        except NullVectorError as exc:
            alpha, note = None, str(exc)
        angles.append({"from": prev.window, "to": cur.window, "angle_degrees": alpha, "note": note})
    return {
        "port_id": snaps[0].port_id if snaps else None,
        "points": [vector_payload(v) for v in vectors],
        "angles": angles,
    }


def trajectory_csv(payload: dict[str, Any]) -> str:
    """Flat per-window rows for plotting; the angle column is relative to the previous row."""
    buf = io.StringIO(newline="")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["window"]
        + [f"cpv_{b.lower()}" for b in BUNDLES]
        + ["magnitude"]
        + [f"share_{b.lower()}" for b in BUNDLES]
        + ["angle_from_previous_deg"]
    )
    for i, point in enumerate(payload["points"]):
        shares = point["squared_share"]
        if i == 0:
            angle_cell = ""
        else:
            prev_angle = payload["angles"][i - 1]["angle_degrees"]
            angle_cell = "undefined" if prev_angle is None else repr(prev_angle)
        writer.writerow(
            [point["window"]]
            + [repr(point["components"][b]) for b in BUNDLES]
            + [repr(point["magnitude"])]
            + [repr(shares[b]) if shares else "" for b in BUNDLES]
            + [angle_cell]
        )
    return buf.getvalue()


# -- human rendering --------------------------------------------------------


def _style() -> tuple[str, str]:
    if os.environ.get("CPORT_NO_COLOR") or not sys.stdout.isatty():
        return "", ""
    return "\033[1m", "\033[0m"


def money(x: float) -> str:
    return f"{x:.3f}"


def share(x: float) -> str:
    return f"{x:.2f}"


def angle(x: float | None) -> str:
    return "undefined" if x is None else f"{x:.1f}"


def _deg(x: float | None) -> str:
    return "undefined" if x is None else f"{angle(x)} deg"


def _header(text: str) -> str:
    bold, reset = _style()
    return f"{bold}{text}{reset}"


def _vector_lines(prefix: str, comps: dict[str, float], shares: dict[str, float] | None) -> list[str]:
    lines = [prefix + "  ".join(f"{b}={money(comps[b])}" for b in BUNDLES)]
    if shares is not None:
        lines.append("  share  " + "  ".join(f"{b}={share(shares[b])}" for b in BUNDLES))
    return lines


def render_human(doc: ReportDocument) -> str:
    p = doc.payload
    out: list[str] = []
    if doc.kind == "snapshot":
        out.append(_header(f"C-Port Vector  {p['port_id']}  {p['window']['label']}"))
        out.append(f"  rho    {p['rho']:.3f} ({p['rho_source']})")
        out.append("  matrix (M EUR)      P        D        R")
        for b in BUNDLES:
            row = p["matrix_meur"][b]
            out.append(f"    {b:<14}" + "".join(f"{money(row[s]):>9}" for s in "PDR"))
        out.extend(_vector_lines("  C-PV   ", p["cport_vector"], p["squared_share"]))
        out.append(f"  |C-PV| {money(p['magnitude'])}")
        out.append(f"  total investment {money(p['total_investment_meur'])} M EUR")
        ingest = p.get("ingest")
        if ingest and ingest["excluded_outside_windows"]:
            out.append(f"  ({ingest['excluded_outside_windows']} records outside the window)")
    elif doc.kind == "comparison":
        out.append(_header("C-Port Vector comparison"))
        for side in ("left", "right"):
            s = p[side]
            out.extend(_vector_lines(f"  {s['port_id']} {s['window']}: ", s["components"], s["squared_share"]))
        out.append(f"  angle  {_deg(p['angle_degrees'])}")
        if p["note"]:
            out.append(f"  note: {p['note']}")
    elif doc.kind == "ranking":
        out.append(_header(f"Ranking by |C-PV|  {p['window']}"))
        for r in p["ranking"]:
            shares = r["squared_share"]
            mix = "  ".join(f"{b}={share(shares[b])}" for b in BUNDLES) if shares else "null vector"
            out.append(f"  {r['rank']:>3}. {r['port_id']:<20} {money(r['magnitude']):>10}   {mix}")
        for w in p["warnings"]:
            out.append(f"  warning: {w}")
    elif doc.kind == "trajectory":
        out.append(_header(f"Trajectory  {p['port_id']}"))
        for point in p["points"]:
            out.extend(
                _vector_lines(
                    f"  {point['window']}: ", point["components"], point["squared_share"]
                )
            )
            out.append(f"  |C-PV| {money(point['magnitude'])}")
        for a in p["angles"]:
            out.append(f"  angle {a['from']} -> {a['to']}: {_deg(a['angle_degrees'])}")
    elif doc.kind == "gap":
        out.append(_header("Readiness gap report"))
        for v in p["services"]:
            line = f"  {v['code']:<5} {v['verdict']}"
            if v["missing"]:
                line += "  missing: " + ", ".join(v["missing"])
            out.append(line)
        s = p["summary"]
        out.append(f"  {s['deliverable']} deliverable, {s['blocked']} blocked")
        if s["unknown_capabilities"]:
            out.append("  unknown capabilities: " + ", ".join(s["unknown_capabilities"]))
    return "\n".join(out) + "\n"
