"""Built-in C-Port service catalog and readiness gap reports.

Sixteen services across the four bundles, classified Day 1 / Day 1.5 / Day 2.
Functions are held as kebab-case tokens (``accurate-vessel-positioning``) with
the original phrase kept in :data:`FUNCTION_LABELS`.  Stakeholders keep their
upper-case community-role labels.

Per-service KET attribution is an implementer transcription: KETs are only
named per bundle, against driver functions, so each service gets the KETs whose
named functions it actually uses.  Doubtful calls are listed in ``ket_notes``.
"""

from __future__ import annotations

import re
from collections.abc import Iterable
from dataclasses import dataclass
from enum import Enum
from typing import Any

from cport.errors import DomainError, UnknownReferenceError
from cport.metrics import Bundle


class DayClass(str, Enum):
    DAY1 = "Day1"
    DAY1_5 = "Day1_5"
    DAY2 = "Day2"

    @property
    def label(self) -> str:
        return {"Day1": "Day 1", "Day1_5": "Day 1.5", "Day2": "Day 2"}[self.value]

    @classmethod
    def parse(cls, text: str) -> DayClass:
        """Accept ``1``, ``1.5``, ``2``, ``Day 1.5``, ``Day1_5`` and similar."""
        key = re.sub(r"[\s_]", "", str(text)).lower().removeprefix("day").replace(".", "")
        mapping = {"1": cls.DAY1, "15": cls.DAY1_5, "2": cls.DAY2}
        if key not in mapping:
            raise DomainError(f"unknown day class {text!r} (1, 1.5 or 2)")
        return mapping[key]


class Ket(str, Enum):
    FIVE_G = "5G"
    IOT = "IoT"
    BLOCKCHAIN = "Blockchain"
    AI_ML = "AI/ML"
    SAT_COM = "SatCom"
    SAT_EO = "SatEO"
    SAT_NAV = "SatNav"

    @classmethod
    def parse(cls, text: str) -> Ket:
        key = re.sub(r"[^a-z0-9]", "", text.lower())
        aliases = {"fiveg": "5g", "bc": "blockchain", "aiml": "aiml", "ai": "aiml", "ml": "aiml"}
        key = aliases.get(key, key)
        for ket in cls:
            if re.sub(r"[^a-z0-9]", "", ket.value.lower()) == key:
                return ket
        raise DomainError(f"unknown KET {text!r}")


_PAREN = re.compile(r"\([^)]*\)")


def to_token(phrase: str) -> str:
    """Normalize a function phrase to its lowercase kebab-case token.

    Parenthetical qualifiers are dropped and ``&`` becomes ``and``, so
    "Accurate Vessel Positioning (terrestrial and satellite)" maps to
    ``accurate-vessel-positioning``.  Tokens map to themselves.
    """
    text = _PAREN.sub(" ", phrase).replace("&", " and ").lower()
    return re.sub(r"[^a-z0-9]+", "-", text).strip("-")


# Function phrases as printed in the classification table.
_PHRASES = [
    "Accurate Vessel Positioning (terrestrial and satellite)",
    "Full information about cargo",
    "Low-Rate Vessel-Port bi-directional communication",
    "Accurate Bathymetric Data",
    "(Containerized and General) cargo pervasive monitoring and control in port areas (docks, warehouses, stores)",
    "Real-time communication Port-Terminals-Trucks",
    "IoT-based distributed network",
    "Data aggregation and on-line analytical processing",
    "Vessel-Port bi-directional communication",
    "Accounting for users, vehicles and goods",
    "Integration with Gate Transit System",
    "Port-to-Port communications",
    "Port-to-Road communications",
    "Port-to-Railways communications",
    "Moving from POC to full-scale deployment",
    "Distributed monitoring network",
    "Journey planner and manager (booking, payment)",
    "JIT information delivery",
    "MaaS platform",
    "Port-to-road full-fledged data exchange",
    "Standard adaptation protocol from DATEX to C-ITS",
    "Real-time communication Port-Vehicles-Pedestrians",
    "Real-Time meteo-marine monitoring",
    "HD video sources on vessel & port",
    "High-Rate/Real-Time Vessel-Port bi-directional communication",
    "Data mining and knowledge extraction",
]

FUNCTION_LABELS: dict[str, str] = {to_token(p): p for p in _PHRASES}


@dataclass(frozen=True)
class ServiceEntry:
    code: str
    name: str
    day: DayClass
    enabling_functions: frozenset[str]
    missing_functions: frozenset[str]
    stakeholders: tuple[str, ...]
    kets: frozenset[Ket]
    ket_notes: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        Bundle.from_letter(self.code[:1])
        if self.day is DayClass.DAY1 and self.missing_functions:
            raise DomainError(f"{self.code}: a Day 1 service cannot have missing functions")
        unknown = (self.enabling_functions | self.missing_functions) - FUNCTION_LABELS.keys()
        if unknown:
            raise DomainError(f"{self.code}: unregistered function tokens {sorted(unknown)}")

    @property
    def bundle(self) -> Bundle:
        return Bundle.from_letter(self.code[0])

    @property
    def required_functions(self) -> frozenset[str]:
        return self.enabling_functions | self.missing_functions

    def to_dict(self) -> dict[str, Any]:
        def funcs(tokens: frozenset[str]) -> list[dict[str, str]]:
            return [{"id": t, "label": FUNCTION_LABELS[t]} for t in sorted(tokens)]

        return {
            "code": self.code,
            "name": self.name,
            "bundle": self.bundle.value,
            "day": self.day.value,
            "enabling_functions": funcs(self.enabling_functions),
            "missing_functions": funcs(self.missing_functions),
            "stakeholders": list(self.stakeholders),
            "kets": sorted(k.value for k in self.kets),
            "ket_attribution": "implementer transcription from bundle-level KET lists",
            "ket_notes": list(self.ket_notes),
        }


def _entry(code, name, day, enabling, missing, stakeholders, kets, notes=()) -> ServiceEntry:
    return ServiceEntry(
        code=code,
        name=name,
        day=day,
        enabling_functions=frozenset(to_token(p) for p in enabling),
        missing_functions=frozenset(to_token(p) for p in missing),
        stakeholders=tuple(stakeholders),
        kets=frozenset(kets),
        ket_notes=tuple(notes),
    )


_AVP = "Accurate Vessel Positioning"
_DAOLAP = "Data aggregation and on-line analytical processing"
_DMN = "Distributed monitoring network"
_POC = "Moving from POC to full-scale deployment"
_SAT_NOTE = "Accurate vessel positioning includes satellite positioning; SatNav is not attributed for lack of an explicit mapping"

D1, D15, D2 = DayClass.DAY1, DayClass.DAY1_5, DayClass.DAY2
G, I, B, A = Ket.FIVE_G, Ket.IOT, Ket.BLOCKCHAIN, Ket.AI_ML

_CATALOG: tuple[ServiceEntry, ...] = (
    _entry(
        "A.1", "Vessel Traffic Management", D1,
        [_AVP, "Full information about cargo", "Low-Rate Vessel-Port bi-directional communication"],
        [],
        ["SHIPPING COMPANIES", "TERMINALS", "FREIGHT FORWARDERS", "INSURANCE COMPANIES", "PORT AUTHORITY", "COAST GUARD"],
        [B],
        [_SAT_NOTE, "5G is tied to high-rate links only, so the low-rate link gets no KET"],
    ),
    _entry(
        "A.2", "Vessel maneuvering in port waters", D2,
        [_AVP, "Accurate Bathymetric Data", "Real-Time meteo-marine monitoring", "HD video sources on vessel & port"],
        ["High-Rate/Real-Time Vessel-Port bi-directional communication"],
        ["INSURANCE COMPANIES", "SHIPPING COMPANIES", "COAST GUARD"],
        [G, I],
        [_SAT_NOTE],
    ),
    _entry(
        "A.3", "Incident at Sea", D15,
        [_AVP, "IoT-based distributed network"],
        [_DAOLAP],
        ["SHIPPING COMPANIES", "FREIGHT FORWARDERS", "INSURANCE COMPANIES", "COAST GUARD"],
        [I, A],
        [_SAT_NOTE, "IoT attributed from the function name, not from the navigation KET list"],
    ),
    _entry(
        "A.4", "Suspicious Vessel / Maneuver", D15,
        [_AVP, "Vessel-Port bi-directional communication"],
        [_DAOLAP],
        ["COAST GUARD", "INSURANCE COMPANIES"],
        [A],
        [_SAT_NOTE, "link rate unspecified, so 5G (high-rate link) is not attributed"],
    ),
    _entry(
        "A.5", "Berth allocation and docking", D1,
        [_AVP, "Accurate Bathymetric Data", "Low-Rate Vessel-Port bi-directional communication"],
        [],
        ["SHIPPING COMPANIES", "TERMINALS", "INSURANCE COMPANIES"],
        [I],
        [_SAT_NOTE],
    ),
    _entry(
        "B.1", "Freight Management and Control", D1,
        ["(Containerized and General) cargo pervasive monitoring and control in port areas (docks, warehouses, stores)"],
        [],
        ["LOCAL SMEs", "FREIGHT FORWARDERS", "HAULIERS", "TERMINALS", "INSURANCE COMPANIES", "CUSTOM OFFICES"],
        [I],
        ["blockchain appears only in the customs benefit, not as an enabling function; not attributed"],
    ),
    _entry(
        "B.2", "Gate Automation", D15,
        ["Accounting for users, vehicles and goods"],
        ["Integration with Gate Transit System"],
        ["HAULIERS"],
        [I],
        ["IoT via automatic identification of users, vehicles and goods, read as the same function"],
    ),
    _entry(
        "B.3", "In-port Smart Navigation", D1,
        ["Real-time communication Port-Terminals-Trucks"],
        [],
        ["SHIPPING COMPANIES", "HAULIERS", "INSURANCE COMPANIES"],
        [G],
    ),
    _entry(
        "B.4", "Freight Routing", D15,
        ["Port-to-Port communications", "Port-to-Road communications", "Port-to-Railways communications"],
        [_POC],
        ["INSURANCE COMPANIES", "PORT AUTHORITY", "CUSTOM OFFICES"],
        [B],
        ["blockchain attributed from reliable port-to-inland information exchange; the match is loose"],
    ),
    _entry(
        "B.5", "Incident at Landside", D15,
        [_DMN],
        [_DAOLAP],
        ["HAULIERS", "INSURANCE COMPANIES"],
        [I, A],
    ),
    _entry(
        "C.1", "Infomobility and journey monitor", D15,
        ["Journey planner and manager (booking, payment)", "JIT information delivery"],
        ["MaaS platform"],
        ["TOURISM OPERATORS", "TOURISTS", "COMMUTERS", "PUBLIC TRANSPORT"],
        [],
        ["no KET list is given for the passenger bundle"],
    ),
    _entry(
        "C.2", "Integration with TCC", D15,
        ["Port-to-road full-fledged data exchange"],
        ["Standard adaptation protocol from DATEX to C-ITS"],
        ["TOURISM OPERATORS", "TOURISTS", "INSURANCE COMPANIES", "PUBLIC TRANSPORT"],
        [],
        ["no KET list is given for the passenger bundle"],
    ),
    _entry(
        "C.3", "In-port Smart and Autonomous Mobility (including safety)", D15,
        ["Real-time communication Port-Vehicles-Pedestrians"],
        [_POC],
        ["TOURISTS", "COMMUTERS", "INSURANCE COMPANIES"],
        [G],
        ["5G taken from the pervasive-network requirement for port-vehicle-pedestrian links"],
    ),
    _entry(
        "D.1", "Pollution Level (including COx and noise)", D15,
        [_DMN],
        [_DAOLAP],
        ["CITIZENS", "PORT AUTHORITY"],
        [I, A],
    ),
    _entry(
        "D.2", "Road Traffic Level", D15,
        [_DMN],
        [_DAOLAP],
        ["PORT AUTHORITY", "CITIZENS"],
        [I, A],
    ),
    _entry(
        "D.3", "Dynamic pricing (all services) to Vessels, Terminals", D2,
        [_DMN],
        [_DAOLAP, "Data mining and knowledge extraction"],
        ["CITIZENS", "HAULIERS", "PORT AUTHORITY"],
        [I, A],
        ["blockchain (certified data series) has no matching function; not attributed"],
    ),
)


def builtin_catalog() -> list[ServiceEntry]:
    """The sixteen services ordered by code."""
    return sorted(_CATALOG, key=lambda e: e.code)


def find(catalog: Iterable[ServiceEntry], code: str) -> ServiceEntry:
    wanted = code.strip().upper()
    for entry in catalog:
        if entry.code == wanted:
            return entry
    raise UnknownReferenceError(f"unknown service code {code!r}")


def query(
    catalog: Iterable[ServiceEntry],
    bundle: Bundle | str | None = None,
    day: DayClass | str | None = None,
    stakeholder: str | None = None,
    ket: Ket | str | None = None,
) -> list[ServiceEntry]:
    """Conjunctive filter; unset criteria match everything.  Stakeholders compare case-insensitively."""
    if bundle is not None and not isinstance(bundle, Bundle):
        bundle = _parse_bundle(bundle)
    if day is not None and not isinstance(day, DayClass):
        day = DayClass.parse(day)
    if ket is not None and not isinstance(ket, Ket):
        ket = Ket.parse(ket)
    holder = stakeholder.casefold().strip() if stakeholder else None

    out = []
    for e in catalog:
        if bundle is not None and e.bundle is not bundle:
            continue
        if day is not None and e.day is not day:
            continue
        if holder is not None and holder not in {s.casefold() for s in e.stakeholders}:
            continue
        if ket is not None and ket not in e.kets:
            continue
        out.append(e)
    return sorted(out, key=lambda e: e.code)


def _parse_bundle(text: str) -> Bundle:
    for b in Bundle:
        if text in (b.value, b.letter, b.name.lower(), b.name):
            return b
    raise DomainError(f"unknown bundle {text!r} (Nv, Fr, Mb, St or A-D)")


@dataclass(frozen=True)
class Verdict:
    code: str
    deliverable: bool
    missing: frozenset[str]

    def to_dict(self) -> dict[str, Any]:
        return {
            "code": self.code,
            "verdict": "Deliverable" if self.deliverable else "Blocked",
            "missing": sorted(self.missing),
        }


@dataclass(frozen=True)
class GapReport:
    verdicts: tuple[Verdict, ...]
    unknown_capabilities: frozenset[str]

    @property
    def deliverable(self) -> list[str]:
        return [v.code for v in self.verdicts if v.deliverable]

    @property
    def blocked(self) -> list[str]:
        return [v.code for v in self.verdicts if not v.deliverable]

    def __getitem__(self, code: str) -> Verdict:
        for v in self.verdicts:
            if v.code == code:
                return v
        raise UnknownReferenceError(f"unknown service code {code!r}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "services": [v.to_dict() for v in self.verdicts],
            "summary": {
                "deliverable": len(self.deliverable),
                "blocked": len(self.blocked),
                "unknown_capabilities": sorted(self.unknown_capabilities),
            },
        }


def gap_report(catalog: Iterable[ServiceEntry], capabilities: Iterable[str]) -> GapReport:
    """A service is deliverable once every enabling and missing function is covered.

    Capability strings may be tokens or printed phrases; anything that matches
    no catalog function is kept and reported as unknown.
    """
    caps = frozenset(to_token(c) for c in capabilities)
    entries = sorted(catalog, key=lambda e: e.code)
    verdicts = tuple(
        Verdict(e.code, not (e.required_functions - caps), e.required_functions - caps)
        for e in entries
    )
    known = frozenset().union(*(e.required_functions for e in entries)) if entries else frozenset()
    return GapReport(verdicts, caps - known)
