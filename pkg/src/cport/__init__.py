"""C-Port Vector computation, comparison and service catalog."""

__version__ = "0.1.0"

from cport.catalog import (  # noqa: E402
    DayClass,
    Ket,
    ServiceEntry,
    builtin_catalog,
    gap_report,
    query,
)
from cport.errors import (  # noqa: E402
    CPortError,
    DomainError,
    NullVectorError,
    ParseError,
    UnknownReferenceError,
    ValidationError,
)
from cport.ingest import (  # noqa: E402
    PortSnapshot,
    ProjectRecord,
    TimeWindow,
    build_matrix,
    parse_ledger,
    parse_portfolio,
    parse_weights,
)
from cport.metrics import (  # noqa: E402
    Bundle,
    CPortVector,
    InnovationMatrix,
    StandardsLedger,
    TrlStage,
    WeightKind,
    WeightVector,
    angle_degrees,
    cport_vector,
    normalize_weights,
    rank_ports,
    squared_share,
    standardization_merit,
    total_investment,
    trl_stage,
)
