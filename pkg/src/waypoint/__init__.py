"""Indoor positioning toolkit.

RSS-fingerprint localization (offline radio-map training plus online
nearest-neighbor matching in signal space), Dijkstra routing over a geocoded
building graph, a propagation-based multilateration baseline, and a
deterministic radio simulator that measures how the methods compare.
"""

from .errors import (
    DocumentError,
    DomainError,
    GraphError,
    IngestError,
    InsufficientBeaconsError,
    NoUsableSignalError,
    ParseError,
    UnknownNodeError,
    UnreachableError,
    WaypointError,
)
from .geo import Bssid, GeoPoint, RssiDbm, haversine_distance, parse_bssid
from .localization import (
    LocationEstimate,
    MatcherConfig,
    MultilaterationFix,
    Neighbor,
    locate,
    multilaterate,
    signal_distance,
)
from .navgraph import NavEdge, NavGraph, NavNode, Route, build_graph, load_graph, save_graph, shortest_path
from .propagation import (
    NoiseModel,
    PlacedTransmitter,
    PropagationParams,
    distance_from_power,
    received_power_dbm,
    synth_scan,
)
from .radiomap import (
    ApRegistry,
    Fingerprint,
    IngestResult,
    RadioMap,
    Scan,
    ScanReading,
    TrainingSet,
    apply_floor,
    build_radio_map,
    group_radios,
    ingest_scan_log,
    load_radio_map,
    save_radio_map,
)
from .simulator import (
    ComparisonReport,
    EvalReport,
    EvalSeeds,
    Scenario,
    compare_methods,
    default_scenario,
    evaluate_localization,
    generate_training_set,
    load_scenario,
    save_scenario,
    train_scenario_map,
)

__version__ = "0.1.0"

__all__ = [
    "ApRegistry",
    "Bssid",
    "ComparisonReport",
    "DocumentError",
    "DomainError",
    "EvalReport",
    "EvalSeeds",
    "Fingerprint",
    "GeoPoint",
    "GraphError",
    "IngestError",
    "IngestResult",
    "InsufficientBeaconsError",
    "LocationEstimate",
    "MatcherConfig",
    "MultilaterationFix",
    "NavEdge",
    "NavGraph",
    "NavNode",
    "Neighbor",
    "NoUsableSignalError",
    "NoiseModel",
    "ParseError",
    "PlacedTransmitter",
    "PropagationParams",
    "RadioMap",
    "Route",
    "RssiDbm",
    "Scan",
    "ScanReading",
    "Scenario",
    "TrainingSet",
    "UnknownNodeError",
    "UnreachableError",
    "WaypointError",
    "apply_floor",
    "build_graph",
    "build_radio_map",
    "compare_methods",
    "default_scenario",
    "distance_from_power",
    "evaluate_localization",
    "generate_training_set",
    "group_radios",
    "haversine_distance",
    "ingest_scan_log",
    "load_graph",
    "load_radio_map",
    "load_scenario",
    "locate",
    "multilaterate",
    "parse_bssid",
    "received_power_dbm",
    "save_graph",
    "save_radio_map",
    "save_scenario",
    "shortest_path",
    "signal_distance",
    "synth_scan",
    "train_scenario_map",
]
