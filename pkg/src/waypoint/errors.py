"""Exception hierarchy shared by every waypoint module.

All domain failures derive from :class:`WaypointError` so callers (the CLI,
the HTTP service) can map them to exit codes / status codes in one place.
"""


class WaypointError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(WaypointError):
    """An argument violated an operation's numeric or structural domain."""


class ParseError(WaypointError):
    """A textual value (identifier, number, document field) failed to parse."""


class IngestError(WaypointError):
    """A scan log could not be turned into a usable training set."""


class DocumentError(WaypointError):
    """A persisted document (radio map, graph, scenario) failed to load."""


class NoUsableSignalError(WaypointError):
    """An online scan retained no usable access point after filtering."""


class InsufficientBeaconsError(WaypointError):
    """Fewer than three access points were usable for multilateration."""


class GraphError(WaypointError):
    """A navigation graph failed validation at build time."""


class UnknownNodeError(WaypointError):
    """A route endpoint does not exist in the graph."""


class UnreachableError(WaypointError):
    """No path exists between the requested route endpoints."""
