from .app import ServiceState, Snapshot, SnapshotSources, create_app, load_snapshot

__all__ = ["ServiceState", "Snapshot", "SnapshotSources", "create_app", "load_snapshot"]
