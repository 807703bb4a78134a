"""Service layer: config, persistence, engine, and the HTTP API."""

from .config import ServiceConfig, load_config  # noqa: F401
from .engine import Engine  # noqa: F401
from .store import MemoryStore, SqliteStore, Submission, open_store  # noqa: F401
