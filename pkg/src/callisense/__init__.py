"""Brush-writing process reconstruction and comparison analytics."""

__version__ = "0.1.0"

from .config import PipelineConfig
from .model import Session, parse_session, serialize_session, validate_session

__all__ = [
    "PipelineConfig",
    "Session",
    "parse_session",
    "serialize_session",
    "validate_session",
    "__version__",
]
