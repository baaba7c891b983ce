"""System file reading and validation"""

from .system_file_loader import (
    RawStatement,
    RawSection,
    RawSystemDocument,
    SystemFileLoader,
    strip_comment,
)
from .system_builder import SystemBuilder, load_system

__all__ = [
    "RawStatement",
    "RawSection",
    "RawSystemDocument",
    "SystemFileLoader",
    "strip_comment",
    "SystemBuilder",
    "load_system",
]
