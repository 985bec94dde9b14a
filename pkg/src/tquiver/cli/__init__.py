"""Command-line interface and the quiver file format."""

from .format import ParseError, dump, load, parse, parse_complex
from .main import main

__all__ = ["ParseError", "dump", "load", "main", "parse", "parse_complex"]
