"""Command-line front end: expression parser, configuration and certificates."""

from .config import Config, load_config
from .main import main, run_command
from .parser import parse_element, parse_poly

__all__ = ["Config", "load_config", "main", "run_command", "parse_element", "parse_poly"]
