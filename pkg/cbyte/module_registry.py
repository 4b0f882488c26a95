"""
Module registry for tracker subsystems.

Each module registers itself with a logger and a CLI debug flag so that
verbosity can be raised per subsystem.
"""

import logging
import os
from typing import Dict, Iterable, List, Optional

LOG_FORMAT = "%(asctime)s [%(levelname)s] [%(name)s] %(message)s"
LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
LOG_ENV_VAR = "CBYTE_LOG"

_LEVELS = {
    "error": logging.ERROR,
    "warn": logging.WARNING,
    "warning": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}


class ModuleRegistry:
    """Registry for tracker modules, their loggers and debug flags."""

    def __init__(self):
        """Initialize an empty registry."""
        self._modules: Dict[str, dict] = {}

    def register_module(
        self,
        name: str,
        description: str,
        logger_name: str,
        debug_flag: str,
        category: str = "core",
    ):
        """Register a module with its logger and debug flag."""
        self._modules[name] = {
            "description": description,
            "logger_name": logger_name,
            "debug_flag": debug_flag,
            "logger": logging.getLogger(logger_name),
            "category": category,
        }

    def get_modules_by_category(self, category: str) -> Dict[str, dict]:
        """Get all modules in a specific category."""
        return {name: info for name, info in self._modules.items() if info["category"] == category}

    def get_categories(self) -> List[str]:
        """Get the categories in use, sorted."""
        return sorted({info["category"] for info in self._modules.values()})

    def get_debug_flags(self) -> Dict[str, str]:
        """Get mapping of debug CLI flags to module names."""
        return {info["debug_flag"]: name for name, info in self._modules.items()}

    def get_module_info(self, name: str) -> dict:
        """Get information about a specific module."""
        return self._modules.get(name, {})

    def set_debug(self, names: Iterable[str]) -> None:
        """Lower the named modules' loggers to DEBUG."""
        for name in names:
            info = self._modules.get(name)
            if info:
                info["logger"].setLevel(logging.DEBUG)


def parse_log_level(value: Optional[str]) -> int:
    """
    Map a CBYTE_LOG value to a logging level.

    Unknown or empty values fall back to WARNING.
    """
    if not value:
        return logging.WARNING
    return _LEVELS.get(value.strip().lower(), logging.WARNING)


def configure_logging(level: Optional[str] = None) -> int:
    """Configure root logging from an explicit level or the CBYTE_LOG env var."""
    resolved = parse_log_level(level if level is not None else os.environ.get(LOG_ENV_VAR))
    logging.basicConfig(level=resolved, format=LOG_FORMAT, datefmt=LOG_DATE_FORMAT, force=True)
    return resolved


# Global registry instance
module_registry = ModuleRegistry()
