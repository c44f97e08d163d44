import importlib
import pkgutil
from typing import Dict, Type

from algramsey.suites._base import VerificationSuite

_PACKAGE = __name__.rsplit(".", 1)[0]
_registry: Dict[str, Type[VerificationSuite]] = {}


def register(cls: Type[VerificationSuite]) -> Type[VerificationSuite]:
    """Register a VerificationSuite under its module name, one suite per module.

    Args:
        cls: VerificationSuite subclass to register.

    Returns:
        Type[VerificationSuite]: The registered class.

    Raises:
        ValueError: Another suite already holds the module name.
    """
    name = cls.__module__.rsplit(".", 1)[-1]
    existing = _registry.get(name)
    if existing is not None and existing.__qualname__ != cls.__qualname__:
        raise ValueError(f"suite {name!r} is already registered by {existing.__qualname__}")
    _registry[name] = cls
    return cls


def _discover_suites() -> None:
    """Import every public module of the suites package so that @register runs; import errors propagate."""
    package = importlib.import_module(_PACKAGE)
    for module in pkgutil.iter_modules(package.__path__):
        if not module.name.startswith("_"):
            importlib.import_module(f"{_PACKAGE}.{module.name}")


def get_suites() -> Dict[str, Type[VerificationSuite]]:
    _discover_suites()
    return dict(sorted(_registry.items()))


def get_suite(name: str) -> Type[VerificationSuite]:
    _discover_suites()
    try:
        return _registry[name]
    except KeyError:
        raise ValueError(f"No suite named {name!r}; known suites: {', '.join(sorted(_registry))}")
