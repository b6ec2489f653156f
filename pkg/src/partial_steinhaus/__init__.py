"""partial_steinhaus - verification, construction and search of m-partial Steinhaus functions"""

__version__ = "0.1.0"

# Data models are cheap to import
from .models.geometry import CubePoint, IntVec3, IsoVector, RationalPoint
from .models.maps import PartialMap, PiTable, Verdict


def _get_config():
    """Lazy import for Config to avoid dependency issues."""
    try:
        from .core.config import Config
        return Config
    except ImportError as e:
        raise ImportError(
            f"Config requires deepmerge. "
            f"Install with: pip install partial_steinhaus "
            f"Original error: {e}"
        )


def _get_verifiers():
    """Lazy import for the verifiers, which need sympy."""
    try:
        from .core import steinhaus
        return steinhaus
    except ImportError as e:
        raise ImportError(
            f"Verifiers could not be imported. "
            f"Install with: pip install partial_steinhaus "
            f"Original error: {e}"
        )


def _get_search():
    """Lazy import for the search engine."""
    try:
        from .core.csp import search
        return search
    except ImportError as e:
        raise ImportError(
            f"search could not be imported. "
            f"Install with: pip install partial_steinhaus "
            f"Original error: {e}"
        )


_VERIFIERS = ("verify_bruteforce", "verify_perms", "verify_point_set", "pi_table")


def __getattr__(name):
    if name == "Config":
        return _get_config()
    elif name in _VERIFIERS:
        return getattr(_get_verifiers(), name)
    elif name == "search":
        return _get_search()
    else:
        raise AttributeError(f"module '{__name__}' has no attribute '{name}'")


__all__ = [
    "Config", "CubePoint", "IntVec3", "IsoVector", "PartialMap", "PiTable",
    "RationalPoint", "Verdict", "search", *_VERIFIERS,
]
