"""
Configuration management for partial_steinhaus.

Loads the shipped settings file, deep-merges a user's custom settings over
it and parses the result into typed sections for search, linear
construction, the heuristic table and the descent checks.
"""

import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Dict, List, Optional

import deepmerge

from ..utils.logger import get_logger

logger = get_logger(__name__)

MIN_DPS = 30


def _known_keys(cls: type, data: Dict[str, Any]) -> Dict[str, Any]:
    names = {f.name for f in fields(cls)}
    return {k: v for k, v in data.items() if k in names}


@dataclass
class SearchSettings:
    """Defaults for the backtracking search."""
    max_nodes: Optional[int] = 1_000_000
    max_seconds: Optional[float] = 300.0
    seed: int = 0
    threads: int = 1
    restart_after: Optional[int] = None
    fix_origin: bool = False

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SearchSettings':
        return cls(**_known_keys(cls, data))


@dataclass
class LinearSettings:
    """Defaults for the affine linear construction."""
    samples: int = 1
    seed: int = 0
    slopes: str = "unit"

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'LinearSettings':
        return cls(**_known_keys(cls, data))


@dataclass
class HeuristicSettings:
    """Working precision and display digits of the M_p table."""
    dps: int = 60
    digits: int = 2

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'HeuristicSettings':
        return cls(**_known_keys(cls, data))


@dataclass
class DescentSettings:
    """Number of seeded rational starting points per N."""
    seeds: int = 10

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'DescentSettings':
        return cls(**_known_keys(cls, data))


class Config:
    """
    Central configuration manager.

    Reads `settings.json` and an optional `custom_settings.json` from the
    configuration directory; custom values win.
    """

    def __init__(self,
                 config_dir: Optional[Path] = None,
                 base_config_file: str = "settings.json",
                 custom_config_file: str = "custom_settings.json"):
        """
        Initialize configuration manager.

        Args:
            config_dir: Configuration directory path (default: ./data)
            base_config_file: Base settings file name
            custom_config_file: Custom settings file name
        """
        self.config_dir = Path(config_dir) if config_dir is not None else Path("data")
        self.base_config_file = base_config_file
        self.custom_config_file = custom_config_file

        self._base_config: Dict[str, Any] = {}
        self._custom_config: Dict[str, Any] = {}
        self._merged_config: Dict[str, Any] = {}

        self.search = SearchSettings()
        self.linear = LinearSettings()
        self.heuristic = HeuristicSettings()
        self.descent = DescentSettings()

        self._load_configurations()
        self._parse_configurations()

    def _read_json(self, path: Path) -> Dict[str, Any]:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
        if not isinstance(data, dict):
            raise ConfigurationError(f"{path} must contain a JSON object")
        return data

    def _load_configurations(self) -> None:
        """Load base and custom settings files."""
        try:
            base_path = self.config_dir / self.base_config_file
            if base_path.exists():
                self._base_config = self._read_json(base_path)
                logger.info(f"Loaded base configuration from {base_path}")
            else:
                logger.warning(f"Base configuration file not found: {base_path}, using defaults")
                self._base_config = self._get_default_config()

            custom_path = self.config_dir / self.custom_config_file
            if custom_path.exists():
                self._custom_config = self._read_json(custom_path)
                logger.info(f"Loaded custom configuration from {custom_path}")
            else:
                self._custom_config = {}

            self._merged_config = deepmerge.always_merger.merge(
                json.loads(json.dumps(self._base_config)),
                self._custom_config
            )
        except ConfigurationError:
            raise
        except (OSError, ValueError) as e:
            logger.error(f"Error loading configurations: {e}")
            raise ConfigurationError(f"Failed to load configuration: {e}")

    def _parse_configurations(self) -> None:
        """Parse merged settings into the typed sections."""
        try:
            self.search = SearchSettings.from_dict(self._merged_config.get('search', {}))
            self.linear = LinearSettings.from_dict(self._merged_config.get('linear', {}))
            self.heuristic = HeuristicSettings.from_dict(self._merged_config.get('heuristic', {}))
            self.descent = DescentSettings.from_dict(self._merged_config.get('descent', {}))
        except (TypeError, AttributeError) as e:
            logger.error(f"Error parsing configurations: {e}")
            raise ConfigurationError(f"Failed to parse configuration: {e}")

    @staticmethod
    def _get_default_config() -> Dict[str, Any]:
        return {
            'search': asdict(SearchSettings()),
            'linear': asdict(LinearSettings()),
            'heuristic': asdict(HeuristicSettings()),
            'descent': asdict(DescentSettings()),
        }

    def to_dict(self) -> Dict[str, Any]:
        """Effective configuration after merging and parsing."""
        return {
            'search': asdict(self.search),
            'linear': asdict(self.linear),
            'heuristic': asdict(self.heuristic),
            'descent': asdict(self.descent),
        }

    def save_custom_config(self, custom_config: Dict[str, Any]) -> None:
        """Write custom settings and reload."""
        try:
            custom_path = self.config_dir / self.custom_config_file
            custom_path.parent.mkdir(parents=True, exist_ok=True)
            with open(custom_path, 'w', encoding='utf-8') as f:
                json.dump(custom_config, f, indent=2)
            logger.info(f"Custom configuration saved to {custom_path}")
        except OSError as e:
            logger.error(f"Error saving custom configuration: {e}")
            raise ConfigurationError(f"Failed to save custom configuration: {e}")
        self._load_configurations()
        self._parse_configurations()

    def validate(self) -> List[str]:
        """
        Validate configuration and return list of issues.

        Returns:
            List of validation error messages (empty if valid)
        """
        issues = []
        search = self.search
        if search.max_nodes is not None and search.max_nodes <= 0:
            issues.append("search.max_nodes must be positive")
        if search.max_seconds is not None and search.max_seconds <= 0:
            issues.append("search.max_seconds must be positive")
        if search.threads < 1:
            issues.append("search.threads must be >= 1")
        if search.restart_after is not None and search.restart_after <= 0:
            issues.append("search.restart_after must be positive")

        if self.linear.samples < 1:
            issues.append("linear.samples must be >= 1")
        if self.linear.slopes not in ("unit", "random"):
            issues.append(f"linear.slopes must be 'unit' or 'random', got {self.linear.slopes!r}")

        if self.heuristic.dps < MIN_DPS:
            issues.append(f"heuristic.dps must be >= {MIN_DPS}")
        if self.heuristic.digits < 1:
            issues.append("heuristic.digits must be >= 1")

        if self.descent.seeds < 1:
            issues.append("descent.seeds must be >= 1")
        return issues


class ConfigurationError(Exception):
    """Configuration-related error."""
    pass
