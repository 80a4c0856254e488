"""Config loading and report serialization.

Floats are written with ``repr``, the shortest string that round-trips to
the same double.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import ConfigError
from .montecarlo import ExperimentConfig, TrialReport

JSON, CSV = "json", "csv"


def load_config(path) -> ExperimentConfig:
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    return ExperimentConfig.from_dict(data)


def dump_config(config: ExperimentConfig) -> str:
    return json.dumps(config.to_dict(), indent=2, sort_keys=True) + "\n"


def emit_report(report: TrialReport, fmt: str = JSON) -> str:
    if fmt == JSON:
        return report.to_json()
    if fmt == CSV:
        return report.to_csv()
    raise ValueError(f"unknown format {fmt!r}")
