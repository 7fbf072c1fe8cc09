"""Sweep grids, deterministic CSV serialization and ordered parallel maps."""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

AXIS_NAMES = ("eta0p", "eta1p", "nbar", "tprime")


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ConfigError(f"unknown sweep axis {self.name!r}; "
                              f"expected one of {', '.join(AXIS_NAMES)}")
        if self.count < 2:
            raise ConfigError(f"axis {self.name}: count must be >= 2, got {self.count}")
        if not self.start < self.stop:
            raise ConfigError(f"axis {self.name}: min must be < max")

    def values(self):
        return np.linspace(self.start, self.stop, self.count)

    @classmethod
    def parse(cls, text):
        parts = text.split(":")
        if len(parts) != 4:
            raise ConfigError(f"grid axis must be AXIS:MIN:MAX:COUNT, got {text!r}")
        name, lo, hi, count = parts
        try:
            return cls(name, float(lo), float(hi), int(count))
        except ValueError as exc:
            raise ConfigError(f"malformed grid axis {text!r}: {exc}") from None


def grid_points(axes):
    """Row-major point list over one or two axes: [(values...), ...]."""
    if not 1 <= len(axes) <= 2:
        raise ConfigError(f"sweeps support 1 or 2 axes, got {len(axes)}")
    if len(axes) == 1:
        return [(float(v),) for v in axes[0].values()]
    outer, inner = axes
    return [(float(u), float(v)) for u in outer.values() for v in inner.values()]


def fmt(value):
    """Fixed CSV number format: 12 significant digits, scientific notation."""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    x = float(value)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.11e}"


def csv_text(columns, rows):
    """Serialize rows (iterables of already-formatted or raw values) to CSV
    with a single header line, comma separators and newline terminators."""
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def ordered_map(fn, items, jobs=1):
    """Map preserving input order; jobs > 1 uses a thread pool.  Results are
    assembled in input order, so output is independent of scheduling."""
    items = list(items)
    if jobs is None or jobs <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))
