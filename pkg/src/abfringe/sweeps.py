"""Screen-phase grids, slices, and time series with deterministic CSV output.

Every file starts with a block of ``# meta:`` lines carrying the quantity
name and all physical parameters, so a figure can be regenerated from the
CSV alone.  Floats are printed with 17 significant digits, which makes the
printed decimal parse back to the exact binary value and makes repeated runs
byte-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import DegenerateScreenError
from .fock import DEFAULT_POLICY, TruncationPolicy
from .interference import (
    ExperimentConfig,
    ModeParams,
    intensity_joint_ent_closed,
    intensity_joint_numeric_many,
    intensity_joint_sep_closed,
    lambda_of,
    ratio_ent_closed,
    ratio_sep_closed,
)
from .weyl import weyl_single

__all__ = [
    "GRID_QUANTITIES",
    "DEFAULT_OMEGA1",
    "DEFAULT_OMEGA2",
    "DEFAULT_Q",
    "FringeGrid",
    "TimeSeries",
    "parse_angle",
    "default_axis",
    "compute_grid",
    "compute_slice",
    "compute_timeseries",
    "write_grid_csv",
    "write_series_csv",
]

DEFAULT_OMEGA1 = 1.2e-4
DEFAULT_OMEGA2 = 1.0e-4
DEFAULT_Q = 0.3

GRID_QUANTITIES = ("i-sep", "r-sep", "r-ent", "i-ent", "i-numeric", "r-numeric")

_META_ORDER = ("quantity", "state", "q", "omega1", "omega2", "time",
               "dims", "tol", "sigma_a", "sigma_b")


def parse_angle(text: str) -> float:
    """Parse an angle given in radians or in units of pi ('0.98pi', '-pi')."""
    text = str(text).strip()
    if text.lower().endswith("pi"):
        head = text[:-2].strip()
        if head in ("", "+", "-"):
            head += "1"
        return float(head) * math.pi
    return float(text)


def default_axis(n: int = 101) -> np.ndarray:
    """Standard screen-phase axis: n points covering [-2pi, 2pi]."""
    if n < 2:
        raise ValueError(f"axis needs at least 2 points, got {n}")
    return np.linspace(-2.0 * math.pi, 2.0 * math.pi, n)


def _check_finite(name: str, values: np.ndarray) -> None:
    if not np.all(np.isfinite(values)):
        raise ValueError(f"{name} contains non-finite values")


@dataclass(frozen=True)
class FringeGrid:
    """Quantity sampled over a (sigma_a, sigma_b) grid, mode-a index slow."""

    axis_a: np.ndarray
    axis_b: np.ndarray
    values: np.ndarray
    meta: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        axis_a = np.asarray(self.axis_a, dtype=float)
        axis_b = np.asarray(self.axis_b, dtype=float)
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "axis_a", axis_a)
        object.__setattr__(self, "axis_b", axis_b)
        object.__setattr__(self, "values", values)
        if values.shape != (axis_a.size, axis_b.size):
            raise ValueError(
                f"values shape {values.shape} does not match axes "
                f"({axis_a.size}, {axis_b.size})"
            )
        for name, arr in (("axis_a", axis_a), ("axis_b", axis_b), ("values", values)):
            _check_finite(name, arr)


@dataclass(frozen=True)
class TimeSeries:
    """Named columns sampled along one strictly increasing axis."""

    axis: np.ndarray
    columns: tuple[str, ...]
    values: np.ndarray
    meta: Mapping[str, object] = field(default_factory=dict)
    axis_name: str = "time"

    def __post_init__(self) -> None:
        axis = np.asarray(self.axis, dtype=float)
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "values", values)
        if axis.ndim != 1 or axis.size < 1:
            raise ValueError("axis must be a non-empty 1-d array")
        if np.any(np.diff(axis) <= 0):
            raise ValueError(f"{self.axis_name} axis must be strictly increasing")
        if values.shape != (axis.size, len(self.columns)):
            raise ValueError(
                f"values shape {values.shape} does not match "
                f"({axis.size}, {len(self.columns)})"
            )
        _check_finite(self.axis_name, axis)
        _check_finite("values", values)


# ---------------------------------------------------------------------------
# Computation
# ---------------------------------------------------------------------------

def _require_symmetric_coupling(mode_a: ModeParams, mode_b: ModeParams) -> float:
    if mode_a.q != mode_b.q:
        raise ValueError(
            f"closed-form quantities assume equal couplings, "
            f"got q_a={mode_a.q}, q_b={mode_b.q}"
        )
    return mode_a.q


def _base_meta(quantity: str, state_label: str, q: float,
               mode_a: ModeParams, mode_b: ModeParams, time: float,
               policy: TruncationPolicy) -> dict[str, object]:
    return {
        "quantity": quantity,
        "state": state_label,
        "q": q,
        "omega1": mode_a.omega,
        "omega2": mode_b.omega,
        "time": time,
        "dims": policy.initial_dim,
        "tol": policy.tol,
    }


def _numeric_grid(quantity, axis_a, axis_b, config, policy, use_exp):
    mesh_a, mesh_b = np.meshgrid(axis_a, axis_b, indexing="ij")
    joint = intensity_joint_numeric_many(
        config, mesh_a.ravel(), mesh_b.ravel(), policy=policy, use_exp=use_exp
    ).reshape(mesh_a.shape)
    if quantity == "i-numeric":
        return joint
    w_a = weyl_single(config.state.marginal("a"),
                      lambda_of(config.mode_a, config.time),
                      policy=policy, use_exp=use_exp).value
    w_b = weyl_single(config.state.marginal("b"),
                      lambda_of(config.mode_b, config.time),
                      policy=policy, use_exp=use_exp).value
    single_a = 1.0 + (np.exp(1j * axis_a) * w_a).real
    single_b = 1.0 + (np.exp(1j * axis_b) * w_b).real
    denom = np.outer(single_a, single_b)
    bad = np.abs(denom) < 1e-12
    if np.any(bad):
        i, j = np.argwhere(bad)[0]
        raise DegenerateScreenError(
            f"zero fringe intensity at screen point "
            f"(sigma_a={axis_a[i]:.6g}, sigma_b={axis_b[j]:.6g})"
        )
    return joint / denom


def compute_grid(
    quantity: str,
    axis_a: np.ndarray,
    axis_b: np.ndarray,
    mode_a: ModeParams,
    mode_b: ModeParams,
    time: float = 0.0,
    state=None,
    policy: TruncationPolicy = DEFAULT_POLICY,
    use_exp: bool = False,
) -> FringeGrid:
    """Sample one quantity over the (sigma_a, sigma_b) grid."""
    if quantity not in GRID_QUANTITIES:
        raise ValueError(f"unknown quantity {quantity!r}; choose from {GRID_QUANTITIES}")
    axis_a = np.asarray(axis_a, dtype=float)
    axis_b = np.asarray(axis_b, dtype=float)

    if quantity in ("i-numeric", "r-numeric"):
        if state is None:
            raise ValueError(f"quantity {quantity!r} needs a state")
        config = ExperimentConfig(state, mode_a, mode_b, time)
        values = _numeric_grid(quantity, axis_a, axis_b, config, policy, use_exp)
        label = state.label or "custom"
    else:
        q = _require_symmetric_coupling(mode_a, mode_b)
        w1, w2 = mode_a.omega, mode_b.omega
        scalar = {
            "i-sep": lambda a, b: intensity_joint_sep_closed(a, b, q),
            "i-ent": lambda a, b: intensity_joint_ent_closed(a, b, q, w1, w2, time),
            "r-sep": lambda a, b: ratio_sep_closed(a, b, q),
            "r-ent": lambda a, b: ratio_ent_closed(a, b, q, w1, w2, time),
        }[quantity]
        values = np.array([[scalar(a, b) for b in axis_b] for a in axis_a])
        label = "ent" if quantity.endswith("ent") else "sep"

    meta = _base_meta(quantity, label, mode_a.q, mode_a, mode_b, time, policy)
    return FringeGrid(axis_a, axis_b, values, meta)


def compute_slice(
    axis_a: np.ndarray,
    sigma_b: float,
    mode_a: ModeParams,
    mode_b: ModeParams,
    time: float,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> TimeSeries:
    """Both closed-form ratios along sigma_a at a fixed sigma_b and time."""
    axis_a = np.asarray(axis_a, dtype=float)
    q = _require_symmetric_coupling(mode_a, mode_b)
    w1, w2 = mode_a.omega, mode_b.omega
    r_sep = np.array([ratio_sep_closed(a, sigma_b, q) for a in axis_a])
    r_ent = np.array([ratio_ent_closed(a, sigma_b, q, w1, w2, time) for a in axis_a])
    meta = _base_meta("slice", "sep,ent", q, mode_a, mode_b, time, policy)
    meta["sigma_b"] = sigma_b
    return TimeSeries(axis_a, ("r_sep", "r_ent"), np.column_stack([r_sep, r_ent]),
                      meta, axis_name="sigma_a")


def compute_timeseries(
    times: np.ndarray,
    sigma_a: float,
    sigma_b: float,
    mode_a: ModeParams,
    mode_b: ModeParams,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> TimeSeries:
    """Both closed-form ratios against time at a fixed screen point."""
    times = np.asarray(times, dtype=float)
    q = _require_symmetric_coupling(mode_a, mode_b)
    w1, w2 = mode_a.omega, mode_b.omega
    r_sep_value = ratio_sep_closed(sigma_a, sigma_b, q)
    r_sep = np.full(times.size, r_sep_value)
    r_ent = np.array(
        [ratio_ent_closed(sigma_a, sigma_b, q, w1, w2, t) for t in times]
    )
    meta = _base_meta("timeseries", "sep,ent", q, mode_a, mode_b, float(times[0]),
                      policy)
    meta["sigma_a"] = sigma_a
    meta["sigma_b"] = sigma_b
    return TimeSeries(times, ("r_sep", "r_ent"), np.column_stack([r_sep, r_ent]),
                      meta, axis_name="time")


# ---------------------------------------------------------------------------
# CSV serialization
# ---------------------------------------------------------------------------

def _fmt(value: object) -> str:
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _meta_lines(meta: Mapping[str, object]) -> list[str]:
    keys = [k for k in _META_ORDER if k in meta]
    keys += [k for k in meta if k not in _META_ORDER]
    return [f"# meta: {key}={_fmt(meta[key])}" for key in keys]


def write_grid_csv(grid: FringeGrid) -> str:
    """Render a grid as CSV text: meta block, header, row-major rows."""
    lines = _meta_lines(grid.meta)
    lines.append("sigma_a,sigma_b,value")
    for i, a in enumerate(grid.axis_a):
        row_a = _fmt(a)
        for j, b in enumerate(grid.axis_b):
            lines.append(f"{row_a},{_fmt(b)},{_fmt(grid.values[i, j])}")
    return "\n".join(lines) + "\n"


def write_series_csv(series: TimeSeries) -> str:
    """Render a series as CSV text: meta block, header, one row per sample."""
    lines = _meta_lines(series.meta)
    lines.append(",".join((series.axis_name, *series.columns)))
    for i, x in enumerate(series.axis):
        cells = [_fmt(x)] + [_fmt(v) for v in series.values[i]]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
