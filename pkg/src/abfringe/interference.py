"""Electron fringe intensities and their cross-correlation ratio.

Each interferometer couples to one field mode through the enclosed flux, so
its fringe pattern is 1 + |W|cos(sigma + arg W) where W is the mode's
characteristic value at lam = i*q*exp(i*omega*t).  The joint pattern of two
such experiments probes the two-mode characteristic function, and the ratio

    R(sigma_a, sigma_b) = I(sigma_a, sigma_b) / (I_a(sigma_a) * I_b(sigma_b))

is 1 exactly when the field factorizes.  This module provides the numeric
trace route for arbitrary states plus closed forms for the two reference
states (the classical mixture and the shared-photon superposition of
|0 1> and |1 0>), their ratio bounds, and coupling calibration against a
target bound value.

Closed-form cross term: for the shared-photon state the joint intensity is

    I_ent = I_sep + q^2 e^{-q^2} sin(sigma_a) sin(sigma_b) cos((w1 - w2) t)

with a plus sign; the sign is fixed by the numeric trace route, against
which the closed forms are tested entry for entry.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import (
    CalibrationError,
    ConsistencyError,
    DegenerateScreenError,
)
from .fock import (
    DEFAULT_POLICY,
    TruncationPolicy,
    converge_scalar,
    displacement_analytic,
    displacement_exp,
)
from .states import TwoModeState
from .weyl import expectation_two, weyl_single, weyl_two

__all__ = [
    "IMAG_RESIDUE_TOL",
    "DENOM_FLOOR",
    "ModeParams",
    "ExperimentConfig",
    "lambda_of",
    "intensity_single",
    "intensity_single_closed",
    "intensity_joint_numeric",
    "intensity_joint_numeric_many",
    "alpha",
    "beta",
    "intensity_joint_sep_closed",
    "intensity_joint_ent_closed",
    "ratio",
    "ratio_sep_closed",
    "ratio_ent_closed",
    "rsep_bounds",
    "ratio_sep_range",
    "CalibrationResult",
    "calibrate_q",
]

IMAG_RESIDUE_TOL = 1e-8
DENOM_FLOOR = 1e-12

_CHARGE_CONSISTENCY_TOL = 1e-14


@dataclass(frozen=True)
class ModeParams:
    """Physical parameters of one mode's coupling to its interferometer.

    The coupling strength is q = xi * charge / sqrt(2).  Either q or charge
    may be given; the other is derived.  Giving both is allowed only when
    they are consistent.
    """

    omega: float
    q: float | None = None
    xi: float = 1.0
    charge: float | None = None

    def __post_init__(self) -> None:
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise ValueError(f"omega must be positive and finite, got {self.omega}")
        if not (math.isfinite(self.xi) and self.xi > 0):
            raise ValueError(f"xi must be positive and finite, got {self.xi}")
        if self.q is None and self.charge is None:
            raise ValueError("either q or charge must be given")
        if self.q is None:
            object.__setattr__(self, "q", self.xi * self.charge / math.sqrt(2.0))
        elif self.charge is None:
            object.__setattr__(self, "charge", math.sqrt(2.0) * self.q / self.xi)
        else:
            implied = self.xi * self.charge / math.sqrt(2.0)
            if abs(self.q - implied) > _CHARGE_CONSISTENCY_TOL * max(1.0, abs(self.q)):
                raise ValueError(
                    f"q={self.q} inconsistent with xi*charge/sqrt(2)={implied}"
                )
        if not (math.isfinite(self.q) and self.q >= 0):
            raise ValueError(f"q must be non-negative and finite, got {self.q}")

    @classmethod
    def from_charge(cls, omega: float, charge: float, xi: float = 1.0) -> "ModeParams":
        return cls(omega=omega, charge=charge, xi=xi)


@dataclass(frozen=True)
class ExperimentConfig:
    """A two-mode state coupled to two interferometers at a common time."""

    state: TwoModeState
    mode_a: ModeParams
    mode_b: ModeParams
    time: float = 0.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.time):
            raise ValueError(f"time must be finite, got {self.time}")


def lambda_of(params: ModeParams, time: float) -> complex:
    """Displacement argument i*q*exp(i*omega*t) seen by the charge."""
    return 1j * params.q * cmath.exp(1j * params.omega * time)


# ---------------------------------------------------------------------------
# Numeric trace route
# ---------------------------------------------------------------------------

def intensity_single(
    rho_mode: np.ndarray,
    sigma: float,
    params: ModeParams,
    time: float = 0.0,
    policy: TruncationPolicy = DEFAULT_POLICY,
    use_exp: bool = False,
) -> float:
    """Fringe intensity 1 + Re[e^{i sigma} Tr(rho D(lam))] of one experiment."""
    w = weyl_single(rho_mode, lambda_of(params, time), policy=policy, use_exp=use_exp)
    return 1.0 + (cmath.exp(1j * sigma) * w.value).real


def _cosine_block(sigma: float, lam: complex, dim: int, use_exp: bool) -> np.ndarray:
    """Matrix of cos(sigma + flux phase) = (e^{i sigma}D(lam) + h.c. at -lam)/2."""
    make = displacement_exp if use_exp else displacement_analytic
    return 0.5 * (
        cmath.exp(1j * sigma) * make(lam, dim)
        + cmath.exp(-1j * sigma) * make(-lam, dim)
    )


def intensity_joint_numeric(
    config: ExperimentConfig,
    sigma_a: float,
    sigma_b: float,
    policy: TruncationPolicy = DEFAULT_POLICY,
    use_exp: bool = False,
    dense: bool = False,
) -> float:
    """Joint fringe intensity Tr[rho (1 + cos_a)(1 + cos_b)] by direct trace.

    The result of the trace is real for any valid state; an imaginary
    residue above 1e-8 indicates an internal inconsistency and raises.
    """
    lam_a = lambda_of(config.mode_a, config.time)
    lam_b = lambda_of(config.mode_b, config.time)
    state = config.state

    def evaluate(dim: int) -> complex:
        op_a = np.eye(dim, dtype=complex) + _cosine_block(sigma_a, lam_a, dim, use_exp)
        op_b = np.eye(dim, dtype=complex) + _cosine_block(sigma_b, lam_b, dim, use_exp)
        return expectation_two(state, op_a, op_b, dense=dense)

    min_dim = max(state.dim_a, state.dim_b)
    value = converge_scalar(evaluate, policy=policy, min_dim=min_dim)
    if abs(value.imag) > IMAG_RESIDUE_TOL:
        raise ConsistencyError(
            f"joint intensity has imaginary residue {value.imag:.3e} at "
            f"(sigma_a={sigma_a:.6g}, sigma_b={sigma_b:.6g})"
        )
    return value.real


def _conjugate_pair(plus: complex, minus: complex, what: str) -> complex:
    """Average a trace with the conjugate of its lam -> -lam partner.

    The two are equal for Hermitian states; a mismatch means the trace
    route is internally inconsistent.
    """
    if abs(minus - plus.conjugate()) > IMAG_RESIDUE_TOL:
        raise ConsistencyError(
            f"{what}: value at -lam is not the conjugate of the value at lam "
            f"(difference {abs(minus - plus.conjugate()):.3e})"
        )
    return 0.5 * (plus + minus.conjugate())


def intensity_joint_numeric_many(
    config: ExperimentConfig,
    sigma_a: np.ndarray,
    sigma_b: np.ndarray,
    policy: TruncationPolicy = DEFAULT_POLICY,
    use_exp: bool = False,
) -> np.ndarray:
    """Joint intensities over arrays of screen phases, sharing the traces.

    Expanding the product of cosine blocks writes the joint intensity as a
    trig polynomial in (sigma_a, sigma_b) whose coefficients are six traces
    that do not depend on the screen phases; evaluating those once makes
    dense grids and long time series cheap.  Agrees with
    intensity_joint_numeric point for point.
    """
    sigma_a = np.asarray(sigma_a, dtype=float)
    sigma_b = np.asarray(sigma_b, dtype=float)
    lam_a = lambda_of(config.mode_a, config.time)
    lam_b = lambda_of(config.mode_b, config.time)
    state = config.state
    kw = {"policy": policy, "use_exp": use_exp}

    w_a = _conjugate_pair(
        weyl_single(state.marginal("a"), lam_a, **kw).value,
        weyl_single(state.marginal("a"), -lam_a, **kw).value,
        "mode-a characteristic value",
    )
    w_b = _conjugate_pair(
        weyl_single(state.marginal("b"), lam_b, **kw).value,
        weyl_single(state.marginal("b"), -lam_b, **kw).value,
        "mode-b characteristic value",
    )
    t_pp = _conjugate_pair(
        weyl_two(state, lam_a, lam_b, **kw).value,
        weyl_two(state, -lam_a, -lam_b, **kw).value,
        "two-mode characteristic value (++)",
    )
    t_pm = _conjugate_pair(
        weyl_two(state, lam_a, -lam_b, **kw).value,
        weyl_two(state, -lam_a, lam_b, **kw).value,
        "two-mode characteristic value (+-)",
    )

    phase_a = np.exp(1j * sigma_a)
    phase_b = np.exp(1j * sigma_b)
    return (
        1.0
        + (phase_a * w_a).real
        + (phase_b * w_b).real
        + 0.5 * (phase_a * phase_b * t_pp).real
        + 0.5 * (phase_a * np.conj(phase_b) * t_pm).real
    )


def ratio(
    config: ExperimentConfig,
    sigma_a: float,
    sigma_b: float,
    policy: TruncationPolicy = DEFAULT_POLICY,
    use_exp: bool = False,
    dense: bool = False,
) -> float:
    """Correlation ratio R = I_joint / (I_a * I_b), all by numeric traces."""
    joint = intensity_joint_numeric(
        config, sigma_a, sigma_b, policy=policy, use_exp=use_exp, dense=dense
    )
    i_a = intensity_single(
        config.state.marginal("a"), sigma_a, config.mode_a, config.time,
        policy=policy, use_exp=use_exp,
    )
    i_b = intensity_single(
        config.state.marginal("b"), sigma_b, config.mode_b, config.time,
        policy=policy, use_exp=use_exp,
    )
    denom = i_a * i_b
    if abs(denom) < DENOM_FLOOR:
        raise DegenerateScreenError(
            f"zero fringe intensity at screen point (sigma_a={sigma_a:.6g}, "
            f"sigma_b={sigma_b:.6g}): |I_a * I_b| = {abs(denom):.3e}"
        )
    return joint / denom


# ---------------------------------------------------------------------------
# Closed forms for the reference states
# ---------------------------------------------------------------------------

def alpha(q: float) -> float:
    """Fringe visibility (2 - q^2)/2 * e^{-q^2/2} of either reference marginal."""
    q = float(q)
    return 0.5 * (2.0 - q * q) * math.exp(-0.5 * q * q)


def beta(q: float) -> float:
    """Joint-fringe coefficient (1 - q^2)/2 * e^{-q^2}."""
    q = float(q)
    return 0.5 * (1.0 - q * q) * math.exp(-q * q)


def intensity_single_closed(sigma: float, q: float) -> float:
    """Single-experiment intensity 1 + alpha(q) cos(sigma) for either
    reference state's marginal (both marginals coincide and are static)."""
    return 1.0 + alpha(q) * math.cos(sigma)


def intensity_joint_sep_closed(sigma_a: float, sigma_b: float, q: float) -> float:
    """Joint intensity of the classical |01>/|10> mixture."""
    ca, cb = math.cos(sigma_a), math.cos(sigma_b)
    return 1.0 + alpha(q) * (ca + cb) + 2.0 * beta(q) * ca * cb


def _ent_cross_term(
    sigma_a: float, sigma_b: float, q: float,
    omega1: float, omega2: float, time: float,
) -> float:
    q = float(q)
    return (
        q * q * math.exp(-q * q)
        * math.sin(sigma_a) * math.sin(sigma_b)
        * math.cos((omega1 - omega2) * time)
    )


def intensity_joint_ent_closed(
    sigma_a: float, sigma_b: float, q: float,
    omega1: float, omega2: float, time: float,
) -> float:
    """Joint intensity of the shared-photon superposition state.

    Beats at |omega1 - omega2| around the mixture's value; the cross term
    enters with a plus sign (see module docstring).
    """
    return intensity_joint_sep_closed(sigma_a, sigma_b, q) + _ent_cross_term(
        sigma_a, sigma_b, q, omega1, omega2, time
    )


def _closed_denominator(sigma_a: float, sigma_b: float, q: float) -> float:
    denom = intensity_single_closed(sigma_a, q) * intensity_single_closed(sigma_b, q)
    if abs(denom) < DENOM_FLOOR:
        raise DegenerateScreenError(
            f"zero fringe intensity at screen point (sigma_a={sigma_a:.6g}, "
            f"sigma_b={sigma_b:.6g}): |I_a * I_b| = {abs(denom):.3e}"
        )
    return denom


def ratio_sep_closed(sigma_a: float, sigma_b: float, q: float) -> float:
    """Correlation ratio of the classical mixture; time-independent."""
    return intensity_joint_sep_closed(sigma_a, sigma_b, q) / _closed_denominator(
        sigma_a, sigma_b, q
    )


def ratio_ent_closed(
    sigma_a: float, sigma_b: float, q: float,
    omega1: float, omega2: float, time: float,
) -> float:
    """Correlation ratio of the shared-photon state; beats at |omega1 - omega2|."""
    denom = _closed_denominator(sigma_a, sigma_b, q)
    return (
        intensity_joint_sep_closed(sigma_a, sigma_b, q)
        + _ent_cross_term(sigma_a, sigma_b, q, omega1, omega2, time)
    ) / denom


# ---------------------------------------------------------------------------
# Bounds, range, calibration
# ---------------------------------------------------------------------------

def _stationary_bounds(q: float) -> tuple[float, float, float]:
    """(value at (pi,pi), value at (0,0), true maximum) of the mixture ratio.

    Evaluated in cancellation-free form: with u = e^{-q^2/2} and
    1 - u = -expm1(-q^2/2),

        1 - 2a + 2b = (1 - u)(1 - u + q^2 u)
        1 - a       = (1 - u) + q^2 u / 2
        1 - 2b      = -expm1(-q^2) + q^2 e^{-q^2}

    The naive forms lose all significant digits below q ~ 0.01.
    """
    q = float(q)
    u = math.exp(-0.5 * q * q)
    one_minus_u = -math.expm1(-0.5 * q * q)
    one_minus_alpha = one_minus_u + 0.5 * q * q * u
    at_pi_pi = (one_minus_u * (one_minus_u + q * q * u)) / one_minus_alpha**2
    a, b = alpha(q), beta(q)
    at_zero_zero = (1.0 + 2.0 * a + 2.0 * b) / (1.0 + a) ** 2
    one_minus_2b = -math.expm1(-q * q) + q * q * math.exp(-q * q)
    true_max = one_minus_2b / (one_minus_alpha * (1.0 + a))
    return at_pi_pi, at_zero_zero, true_max


def rsep_bounds(q: float) -> tuple[float, float]:
    """Stationary values (1-2a+2b)/(1-a)^2 and (1+2a+2b)/(1+a)^2 of the
    mixture's correlation ratio.

    For couplings below sqrt(2), where the fringe visibility is positive,
    the first value is the ratio's global minimum, attained at screen
    phases (pi, pi) mod 2pi; past sqrt(2) the visibility changes sign and
    the (0, 0) value dips below it instead.  The second value is never the
    global maximum — mixed points such as (pi, 0) exceed it (see
    ratio_sep_range).  Both values are returned because they are the
    standard calibration targets.
    """
    if q <= 0:
        raise DegenerateScreenError(
            "ratio bounds degenerate at q <= 0 (full visibility makes the "
            "minimum's denominator vanish)"
        )
    at_pi_pi, at_zero_zero, _ = _stationary_bounds(q)
    return at_pi_pi, at_zero_zero


def ratio_sep_range(q: float) -> tuple[float, float]:
    """Global (minimum, maximum) of the mixture's ratio over all screen phases.

    The ratio is 1 - k g(cos sigma_a) g(cos sigma_b) with k > 0 and g
    monotone, so its extremes sit where both cosines are +-1.  The minimum
    is the smaller of the two same-sign stationary values (the (pi, pi)
    one below q = sqrt(2), the (0, 0) one above); the maximum
    (1-2b)/(1-a^2) is attained at mixed points like (pi, 0) and exceeds 1
    for every q > 0.
    """
    if q <= 0:
        raise DegenerateScreenError(
            "ratio range degenerate at q <= 0 (full visibility makes the "
            "minimum's denominator vanish)"
        )
    at_pi_pi, at_zero_zero, true_max = _stationary_bounds(q)
    return min(at_pi_pi, at_zero_zero), true_max


@dataclass(frozen=True)
class CalibrationResult:
    """Coupling recovered from a target bound value, with both bounds there."""

    which: str
    target: float
    q: float
    bound_min: float
    bound_max: float


_CAL_Q_LO = 1e-6
_CAL_Q_HI = 2.0


def calibrate_q(target: float, which: str, tol: float = 1e-9) -> CalibrationResult:
    """Find q in (0, 2] whose chosen ratio bound equals the target.

    which='min' inverts the global-minimum bound (increasing in q, range
    (3/4, ~0.9432]); which='max' inverts the (0,0) stationary value
    (decreasing in q, range [~0.9020, 1)).  Raises when the target lies
    outside the attainable range.
    """
    if which not in ("min", "max"):
        raise ValueError(f"which must be 'min' or 'max', got {which!r}")
    index = 0 if which == "min" else 1

    def objective(q: float) -> float:
        return rsep_bounds(q)[index] - target

    qs = np.geomspace(_CAL_Q_LO, _CAL_Q_HI, 512)
    values = np.array([objective(q) for q in qs])
    signs = np.sign(values)
    crossings = np.flatnonzero(signs[:-1] * signs[1:] <= 0)
    if crossings.size == 0:
        attained = np.array([rsep_bounds(q)[index] for q in qs])
        raise CalibrationError(
            f"target {target:.12g} for the {which} bound is unattainable for "
            f"q in (0, 2]; attainable range is about "
            f"[{attained.min():.9f}, {attained.max():.9f}]"
        )
    i = int(crossings[0])
    root = float(brentq(objective, qs[i], qs[i + 1], xtol=tol, rtol=1e-15))
    bound_min, bound_max = rsep_bounds(root)
    return CalibrationResult(
        which=which, target=float(target), q=root,
        bound_min=bound_min, bound_max=bound_max,
    )
