"""Self-validation suite: every library-level invariant as a named check.

Each check returns its worst-case residual next to the tolerance it was held
to, so a failure report names the broken invariant and by how much it broke.
The suite is deterministic (fixed RNG seed) and fast enough to run on every
build.

The ``perturb`` flag flips the sign of the off-diagonal pair of the
shared-photon reference state before the closed-form/numeric comparison
runs.  The flipped state is still a valid density matrix, so nothing fails
at construction; only the cross-check against the closed forms can notice,
which is exactly what it is for.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CalibrationError, DegenerateScreenError
from .fock import (
    TruncationPolicy,
    displacement_analytic,
    displacement_exp,
    make_annihilation,
    make_creation,
    partial_trace,
    tensor,
)
from .interference import (
    ExperimentConfig,
    ModeParams,
    calibrate_q,
    intensity_joint_ent_closed,
    intensity_joint_numeric,
    intensity_joint_numeric_many,
    intensity_joint_sep_closed,
    intensity_single,
    intensity_single_closed,
    lambda_of,
    ratio,
    ratio_ent_closed,
    ratio_sep_closed,
    ratio_sep_range,
    rsep_bounds,
)
from .states import TwoModeState, make_product, make_rho_ent, make_rho_sep, ppt_min_eigenvalue
from .sweeps import (
    DEFAULT_OMEGA1,
    DEFAULT_OMEGA2,
    compute_grid,
    compute_timeseries,
    parse_angle,
    write_grid_csv,
    write_series_csv,
)
from .weyl import weyl_single, weyl_two

__all__ = ["CheckResult", "run_all", "format_report", "reference_ent_state"]

_SEED = 158234


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one named invariant check."""

    name: str
    passed: bool
    residual: float
    tolerance: float
    detail: str = ""


def _bounded(name: str, residual: float, tolerance: float, detail: str = "") -> CheckResult:
    return CheckResult(name, residual <= tolerance, float(residual), tolerance, detail)


def reference_ent_state(perturb: bool = False) -> TwoModeState:
    """The shared-photon reference state, optionally with its off-diagonal
    pair sign-flipped (still a valid state; used for fault injection)."""
    base = make_rho_ent()
    if not perturb:
        return base
    matrix = base.matrix.copy()
    i01, i10 = 1, base.dim_b
    matrix[i01, i10] *= -1.0
    matrix[i10, i01] *= -1.0
    return TwoModeState(matrix, base.dim_a, base.dim_b, label="ent-perturbed")


def _random_density(rng: np.random.Generator, dim: int, diagonal: bool = False) -> np.ndarray:
    if diagonal:
        weights = rng.random(dim) + 0.05
        return np.diag(weights / weights.sum()).astype(complex)
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = raw @ raw.conj().T
    return rho / np.trace(rho)


def _modes(q: float, omega1: float = DEFAULT_OMEGA1, omega2: float = DEFAULT_OMEGA2):
    return ModeParams(omega1, q), ModeParams(omega2, q)


# ---------------------------------------------------------------------------
# Individual checks
# ---------------------------------------------------------------------------

def _check_displacement_routes(rng: np.random.Generator) -> CheckResult:
    dim, half = 64, 32
    lams = [0.3j, 0.5 + 0.5j]
    for _ in range(6):
        r, phi = rng.random(), rng.uniform(0, 2 * math.pi)
        lams.append(r * np.exp(1j * phi))
    worst = 0.0
    for lam in lams:
        diff = displacement_exp(lam, dim) - displacement_analytic(lam, dim)
        worst = max(worst, float(np.abs(diff[:half, :half]).max()))
    return _bounded("displacement-route-agreement", worst, 1e-10,
                    f"{len(lams)} arguments, |lam| <= 1, dim {dim}")


def _check_number_spectrum() -> CheckResult:
    dim = 32
    number = make_creation(dim) @ make_annihilation(dim)
    spectrum = np.linalg.eigvalsh(number)
    worst = float(np.abs(spectrum - np.arange(dim)).max())
    return _bounded("number-operator-spectrum", worst, 1e-12, f"dim {dim}")


def _check_partial_trace(rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for state in (make_rho_sep(), reference_ent_state()):
        for keep in ("a", "b"):
            marg = state.marginal(keep)
            worst = max(worst, abs(complex(np.trace(marg)) - 1.0))
    rho_a = _random_density(rng, 3)
    rho_b = _random_density(rng, 4)
    joint = tensor(rho_a, rho_b)
    back = partial_trace(joint, (3, 4), "a")
    worst = max(worst, float(np.abs(back - rho_a).max()))
    back_b = partial_trace(joint, (3, 4), "b")
    worst = max(worst, float(np.abs(back_b - rho_b).max()))
    return _bounded("partial-trace-consistency", worst, 1e-14,
                    "marginal traces and product recovery")


def _check_truncation_dims(q: float, dims: tuple[int, ...]) -> CheckResult:
    sep = make_rho_sep()
    marg = sep.marginal("a")
    ent = reference_ent_state()
    mode_a, mode_b = _modes(q)
    lam_a, lam_b = lambda_of(mode_a, 7.0), lambda_of(mode_b, 7.0)
    singles, joints = [], []
    for dim in dims:
        policy = TruncationPolicy(initial_dim=dim, max_dim=max(512, 2 * dim))
        singles.append(weyl_single(marg, lam_a, policy=policy, use_exp=True).value)
        joints.append(weyl_two(ent, lam_a, lam_b, policy=policy, use_exp=True).value)
    worst = 0.0
    for series in (singles, joints):
        for i in range(len(series)):
            for j in range(i + 1, len(series)):
                worst = max(worst, abs(series[i] - series[j]))
    return _bounded("truncation-dim-agreement", worst, 1e-12,
                    f"characteristic values across dims {list(dims)}")


def _check_state_moments() -> CheckResult:
    sep, ent = make_rho_sep(), make_rho_ent()
    purity_sep = float(np.trace(sep.matrix @ sep.matrix).real)
    purity_ent = float(np.trace(ent.matrix @ ent.matrix).real)
    projector = float(np.abs(ent.matrix @ ent.matrix - ent.matrix).max())
    worst = max(abs(purity_sep - 0.5), abs(purity_ent - 1.0), projector)
    return _bounded("reference-state-moments", worst, 1e-12,
                    "purities 1/2 and 1; projector property")


def _check_state_marginals() -> CheckResult:
    sep, ent = make_rho_sep(), make_rho_ent()
    worst = 0.0
    for keep in ("a", "b"):
        worst = max(worst, float(np.abs(sep.marginal(keep) - ent.marginal(keep)).max()))
    expected = np.diag([0.5, 0.5]).astype(complex)
    worst = max(worst, float(np.abs(sep.marginal("a") - expected).max()))
    return _bounded("reference-state-marginals", worst, 1e-14,
                    "both states share the half/half marginal")


def _check_ppt(rng: np.random.Generator) -> CheckResult:
    floor = -1e-10
    sep_eig = ppt_min_eigenvalue(make_rho_sep())
    ent_eig = ppt_min_eigenvalue(make_rho_ent())
    product = make_product(_random_density(rng, 2), _random_density(rng, 2))
    prod_eig = ppt_min_eigenvalue(product)
    worst = max(max(0.0, floor - sep_eig), abs(ent_eig + 0.5),
                max(0.0, floor - prod_eig))
    return _bounded("ppt-witness", worst, 1e-10,
                    f"sep {sep_eig:.2e}, ent {ent_eig:.6f}, product {prod_eig:.2e}")


def _check_weyl_magnitude(rng: np.random.Generator) -> CheckResult:
    marg = make_rho_sep().marginal("a")
    vacuum = np.zeros((2, 2), complex)
    vacuum[0, 0] = 1.0
    mixed = _random_density(rng, 4)
    worst = -math.inf
    for rho in (marg, vacuum, mixed):
        for radius in (0.3, 1.0, 2.0):
            for angle in np.linspace(0.0, 2 * math.pi, 8, endpoint=False):
                lam = radius * np.exp(1j * angle)
                worst = max(worst, weyl_single(rho, lam).magnitude - 1.0)
    return _bounded("weyl-magnitude-bound", max(worst, 0.0), 1e-10,
                    "|W| <= 1 over |lam| in {0.3, 1, 2}")


def _check_weyl_conjugation(rng: np.random.Generator) -> CheckResult:
    rho = _random_density(rng, 4)
    worst = 0.0
    for _ in range(10):
        lam = complex(rng.normal(), rng.normal()) * 0.5
        plus = weyl_single(rho, lam).value
        minus = weyl_single(rho, -lam).value
        worst = max(worst, abs(minus - plus.conjugate()))
    return _bounded("weyl-conjugation", worst, 1e-12, "W(-lam) = conj W(lam)")


def _check_weyl_factorization(rng: np.random.Generator) -> CheckResult:
    rho_a = _random_density(rng, 3)
    rho_b = _random_density(rng, 2)
    product = make_product(rho_a, rho_b)
    worst = 0.0
    for _ in range(6):
        lam_a = complex(rng.normal(), rng.normal()) * 0.4
        lam_b = complex(rng.normal(), rng.normal()) * 0.4
        joint = weyl_two(product, lam_a, lam_b).value
        split = weyl_single(rho_a, lam_a).value * weyl_single(rho_b, lam_b).value
        worst = max(worst, abs(joint - split))
    return _bounded("weyl-factorization", worst, 1e-12,
                    "two-mode value factorizes on products")


def _check_closed_vs_numeric(rng: np.random.Generator, perturb: bool) -> CheckResult:
    sep = make_rho_sep()
    ent = reference_ent_state(perturb)
    period = 2 * math.pi / abs(DEFAULT_OMEGA1 - DEFAULT_OMEGA2)
    worst, where = 0.0, ""
    for q in (0.1, 0.3, 0.7, 1.0):
        mode_a, mode_b = _modes(q)
        samples = [(math.pi / 2, math.pi / 2, 0.0)]
        samples += [
            (rng.uniform(-2 * math.pi, 2 * math.pi),
             rng.uniform(-2 * math.pi, 2 * math.pi),
             rng.uniform(0.0, period))
            for _ in range(12)
        ]
        for sa, sb, t in samples:
            diffs = {}
            single = intensity_single(sep.marginal("a"), sa, mode_a, t)
            diffs["single"] = abs(single - intensity_single_closed(sa, q))
            cfg_sep = ExperimentConfig(sep, mode_a, mode_b, t)
            cfg_ent = ExperimentConfig(ent, mode_a, mode_b, t)
            diffs["i-sep"] = abs(
                intensity_joint_numeric(cfg_sep, sa, sb)
                - intensity_joint_sep_closed(sa, sb, q)
            )
            diffs["i-ent"] = abs(
                intensity_joint_numeric(cfg_ent, sa, sb)
                - intensity_joint_ent_closed(sa, sb, q, DEFAULT_OMEGA1, DEFAULT_OMEGA2, t)
            )
            diffs["r-sep"] = abs(
                ratio(cfg_sep, sa, sb) - ratio_sep_closed(sa, sb, q)
            )
            diffs["r-ent"] = abs(
                ratio(cfg_ent, sa, sb)
                - ratio_ent_closed(sa, sb, q, DEFAULT_OMEGA1, DEFAULT_OMEGA2, t)
            )
            for kind, diff in diffs.items():
                if diff > worst:
                    worst = diff
                    where = (f"{kind} at q={q}, sigma_a={sa:.3f}, "
                             f"sigma_b={sb:.3f}, t={t:.3g}")
    return _bounded("closed-vs-numeric", worst, 1e-10, f"worst: {where}")


def _check_periodicity(rng: np.random.Generator, q: float) -> CheckResult:
    two_pi = 2 * math.pi
    mode_a, mode_b = _modes(q)
    cfg = ExperimentConfig(make_rho_sep(), mode_a, mode_b, 3.0)
    worst = 0.0
    for _ in range(10):
        sa = rng.uniform(-two_pi, two_pi)
        sb = rng.uniform(-two_pi, two_pi)
        t = rng.uniform(0.0, 1e4)
        pairs = [
            (intensity_joint_sep_closed(sa, sb, q),
             intensity_joint_sep_closed(sa + two_pi, sb, q)),
            (intensity_joint_ent_closed(sa, sb, q, DEFAULT_OMEGA1, DEFAULT_OMEGA2, t),
             intensity_joint_ent_closed(sa, sb + two_pi, q, DEFAULT_OMEGA1,
                                        DEFAULT_OMEGA2, t)),
            (ratio_sep_closed(sa, sb, q), ratio_sep_closed(sa + two_pi, sb, q)),
            (ratio_ent_closed(sa, sb, q, DEFAULT_OMEGA1, DEFAULT_OMEGA2, t),
             ratio_ent_closed(sa, sb + two_pi, q, DEFAULT_OMEGA1, DEFAULT_OMEGA2, t)),
        ]
        for left, right in pairs:
            worst = max(worst, abs(left - right))
    sa, sb = 0.7, -1.3
    worst = max(worst, abs(
        intensity_joint_numeric(cfg, sa, sb)
        - intensity_joint_numeric(cfg, sa + two_pi, sb + two_pi)
    ))
    return _bounded("screen-phase-periodicity", worst, 1e-12,
                    "period 2 pi in each screen argument")


def _check_factorizable_ratio(rng: np.random.Generator, q: float) -> CheckResult:
    vacuum = np.zeros((2, 2), complex)
    vacuum[0, 0] = 1.0
    one = np.zeros((2, 2), complex)
    one[1, 1] = 1.0
    states = [
        make_product(vacuum, vacuum, label="vac-vac"),
        make_product(one, vacuum, label="one-vac"),
        make_product(_random_density(rng, 3, diagonal=True),
                     _random_density(rng, 2, diagonal=True), label="diag-diag"),
    ]
    mode_a, mode_b = _modes(q)
    worst = 0.0
    for state in states:
        for _ in range(17):
            sa = rng.uniform(-2 * math.pi, 2 * math.pi)
            sb = rng.uniform(-2 * math.pi, 2 * math.pi)
            t = rng.uniform(0.0, 1e5)
            cfg = ExperimentConfig(state, mode_a, mode_b, t)
            worst = max(worst, abs(ratio(cfg, sa, sb) - 1.0))
    return _bounded("factorizable-ratio-one", worst, 1e-10,
                    "R = 1 on three product states, 51 samples")


def _check_sep_time_independence(q: float) -> CheckResult:
    mode_a, mode_b = _modes(q)
    sep = make_rho_sep()
    period = 2 * math.pi / abs(DEFAULT_OMEGA1 - DEFAULT_OMEGA2)
    points = [(0.6, -2.1), (2.9, 2.9)]
    worst = 0.0
    for sa, sb in points:
        values = [
            ratio(ExperimentConfig(sep, mode_a, mode_b, t), sa, sb)
            for t in (0.0, 1234.5, period / 3.0)
        ]
        worst = max(worst, max(values) - min(values))
    return _bounded("sep-ratio-time-independence", worst, 1e-12,
                    "numeric R on the mixture at three times")


def _check_marginalization(q: float, perturb: bool) -> CheckResult:
    mode_a, mode_b = _modes(q)
    period = 2 * math.pi / abs(DEFAULT_OMEGA1 - DEFAULT_OMEGA2)
    nodes = np.linspace(-math.pi, math.pi, 2049)
    weights = np.full(nodes.size, 1.0)
    weights[0] = weights[-1] = 0.5
    worst = 0.0
    for state, t in ((make_rho_sep(), 0.0), (reference_ent_state(perturb), 0.3 * period)):
        cfg = ExperimentConfig(state, mode_a, mode_b, t)
        for sa in (0.4, 2.2):
            joint = intensity_joint_numeric_many(
                cfg, np.full(nodes.size, sa), nodes
            )
            mean = float((joint * weights).sum() / weights.sum())
            single = intensity_single(state.marginal("a"), sa, mode_a, t)
            worst = max(worst, abs(mean - single))
    return _bounded("joint-marginalization", worst, 1e-8,
                    "screen-average of joint equals single intensity")


def _check_sep_ratio_static(q: float) -> CheckResult:
    mode_a, mode_b = _modes(q)
    period = 2 * math.pi / abs(DEFAULT_OMEGA1 - DEFAULT_OMEGA2)
    times = period * np.arange(1024) / 1024.0
    series = compute_timeseries(times, parse_angle("0.98pi"), parse_angle("-1.1pi"),
                                mode_a, mode_b)
    variance = float(np.var(series.values[:, 0]))
    return _bounded("sep-ratio-static", variance, 1e-24,
                    "sample variance over 1024 times")


def _check_beat_spectrum(q: float) -> CheckResult:
    mode_a, mode_b = _modes(q)
    period = 2 * math.pi / abs(DEFAULT_OMEGA1 - DEFAULT_OMEGA2)
    n = 256
    times = period * np.arange(n) / n
    values = np.array([
        ratio_ent_closed(parse_angle("0.98pi"), parse_angle("-1.1pi"), q,
                         DEFAULT_OMEGA1, DEFAULT_OMEGA2, t)
        for t in times
    ])
    spectrum = np.abs(np.fft.rfft(values)) ** 2
    total = float(spectrum.sum())
    outside = 1.0 - float(spectrum[0] + spectrum[1]) / total
    return _bounded("beat-spectrum-concentration", outside, 1e-10,
                    "power outside DC and beat bins")


def _check_ratio_range_grid() -> CheckResult:
    axis = np.linspace(-2 * math.pi, 2 * math.pi, 101)
    worst, detail = 0.0, []
    for q in (0.2, 0.5, 1.0):
        lo, hi = ratio_sep_range(q)
        stationary_hi = rsep_bounds(q)[1]
        values = np.array([[ratio_sep_closed(a, b, q) for b in axis] for a in axis])
        worst = max(worst, float(lo - values.min()), float(values.max() - hi))
        pi_idx = [np.argmin(np.abs(axis - s)) for s in (-math.pi, math.pi)]
        zero_idx = [np.argmin(np.abs(axis - s))
                    for s in (-2 * math.pi, 0.0, 2 * math.pi)]
        for i in pi_idx:
            for j in pi_idx:
                worst = max(worst, abs(values[i, j] - lo))
        center = zero_idx[1]
        worst = max(worst, abs(values[center, center] - stationary_hi))
        for i in pi_idx:
            for j in zero_idx:
                worst = max(worst, abs(values[i, j] - hi))
        detail.append(f"q={q}: [{lo:.6f}, {hi:.6f}]")
    return _bounded("ratio-range-grid", worst, 1e-12, "; ".join(detail))


def _check_csv_determinism(q: float) -> CheckResult:
    mode_a, mode_b = _modes(q)
    axis = np.linspace(-2 * math.pi, 2 * math.pi, 21)

    def render() -> tuple[str, str]:
        grid = compute_grid("r-sep", axis, axis, mode_a, mode_b, time=0.0)
        period = 2 * math.pi / abs(DEFAULT_OMEGA1 - DEFAULT_OMEGA2)
        times = period * np.arange(64) / 64.0
        series = compute_timeseries(times, 0.98 * math.pi, -1.1 * math.pi,
                                    mode_a, mode_b)
        return write_grid_csv(grid), write_series_csv(series)

    first, second = render(), render()
    identical = first == second

    grid = compute_grid("r-sep", axis, axis, mode_a, mode_b, time=0.0)
    rows = [line for line in first[0].splitlines()
            if line and not line.startswith("#") and not line.startswith("sigma_a")]
    parsed = np.array([float(line.split(",")[2]) for line in rows])
    roundtrip_ok = bool(np.array_equal(parsed, grid.values.ravel()))
    passed = identical and roundtrip_ok
    return CheckResult("csv-determinism", passed, 0.0 if passed else 1.0, 0.5,
                       "byte-identical re-render and 17-digit round-trip")


def _check_degeneracy_guards() -> CheckResult:
    problems = []
    vacuum = np.zeros((2, 2), complex)
    vacuum[0, 0] = 1.0
    cfg = ExperimentConfig(
        make_product(vacuum, vacuum),
        ModeParams(DEFAULT_OMEGA1, 0.0),
        ModeParams(DEFAULT_OMEGA2, 0.0),
    )
    try:
        ratio(cfg, math.pi, 0.3)
        problems.append("zero-intensity screen point not rejected")
    except DegenerateScreenError:
        pass
    try:
        rsep_bounds(0.0)
        problems.append("rsep_bounds(0) not rejected")
    except DegenerateScreenError:
        pass
    try:
        calibrate_q(0.5, "min")
        problems.append("unattainable calibration target not rejected")
    except CalibrationError:
        pass
    passed = not problems
    return CheckResult("degeneracy-guards", passed, 0.0 if passed else 1.0, 0.5,
                       "; ".join(problems) or "all guarded paths raise")


def _check_angle_parser() -> CheckResult:
    cases = {
        "0.98pi": 0.98 * math.pi,
        "-1.1pi": -1.1 * math.pi,
        "pi": math.pi,
        "-pi": -math.pi,
        "2pi": 2 * math.pi,
        "1.5": 1.5,
        "0": 0.0,
    }
    worst = max(abs(parse_angle(text) - value) for text, value in cases.items())
    try:
        parse_angle("junk")
        worst = max(worst, 1.0)
    except ValueError:
        pass
    return _bounded("angle-parser", worst, 1e-15, "pi-suffix notation")


# ---------------------------------------------------------------------------
# Suite
# ---------------------------------------------------------------------------

def run_all(q: float = 0.3, dims: tuple[int, ...] = (16, 32, 64),
            perturb: bool = False) -> list[CheckResult]:
    """Run every invariant check; deterministic for fixed arguments."""
    if any(d < 2 for d in dims):
        raise ValueError(f"dims must all be >= 2, got {dims}")
    rng = np.random.default_rng(_SEED)
    return [
        _check_displacement_routes(rng),
        _check_number_spectrum(),
        _check_partial_trace(rng),
        _check_truncation_dims(q, tuple(dims)),
        _check_state_moments(),
        _check_state_marginals(),
        _check_ppt(rng),
        _check_weyl_magnitude(rng),
        _check_weyl_conjugation(rng),
        _check_weyl_factorization(rng),
        _check_closed_vs_numeric(rng, perturb),
        _check_periodicity(rng, q),
        _check_factorizable_ratio(rng, q),
        _check_sep_time_independence(q),
        _check_marginalization(q, perturb),
        _check_sep_ratio_static(q),
        _check_beat_spectrum(q),
        _check_ratio_range_grid(),
        _check_csv_determinism(q),
        _check_degeneracy_guards(),
        _check_angle_parser(),
    ]


def format_report(results: list[CheckResult]) -> str:
    """Human-readable pass/fail table."""
    width = max(len(r.name) for r in results)
    lines = []
    for r in results:
        status = " ok " if r.passed else "FAIL"
        lines.append(
            f"[{status}] {r.name:<{width}}  residual {r.residual:9.3e}  "
            f"(tol {r.tolerance:g})  {r.detail}"
        )
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} checks passed")
    return "\n".join(lines)
