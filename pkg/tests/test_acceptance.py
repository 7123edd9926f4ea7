"""Acceptance gate: one test per criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` (or ``-rP``) to see the
report lines.  Criterion 3 states textbook bounds for the mixture's
correlation ratio that the ratio genuinely violates at mixed-sign screen
points; it is implemented as stated and fails, with the counterexample in
the assertion message.  See ratio_sep_range for the corrected global range.
"""

import math
import subprocess
import sys
import time
from contextlib import contextmanager

import numpy as np
import pytest

from abfringe import (
    DEFAULT_POLICY,
    ExperimentConfig,
    ModeParams,
    TruncationPolicy,
    displacement_analytic,
    displacement_exp,
    intensity_joint_ent_closed,
    intensity_joint_numeric,
    intensity_joint_numeric_many,
    intensity_joint_sep_closed,
    intensity_single,
    intensity_single_closed,
    make_product,
    make_rho_ent,
    make_rho_sep,
    ppt_min_eigenvalue,
    ratio,
    ratio_ent_closed,
    ratio_sep_closed,
    rsep_bounds,
    weyl_single,
    weyl_two,
)
from abfringe.cli import main

W1, W2 = 1.2e-4, 1.0e-4
BEAT_PERIOD = 2.0 * math.pi / (W1 - W2)


@contextmanager
def criterion(number, name):
    try:
        yield
    except BaseException:
        print(f"[criterion {number}] FAIL {name}")
        raise
    print(f"[criterion {number}] PASS {name}")


def configs(q, time_=0.0):
    mode_a, mode_b = ModeParams(W1, q), ModeParams(W2, q)
    return (ExperimentConfig(make_rho_sep(), mode_a, mode_b, time_),
            ExperimentConfig(make_rho_ent(), mode_a, mode_b, time_))


def test_criterion_1_closed_forms_match_numeric_traces():
    with criterion(1, "closed forms match numeric traces (200 samples/coupling)"):
        rng = np.random.default_rng(20260815)
        # share the state objects across samples, as any real sweep would;
        # the trace cache is keyed by state identity
        rho_sep, rho_ent = make_rho_sep(), make_rho_ent()
        marginal = rho_sep.marginal("a")
        started = time.perf_counter()
        worst = 0.0
        for q in (0.1, 0.3, 0.7, 1.0):
            mode_a, mode_b = ModeParams(W1, q), ModeParams(W2, q)
            for _ in range(200):
                sa, sb = rng.uniform(-2.0 * math.pi, 2.0 * math.pi, size=2)
                t = rng.uniform(0.0, 2.0 * BEAT_PERIOD)
                sep = ExperimentConfig(rho_sep, mode_a, mode_b, t)
                ent = ExperimentConfig(rho_ent, mode_a, mode_b, t)

                single = intensity_single(marginal, sa, mode_a, time=t)
                pairs = [
                    (single, intensity_single_closed(sa, q)),
                    (intensity_joint_numeric(sep, sa, sb),
                     intensity_joint_sep_closed(sa, sb, q)),
                    (intensity_joint_numeric(ent, sa, sb),
                     intensity_joint_ent_closed(sa, sb, q, W1, W2, t)),
                    (ratio(sep, sa, sb), ratio_sep_closed(sa, sb, q)),
                    (ratio(ent, sa, sb),
                     ratio_ent_closed(sa, sb, q, W1, W2, t)),
                ]
                worst = max(worst, *(abs(n - c) for n, c in pairs))
        elapsed = time.perf_counter() - started
        assert worst < 1e-10, f"worst closed-vs-numeric residual {worst:.3e}"
        assert elapsed < 10.0, f"took {elapsed:.2f}s, budget 10s"


def test_criterion_2_factorizable_fields_give_unit_ratio():
    with criterion(2, "factorizable fields give R = 1"):
        rng = np.random.default_rng(4)
        vacuum = np.diag([1.0, 0.0]).astype(complex)
        one_photon = np.diag([0.0, 1.0]).astype(complex)
        rand_a = np.diag(rng.dirichlet(np.ones(3))).astype(complex)
        rand_b = np.diag(rng.dirichlet(np.ones(2))).astype(complex)
        states = [
            make_product(vacuum, vacuum),
            make_product(one_photon, vacuum),
            make_product(rand_a, rand_b),
        ]
        mode_a, mode_b = ModeParams(W1, 0.5), ModeParams(W2, 0.5)
        for state in states:
            config = ExperimentConfig(state, mode_a, mode_b, 0.3 * BEAT_PERIOD)
            for sa, sb in ((math.pi / 2, math.pi / 2), (0.7, -2.1),
                           (2.9, 0.0), (-1.3, 1.9)):
                value = ratio(config, sa, sb)
                assert abs(value - 1.0) < 1e-10, (
                    f"R = {value!r} for a product state at ({sa}, {sb})")


def test_criterion_3_mixture_ratio_bounds_and_extrema():
    with criterion(3, "mixture ratio bounds and extrema on the dense grid"):
        q = 0.5
        axis = np.linspace(-2.0 * math.pi, 2.0 * math.pi, 101)
        values = np.array([[ratio_sep_closed(a, b, q) for b in axis]
                           for a in axis])
        lo, hi = rsep_bounds(q)

        pi_idx = {i for i, x in enumerate(axis)
                  if abs(abs(x) - math.pi) < 1e-9}
        zero_idx = {i for i, x in enumerate(axis)
                    if abs(x) < 1e-9 or abs(abs(x) - 2.0 * math.pi) < 1e-9}

        # global minimum: value and location
        assert values.min() == pytest.approx(lo, abs=1e-12)
        min_points = np.argwhere(values <= values.min() + 1e-12)
        assert min_points.size > 0
        for i, j in min_points:
            assert i in pi_idx and j in pi_idx, (
                f"minimum attained off the (pi, pi) points, at "
                f"({axis[i]:.6g}, {axis[j]:.6g})")

        # within the stationary-value bounds everywhere
        i, j = np.unravel_index(np.argmax(values), values.shape)
        assert values.max() <= hi + 1e-12, (
            f"ratio {values.max():.16g} at (sigma_a, sigma_b) = "
            f"({axis[i]:.6g}, {axis[j]:.6g}) exceeds the (0, 0) stationary "
            f"value {hi:.16g}; opposite-sign cosines push the ratio above "
            f"it (the true global maximum, see ratio_sep_range)")
        assert values.min() >= lo - 1e-12

        # maxima at the zero-phase corners
        max_points = np.argwhere(values >= values.max() - 1e-12)
        for i, j in max_points:
            assert i in zero_idx and j in zero_idx, (
                f"maximum attained away from the zero-phase corners, at "
                f"({axis[i]:.6g}, {axis[j]:.6g})")


def test_criterion_4_time_structure():
    with criterion(4, "flat mixture ratio; single-tone beat; equal-frequency offset"):
        q, sa, sb = 0.5, 0.98 * math.pi, -1.1 * math.pi
        times = BEAT_PERIOD * np.arange(1024) / 1024.0

        r_sep = np.array([ratio_sep_closed(sa, sb, q) for _ in times])
        assert float(np.var(r_sep)) <= 1e-24

        r_ent = np.array([ratio_ent_closed(sa, sb, q, W1, W2, t)
                          for t in times])
        power = np.abs(np.fft.fft(r_ent)) ** 2
        keep = power[0] + power[1] + power[-1]  # DC and the beat bins
        assert keep / power.sum() > 1.0 - 1e-10

        # equal frequencies: the offset field is a time-independent constant
        axis = np.linspace(-2.0 * math.pi, 2.0 * math.pi, 21)
        fields = []
        for t in (0.0, 1.0e5):
            fields.append(np.array(
                [[ratio_ent_closed(a, b, q, W1, W1, t)
                  - ratio_sep_closed(a, b, q) for b in axis] for a in axis]))
        assert np.array_equal(fields[0], fields[1])


def test_criterion_5_calibration_reconciles_published_targets(capsys):
    with criterion(5, "coupling calibration against each published target"):
        # each single-target inversion must converge; no single q is
        # required to satisfy both targets at once
        for which, target, other in (("min", "0.7557", "0.995"),
                                     ("max", "0.995", "0.7557")):
            code = main(["calibrate", "--which", which, "--target", target,
                         "--other-target", other])
            assert code == 0
            out = capsys.readouterr().out
            recovered = next(line for line in out.splitlines()
                             if line.startswith("recovered q:"))
            q = float(recovered.split()[-1])
            bound = rsep_bounds(q)[0 if which == "min" else 1]
            assert abs(bound - float(target)) <= 1e-9
            assert "cross residual vs" in out


def test_criterion_6_state_classification():
    with criterion(6, "partial-transpose witness and purities"):
        sep, ent = make_rho_sep(), make_rho_ent()
        assert ppt_min_eigenvalue(sep) >= -1e-10
        assert ppt_min_eigenvalue(ent) == pytest.approx(-0.5, abs=1e-10)
        purity_sep = float(np.trace(sep.matrix @ sep.matrix).real)
        purity_ent = float(np.trace(ent.matrix @ ent.matrix).real)
        assert purity_sep == pytest.approx(0.5, abs=1e-12)
        assert purity_ent == pytest.approx(1.0, abs=1e-12)


def test_criterion_7_displacement_routes_and_truncation():
    with criterion(7, "displacement dual routes agree; truncation is settled"):
        rng = np.random.default_rng(11)
        dim = 64
        half = dim // 2
        for _ in range(20):
            lam = math.sqrt(rng.uniform()) * np.exp(2j * math.pi * rng.uniform())
            via_exp = displacement_exp(lam, dim)
            via_analytic = displacement_analytic(lam, dim)
            gap = np.abs(via_exp[:half, :half] - via_analytic[:half, :half]).max()
            assert gap < 1e-10, f"half-block mismatch {gap:.3e} at lam={lam}"

        coarse = TruncationPolicy(initial_dim=16, max_dim=512)
        fine = TruncationPolicy(initial_dim=32, max_dim=512)
        marg = make_rho_sep().marginal("a")
        ent = make_rho_ent()
        for q in (0.3, 0.5, 1.0):
            for t in (0.0, 0.37 * BEAT_PERIOD):
                lam_a = 1j * q * np.exp(1j * W1 * t)
                lam_b = 1j * q * np.exp(1j * W2 * t)
                single = [weyl_single(marg, lam_a, policy=p).value
                          for p in (coarse, fine)]
                joint = [weyl_two(ent, lam_a, lam_b, policy=p).value
                         for p in (coarse, fine)]
                assert abs(single[0] - single[1]) <= 1e-12
                assert abs(joint[0] - joint[1]) <= 1e-12


def test_criterion_8_marginalizing_the_joint_recovers_the_singles():
    with criterion(8, "screen-phase marginalization recovers single fringes"):
        q, t = 0.5, 0.4 * BEAT_PERIOD
        nodes = np.linspace(-math.pi, math.pi, 2049)
        params_a = ModeParams(W1, q)
        for config in configs(q, t):
            for sa in (0.0, 1.1, math.pi / 2, -2.5):
                joint = intensity_joint_numeric_many(
                    config, np.full_like(nodes, sa), nodes)
                averaged = float(np.trapezoid(joint, nodes) / (2.0 * math.pi))
                single = intensity_single(
                    config.state.marginal("a"), sa, params_a, time=t)
                assert abs(averaged - single) < 1e-8, (
                    f"marginalized joint {averaged!r} vs single {single!r} "
                    f"for {config.state.label} at sigma_a={sa}")


def test_criterion_9_cli_determinism_and_fault_injection(tmp_path, capsys):
    with criterion(9, "deterministic CSV output; fault injection is caught"):
        files = [tmp_path / "first.csv", tmp_path / "second.csv"]
        for path in files:
            code = main(["grid", "--quantity", "r-ent", "--q", "0.5",
                         "--grid-n", "21", "--out", str(path)])
            assert code == 0
        assert files[0].read_bytes() == files[1].read_bytes()

        assert main(["validate"]) == 0
        capsys.readouterr()
        assert main(["validate", "--perturb"]) == 1
        capsys.readouterr()
