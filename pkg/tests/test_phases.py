"""Tests for reducible systems and phase transitions"""

import math

import pytest

from sftpressure import golden as closed
from sftpressure.duality import biconjugate, legendre, sample_curve, subdifferential_interval
from sftpressure.exceptions import InputError, NoCoexistenceError, PeriodicComponentError
from sftpressure.phases import (
    component_pressures,
    corner_scan,
    disjoint_union,
    envelope_curve,
    selection_check,
    winners,
)
from sftpressure.symbolic import (
    full_shift,
    golden_mean,
    indicator_potential,
    make_sft,
    zero_potential,
)

PHI = (1 + math.sqrt(5)) / 2
T_STAR = math.log(2 / PHI)


@pytest.fixture(scope="module")
def union():
    """Golden mean on symbols 1-2, full 2-shift on symbols 3-4"""
    return disjoint_union(golden_mean(), full_shift(2))


@pytest.fixture(scope="module")
def psi(union):
    """Indicator of the golden mean component"""
    return indicator_potential(union, [0, 1])


@pytest.fixture(scope="module")
def union_curve(union, psi):
    return envelope_curve(union, zero_potential(union), psi, -5.0, 5.0, 1001)


class TestDisjointUnion:
    """Test block-diagonal construction"""

    def test_components(self, union):
        assert union.alphabet_size == 4
        assert union.components == ((0, 1), (2, 3))
        assert not union.is_primitive

    def test_component_pressures(self, union, psi):
        reports = component_pressures(union, zero_potential(union), psi)
        assert [r.component_index for r in reports] == [0, 1]
        assert [r.symbols for r in reports] == [(0, 1), (2, 3)]
        assert reports[0].pressure == pytest.approx(math.log(PHI), abs=1e-12)
        assert reports[1].pressure == pytest.approx(math.log(2), abs=1e-12)
        assert reports[0].mean_direction == pytest.approx(1.0, abs=1e-12)
        assert reports[1].mean_direction == pytest.approx(0.0, abs=1e-12)

    def test_periodic_component_rejected(self):
        system = make_sft(4, [[1, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
        with pytest.raises(PeriodicComponentError, match="symbols \\[3, 4\\]"):
            component_pressures(system, zero_potential(system))


class TestEnvelope:
    """Test the envelope of component pressures"""

    def test_envelope_is_max_of_components(self, union_curve):
        for t, value in zip(union_curve.t_grid[::100], union_curve.values[::100]):
            assert value == pytest.approx(max(math.log(PHI) + t, math.log(2)), abs=1e-12)

    def test_winner_switches_at_corner(self, union_curve):
        assert union_curve.components[0] == 1
        assert union_curve.components[-1] == 0


class TestCornerScan:
    """Test first-order transition detection"""

    def test_single_corner_at_log_two_over_phi(self, union_curve):
        """Test the corner t* = log(2/φ) with slope jump 1"""
        corners = corner_scan(union_curve)
        assert len(corners) == 1
        corner = corners[0]
        assert corner.t_star == pytest.approx(T_STAR, abs=1e-6)
        assert corner.jump == pytest.approx(1.0, abs=1e-3)
        assert (corner.left_phase, corner.right_phase) == (1, 0)

    def test_to_dict(self, union_curve):
        assert set(corner_scan(union_curve)[0].to_dict()) == {
            "t_star",
            "jump",
            "left_phase",
            "right_phase",
        }

    def test_smooth_curve_has_no_corner(self):
        system = golden_mean()
        g = indicator_potential(system, [0])
        curve = sample_curve(system, zero_potential(system), g, -5.0, 5.0, 1001)
        assert corner_scan(curve) == []

    def test_corner_off_grid_center(self, union, psi):
        """Test localization does not depend on grid alignment"""
        curve = envelope_curve(union, zero_potential(union), psi, -1.0, 1.3, 37)
        corners = corner_scan(curve)
        assert len(corners) == 1
        assert corners[0].t_star == pytest.approx(T_STAR, abs=1e-6)


class TestSelection:
    """Test which phase a small push selects"""

    @pytest.mark.parametrize("k", range(1, 7))
    def test_push_selects_golden_component(self, union, psi, k):
        """Test φ₀ = t*·ψ pushed along ψ picks the component with larger ∫ψ"""
        assert selection_check(union, psi * T_STAR, psi, 10.0**-k) == (0,)

    def test_push_backwards_selects_full_shift(self, union, psi):
        assert selection_check(union, psi * T_STAR, -psi, 1e-3) == (1,)

    def test_tie_is_reported(self):
        """Test two copies of the full shift stay tied"""
        system = disjoint_union(full_shift(2), full_shift(2))
        zero = zero_potential(system)
        assert selection_check(system, zero, zero, 1e-3) == (0, 1)

    def test_no_coexistence(self, union, psi):
        with pytest.raises(NoCoexistenceError):
            selection_check(union, zero_potential(union), psi, 1e-3)

    def test_push_must_be_positive(self, union, psi):
        with pytest.raises(InputError):
            selection_check(union, psi * T_STAR, psi, 0.0)


class TestWinners:
    """Test tie detection"""

    def test_relative_tolerance(self):
        assert winners([1.0, 1.0 + 1e-12, 0.0]) == (0, 1)

    def test_strict(self):
        assert winners([0.5, 2.0, 1.0]) == (1,)


class TestTwoPhaseDuality:
    """Test convex duality on envelope curves"""

    def test_biconjugate_restores_envelope(self, union, psi):
        curve = envelope_curve(union, zero_potential(union), psi, -1.0, 1.0, 201)
        restored = biconjugate(legendre(curve, 201), curve.t_grid)
        assert abs(restored[1:-1] - curve.values[1:-1]).max() < 5e-4

    @pytest.mark.parametrize("name", ["golden", "union"])
    def test_subdifferentials_are_monotone(self, union_curve, name):
        """Test upper(t₁) ≤ lower(t₂) for t₁ < t₂"""
        if name == "golden":
            system = golden_mean()
            g = indicator_potential(system, [0])
            curve = sample_curve(system, zero_potential(system), g, -5.0, 5.0, 1001)
            points = [-4.5 + 0.5 * k for k in range(19)]
        else:
            curve = union_curve
            points = sorted([-4.0, -2.0, -1.0, 0.0, 0.1, T_STAR, 0.4, 1.0, 2.0, 4.0])
        intervals = [subdifferential_interval(curve, t) for t in points]
        for i, left in enumerate(intervals):
            assert left.lower <= left.upper + 1e-6
            for right in intervals[i + 1 :]:
                assert left.upper <= right.lower + 1e-6


class TestTwoGoldenCopies:
    """Test the union of two golden mean shifts pushed along the first copy"""

    @pytest.fixture(scope="class")
    def copies(self):
        system = disjoint_union(golden_mean(), golden_mean())
        return system, indicator_potential(system, [0, 1])

    def test_kink_at_zero(self, copies):
        system, first = copies
        curve = envelope_curve(system, zero_potential(system), first, -1.0, 1.3, 37)
        corners = corner_scan(curve)
        assert len(corners) == 1
        assert corners[0].t_star == pytest.approx(0.0, abs=1e-6)
        assert corners[0].jump == pytest.approx(1.0, abs=1e-3)
        interval = subdifferential_interval(curve, corners[0].t_star)
        assert interval.lower == pytest.approx(0.0, abs=1e-6)
        assert interval.upper == pytest.approx(1.0, abs=1e-6)

    def test_selection(self, copies):
        system, first = copies
        zero = zero_potential(system)
        assert selection_check(system, zero, first, 1e-3) == (0,)
        assert selection_check(system, zero, -first, 1e-3) == (1,)


class TestJumpIdentity:
    """Test the slope jump equals the difference of phase means"""

    def test_jump_matches_component_means(self, union):
        """Test ψ = 1_{symbol 1} + 1_{golden component} with a non-trivial mean"""
        psi = indicator_potential(union, [0]) + indicator_potential(union, [0, 1])
        curve = envelope_curve(union, zero_potential(union), psi, -3.0, 2.0, 501)
        corners = corner_scan(curve)
        assert len(corners) == 1
        corner = corners[0]

        reports = component_pressures(union, psi * corner.t_star, psi)
        means = {r.component_index: r.mean_direction for r in reports}
        assert means[0] == pytest.approx(1.0 + closed.mean(corner.t_star), abs=1e-9)
        expected = means[corner.right_phase] - means[corner.left_phase]
        assert abs(corner.jump - expected) < 1e-3
