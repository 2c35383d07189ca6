import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from qfb.core import ModeParity, LinearQuantumSystem, is_stable, poles, transfer_matrix
from qfb.errors import SingularAtPole
from qfb.systems import build_topology, ndpo_tms

from oracles import two_mode_g

rates = st.floats(min_value=0.1, max_value=5.0, allow_nan=False)
detunings = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False)


class TestModeParity:
    def test_valid(self):
        p = ModeParity((1, -1, 1, -1))
        assert p.n == 4
        assert np.array_equal(p.matrix, np.diag([1.0, -1.0, 1.0, -1.0]))

    @pytest.mark.parametrize("signs", [(), (1, 0), (1, 2, -1)])
    def test_invalid(self, signs):
        with pytest.raises(ValueError):
            ModeParity(signs)


class TestSystemValidation:
    def test_nonpositive_damping_rejected(self):
        with pytest.raises(ValueError):
            LinearQuantumSystem(
                parity=ModeParity((1, -1)),
                damping=(1.0, 0.0),
                detuning=(0.0, 0.0),
                coupling=((0.0, 1.0), (1.0, 0.0)),
            )

    def test_asymmetric_coupling_rejected(self):
        with pytest.raises(ValueError):
            LinearQuantumSystem(
                parity=ModeParity((1, -1)),
                damping=(1.0, 1.0),
                detuning=(0.0, 0.0),
                coupling=((0.0, 1.0), (2.0, 0.0)),
            )

    def test_same_parity_coupling_rejected(self):
        with pytest.raises(ValueError):
            LinearQuantumSystem(
                parity=ModeParity((1, 1)),
                damping=(1.0, 1.0),
                detuning=(0.0, 0.0),
                coupling=((0.0, 1.0), (1.0, 0.0)),
            )

    def test_drift_diagonal(self):
        sys = ndpo_tms(2.0, 1.0, 0.7, -0.3)
        a = sys.drift
        assert a[0, 0] == -(1j * 0.7 + 0.5)
        assert a[1, 1] == -(-1j * (-0.3) + 0.5)
        assert a[0, 1] == a[1, 0] == 2.0


class TestTransferMatrix:
    def test_passive_cavity_all_pass(self):
        sys = ndpo_tms(0.0, 1.0, 0.0, 0.0)
        for w in (0.0, 0.3, 2.0, 17.0):
            g = transfer_matrix(sys, 1j * w).matrix
            expected = (1j * w - 0.5) / (1j * w + 0.5)
            assert abs(g[0, 0] - expected) < 1e-14
            assert abs(abs(g[0, 0]) - 1.0) < 1e-12
            assert abs(g[0, 1]) == 0.0

    def test_gain_at_zero_special_point(self):
        g = transfer_matrix(ndpo_tms(10.0, 1.0, 10.0, 10.0), 0.0).matrix
        assert abs(g[0, 0]) ** 2 == pytest.approx(1601.0, rel=1e-12)

    @staticmethod
    def _well_conditioned(sys, w):
        m = 1j * w * np.eye(sys.n) - sys.drift
        return np.linalg.svd(m, compute_uv=False)[-1] > 1e-2

    @settings(max_examples=30, deadline=None)
    @given(lam=rates, kap=rates, d1=detunings, d2=detunings, w=st.floats(0, 50))
    def test_matches_closed_form(self, lam, kap, d1, d2, w):
        sys = ndpo_tms(lam, kap, d1, d2)
        if not self._well_conditioned(sys, w):
            return
        try:
            g = transfer_matrix(sys, 1j * w).matrix
        except SingularAtPole:
            return
        expected = two_mode_g(lam, kap, d1, d2, 1j * w)
        assert np.max(np.abs(g - expected) / (np.abs(expected) + 1e-300)) < 1e-12

    def test_singular_at_pole(self):
        sys = ndpo_tms(0.0, 1.0, 0.0, 0.0)
        with pytest.raises(SingularAtPole):
            transfer_matrix(sys, -0.5)

    @settings(max_examples=20, deadline=None)
    @given(lam=rates, kap=rates, d1=detunings, d2=detunings, w=st.floats(0, 20))
    def test_two_mode_magnitude_identities(self, lam, kap, d1, d2, w):
        sys = ndpo_tms(lam, kap, d1, d2)
        if not self._well_conditioned(sys, w):
            return
        try:
            g = transfer_matrix(sys, 1j * w).matrix
        except SingularAtPole:
            return
        assert abs(abs(g[0, 0]) - abs(g[1, 1])) < 1e-10 * abs(g[0, 0])
        assert abs(abs(g[0, 1]) - abs(g[1, 0])) < 1e-10 * (abs(g[0, 1]) + 1)
        det = g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]
        assert abs(det - g[1, 1] / np.conj(g[0, 0])) < 1e-10 * abs(det)

    @pytest.mark.parametrize("topology", ["tms", "linear4", "tshape4", "square4"])
    def test_bogoliubov_identity(self, topology):
        sys = build_topology(topology, 10.0, 1.0)
        sigma = sys.parity.matrix
        for w in np.linspace(0.0, 30.0, 40):
            g = transfer_matrix(sys, 1j * w).matrix
            assert np.max(np.abs(g @ sigma @ g.conj().T - sigma)) < 1e-10


class TestPoles:
    @settings(max_examples=30, deadline=None)
    @given(lam=rates, kap=rates, delta=detunings)
    def test_two_mode_formula(self, lam, kap, delta):
        scale = max(1.0, kap, lam, abs(delta))
        # near lam = |delta| the pair coalesces into a defective double
        # pole, where dense eigenvalues are only sqrt(eps)-accurate
        assume(abs(lam**2 - delta**2) > 0.1 * scale**2)
        sys = ndpo_tms(lam, kap, delta, delta)
        root = np.sqrt(complex(lam**2 - delta**2))
        expected = [-kap / 2 + root, -kap / 2 - root]
        remaining = list(poles(sys))
        for target in expected:
            best = min(remaining, key=lambda z: abs(z - target))
            assert abs(best - target) < 1e-10 * scale
            remaining.remove(best)

    def test_matched_detuning_double_pole(self):
        # Defective (Jordan) pair: dense eigenvalues are sqrt(eps)-accurate.
        got = poles(ndpo_tms(10.0, 1.0, 10.0, 10.0))
        assert all(abs(z - (-0.5)) < 1e-6 for z in got)
        assert abs(sum(got) / 2 - (-0.5)) < 1e-12

    def test_poles_are_charpoly_roots(self):
        sys = ndpo_tms(2.0, 1.3, 0.4, -1.1)
        a = sys.drift
        for z in poles(sys):
            assert abs(np.linalg.det(z * np.eye(2) - a)) < 1e-10


class TestStability:
    def test_matched_detuning_stable_with_large_margin(self):
        sys = ndpo_tms(50.0, 1.0, 50.0, 50.0)
        assert is_stable(sys, margin=0.5 - 1e-4)

    def test_unmatched_high_gain_unstable(self):
        assert not is_stable(ndpo_tms(1.0, 1.0, 0.0, 0.0))

    def test_empty_cavity_stable(self):
        assert is_stable(ndpo_tms(0.0, 2.0, 0.0, 0.0))

    def test_negative_margin_rejected(self):
        with pytest.raises(ValueError):
            is_stable(ndpo_tms(0.0, 1.0, 0.0, 0.0), margin=-1.0)
