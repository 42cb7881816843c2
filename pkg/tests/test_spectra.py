"""Spectrum containers, eigensolvers, and closed-form spectrum laws."""

import numpy as np
import pytest

from relspec.errors import DomainError, HypothesisError
from relspec.geometry import Grid1D, ScalarField
from relspec.operators import SelfAdjointOperator, build_schrodinger, uniform_space
from relspec.spectra import ExplicitSpectrum, Spectrum, eigendecompose, eigensolve


class TestSpectrum:
    def test_sorted_and_counting_inclusive(self):
        s = Spectrum(np.array([3.0, 1.0, 2.0]))
        assert np.array_equal(s.eigenvalues, [1.0, 2.0, 3.0])
        assert s.counting(2.0) == 2.0       # inclusive at an eigenvalue
        assert s.counting(1.9) == 1.0

    def test_kernel_and_gap(self):
        s = Spectrum(np.array([0.0, 0.0, 0.5, 2.0]))
        assert s.kernel_dim == 2.0
        assert s.gap_mu == 0.5

    def test_negative_spectrum_fails_gap_hypothesis(self):
        s = Spectrum(np.array([-1.0, 2.0, 3.0]))
        with pytest.raises(HypothesisError):
            s.require_gap()

    def test_heat_sum_matches_direct(self):
        ev = np.array([0.3, 1.7, 4.0])
        s = Spectrum(ev, weight=0.5)
        assert s.heat_sum(0.7) == pytest.approx(0.5 * np.sum(np.exp(-0.7 * ev)))

    def test_positive_time_required(self):
        s = Spectrum(np.array([1.0]))
        with pytest.raises(DomainError):
            s.heat_sum(0.0)

    def test_empty_rejected(self):
        with pytest.raises(DomainError):
            Spectrum(np.array([]))


class TestEigensolve:
    def test_banded_matches_dense(self):
        grid = Grid1D.interval(0.0, 2.0, 80)
        op = build_schrodinger(grid, ScalarField.from_expression(grid, "x*x"),
                               order=4)
        dense = SelfAdjointOperator(op.space, op.matrix, storage="dense")
        ev_b = eigensolve(op).eigenvalues
        ev_d = eigensolve(dense).eigenvalues
        assert np.max(np.abs(ev_b - ev_d)) < 1e-10 * ev_d[-1]

    def test_weighted_eigenvectors_orthonormal(self):
        grid = Grid1D.interval(0.0, 1.0, 30)
        space = uniform_space(grid)
        rng = np.random.default_rng(1)
        w = grid.spacing * np.exp(rng.uniform(-0.5, 0.5, space.n_nodes))
        from relspec.operators import WeightedSpace
        wspace = WeightedSpace(grid, space.positions, w)
        s = rng.standard_normal((28, 28))
        s = 0.5 * (s + s.T)
        sq = np.sqrt(w)
        op = SelfAdjointOperator(wspace, s / sq[:, None] * sq[None, :])
        spec, phi = eigendecompose(op)
        gram = phi.T * w[None, :] @ phi
        assert np.max(np.abs(gram - np.eye(28))) < 1e-12


class TestExplicitSpectrum:
    def test_unknown_law_rejected(self):
        with pytest.raises(DomainError):
            ExplicitSpectrum("fancy-law", {})

    def test_dirichlet_heat_sum_vs_truncated_direct(self):
        # oracle: direct summation of exp(-t (k pi / L)^2) far past the
        # truncation point used internally
        law = ExplicitSpectrum("dirichlet-interval", {"length": 2.0})
        k = np.arange(1, 20000)
        direct = float(np.sum(np.exp(-0.05 * (k * np.pi / 2.0) ** 2)))
        assert law.heat_sum(0.05) == pytest.approx(direct, abs=1e-14)

    def test_discrete_interval_matches_eigensolve(self):
        grid = Grid1D.interval(0.0, 1.0, 25)
        op = build_schrodinger(grid, ScalarField.constant(grid, 0.0), order=2)
        ev = eigensolve(op).eigenvalues
        law = ExplicitSpectrum("dirichlet-interval-discrete",
                               {"length": 1.0, "n": 25})
        assert np.allclose(law.eigenvalues_below(np.inf), ev, rtol=1e-12)

    def test_circle_multiplicities(self):
        law = ExplicitSpectrum("circle-laplace", {"length": 2.0 * np.pi})
        ev = law.eigenvalues_below(4.5)
        assert np.array_equal(ev, [0.0, 1.0, 1.0, 4.0, 4.0])
        assert law.kernel_dim == 1.0
        assert law.gap_mu == pytest.approx(1.0)

    def test_shifted_integers_two_sided(self):
        law = ExplicitSpectrum("shifted-integers", {"alpha": 0.25})
        ev = law.eigenvalues_below(2.0)
        assert np.array_equal(ev, [-1.75, -0.75, 0.25, 1.25])
        with pytest.raises(DomainError):
            law.heat_sum(1.0)       # two-sided first-order law diverges

    def test_symmetric_odd_heat_sum_vanishes(self):
        law = ExplicitSpectrum("shifted-integers", {"alpha": 0.5})
        assert law.odd_heat_sum(0.8) == pytest.approx(0.0, abs=1e-15)

    def test_odd_heat_sum_vs_direct(self):
        law = ExplicitSpectrum("shifted-integers", {"alpha": 0.25})
        k = np.arange(-3000, 3001) + 0.25
        direct = float(np.sum(k * np.exp(-0.5 * k ** 2)))
        assert law.odd_heat_sum(0.5) == pytest.approx(direct, abs=1e-14)

    def test_materialize(self):
        law = ExplicitSpectrum("dirichlet-interval", {"length": 1.0})
        spec = law.materialize(100.0)
        assert isinstance(spec, Spectrum)
        assert spec.eigenvalues[0] == pytest.approx(np.pi ** 2)

    def test_custom_sequence_kernel_and_gap(self):
        law = ExplicitSpectrum("custom-sequence", {"values": [0.0, 0.0, 0.3, 2.0]})
        assert law.kernel_dim == 2.0
        assert law.gap_mu == pytest.approx(0.3)
