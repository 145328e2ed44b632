"""Overlap integrals: quadrature vs boundary reduction vs closed forms."""

import math

import numpy as np
import pytest

from continuum_overlap.numerics import QuadratureConfig, integrate_complex
from continuum_overlap.overlap import (
    DegenerateEnergies,
    airy_closure_check,
    airy_closure_derivative_check,
    airy_kernel,
    boundary_current,
    delta_grid,
    direct_overlap,
    extract_delta_from_direct,
    finite_interval_identity_residual,
    nonorthogonality_kernel,
    regularization_compare,
    regularized_free_halfline,
    regularized_free_interval,
    regularized_overlap,
    overlap_decomposition,
    twisted_boundary_overlap,
)
from continuum_overlap.potentials import PotentialSpec, coefficients, wavefunction

FREE = PotentialSpec.free()
DELTA = PotentialSpec.delta(g=3.0)
SW = PotentialSpec.square_well(V0=2.0, a=10.0)


class TestDirectOverlap:
    def test_free_equal_momenta(self):
        val = direct_overlap(FREE, 1.0, 1.0, -5.0, 5.0)
        assert val == pytest.approx(10.0 + 0j, abs=1e-10)

    def test_free_dirichlet_closed_form(self):
        val = direct_overlap(FREE, 2.0, 1.0, -20.0, 20.0)
        assert val == pytest.approx(2.0 * math.sin(20.0), abs=1e-9)
        assert val.real == pytest.approx(1.8259, abs=1e-4)

    def test_square_well_vs_boundary_route(self):
        k1, k2 = 2.6, 2.1
        val = direct_overlap(SW, k1, k2, -17.0, 17.0)
        j = boundary_current(SW, k1, k2, -17.0, 17.0).value
        ref = -j / (2.0 * SW.m * (k2 ** 2 - k1 ** 2) / 2.0)
        assert val == pytest.approx(ref, abs=1e-9)


class TestBoundaryJ:
    def test_free_closed_form(self):
        k1, k2, lam = 2.0, 1.0, 7.0
        j = boundary_current(FREE, k1, k2, -lam, lam).value
        ref = -1j * (k1 + k2) * (np.exp(1j * (k1 - k2) * lam)
                                 - np.exp(-1j * (k1 - k2) * lam))
        assert j == pytest.approx(ref, abs=1e-12)

    def test_vanishes_at_equal_momenta(self):
        j = boundary_current(SW, 2.3, 2.3, -12.0, 12.0).value
        assert abs(j) < 1e-12

    def test_antisymmetry_under_swap_conjugation(self):
        rng = np.random.default_rng(5)
        for spec in (FREE, DELTA, SW):
            for _ in range(5):
                k1, k2 = rng.uniform(0.3, 4.0, size=2)
                x1 = -float(rng.uniform(6.0, 20.0))
                x2 = float(rng.uniform(6.0, 20.0))
                j12 = boundary_current(spec, k1, k2, x1, x2).value
                j21 = boundary_current(spec, k2, k1, x1, x2).value
                assert abs(j12 + np.conj(j21)) < 1e-12 * max(1.0, abs(j12))

    def test_square_well_three_term_expression(self):
        # outside the well the current difference reduces to T/R combinations
        k1, k2 = 2.7, 1.9
        x1, x2 = -14.0, 9.0
        c1, c2 = coefficients(SW, k1), coefficients(SW, k2)
        R1, T1, R2c, T2c = c1.R, c1.T, np.conj(c2.R), np.conj(c2.T)
        ref = (-1j * (k1 + k2) * (T2c * T1 * np.exp(1j * (k1 - k2) * x2)
                                  - np.exp(1j * (k1 - k2) * x1)
                                  + R2c * R1 * np.exp(-1j * (k1 - k2) * x1))
               - 1j * (k1 - k2) * (R1 * np.exp(-1j * (k1 + k2) * x1)
                                   - R2c * np.exp(1j * (k1 + k2) * x1)))
        assert boundary_current(SW, k1, k2, x1, x2).value == pytest.approx(ref, abs=1e-12)


class TestIdentityResidual:
    @pytest.mark.parametrize("spec,k1,k2,x1,x2,tol", [
        (FREE, 2.0, 1.0, -10.0, 10.0, 1e-8),
        (SW, 1.3, 0.7, -30.0, 30.0, 1e-7),
        (DELTA, 2.0, 1.0, -20.0, 20.0, 1e-7),
    ])
    def test_examples(self, spec, k1, k2, x1, x2, tol):
        assert finite_interval_identity_residual(spec, k1, k2, x1, x2) < tol

    def test_three_way_agreement_random(self):
        rng = np.random.default_rng(7)
        worst = 0.0
        for _ in range(30):
            spec = (FREE, DELTA, SW)[rng.integers(3)]
            k1, k2 = rng.uniform(0.3, 4.0, size=2)
            if abs(k1 ** 2 - k2 ** 2) < 0.1:
                continue
            lo, hi = spec.region_edges()
            x1 = lo - float(rng.uniform(5.0, 25.0))
            x2 = hi + float(rng.uniform(5.0, 25.0))
            worst = max(worst, finite_interval_identity_residual(spec, k1, k2, x1, x2))
        assert worst < 1e-7

    def test_degenerate_energies_raise(self):
        with pytest.raises(DegenerateEnergies):
            finite_interval_identity_residual(SW, 2.0, 2.0, -10.0, 10.0)


class TestOverlapDecomposition:
    def test_free_exactly_zero(self):
        dec = overlap_decomposition(FREE, 2.0, 1.0)
        assert dec.delta_term == 0j
        assert dec.diag_weight == pytest.approx(2 * math.pi)
        assert dec.mirror_weight == 0j

    def test_delta_potential_vanishes(self):
        for k1, k2 in ((2.0, 1.0), (0.4, 3.3), (1.01, 1.02)):
            dec = overlap_decomposition(DELTA, k1, k2)
            assert abs(dec.delta_term) < 1e-12

    def test_vanishing_on_grid_50x50(self):
        ks = np.linspace(0.2, 5.0, 50)
        for spec in (FREE, DELTA):
            kern = nonorthogonality_kernel(spec, ks)
            assert np.max(np.abs(kern)) < 1e-12

    @pytest.mark.parametrize("n1,n2", [(1, 2), (2, 3), (1, 4)])
    def test_special_momenta_closed_form(self, n1, n2):
        k1 = math.sqrt((n1 * math.pi / SW.a) ** 2 + 2 * SW.V0)
        k2 = math.sqrt((n2 * math.pi / SW.a) ** 2 + 2 * SW.V0)
        dec = overlap_decomposition(SW, k1, k2)
        ref = 1j * ((-1) ** (n2 - n1) * np.exp(1j * (k1 - k2) * SW.a) - 1) / (k1 - k2)
        assert abs(dec.delta_term - ref) < 1e-10

    def test_hermitian_under_swap(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            k1, k2 = rng.uniform(0.3, 5.0, size=2)
            d12 = overlap_decomposition(SW, k1, k2).delta_term
            d21 = overlap_decomposition(SW, k2, k1).delta_term
            assert abs(d12 - np.conj(d21)) < 1e-12 * max(1.0, abs(d12))

    def test_mirror_weight(self):
        dec = overlap_decomposition(SW, 2.6, 2.1)
        c1, c2 = coefficients(SW, 2.6), coefficients(SW, 2.1)
        assert dec.mirror_weight == pytest.approx(math.pi * (c1.R + np.conj(c2.R)))

    def test_diagonal_stencil_continuity(self):
        # the stencil value continues the raw quotient smoothly across the
        # |k1-k2| = 1e-4 switch and is real on the diagonal
        k = 2.3
        inside = overlap_decomposition(SW, k, k + 5e-5).delta_term
        outside = overlap_decomposition(SW, k, k + 2e-4).delta_term
        assert abs(inside - outside) < 5e-2 * max(1.0, abs(outside))
        diag = overlap_decomposition(SW, k, k).delta_term
        assert abs(diag.imag) < 1e-8 * max(1.0, abs(diag.real))

    def test_kernel_matches_decomposition(self):
        ks = np.array([0.7, 1.9, 2.6, 4.1])
        kern = nonorthogonality_kernel(SW, ks)
        for i, ki in enumerate(ks):
            for j, kj in enumerate(ks):
                ref = overlap_decomposition(SW, float(kj), float(ki)).delta_term
                assert kern[i, j] == pytest.approx(ref, abs=1e-12)


class TestDeltaGrid:
    def test_fig2_peak_location(self):
        grid = delta_grid(SW, (0.05 / SW.a, 6.3 / SW.a), (0.05 / SW.a, 6.3 / SW.a),
                          101, 101, axis="khat")
        field = np.abs(grid.delta) ** 2
        i, j = np.unravel_index(np.argmax(field), field.shape)
        assert SW.a * grid.k1[i] == pytest.approx(math.pi, abs=0.2)
        assert SW.a * grid.k2[j] == pytest.approx(math.pi, abs=0.2)

    def test_fig1_ridge_peak_near_fixed_momentum(self):
        kh2 = 0.314
        grid = delta_grid(SW, (0.02, 1.2), (kh2, kh2 * (1 + 1e-12)), 601, 2,
                          axis="khat")
        im = grid.delta[:, 0].imag
        peak = grid.k1[np.argmax(np.abs(im))]
        assert peak == pytest.approx(kh2, abs=0.08)

    def test_threads_consistent(self):
        g1 = delta_grid(SW, (0.1, 0.8), (0.1, 0.8), 40, 40, axis="khat", threads=1)
        g4 = delta_grid(SW, (0.1, 0.8), (0.1, 0.8), 40, 40, axis="khat", threads=4)
        assert np.array_equal(g1.delta, g4.delta)

    def test_k_axis_convention(self):
        g = delta_grid(SW, (2.2, 3.0), (2.2, 3.0), 9, 9, axis="k")
        ref = overlap_decomposition(SW, float(g.k1[0]), float(g.k2[-1])).delta_term
        assert g.delta[0, -1] == pytest.approx(ref, abs=1e-12)


class TestDeltaExtraction:
    def test_converges_to_closed_form(self):
        # windowed phase-locked mean of the quadrature overlap recovers the
        # conjugate-order pointwise term with error shrinking in the window
        k1, k2 = 3.17, 1.13
        target = np.conj(overlap_decomposition(SW, k1, k2).delta_term)
        errs = [abs(extract_delta_from_direct(SW, k1, k2, lc) - target)
                for lc in (50.0, 100.0, 200.0)]
        floor = 1e-6 * max(1.0, abs(target))
        assert errs[2] < 1e-3 * max(1.0, abs(target))
        assert all(e2 < max(e1, floor) for e1, e2 in zip(errs, errs[1:]))


class TestRegularized:
    def test_free_interval_closed_form_vs_quadrature(self):
        rng = np.random.default_rng(9)
        for _ in range(5):
            k1, k2 = rng.uniform(0.3, 4.0, size=2)
            x1 = float(rng.uniform(-9.0, -1.0))
            x2 = float(rng.uniform(1.0, 9.0))
            eps = float(rng.uniform(1e-4, 1e-2))

            def f(x):
                return np.exp(1j * (k1 - k2) * x - 2 * eps * x)

            ref = integrate_complex(f, x1, x2, osc_scale=abs(k1 - k2))
            assert abs(regularized_free_interval(k1, k2, x1, x2, eps) - ref) < 1e-10

    def test_free_halfline_remainder(self):
        k1, k2, eps = 2.0, 1.4, 1e-3
        weight, rem = regularized_free_halfline(k1, k2, eps)
        assert weight == pytest.approx(math.pi)
        dk = k1 - k2
        assert rem == pytest.approx(1j * dk / (dk ** 2 + 4 * eps ** 2), abs=1e-14)

    def test_delta_potential_pv_cancellation(self):
        for eps in (1e-3, 1e-5):
            ro = regularized_overlap(DELTA, 2.0, 1.0, eps)
            assert abs(ro.pv_term) < 40.0 * eps ** 2 / 0.5   # O(eps^2) cancellation

    def test_square_well_remainder_vanishes_with_eps(self):
        vals = [abs(regularized_overlap(SW, 2.6, 2.1, eps).pv_term)
                for eps in (1e-2, 1e-3, 1e-4)]
        assert vals[0] > vals[1] > vals[2]
        assert vals[2] < 1e-3

    def test_square_well_total_vs_damped_quadrature(self):
        # independent check: brute-force damped quadrature reproduces the
        # closed-form channel assembly exactly (up to tail truncation)
        k1, k2, eps = 2.6, 2.1, 1e-2
        big = 9.0 / eps
        cfg = QuadratureConfig(abs_tol=1e-11, rel_tol=1e-11, max_subdivisions=20000)

        def f(x):
            return (np.conj(wavefunction(SW, k2, x)) * wavefunction(SW, k1, x)
                    * np.exp(-2 * eps * np.abs(x)))

        brute = integrate_complex(f, -big, big, cfg, osc_scale=k1 + k2)
        ro = regularized_overlap(SW, k1, k2, eps)
        assert abs(brute - ro.total) < 1e-5

    def test_report_invariants(self):
        rep = regularization_compare(SW, 2.6, 2.1, (25.0, 50.0),
                                     (1e-2, 5e-3), QuadratureConfig())
        ratio = rep.cutoff_norm2[1] / rep.cutoff_norm2[0]
        assert ratio == pytest.approx(2.0, rel=0.01)
        ratio_eps = rep.regularized_norm2[1] / rep.regularized_norm2[0]
        assert ratio_eps == pytest.approx(2.0, rel=0.01)
        assert rep.cutoff_norm2_constant == pytest.approx(4 * math.pi, rel=1e-3)
        assert rep.regularized_norm2_constant == pytest.approx(math.pi / 2, rel=1e-3)
        assert rep.boundary_residuals[0] > rep.boundary_residuals[1] > 0
        assert rep.cutoff_weight == pytest.approx(rep.regularized_weight, rel=0.02)


class TestAiryClosure:
    def test_errors_decrease_and_small(self):
        errs = [airy_closure_check(t) for t in (20.0, 40.0, 80.0)]
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] < 1e-2

    def test_kernel_symmetric(self):
        a = airy_kernel(0.3, np.array([0.9]), 30.0)[0]
        b = airy_kernel(0.9, np.array([0.3]), 30.0)[0]
        assert a == pytest.approx(b, abs=1e-8)

    def test_derivative_relation(self):
        # smeared derivative kernel acts as -g'(x) on the test function
        err = airy_closure_derivative_check(40.0, x=0.4)
        assert err < 1e-6


class TestTwistedBoundary:
    def test_periodic_exact_zero(self):
        assert twisted_boundary_overlap(1, 0.7, 4, 0.7, 25.0) == 0

    def test_identical_quantum_numbers(self):
        assert twisted_boundary_overlap(3, 0.2, 3, 0.2, 25.0) == pytest.approx(50.0)

    def test_pi_twist(self):
        lam = 13.0
        val = twisted_boundary_overlap(2, 0.0, 2, math.pi, lam)
        assert val == pytest.approx(4.0 * lam / math.pi, abs=1e-12)
