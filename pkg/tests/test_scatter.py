import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import special

import cylwave as cw
from cylwave.errors import InteriorPoint, TangentialResonance

GOLDEN_SIGMA_KA5 = 2.4680820779547905


@pytest.fixture(scope="module")
def ka5_integrate(al_layer):
    return cw.solve_scattering(cw.ScatteringConfig(
        layers=(al_layer,), ka=5.0, scheme="lp4", steps=500))


@pytest.fixture(scope="module")
def ka5_recursion(al_layer):
    return cw.solve_scattering(cw.ScatteringConfig(
        layers=(al_layer,), ka=5.0, method="recursion"))


class TestScalarImpedance:
    def test_diagonal_passthrough(self):
        z = np.diag([4.2 + 0.3j, 1.0, 2.0])
        assert cw.scalar_impedance_z0(z) == pytest.approx(4.2 + 0.3j)

    def test_scalar_block(self):
        assert cw.scalar_impedance_z0(np.array([[7.0 + 1j]])) == 7.0 + 1j

    def test_hermitian_gives_real(self):
        rng = np.random.default_rng(73)
        x = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        h = 0.5 * (x + x.conj().T)
        assert abs(cw.scalar_impedance_z0(h).imag) < 1e-12

    def test_axial_decoupling_reduces_to_inplane(self, al_layer):
        # at kz=0 the 3x3 impedance is block diagonal, so the Schur
        # complement only sees the in-plane 2x2
        ctx = cw.WaveContext(omega=5.0, n=1, kz=0.0)
        z3 = cw.ti_conditional_impedance(1, al_layer, ctx, 1.0).z
        a = cw.scalar_impedance_z0(z3)
        b = cw.scalar_impedance_z0(z3[:2, :2])
        assert a == pytest.approx(b, rel=1e-12)

    def test_tangential_resonance(self):
        z = np.zeros((3, 3), dtype=complex)
        z[0, 0] = 1.0
        z[0, 1] = z[1, 0] = 1.0
        with pytest.raises(TangentialResonance):
            cw.scalar_impedance_z0(z)

    def test_accepts_wrapper(self, al_layer):
        ctx = cw.WaveContext(omega=5.0, n=0, kz=0.0)
        zc = cw.ti_conditional_impedance(1, al_layer, ctx, 1.0)
        assert cw.scalar_impedance_z0(zc) == pytest.approx(
            cw.scalar_impedance_z0(zc.z))


class TestCoefficient:
    def test_pressure_release_limit(self):
        for n, ka in [(0, 0.5), (2, 5.0)]:
            want = -(cw.cyl_f(cw.KIND_J, n, ka) / cw.cyl_f(cw.KIND_H1, n, ka))
            assert cw.scattering_coefficient(n, ka, 1.0, 0.0) \
                == pytest.approx(want, rel=1e-14)

    def test_rigid_limit(self):
        for n, ka in [(0, 1.0), (3, 5.0)]:
            want = -(cw.cyl_f_prime(cw.KIND_J, n, ka)
                     / cw.cyl_f_prime(cw.KIND_H1, n, ka))
            got = cw.scattering_coefficient(n, ka, 1.0, 1e12)
            assert got == pytest.approx(want, rel=1e-6)

    def test_unitarity_for_real_impedance(self):
        # |1 + 2B| = 1 whenever z0 is real (lossless surface)
        for z0 in (0.0, 1e-6, 3.7, -12.0, 1e8):
            for n, ka in [(0, 1.0), (4, 7.0)]:
                b = cw.scattering_coefficient(n, ka, 1.0, z0)
                assert abs(abs(1 + 2 * b) - 1) < 1e-12

    def test_rejects_bad_ka(self):
        with pytest.raises(ValueError):
            cw.scattering_coefficient(0, -1.0, 1.0, 0.0)


class TestFormFunction:
    def test_empty_sum(self):
        assert cw.form_function(0.3, (), 5.0) == 0.0

    def test_monopole_is_isotropic(self):
        b0 = 0.2 - 0.1j
        th = np.linspace(0, np.pi, 7)
        f = cw.form_function(th, (b0,), 4.0)
        assert_allclose(f, -1j * b0 / 2.0, atol=1e-15)

    def test_angular_weighting(self):
        b = (0.0, 0.5)
        f = cw.form_function(np.array([0.0, np.pi / 2, np.pi]), b, 1.0)
        assert f[1] == pytest.approx(0.0, abs=1e-16)
        assert f[0] == pytest.approx(-f[2])

    def test_scalar_input_scalar_output(self):
        out = cw.form_function(0.0, (0.1,), 2.0)
        assert isinstance(out, complex)


class TestPressureField:
    def test_plane_wave_jacobi_anger(self):
        # with no scatterer the sum must rebuild K k exp(i k r cos theta)
        ka = 2.5
        pts = [(r, th) for r in (1.0, 1.7, 3.0) for th in (0.0, 1.1, np.pi)]
        got = cw.pressure_field(pts, (), ka)
        want = np.array([ka * np.exp(1j * ka * r * np.cos(th))
                         for r, th in pts])
        assert np.max(np.abs(got - want)) < 1e-9 * np.max(np.abs(want))

    def test_interior_rejected(self):
        with pytest.raises(InteriorPoint):
            cw.pressure_field((0.8, 0.0), (), 2.0)

    def test_point_and_batch_shapes(self):
        single = cw.pressure_field((1.5, 0.3), (), 2.0)
        batch = cw.pressure_field([(1.5, 0.3), (2.0, 0.0)], (), 2.0)
        assert np.isscalar(single) or single.shape == ()
        assert batch.shape == (2,)
        assert batch[0] == pytest.approx(single)

    def test_far_field_matches_form_function(self, ka5_recursion):
        b = ka5_recursion.b
        ka = ka5_recursion.ka

        def check(kr, thetas, tol):
            r = kr / ka
            pts = [(r, th) for th in thetas]
            total = cw.pressure_field(pts, b, ka)
            incident = cw.pressure_field(pts, (), ka)
            scat = np.abs(total - incident)
            f = np.abs(cw.form_function(np.array(thetas), b, ka))
            want = ka * math.sqrt(2.0 / (math.pi * kr)) * math.sqrt(ka) * f
            assert np.max(np.abs(scat - want) / want) < tol

        check(400.0, [0.0], 0.01)
        check(2000.0, [0.0, np.pi / 3, np.pi], 0.01)


class TestSolve:
    def test_golden_cross_section(self, ka5_integrate):
        assert ka5_integrate.ka == 5.0
        assert ka5_integrate.sigma_tot == pytest.approx(GOLDEN_SIGMA_KA5,
                                                        abs=1e-9)

    def test_scheme_insensitivity(self, al_layer, ka5_integrate):
        alt = cw.solve_scattering(cw.ScatteringConfig(
            layers=(al_layer,), ka=5.0, scheme="exp2a", steps=500))
        assert abs(alt.sigma_tot - ka5_integrate.sigma_tot) < 1e-4

    def test_routes_agree(self, ka5_integrate, ka5_recursion):
        assert abs(ka5_recursion.sigma_tot - ka5_integrate.sigma_tot) < 1e-6
        n = min(len(ka5_recursion.b), len(ka5_integrate.b))
        db = np.abs(np.array(ka5_recursion.b[:n])
                    - np.array(ka5_integrate.b[:n]))
        assert db.max() < 1e-6

    def test_unitarity_of_solution(self, ka5_recursion):
        for bn in ka5_recursion.b:
            assert abs(abs(1 + 2 * bn) - 1) < 1e-10

    @pytest.mark.parametrize("ka", [1.0, 5.0])
    def test_optical_theorem(self, al_layer, ka):
        res = cw.solve_scattering(cw.ScatteringConfig(
            layers=(al_layer,), ka=ka, method="recursion"))
        # sigma from Im f(0) vs the partial-wave power sum
        s2 = 4 * math.pi / (ka * math.sqrt(ka)) * sum(
            (1.0 if n == 0 else 2.0) * abs(bn) ** 2
            for n, bn in enumerate(res.b))
        assert res.sigma_tot == pytest.approx(s2, rel=1e-8)

    def test_truncation_stability(self, al_layer, ka5_recursion):
        longer = cw.solve_scattering(cw.ScatteringConfig(
            layers=(al_layer,), ka=5.0, method="recursion",
            n_max=2 * math.ceil(5.0) + 17))
        assert abs(longer.sigma_tot - ka5_recursion.sigma_tot) < 1e-8

    def test_f_samples_layout(self, ka5_recursion):
        angles = [s[0] for s in ka5_recursion.f_samples]
        assert angles == [0.0, math.pi / 4, math.pi / 2, 3 * math.pi / 4,
                          math.pi]
        f0 = cw.form_function(0.0, ka5_recursion.b, 5.0)
        assert ka5_recursion.f_samples[0][1] == pytest.approx(f0)

    def test_pressure_release_core(self, al_layer):
        res = cw.solve_scattering(cw.ScatteringConfig(
            layers=(al_layer,), ka=2.0, method="recursion", inner_impedance=0.0))
        assert res.sigma_tot > 0
        for bn in res.b:
            assert abs(abs(1 + 2 * bn) - 1) < 1e-9

    @pytest.mark.filterwarnings("ignore::cylwave.errors.AccuracyLoss")
    def test_quasi_fluid_layer_matches_fluid_column(self):
        """A vanishing-shear annulus must scatter like a fluid shell.

        Pressure-release inner surface at r=b; the closed-form column
        impedance follows from a J/Y pressure ansatz in the shell.
        """
        lam, rho, b_in = 2.25, 1.0, 0.5
        omega = 3.0
        layer = cw.LayerTI.isotropic(b_in, 1.0, rho, lam, 1e-8)
        res = cw.solve_scattering(cw.ScatteringConfig(
            layers=(layer,), ka=omega, method="recursion",
            inner_impedance=0.0, n_max=6))

        kc = omega / math.sqrt(lam / rho)
        for n in range(3):
            a_c = cw.cyl_f(cw.KIND_Y, n, kc * b_in)
            c_c = -cw.cyl_f(cw.KIND_J, n, kc * b_in)
            num = a_c * cw.cyl_f(cw.KIND_J, n, kc) \
                + c_c * cw.cyl_f(cw.KIND_Y, n, kc)
            den = a_c * cw.cyl_f_prime(cw.KIND_J, n, kc) \
                + c_c * cw.cyl_f_prime(cw.KIND_Y, n, kc)
            z0 = lam * kc * num / den
            want = cw.scattering_coefficient(n, omega, 1.0, z0)
            assert abs(res.b[n] - want) < 1e-4 * max(abs(want), 1e-3), n

    def test_inner_impedance_shapes(self, al_layer):
        two = cw.solve_scattering(cw.ScatteringConfig(
            layers=(al_layer,), ka=1.0, method="recursion",
            inner_impedance=np.zeros((2, 2)), n_max=3))
        assert len(two.b) >= 1
        with pytest.raises(ValueError):
            cw.solve_scattering(cw.ScatteringConfig(
                layers=(al_layer,), ka=1.0, method="recursion",
                inner_impedance=np.zeros((4, 4)), n_max=3))

    def test_config_validation(self, al_layer):
        with pytest.raises(ValueError):
            cw.ScatteringConfig(layers=(), ka=1.0)
        with pytest.raises(ValueError):
            cw.ScatteringConfig(layers=(al_layer,), ka=0.0)
        with pytest.raises(ValueError):
            cw.ScatteringConfig(layers=(al_layer,), ka=1.0, steps=0)
        with pytest.raises(ValueError):
            cw.ScatteringConfig(layers=(al_layer,), ka=1.0, method="magic")

    def test_fluid_halfspace_validation(self):
        with pytest.raises(ValueError):
            cw.FluidHalfSpace(k=0.0)
        assert cw.FluidHalfSpace(k=2.0).K == 1.0
