"""Radial ODE solvers against independent Bessel-series references."""

import numpy as np
import pytest

from tumorspec.errors import ValidationError
from tumorspec.models import identity_model
from tumorspec.radial import (appendix_series, boundary_ratio,
                              ode_residual_on_midpoints, solve_U, solve_u_n,
                              steady_radius)

from oracles import bessel_i, bessel_i_prime, identity_ratio, identity_steady_A


class TestCenterShooting:
    def test_identity_center_value_is_inverse_bessel(self, id_model):
        prof = solve_U(1.0, id_model)
        assert prof.value_at_0 == pytest.approx(1.0 / bessel_i(0, 1.0), abs=1e-10)

    def test_identity_boundary_derivative(self, id_model):
        prof = solve_U(1.0, id_model)
        expected = bessel_i(1, 1.0) / bessel_i(0, 1.0)
        assert prof.deriv_at_1 == pytest.approx(expected, abs=1e-10)

    def test_identity_profile_matches_closed_form(self, id_model):
        lam = 2.25
        prof = solve_U(lam, id_model)
        s = np.sqrt(lam)
        for r in (0.2, 0.5, 0.9):
            expected = bessel_i(0, s * r) / bessel_i(0, s)
            assert prof.at(r) == pytest.approx(expected, abs=1e-10)

    def test_zero_lambda_gives_constant_one(self, id_model):
        prof = solve_U(0.0, id_model)
        assert np.allclose(prof.values, 1.0)
        assert prof.deriv_at_1 == 0.0

    def test_maximum_principle(self, id_model, poly_model, rng):
        for model in (id_model, poly_model):
            for _ in range(10):
                lam = float(rng.uniform(0.05, 25.0))
                prof = solve_U(lam, model)
                assert prof.values[0] > 0.0
                assert np.all(prof.values <= 1.0 + 1e-12)
                assert np.all(np.diff(prof.values) >= -1e-12)

    def test_center_value_monotone_in_lambda(self, id_model):
        centers = [solve_U(lam, id_model).value_at_0 for lam in (0.5, 1.0, 2.0, 4.0)]
        assert all(a > b for a, b in zip(centers, centers[1:]))

    def test_ode_residual_small(self, id_model):
        prof = solve_U(1.5, id_model)
        res = ode_residual_on_midpoints(prof, 1, 1.5, lambda r, u: 1.5 * u)
        assert res < 1e-7


class TestModeFamilies:
    def test_u0_value_at_one(self, id_model, unit_steady):
        prof = solve_u_n(0, 1.0, unit_steady.v0, id_model)
        assert prof.value_at_1 == pytest.approx(bessel_i(0, 1.0), abs=1e-9)

    def test_u1_value_at_one(self, id_model, unit_steady):
        prof = solve_u_n(1, 1.0, unit_steady.v0, id_model)
        assert prof.value_at_1 == pytest.approx(2.0 * bessel_i(1, 1.0), abs=1e-9)

    def test_boundary_ratios_match_bessel(self, id_model, unit_steady):
        for n in range(6):
            got = boundary_ratio(n, 1.0, unit_steady.v0, id_model)
            assert got == pytest.approx(identity_ratio(n), abs=1e-9)

    def test_ratio_decays_monotonically(self, id_model, unit_steady):
        ratios = [boundary_ratio(n, 1.0, unit_steady.v0, id_model)
                  for n in range(14)]
        assert all(a > b for a, b in zip(ratios, ratios[1:]))
        assert ratios[12] < 0.05

    def test_three_decimal_constants(self, id_model, unit_steady):
        r0 = boundary_ratio(0, 1.0, unit_steady.v0, id_model)
        r1 = boundary_ratio(1, 1.0, unit_steady.v0, id_model)
        assert round(r0, 3) == 0.446
        assert round(r1, 3) == 0.240


class TestSeries:
    def test_series_matches_solver(self, id_model, unit_steady):
        for n, name in ((0, "u0"), (1, "u1")):
            prof = solve_u_n(n, 1.0, unit_steady.v0, id_model)
            for r in np.arange(0.1, 1.05, 0.1):
                r = float(r)
                assert abs(appendix_series(name, r, 40) - prof.at(r)) < 1e-8

    def test_u0_quadratic_coefficient(self):
        # second series coefficient is 1/4 of the leading one
        x = 1e-4
        assert (appendix_series("u0", x, 40) - 1.0) / x**2 == pytest.approx(
            0.25, rel=1e-6)

    def test_series_is_bessel(self):
        assert appendix_series("u0", 1.0, 60) == pytest.approx(
            bessel_i(0, 1.0), abs=1e-12)
        assert appendix_series("u1", 1.0, 60) == pytest.approx(
            2.0 * bessel_i(1, 1.0), abs=1e-12)


class TestSteadyRadius:
    def test_unit_radius_at_bessel_ratio_A(self, id_model):
        A = identity_steady_A()
        st = steady_radius(A, id_model)
        assert st.R_A == pytest.approx(1.0, abs=1e-6)

    def test_steady_condition_holds(self, id_model):
        st = steady_radius(0.5, id_model)
        assert st.v0.deriv_at_1 == pytest.approx(0.5 * st.R_A**2 / 2.0, abs=1e-9)

    def test_alpha_echo(self, id_model):
        st = steady_radius(0.5, id_model)
        assert st.alpha_A == pytest.approx(st.R_A**2 * (1.0 - 0.25), abs=1e-12)

    def test_radius_grows_as_A_shrinks(self, id_model):
        radii = [steady_radius(A, id_model).R_A for A in (0.8, 0.6, 0.4, 0.3)]
        assert all(a < b for a, b in zip(radii, radii[1:]))

    def test_identity_condition_is_bessel_ratio(self, id_model):
        # the steady condition reduces to I1(R)/I0(R) = A R / 2
        st = steady_radius(0.6, id_model)
        R = st.R_A
        assert bessel_i(1, R, 80) / bessel_i(0, R, 80) == pytest.approx(
            0.6 * R / 2.0, abs=1e-9)

    def test_invalid_A_rejected(self, id_model):
        with pytest.raises(ValidationError):
            steady_radius(1.0, id_model)
        with pytest.raises(ValidationError):
            steady_radius(-0.2, id_model)

    def test_polynomial_model_steady_condition(self, poly_model):
        st = steady_radius(0.7, poly_model)
        assert st.v0.deriv_at_1 == pytest.approx(0.7 * st.R_A**2 / 2.0, abs=1e-9)


class TestBackend:
    def test_numpy_fallback_matches(self, id_model):
        import subprocess
        import sys
        code = (
            "from tumorspec.models import identity_model\n"
            "from tumorspec.radial import solve_U\n"
            "p = solve_U(1.0, identity_model())\n"
            "print(repr(p.value_at_0), repr(p.deriv_at_1))\n"
        )
        import os
        env = dict(os.environ, TUMORSPEC_BACKEND="numpy")
        out = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True, check=True)
        c0, d1 = (float(tok) for tok in out.stdout.split())
        prof = solve_U(1.0, id_model)
        assert c0 == pytest.approx(prof.value_at_0, abs=1e-12)
        assert d1 == pytest.approx(prof.deriv_at_1, abs=1e-12)
