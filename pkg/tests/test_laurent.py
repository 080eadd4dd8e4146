import cmath

import pytest

from qtaylor.errors import PoleProximity, QuadratureNonConvergence
from qtaylor.kernel import (E_contour_coefficient, H_at_b, K_at_cde,
                            KernelParams, calP1, calP2, calP_quadruple,
                            cancellation_identity_residual, contour_radius,
                            fk_coefficient, gk_coefficient,
                            laurent_coefficient, laurent_coefficient_detail)
from qtaylor.qcore import qpoch_infinite
from qtaylor.sampling import sample_complex


@pytest.fixture
def kp(ctx4):
    return KernelParams(0.55 + 0.2j, 0.62 - 0.25j, 0.48 + 0.33j, 0.71 - 0.12j,
                        ctx4)


class TestContourCoefficient:
    def test_monomial(self, ctx):
        assert laurent_coefficient(lambda z: z ** 5, -5, 1.0, ctx) == \
            pytest.approx(1.0, abs=1e-13)
        for n in (1, 2, 6):
            assert abs(laurent_coefficient(lambda z: z ** 5, n, 1.0, ctx)) < 1e-13

    def test_radius_validated_against_poles(self, ctx):
        with pytest.raises(PoleProximity):
            laurent_coefficient(lambda z: z, 0, 1.0, ctx, pole_moduli=[1.0])

    def test_nonconvergence_detected(self, ctx):
        # a branch cut on the contour defeats trapezoid convergence
        with pytest.raises(QuadratureNonConvergence):
            laurent_coefficient(cmath.sqrt, 1, 1.0, ctx)

    def test_radius_selection(self, ctx):
        r = contour_radius(0.5, 2.0, ctx)
        assert r == pytest.approx(1.0)
        with pytest.raises(PoleProximity):
            contour_radius(1.0, 1.0 + 1e-9, ctx)


class TestStructuredCoefficients:
    def test_quadruple_sum_against_contour(self, ctx4, rng):
        for _ in range(4):
            al, be, ga, de = (sample_complex(rng, 0.3, 0.9) for _ in range(4))
            n = rng.randrange(0, 4)
            structured = calP_quadruple(al, be, ga, de, n, ctx4)

            def g(z):
                return (qpoch_infinite(al * z, ctx4).value
                        * qpoch_infinite(be / z, ctx4).value
                        * qpoch_infinite(ga * z, ctx4).value
                        * qpoch_infinite(de / z, ctx4).value)

            contour = laurent_coefficient(g, n, 1.0, ctx4)
            assert abs(structured - contour) <= 1e-8 * max(abs(structured),
                                                           abs(contour))

    def test_residual_coefficients_vanish(self, kp):
        for n in range(1, 7):
            coeff, scale, _ = E_contour_coefficient(kp, n)
            assert abs(coeff) < 1e-6 * scale

    def test_cancellation_identity(self, kp):
        for n in (1, 2):
            assert cancellation_identity_residual(kp, n, 50) < 1e-6

    def test_structured_matches_contour(self, kp, ctx4):
        n = 1
        structured = (calP_quadruple(kp.c / kp.d, kp.c / kp.d,
                                     kp.c / kp.e, kp.c / kp.e, n, ctx4)
                      - H_at_b(kp) * sum(fk_coefficient(kp, k) * calP1(kp, n, k)
                                         for k in range(50))
                      - K_at_cde(kp) * sum(gk_coefficient(kp, k) * calP2(kp, n, k)
                                           for k in range(50)))
        coeff, scale, _ = E_contour_coefficient(kp, n)
        assert abs(structured - coeff) < 1e-6 * scale

    def test_individual_terms_not_small(self, kp):
        # the cancellation is between the families, not termwise
        _, scale, _ = E_contour_coefficient(kp, 1)
        assert abs(calP1(kp, 1, 0)) > 1e-3 * scale

    def test_quadrature_detail_reports_scale(self, kp):
        coeff, scale, nodes = laurent_coefficient_detail(
            lambda z: z ** 3, -3, 1.0, kp.ctx)
        assert coeff == pytest.approx(1.0, abs=1e-12)
        assert scale == pytest.approx(1.0)
        assert nodes >= 128
