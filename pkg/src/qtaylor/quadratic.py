"""The two quadratic one-family expansions and the folding identities.

Both products mix base q^2 (numerators) with base q (denominators); the
base-q^2 factors reuse the core evaluations under a squared context.  The
expansions are genuinely one-family: their exact Taylor remainders are
convergent tails, so the decay checks here need no complementary term.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConvergenceRegionViolation, DomainError, PoleProximity
from .qcore import QContext, factor_clearance, qpoch_finite, qpoch_infinite
from .taylor import BasisPair, taylor_coefficient
from .wpoperator import SymmetricFunction


@dataclass(frozen=True)
class QuadraticParams:
    """Parameters of the two quadratic families.

    (a, b) with |b/a| < 1 drives the Watson-type product; (alpha, d) with
    |alpha| < 1 drives the companion.  Pole circles: {b q^m, q^m / b} and
    {-alpha q^{m+1/2}, -q^{m-1/2}/alpha}.
    """

    a: complex
    b: complex
    alpha: complex
    d: complex

    def __post_init__(self) -> None:
        for name in ("a", "b", "alpha", "d"):
            val = complex(getattr(self, name))
            object.__setattr__(self, name, val)
            if val == 0:
                raise DomainError(f"quadratic parameter {name} must be nonzero")
        if abs(self.b / self.a) >= 1.0:
            raise ConvergenceRegionViolation("first family requires |b/a| < 1")
        if abs(self.alpha) >= 1.0:
            raise ConvergenceRegionViolation("companion family requires |alpha| < 1")


def _pinf(u: complex, ctx: QContext) -> complex:
    return qpoch_infinite(u, ctx).value


def quadratic_product(z: complex, qp: QuadraticParams, ctx: QContext) -> complex:
    """The Watson-type product: base-q^2 numerator over (bz, b/z;q)_inf."""
    a, b = qp.a, qp.b
    q = ctx.q
    ctx2 = ctx.squared()
    if (factor_clearance(b * z, ctx) <= ctx.pole_margin
            or factor_clearance(b / z, ctx) <= ctx.pole_margin):
        raise PoleProximity("z within margin of the (b) pole set")
    num = (_pinf(a * z * q, ctx2) * _pinf(a * q / z, ctx2)
           * _pinf(b * b * z / a, ctx2) * _pinf(b * b / (a * z), ctx2))
    return num / (_pinf(b * z, ctx) * _pinf(b / z, ctx))


def quadratic_constant(qp: QuadraticParams, ctx: QContext) -> complex:
    """C_{a,b}: the value Q(a), forced by the k = 0 coefficient."""
    a, b = qp.a, qp.b
    q = ctx.q
    ctx2 = ctx.squared()
    num = (_pinf(q, ctx2) * _pinf(a * a * q, ctx2) * _pinf(b * b, ctx2)
           * _pinf(b * b / (a * a), ctx2))
    return num / (_pinf(a * b, ctx) * _pinf(b / a, ctx))


def _h_ratio(qp: QuadraticParams, k: int, ctx: QContext) -> complex:
    """h_{k+1} / h_k for the Watson-type coefficients.

    h_k is the very-well-poised summand with leading parameter ab/q,
    parameter list (b q^{-1/2}, -b q^{-1/2}, aq/b, az, a/z) and argument
    -b/a; the z-dependent pair is carried by the basis, so the scalar
    coefficient keeps the factor (-b/a)^k.
    """
    a, b = qp.a, qp.b
    q, rq = ctx.q, ctx.sqrt_q
    qk = q ** k
    lead = (1.0 - a * b * q ** (2 * k + 1)) / (1.0 - a * b * q ** (2 * k - 1))
    num = ((1.0 - a * b * qk / q) * (1.0 - b * qk / rq)
           * (1.0 + b * qk / rq) * (1.0 - (a * q / b) * qk))
    den = ((1.0 - q * qk) * (1.0 - a * rq * qk)
           * (1.0 + a * rq * qk) * (1.0 - b * b * qk / q))
    return lead * num / den * (-b / a)


def quadratic_coefficient(qp: QuadraticParams, k: int, ctx: QContext) -> complex:
    """h_k in closed form (h_0 = 1)."""
    h = 1.0 + 0.0j
    for j in range(k):
        h *= _h_ratio(qp, j, ctx)
    return h


def quadratic_residual(z: complex, qp: QuadraticParams, n_trunc: int,
                       ctx: QContext) -> float:
    """|Q(z) - C_{a,b} sum_{k<=n} h_k Phi_k(z; a, b)| / |Q(z)|."""
    a, b = qp.a, qp.b
    lhs = quadratic_product(z, qp, ctx)
    total = 0.0 + 0.0j
    term = 1.0 + 0.0j
    x = 1.0 + 0.0j
    for k in range(n_trunc + 1):
        total += term
        if k == n_trunc:
            break
        den = (1.0 - b * z * x) * (1.0 - b * x / z)
        if abs(den) <= ctx.pole_margin ** 2:
            raise PoleProximity("basis denominator within margin")
        term *= _h_ratio(qp, k, ctx) * (1.0 - a * z * x) * (1.0 - a * x / z) / den
        x *= ctx.q
    rhs = quadratic_constant(qp, ctx) * total
    return abs(lhs - rhs) / abs(lhs)


def quadratic_function(qp: QuadraticParams, ctx: QContext) -> SymmetricFunction:
    return SymmetricFunction(lambda z: quadratic_product(z, qp, ctx), name="Q")


def quadratic_taylor_identification(qp: QuadraticParams, k_max: int,
                                    ctx: QContext) -> float:
    """Max relative gap between pipeline t_k(Q) for the pair (a, b) and C h_k."""
    f = quadratic_function(qp, ctx)
    pair = BasisPair(qp.a, qp.b)
    cab = quadratic_constant(qp, ctx)
    worst = 0.0
    h = 1.0 + 0.0j
    for k in range(k_max + 1):
        lhs = taylor_coefficient(f, pair, k, ctx)
        rhs = cab * h
        scale = max(abs(lhs), abs(rhs))
        if scale > 0.0:
            worst = max(worst, abs(lhs - rhs) / scale)
        h *= _h_ratio(qp, k, ctx)
    return worst


def quadratic_tail_curve(z: complex, qp: QuadraticParams, orders: list[int],
                         ctx: QContext, *, depth: int = 200) -> list[float]:
    """|closed-form tail R_n(z)| / |Q(z)| for each n (remainders are tails)."""
    a, b = qp.a, qp.b
    lhs = abs(quadratic_product(z, qp, ctx))
    cab = quadratic_constant(qp, ctx)
    terms = []
    term = 1.0 + 0.0j
    x = 1.0 + 0.0j
    for k in range(depth):
        terms.append(term)
        den = (1.0 - b * z * x) * (1.0 - b * x / z)
        term *= _h_ratio(qp, k, ctx) * (1.0 - a * z * x) * (1.0 - a * x / z) / den
        x *= ctx.q
        if abs(term) < 1e-30 * max(abs(t) for t in terms):
            break
    out = []
    for n in orders:
        tail = cab * sum(terms[n + 1:])
        out.append(abs(tail) / lhs)
    return out


def companion_product(z: complex, qp: QuadraticParams, ctx: QContext) -> complex:
    """The companion product with base-q^2 numerator and half-integer shifts."""
    al, d = qp.alpha, qp.d
    q, rq = ctx.q, ctx.sqrt_q
    ctx2 = ctx.squared()
    if (factor_clearance(-al * rq * z, ctx) <= ctx.pole_margin
            or factor_clearance(-al * rq / z, ctx) <= ctx.pole_margin):
        raise PoleProximity("z within margin of the companion pole set")
    num = (_pinf(al * d * rq * z, ctx2) * _pinf(al * d * rq / z, ctx2)
           * _pinf(al * rq * q * z / d, ctx2) * _pinf(al * rq * q / (d * z), ctx2))
    return num / (_pinf(-al * rq * z, ctx) * _pinf(-al * rq / z, ctx))


def companion_constant(qp: QuadraticParams, ctx: QContext) -> complex:
    al, d = qp.alpha, qp.d
    q = ctx.q
    num = _pinf(al * d, ctx) * _pinf(al * q / d, ctx)
    return num / (_pinf(-al, ctx) * _pinf(-al * q, ctx))


def _r_ratio(qp: QuadraticParams, k: int, ctx: QContext) -> complex:
    """r_{k+1} / r_k for the companion coefficients."""
    al, d = qp.alpha, qp.d
    q = ctx.q
    qk = q ** k
    lead = (1.0 + al * q ** (2 * k + 2)) / (1.0 + al * q ** (2 * k))
    num = ((1.0 + al * qk) * (1.0 - al * qk) * (1.0 + d * qk) * (1.0 + q * qk / d))
    den = ((1.0 - q * qk) * (1.0 + q * qk) * (1.0 - (al * q / d) * qk)
           * (1.0 - al * d * qk))
    return lead * num / den * al


def companion_coefficient(qp: QuadraticParams, k: int, ctx: QContext) -> complex:
    r = 1.0 + 0.0j
    for j in range(k):
        r *= _r_ratio(qp, j, ctx)
    return r


def companion_residual(z: complex, qp: QuadraticParams, n_trunc: int,
                       ctx: QContext) -> float:
    """|Q_companion(z) - C sum_{k<=n} r_k basis_k(z)| / |Q_companion(z)|.

    The basis pair is (q^{1/2}, -alpha q^{1/2}).
    """
    al = qp.alpha
    q, rq = ctx.q, ctx.sqrt_q
    lhs = companion_product(z, qp, ctx)
    total = 0.0 + 0.0j
    term = 1.0 + 0.0j
    x = 1.0 + 0.0j
    for k in range(n_trunc + 1):
        total += term
        if k == n_trunc:
            break
        den = (1.0 + al * rq * z * x) * (1.0 + al * rq * x / z)
        if abs(den) <= ctx.pole_margin ** 2:
            raise PoleProximity("companion basis denominator within margin")
        term *= _r_ratio(qp, k, ctx) * (1.0 - rq * z * x) * (1.0 - rq * x / z) / den
        x *= ctx.q
    rhs = companion_constant(qp, ctx) * total
    return abs(lhs - rhs) / abs(lhs)


def companion_function(qp: QuadraticParams, ctx: QContext) -> SymmetricFunction:
    return SymmetricFunction(lambda z: companion_product(z, qp, ctx), name="Qc")


def companion_pair(qp: QuadraticParams, ctx: QContext) -> BasisPair:
    rq = ctx.sqrt_q
    return BasisPair(rq, -qp.alpha * rq)


def companion_taylor_identification(qp: QuadraticParams, k_max: int,
                                    ctx: QContext) -> float:
    """Max relative gap between pipeline t_k of the companion and C r_k."""
    f = companion_function(qp, ctx)
    pair = companion_pair(qp, ctx)
    cd = companion_constant(qp, ctx)
    worst = 0.0
    r = 1.0 + 0.0j
    for k in range(k_max + 1):
        lhs = taylor_coefficient(f, pair, k, ctx)
        rhs = cd * r
        scale = max(abs(lhs), abs(rhs))
        if scale > 0.0:
            worst = max(worst, abs(lhs - rhs) / scale)
        r *= _r_ratio(qp, k, ctx)
    return worst


def companion_series_vs_vwp(z: complex, qp: QuadraticParams, ctx: QContext) -> float:
    """Companion series against its very-well-poised specialisation.

    The coefficient series equals the 8W7 evaluation with leading
    parameter -alpha, parameters (q^{1/2} z, q^{1/2}/z, alpha, -d, -q/d)
    and argument alpha.
    """
    from .hyper import VWPSpec, vwp_eval

    al, d = qp.alpha, qp.d
    q, rq = ctx.q, ctx.sqrt_q
    series = vwp_eval(VWPSpec(-al, (rq * z, rq / z, al, -d, -q / d), al),
                      None, ctx).value
    total = 0.0 + 0.0j
    term = 1.0 + 0.0j
    x = 1.0 + 0.0j
    for k in range(200):
        total += term
        den = (1.0 + al * rq * z * x) * (1.0 + al * rq * x / z)
        term *= _r_ratio(qp, k, ctx) * (1.0 - rq * z * x) * (1.0 - rq * x / z) / den
        x *= q
        if abs(term) < ctx.eps_tail * abs(total) and k >= 8:
            break
    scale = max(abs(series), abs(total))
    return abs(series - total) / scale if scale else 0.0


def folding_identity_check(x: complex, n: int, ctx: QContext) -> float:
    """Residuals of (x,-x;q)_n = (x^2;q^2)_n, finite and infinite forms.

    Returns the larger of the two scale-relative residuals; both are exact
    rearrangements, so the result is pure rounding.
    """
    if n < 0:
        raise DomainError("n must be nonnegative")
    ctx2 = ctx.squared()
    lhs_fin = qpoch_finite(x, n, ctx) * qpoch_finite(-x, n, ctx)
    rhs_fin = qpoch_finite(x * x, n, ctx2)
    scale_fin = max(abs(lhs_fin), abs(rhs_fin))
    res_fin = abs(lhs_fin - rhs_fin) / scale_fin if scale_fin else 0.0
    lhs_inf = _pinf(x, ctx) * _pinf(-x, ctx)
    rhs_inf = _pinf(x * x, ctx2)
    scale_inf = max(abs(lhs_inf), abs(rhs_inf))
    res_inf = abs(lhs_inf - rhs_inf) / scale_inf if scale_inf else 0.0
    return max(res_fin, res_inf)
