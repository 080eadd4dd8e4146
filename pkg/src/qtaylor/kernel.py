"""The two-basis kernel: products, involution, coefficient families, residuals.

The kernel F(z) factors as F = A*H = B*K where H and K are the two
normalised kernels.  H expands in the rational basis Phi_k(z; b, c) with
coefficients H(b) f_k, K in the transformed basis Psi_k = Phi_k(z; c/de,
c^2/bde) with coefficients K(c/de) g_k, and the two-basis identity states
that F is the sum of the two prefactored series.  Everything here is
evaluated numerically with scale-relative residuals; the pole-cleared
residual E, its truncations, grid zeros and Laurent-coefficient
cancellations provide the independent routes through the same identity.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (DomainError, PoleProximity, QuadratureNonConvergence,
                     ZeroDenominator)
from .qcore import (QContext, factor_clearance, qpoch_infinite, qpoch_multi)
from .taylor import BasisPair, taylor_coefficient, taylor_expand
from .wpoperator import SymmetricFunction, apply_Dcq


def _pinf(a: complex, ctx: QContext) -> complex:
    return qpoch_infinite(a, ctx).value


def _sym_inf(alpha: complex, z: complex, ctx: QContext) -> complex:
    """(alpha z; q)_inf (alpha / z; q)_inf."""
    return _pinf(alpha * z, ctx) * _pinf(alpha / z, ctx)


@dataclass(frozen=True)
class KernelParams:
    """The parameter quadruple (b, c, d, e) with its evaluation context.

    Construction enforces the genericity the closed formulas assume: every
    parameter-level denominator base stays clear of the set {q^-j} by the
    context pole margin, which also keeps the two Taylor grids b q^m and
    (c/de) q^m from colliding.
    """

    b: complex
    c: complex
    d: complex
    e: complex
    ctx: QContext

    def __post_init__(self) -> None:
        for name in "bcde":
            val = complex(getattr(self, name))
            object.__setattr__(self, name, val)
            if val == 0:
                raise DomainError(f"kernel parameter {name} must be nonzero")
        margin = self.ctx.pole_margin
        for name, base in self.denominator_bases():
            if factor_clearance(base, self.ctx) <= margin:
                raise ZeroDenominator(
                    f"kernel genericity violated: base {name} = {base} "
                    f"within margin of q^-j")

    def denominator_bases(self) -> list[tuple[str, complex]]:
        b, c, d, e = self.b, self.c, self.d, self.e
        q = self.ctx.q
        return [
            ("bc", b * c), ("c/b", c / b), ("bc/de", b * c / (d * e)),
            ("c/bde", c / (b * d * e)), ("bde/c", b * d * e / c),
            ("c3/bd2e2", c ** 3 / (b * d ** 2 * e ** 2)),
            ("bc/d", b * c / d), ("bc/e", b * c / e),
            ("bdeq/c", b * d * e * q / c), ("bc/q", b * c / q),
            ("c2/de2", c ** 2 / (d * e ** 2)), ("c2/d2e", c ** 2 / (d ** 2 * e)),
            ("cq/bde", c * q / (b * d * e)),
            ("c3/bd2e2q", c ** 3 / (b * d ** 2 * e ** 2 * q)),
        ]

    @property
    def phi_pair(self) -> BasisPair:
        return BasisPair(self.b, self.c)

    @property
    def psi_pair(self) -> BasisPair:
        return BasisPair(self.c / (self.d * self.e),
                         self.c ** 2 / (self.b * self.d * self.e))

    def involuted(self) -> "KernelParams":
        b, c, d, e = self.b, self.c, self.d, self.e
        return KernelParams(c / (d * e), c * c / (b * d * e),
                            c / (b * e), c / (b * d), self.ctx)


def involute(kp: KernelParams) -> KernelParams:
    """The parameter involution (b,c,d,e) -> (c/de, c^2/bde, c/be, c/bd).

    Applying it twice returns the original quadruple; it exchanges the two
    bases, the two prefactors and the two normalised kernels.
    """
    return kp.involuted()


@dataclass(frozen=True)
class KernelFactors:
    F: complex
    A: complex
    B: complex
    H: complex
    K: complex


def kernel_F(z: complex, kp: KernelParams) -> complex:
    b, c, d, e, ctx = kp.b, kp.c, kp.d, kp.e, kp.ctx
    num = _sym_inf(c / d, z, ctx) * _sym_inf(c / e, z, ctx)
    den = _sym_inf(c, z, ctx) * _sym_inf(c * c / (b * d * e), z, ctx)
    if abs(den) == 0.0:
        raise PoleProximity("z on a pole of F")
    return num / den


def kernel_A(z: complex, kp: KernelParams) -> complex:
    c, ctx = kp.c, kp.ctx
    den = _sym_inf(c * c / (kp.b * kp.d * kp.e), z, ctx)
    if abs(den) == 0.0:
        raise PoleProximity("z on a pole of A")
    return _sym_inf(c / (kp.d * kp.e), z, ctx) / den


def kernel_B(z: complex, kp: KernelParams) -> complex:
    den = _sym_inf(kp.c, z, kp.ctx)
    if abs(den) == 0.0:
        raise PoleProximity("z on a pole of B")
    return _sym_inf(kp.b, z, kp.ctx) / den


def kernel_H(z: complex, kp: KernelParams, *, c: complex | None = None,
             d: complex | None = None, e: complex | None = None) -> complex:
    """H(z; c, d, e); keyword overrides evaluate the shifted kernels."""
    ctx = kp.ctx
    c = kp.c if c is None else c
    d = kp.d if d is None else d
    e = kp.e if e is None else e
    num = _sym_inf(c / d, z, ctx) * _sym_inf(c / e, z, ctx)
    den = _sym_inf(c, z, ctx) * _sym_inf(c / (d * e), z, ctx)
    if abs(den) == 0.0:
        raise PoleProximity("z on a pole of H")
    return num / den


def kernel_K(z: complex, kp: KernelParams, *, b: complex | None = None,
             c: complex | None = None, d: complex | None = None,
             e: complex | None = None) -> complex:
    """K(z; b, c, d, e); keyword overrides evaluate the shifted kernels."""
    ctx = kp.ctx
    b = kp.b if b is None else b
    c = kp.c if c is None else c
    d = kp.d if d is None else d
    e = kp.e if e is None else e
    num = _sym_inf(c / d, z, ctx) * _sym_inf(c / e, z, ctx)
    den = _sym_inf(b, z, ctx) * _sym_inf(c * c / (b * d * e), z, ctx)
    if abs(den) == 0.0:
        raise PoleProximity("z on a pole of K")
    return num / den


def kernel_factors(z: complex, kp: KernelParams) -> KernelFactors:
    """All five kernel products at z, with F = A*H = B*K enforced."""
    F = kernel_F(z, kp)
    A = kernel_A(z, kp)
    B = kernel_B(z, kp)
    H = kernel_H(z, kp)
    K = kernel_K(z, kp)
    tol = kp.ctx.eps_rel * abs(F)
    if abs(F - A * H) > 100 * tol or abs(F - B * K) > 100 * tol:
        raise PoleProximity(
            "kernel factorisation inconsistent at z (precision lost near a pole)")
    return KernelFactors(F, A, B, H, K)


def H_at_b(kp: KernelParams) -> complex:
    """Zeroth Taylor value H(b) in closed product form."""
    b, c, d, e, ctx = kp.b, kp.c, kp.d, kp.e, kp.ctx
    num = qpoch_multi([b * c / d, c / (b * d), b * c / e, c / (b * e)], None, ctx).value
    den = qpoch_multi([b * c, c / b, b * c / (d * e), c / (b * d * e)], None, ctx).value
    if abs(den) == 0.0:
        raise ZeroDenominator("vanishing denominator in H(b)")
    return num / den


def K_at_cde(kp: KernelParams) -> complex:
    """Zeroth Taylor value K(c/de) in closed product form."""
    b, c, d, e, ctx = kp.b, kp.c, kp.d, kp.e, kp.ctx
    num = qpoch_multi([c * c / (d * d * e), e, c * c / (d * e * e), d], None, ctx).value
    den = qpoch_multi([b * c / (d * e), b * d * e / c,
                       c ** 3 / (b * d ** 2 * e ** 2), c / b], None, ctx).value
    if abs(den) == 0.0:
        raise ZeroDenominator("vanishing denominator in K(c/de)")
    return num / den


def fk_coefficient(kp: KernelParams, k: int) -> complex:
    """Coefficient f_k of the first family (very-well-poised summand, q^k included)."""
    if k == 0:
        return 1.0 + 0.0j
    b, c, d, e, ctx = kp.b, kp.c, kp.d, kp.e, kp.ctx
    q = ctx.q
    bcq = b * c / q
    lead = (1.0 - bcq * q ** (2 * k)) / (1.0 - bcq)
    num = qpoch_multi([bcq, d, e, c * c / (d * e * q)], k, ctx).value
    den = qpoch_multi([q, b * c / d, b * c / e, b * d * e * q / c], k, ctx).value
    if abs(den) <= ctx.pole_margin:
        raise ZeroDenominator("vanishing denominator in f_k")
    return lead * num / den * q ** k


def gk_coefficient(kp: KernelParams, k: int) -> complex:
    """Coefficient g_k of the second family (the involuted f_k, in closed form)."""
    if k == 0:
        return 1.0 + 0.0j
    b, c, d, e, ctx = kp.b, kp.c, kp.d, kp.e, kp.ctx
    q = ctx.q
    xq = c ** 3 / (b * d ** 2 * e ** 2 * q)
    lead = (1.0 - xq * q ** (2 * k)) / (1.0 - xq)
    num = qpoch_multi([xq, c / (b * d), c / (b * e), c * c / (d * e * q)],
                      k, ctx).value
    den = qpoch_multi([q, c * c / (d * e * e), c * c / (d * d * e),
                       c * q / (b * d * e)], k, ctx).value
    if abs(den) <= ctx.pole_margin:
        raise ZeroDenominator("vanishing denominator in g_k")
    return lead * num / den * q ** k


def _f_ratio(kp: KernelParams, k: int) -> complex:
    """f_{k+1} / f_k."""
    b, c, d, e = kp.b, kp.c, kp.d, kp.e
    q = kp.ctx.q
    qk = q ** k
    lead = (1.0 - b * c * q ** (2 * k + 1)) / (1.0 - b * c * q ** (2 * k - 1))
    num = ((1.0 - (b * c / q) * qk) * (1.0 - d * qk) * (1.0 - e * qk)
           * (1.0 - (c * c / (d * e * q)) * qk))
    den = ((1.0 - q * qk) * (1.0 - (b * c / d) * qk)
           * (1.0 - (b * c / e) * qk) * (1.0 - (b * d * e * q / c) * qk))
    return lead * num / den * q


def _g_ratio(kp: KernelParams, k: int) -> complex:
    """g_{k+1} / g_k."""
    b, c, d, e = kp.b, kp.c, kp.d, kp.e
    q = kp.ctx.q
    qk = q ** k
    x = c ** 3 / (b * d ** 2 * e ** 2)
    lead = (1.0 - x * q ** (2 * k + 1)) / (1.0 - x * q ** (2 * k - 1))
    num = ((1.0 - (x / q) * qk) * (1.0 - (c / (b * d)) * qk)
           * (1.0 - (c / (b * e)) * qk) * (1.0 - (c * c / (d * e * q)) * qk))
    den = ((1.0 - q * qk) * (1.0 - (c * c / (d * e * e)) * qk)
           * (1.0 - (c * c / (d * d * e)) * qk) * (1.0 - (c * q / (b * d * e)) * qk))
    return lead * num / den * q


def _basis_series(z: complex, pair: BasisPair, coeff_ratio, n_trunc: int,
                  ctx: QContext) -> complex:
    """sum_{k<=n} coeff_k * Phi_k(z; pair) with coeff_0 = 1, by ratio updates."""
    a, c = pair.a, pair.c
    total = 0.0 + 0.0j
    term = 1.0 + 0.0j
    x = 1.0 + 0.0j
    for k in range(n_trunc + 1):
        total += term
        if k == n_trunc:
            break
        den = (1.0 - c * z * x) * (1.0 - c * x / z)
        if abs(den) <= ctx.pole_margin ** 2:
            raise PoleProximity("basis denominator within margin during series sum")
        term *= coeff_ratio(k) * (1.0 - a * z * x) * (1.0 - a * x / z) / den
        x *= ctx.q
    return total


def H_series_function(kp: KernelParams) -> SymmetricFunction:
    """H as a SymmetricFunction of z (for the operator pipeline)."""
    return SymmetricFunction(lambda z: kernel_H(z, kp), name="H")


def K_series_function(kp: KernelParams) -> SymmetricFunction:
    return SymmetricFunction(lambda z: kernel_K(z, kp), name="K")


def kernel_taylor_crosscheck(kp: KernelParams, k_max: int) -> float:
    """Max relative gap between operator-pipeline t_k(H) and H(b) f_k, k <= k_max.

    Connects the divided-difference pipeline to the closed-form
    coefficients; the involuted statement is the same call on
    involute(kp), which compares t_k(K) against K(c/de) g_k.
    """
    ctx = kp.ctx
    hb = H_at_b(kp)
    h = H_series_function(kp)
    worst = 0.0
    for k in range(k_max + 1):
        lhs = taylor_coefficient(h, kp.phi_pair, k, ctx)
        rhs = hb * fk_coefficient(kp, k)
        scale = max(abs(lhs), abs(rhs))
        if scale > 0.0:
            worst = max(worst, abs(lhs - rhs) / scale)
    return worst


def two_basis_terms(z: complex, kp: KernelParams, n_trunc: int, *,
                    force_unit_Hb: bool = False,
                    force_unit_Kcde: bool = False) -> tuple[complex, complex, complex]:
    """The three additive terms (F, A H(b) S_f, B K(c/de) S_g) of the identity."""
    ctx = kp.ctx
    F = kernel_F(z, kp)
    A = kernel_A(z, kp)
    B = kernel_B(z, kp)
    hb = 1.0 + 0.0j if force_unit_Hb else H_at_b(kp)
    kc = 1.0 + 0.0j if force_unit_Kcde else K_at_cde(kp)
    sf = _basis_series(z, kp.phi_pair, lambda k: _f_ratio(kp, k), n_trunc, ctx)
    sg = _basis_series(z, kp.psi_pair, lambda k: _g_ratio(kp, k), n_trunc, ctx)
    return F, A * hb * sf, B * kc * sg


def two_basis_residual(z: complex, kp: KernelParams, n_trunc: int, *,
                       force_unit_Hb: bool = False,
                       force_unit_Kcde: bool = False) -> float:
    """Scale-relative residual of F = A H(b) S_f + B K(c/de) S_g at n_trunc.

    The scale is the largest of the three additive terms: near a zero of F
    the two series contributions dwarf the kernel value and cancel, so
    relative-to-F scaling would only measure that cancellation's
    conditioning.  The force_unit_* switches implement the negative
    controls: dropping either zeroth Taylor value must destroy the
    identity.
    """
    t1, t2, t3 = two_basis_terms(z, kp, n_trunc, force_unit_Hb=force_unit_Hb,
                                 force_unit_Kcde=force_unit_Kcde)
    return abs(t1 - t2 - t3) / max(abs(t1), abs(t2), abs(t3))


def complementary_remainder_gap(z: complex, kp: KernelParams, n: int) -> float:
    """Gap |A R_n H(z) - B K(c/de) S_g| / scale, R_n via the operator pipeline."""
    return remainder_gap_curve(z, kp, [n])[0]


def remainder_gap_curve(z: complex, kp: KernelParams, orders: Sequence[int],
                        *, g_trunc: int | None = None) -> list[float]:
    """complementary_remainder_gap at several orders, sharing the coefficients."""
    from .taylor import TaylorExpansion

    ctx = kp.ctx
    n_max = max(orders)
    expansion = taylor_expand(H_series_function(kp), kp.phi_pair, n_max, ctx)
    A = kernel_A(z, kp)
    B = kernel_B(z, kp)
    hkz = kernel_H(z, kp)
    kc = K_at_cde(kp)
    if g_trunc is None:
        g_trunc = adaptive_series_depth(kp)
    sg = _basis_series(z, kp.psi_pair, lambda k: _g_ratio(kp, k), g_trunc, ctx)
    target = B * kc * sg
    gaps = []
    for n in orders:
        partial = TaylorExpansion(expansion.pair,
                                  expansion.coefficients[:n + 1]).sum_at(z, ctx)
        lhs = A * (hkz - partial)
        gaps.append(abs(lhs - target) / max(abs(lhs), abs(target)))
    return gaps


def adaptive_series_depth(kp: KernelParams) -> int:
    """Truncation depth making the O(q^k) coefficient tails negligible."""
    q = abs(kp.ctx.q)
    depth = int(math.ceil(math.log(kp.ctx.eps_tail) / math.log(q))) + 16
    return min(depth, kp.ctx.max_terms)


def M_clearing(z: complex, kp: KernelParams) -> complex:
    """The pole-clearing product M(z) = (cz, c/z, c^2 z/bde, c^2/bdez;q)_inf."""
    return (_sym_inf(kp.c, z, kp.ctx)
            * _sym_inf(kp.c ** 2 / (kp.b * kp.d * kp.e), z, kp.ctx))


def pole_cleared_E_terms(z: complex, kp: KernelParams,
                         n_trunc: int) -> tuple[complex, complex, complex]:
    """The three additive terms of the pole-cleared residual E(z).

    E = t1 - t2 - t3 where t1 is the numerator product of F and t2, t3
    are the pole-cleared coefficient sums; each infinite product is
    truncated with a certified tail.
    """
    b, c, d, e, ctx = kp.b, kp.c, kp.d, kp.e, kp.ctx
    if z == 0:
        raise DomainError("E is defined on the punctured plane")
    q = ctx.q
    t1 = _sym_inf(c / d, z, ctx) * _sym_inf(c / e, z, ctx)

    # first family: pre2 * sum_k f_k (bz, b/z;q)_k (c z q^k, c q^k/z;q)_inf
    pre2 = _sym_inf(c / (d * e), z, ctx)
    tail = _sym_inf(c, z, ctx)
    fin = 1.0 + 0.0j
    fk = 1.0 + 0.0j
    s2 = 0.0 + 0.0j
    x = 1.0 + 0.0j
    for k in range(n_trunc + 1):
        s2 += fk * fin * tail
        if k == n_trunc:
            break
        div = (1.0 - c * z * x) * (1.0 - c * x / z)
        if abs(div) <= ctx.pole_margin ** 2:
            raise PoleProximity("tail-product update within margin (first family)")
        tail /= div
        fin *= (1.0 - b * z * x) * (1.0 - b * x / z)
        fk *= _f_ratio(kp, k)
        x *= q
    t2 = H_at_b(kp) * pre2 * s2

    # second family: pre3 * sum_k g_k (cz/de, c/dez;q)_k (c^2 z q^k/bde, ...)_inf
    c2 = c * c / (b * d * e)
    pre3 = _sym_inf(b, z, ctx)
    tail = _sym_inf(c2, z, ctx)
    fin = 1.0 + 0.0j
    gk = 1.0 + 0.0j
    s3 = 0.0 + 0.0j
    x = 1.0 + 0.0j
    cde = c / (d * e)
    for k in range(n_trunc + 1):
        s3 += gk * fin * tail
        if k == n_trunc:
            break
        div = (1.0 - c2 * z * x) * (1.0 - c2 * x / z)
        if abs(div) <= ctx.pole_margin ** 2:
            raise PoleProximity("tail-product update within margin (second family)")
        tail /= div
        fin *= (1.0 - cde * z * x) * (1.0 - cde * x / z)
        gk *= _g_ratio(kp, k)
        x *= q
    t3 = K_at_cde(kp) * pre3 * s3
    return t1, t2, t3


def pole_cleared_E(z: complex, kp: KernelParams, n_trunc: int) -> complex:
    """The pole-cleared residual E(z); vanishes on both Taylor grids."""
    t1, t2, t3 = pole_cleared_E_terms(z, kp, n_trunc)
    return t1 - t2 - t3


def truncated_E_N(z: complex, kp: KernelParams, N: int) -> complex:
    """E_N(z): both coefficient sums cut at N; flat through grid depth N only."""
    t1, t2, t3 = pole_cleared_E_terms(z, kp, N)
    return t1 - t2 - t3


def laurent_coefficient_detail(G: Callable[[complex], complex], n: int, radius: float,
                               ctx: QContext, *, nodes: int = 64,
                               pole_moduli: Sequence[float] = (),
                               scale_floor: float = 0.0) -> tuple[complex, float, int]:
    """Trapezoid contour coefficient [z^{-n}] G with node doubling.

    Returns (coefficient, scale, nodes) where scale is the largest sampled
    |G(z_j) z_j^n| term of the quadrature sum, floored by scale_floor.
    Doubles 64 -> ... -> 1024 until the change drops below eps_rel * scale.

    scale_floor matters when G is itself a near-cancelling identity
    residual: its sampled values are noise relative to the terms that
    produced them, so stabilisation must be judged against that term
    scale, not against |G|.
    """
    for mod in pole_moduli:
        if abs(radius - mod) <= ctx.pole_margin * max(1.0, mod):
            raise PoleProximity(f"contour radius {radius} within margin of pole circle {mod}")
    cached: dict[int, complex] = {}

    def estimate(m: int) -> tuple[complex, float]:
        total = 0.0 + 0.0j
        scale = scale_floor
        step = 1024 // m
        for j in range(m):
            idx = j * step
            if idx not in cached:
                zj = radius * cmath.exp(2j * math.pi * idx / 1024)
                cached[idx] = G(zj) * zj ** n
            term = cached[idx]
            total += term
            scale = max(scale, abs(term))
        return total / m, scale

    prev, scale = estimate(nodes)
    m = nodes
    while m < 1024:
        m *= 2
        cur, scale = estimate(m)
        if abs(cur - prev) <= ctx.eps_rel * max(scale, 1e-300):
            return cur, scale, m
        prev = cur
    raise QuadratureNonConvergence(
        f"contour coefficient did not stabilise by {m} nodes")


def laurent_coefficient(G: Callable[[complex], complex], n: int, radius: float,
                        ctx: QContext, *, nodes: int = 64,
                        pole_moduli: Sequence[float] = ()) -> complex:
    """Contour Laurent coefficient [z^{-n}] G on |z| = radius."""
    value, _, _ = laurent_coefficient_detail(G, n, radius, ctx, nodes=nodes,
                                             pole_moduli=pole_moduli)
    return value


def E_contour_coefficient(kp: KernelParams, n: int, radius: float = 1.0,
                          n_trunc: int | None = None) -> tuple[complex, float, int]:
    """[z^{-n}] of the pole-cleared residual by contour quadrature.

    Returns (coefficient, term_scale, nodes).  The stabilisation threshold
    and the reported scale use the largest additive term of E on the
    contour, because E itself vanishes identically.
    """
    ctx = kp.ctx
    if n_trunc is None:
        n_trunc = adaptive_series_depth(kp)
    floor = 0.0
    for j in range(16):
        zj = radius * cmath.exp(2j * math.pi * (j + 0.37) / 16)
        t1, t2, t3 = pole_cleared_E_terms(zj, kp, n_trunc)
        floor = max(floor, abs(t1), abs(t2), abs(t3))
    floor *= radius ** n

    def G(z: complex) -> complex:
        a1, a2, a3 = pole_cleared_E_terms(z, kp, n_trunc)
        return a1 - a2 - a3

    return laurent_coefficient_detail(G, n, radius, ctx, scale_floor=floor)


def contour_radius(lo: float, hi: float, ctx: QContext) -> float:
    """Geometric-mean radius between two pole moduli, rejected when too tight."""
    if hi <= lo:
        lo, hi = hi, lo
    if hi - lo < 2 * ctx.pole_margin:
        raise PoleProximity("pole circles leave no room for a contour")
    return math.sqrt(lo * hi)


def _euler_coeffs(u: complex, ctx: QContext, *, tol: float = 1e-24) -> np.ndarray:
    """Series coefficients of (u t;q)_inf in powers of t (Euler expansion)."""
    q = ctx.q
    coeffs = [1.0 + 0.0j]
    e = 1.0 + 0.0j
    i = 1
    peak = 1.0
    while i < ctx.max_terms:
        e *= -u * q ** (i - 1) / (1.0 - q ** i)
        coeffs.append(e)
        peak = max(peak, abs(e))
        if abs(e) < tol * peak and i >= 4:
            break
        i += 1
    return np.asarray(coeffs, dtype=complex)


def _gauss_coeffs(u: complex, k: int, ctx: QContext) -> np.ndarray:
    """Polynomial coefficients of (u t;q)_k in powers of t."""
    q = ctx.q
    poly = np.zeros(k + 1, dtype=complex)
    poly[0] = 1.0
    x = complex(u)
    for j in range(k):
        shifted = np.zeros(k + 1, dtype=complex)
        shifted[1:j + 2] = poly[:j + 1] * (-x)
        poly = poly + shifted
        x *= q
    return poly


def calP_quadruple(alpha: complex, beta: complex, gamma: complex, delta: complex,
                   n: int, ctx: QContext) -> complex:
    """[z^{-n}] (alpha z, beta/z, gamma z, delta/z;q)_inf by the quadruple sum.

    The four Euler expansions are convolved; the quadratic q-powers make
    every slice absolutely convergent, so a relative cutoff suffices.
    """
    pos = np.convolve(_euler_coeffs(alpha, ctx), _euler_coeffs(gamma, ctx))
    neg = np.convolve(_euler_coeffs(beta, ctx), _euler_coeffs(delta, ctx))
    total = 0.0 + 0.0j
    for i, p in enumerate(pos):
        j = i + n
        if 0 <= j < len(neg):
            total += p * neg[j]
    return total


def calP1(kp: KernelParams, n: int, k: int) -> complex:
    """[z^{-n}] (cz/de, c/dez;q)_inf (bz, b/z;q)_k (czq^k, cq^k/z;q)_inf.

    The z and 1/z directions carry the same parameter bases, so a single
    coefficient array serves both sides of the convolution.
    """
    b, c, d, e, ctx = kp.b, kp.c, kp.d, kp.e, kp.ctx
    q = ctx.q
    pos = np.convolve(np.convolve(_euler_coeffs(c / (d * e), ctx),
                                  _euler_coeffs(c * q ** k, ctx)),
                      _gauss_coeffs(b, k, ctx))
    return _laurent_pair(pos, pos, n)


def calP2(kp: KernelParams, n: int, k: int) -> complex:
    """[z^{-n}] (bz, b/z;q)_inf (cz/de, c/dez;q)_k (c^2 zq^k/bde, c^2 q^k/bdez;q)_inf."""
    b, c, d, e, ctx = kp.b, kp.c, kp.d, kp.e, kp.ctx
    q = ctx.q
    c2 = c * c / (b * d * e)
    pos = np.convolve(np.convolve(_euler_coeffs(b, ctx),
                                  _euler_coeffs(c2 * q ** k, ctx)),
                      _gauss_coeffs(c / (d * e), k, ctx))
    return _laurent_pair(pos, pos, n)


def _laurent_pair(pos: np.ndarray, neg: np.ndarray, n: int) -> complex:
    total = 0.0 + 0.0j
    for i, p in enumerate(pos):
        j = i + n
        if 0 <= j < len(neg):
            total += p * neg[j]
    return total


def cancellation_identity_residual(kp: KernelParams, n: int, k_trunc: int) -> float:
    """Residual of the Laurent-coefficient cancellation at order n >= 1.

    |P_n(c/d, c/d, c/e, c/e) - H(b) sum_k f_k P1_{n,k} - K(c/de) sum_k g_k P2_{n,k}|
    over the largest of the three term magnitudes; all pieces via the
    structured sums, independent of the contour quadrature oracle.
    """
    if n < 1:
        raise DomainError("the cancellation family starts at n = 1")
    b, c, d, e, ctx = kp.b, kp.c, kp.d, kp.e, kp.ctx
    lhs = calP_quadruple(c / d, c / d, c / e, c / e, n, ctx)
    s1 = 0.0 + 0.0j
    s2 = 0.0 + 0.0j
    fk = 1.0 + 0.0j
    gk = 1.0 + 0.0j
    for k in range(k_trunc + 1):
        s1 += fk * calP1(kp, n, k)
        s2 += gk * calP2(kp, n, k)
        fk *= _f_ratio(kp, k)
        gk *= _g_ratio(kp, k)
    t2 = H_at_b(kp) * s1
    t3 = K_at_cde(kp) * s2
    scale = max(abs(lhs), abs(t2), abs(t3))
    return abs(lhs - t2 - t3) / scale if scale else 0.0


def H_lowering_residual(z: complex, kp: KernelParams) -> float:
    """Residual of the lowering law for H under the well-poised operator.

    D_{c,q} H(z) = [2c(1-d)(1-e)(1-c^2/deq) / (de(1-q))] H(z; cq^{3/2}, dq, eq).
    The involuted law (the lowering of K) is this same check on involute(kp).
    """
    b, c, d, e, ctx = kp.b, kp.c, kp.d, kp.e, kp.ctx
    q, rq = ctx.q, ctx.sqrt_q
    lhs = apply_Dcq(lambda w: kernel_H(w, kp), z, c, ctx)
    pref = (2.0 * c * (1.0 - d) * (1.0 - e) * (1.0 - c * c / (d * e * q))
            / (d * e * (1.0 - q)))
    rhs = pref * kernel_H(z, kp, c=c * rq ** 3, d=d * q, e=e * q)
    scale = max(abs(lhs), abs(rhs))
    return abs(lhs - rhs) / scale if scale else 0.0


def K_lowering_residual(z: complex, kp: KernelParams) -> float:
    """Residual of the lowering law for K, stated with unprimed parameters.

    D_{c^2/bde,q} K(z) = [2b(1-c/be)(1-c/bd)(1-c^2/deq) / (1-q)]
                         K(z; b q^{-1/2}, c q^{1/2}, d, e).
    """
    b, c, d, e, ctx = kp.b, kp.c, kp.d, kp.e, kp.ctx
    q, rq = ctx.q, ctx.sqrt_q
    cprime = c * c / (b * d * e)
    lhs = apply_Dcq(lambda w: kernel_K(w, kp), z, cprime, ctx)
    pref = (2.0 * b * (1.0 - c / (b * e)) * (1.0 - c / (b * d))
            * (1.0 - c * c / (d * e * q)) / (1.0 - q))
    rhs = pref * kernel_K(z, kp, b=b / rq, c=c * rq, d=d, e=e)
    scale = max(abs(lhs), abs(rhs))
    return abs(lhs - rhs) / scale if scale else 0.0


def bailey_crosscheck(kp: KernelParams, z: complex) -> float:
    """Residual of the kernel identity with both series evaluated as 8W7 sums.

    Rewrites the two coefficient series through the very-well-poised
    machinery (leading parameter bc/q; parameter list d, e, c^2/deq, bz,
    b/z; argument q) and its involuted copy, then tests
    F = A H(b) W1 + B K(c/de) W2.
    """
    from .hyper import VWPSpec, vwp_eval

    ctx = kp.ctx
    q = ctx.q

    def w_series(p: KernelParams) -> complex:
        a0 = p.b * p.c / q
        blist = (p.d, p.e, p.c * p.c / (p.d * p.e * q), p.b * z, p.b / z)
        return vwp_eval(VWPSpec(a0, blist, q), None, ctx).value

    w1 = w_series(kp)
    w2 = w_series(involute(kp))
    t1 = kernel_F(z, kp)
    t2 = kernel_A(z, kp) * H_at_b(kp) * w1
    t3 = kernel_B(z, kp) * K_at_cde(kp) * w2
    scale = max(abs(t1), abs(t2), abs(t3))
    return abs(t1 - t2 - t3) / scale if scale else 0.0
