"""Rational bases Phi_k, coefficient extraction, Taylor sums and flatness.

The coefficient functional is computed through the closed-form grid
expression (cooper_eval); the literal operator recursion stays available
as an independent witness in the tests.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError, PoleProximity, ZeroDenominator
from .qcore import QContext, factor_clearance, qpoch_finite, qpoch_infinite
from .wpoperator import SymmetricFunction, cooper_eval, grid_functional_weights


@dataclass(frozen=True)
class BasisPair:
    """A Taylor pair (a, c): grid parameter a, well-poised parameter c.

    The basis Phi_k(z; a, c) = (az, a/z;q)_k / (cz, c/z;q)_k has poles on
    {c q^m, q^m / c : m >= 0}; evaluation points must clear that set by the
    context pole margin.
    """

    a: complex
    c: complex

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "c", complex(self.c))

    def grid_point(self, m: int, ctx: QContext) -> complex:
        return self.a * ctx.q ** m

    def check_admissible(self, z: complex, ctx: QContext) -> None:
        """Reject z within the pole margin of the basis pole set."""
        if z == 0:
            raise PoleProximity("z = 0 is never admissible")
        if self.c == 0:
            return
        if (factor_clearance(self.c * z, ctx) <= ctx.pole_margin
                or factor_clearance(self.c / z, ctx) <= ctx.pole_margin):
            raise PoleProximity(f"z = {z} within margin of the (c = {self.c}) pole set")


def phi_basis(z: complex, pair: BasisPair, k: int, ctx: QContext) -> complex:
    """Phi_k(z; a, c) = (az, a/z;q)_k / (cz, c/z;q)_k; Phi_0 = 1."""
    if k < 0:
        raise DomainError("basis index must be nonnegative")
    if k == 0:
        return 1.0 + 0.0j
    pair.check_admissible(z, ctx)
    q = ctx.q
    a, c = pair.a, pair.c
    num = qpoch_finite(a * z, k, ctx) * qpoch_finite(a / z, k, ctx)
    den = qpoch_finite(c * z, k, ctx) * qpoch_finite(c / z, k, ctx)
    return num / den


def phi_function(pair: BasisPair, n: int, ctx: QContext) -> SymmetricFunction:
    """Phi_n(.; a, c) wrapped as a SymmetricFunction."""
    return SymmetricFunction(lambda z: phi_basis(z, pair, n, ctx),
                             name=f"phi_{n}")


def phi_combination(pair: BasisPair, coeffs: Sequence[complex],
                    ctx: QContext) -> SymmetricFunction:
    """Finite combination sum_k u_k Phi_k(.; a, c) as a SymmetricFunction."""
    us = tuple(complex(u) for u in coeffs)

    def fn(z: complex) -> complex:
        q = ctx.q
        a, c = pair.a, pair.c
        total = 0.0 + 0.0j
        basis = 1.0 + 0.0j
        x = 1.0 + 0.0j
        for k, u in enumerate(us):
            total += u * basis
            if k + 1 < len(us):
                den = (1.0 - c * z * x) * (1.0 - c * x / z)
                if abs(den) <= ctx.pole_margin ** 2:
                    raise PoleProximity("basis denominator within margin")
                basis *= (1.0 - a * z * x) * (1.0 - a * x / z) / den
                x *= q
        return total

    return SymmetricFunction(fn, name="phi_combination")


def _coeff_prefactor(pair: BasisPair, k: int, ctx: QContext) -> complex:
    q, rq = ctx.q, ctx.sqrt_q
    a, c = pair.a, pair.c
    d1 = qpoch_finite(q, k, ctx)
    d2 = qpoch_finite(c / a, k, ctx)
    d3 = qpoch_finite(a * c * q ** (k - 1), k, ctx) if k > 0 else 1.0 + 0.0j
    for name, val in (("(q;q)_k", d1), ("(c/a;q)_k", d2), ("(acq^(k-1);q)_k", d3)):
        if abs(val) <= ctx.pole_margin:
            raise ZeroDenominator(f"degenerate coefficient prefactor: {name} ~ 0")
    sign = -1.0 if k % 2 else 1.0
    return (sign * rq ** (-k * (k - 1) // 2) * (1.0 - q) ** k
            / ((2.0 * a) ** k * d1 * d2 * d3))


def taylor_coefficient(f, pair: BasisPair, k: int, ctx: QContext) -> complex:
    """k-th well-poised Taylor coefficient of f relative to (a, c).

    Prefactored evaluation of the k-fold operator at z = a q^{k/2}, via the
    closed-form grid expression.
    """
    z = pair.a * ctx.sqrt_q ** k
    return _coeff_prefactor(pair, k, ctx) * cooper_eval(f, z, pair.c, k, ctx)


@dataclass(frozen=True)
class TaylorExpansion:
    """Coefficients t_0..t_n of a function relative to a basis pair."""

    pair: BasisPair
    coefficients: tuple[complex, ...]

    def sum_at(self, z: complex, ctx: QContext) -> complex:
        q = ctx.q
        a, c = self.pair.a, self.pair.c
        total = 0.0 + 0.0j
        basis = 1.0 + 0.0j
        x = 1.0 + 0.0j
        for k, t in enumerate(self.coefficients):
            total += t * basis
            if k + 1 < len(self.coefficients):
                basis *= ((1.0 - a * z * x) * (1.0 - a * x / z)
                          / ((1.0 - c * z * x) * (1.0 - c * x / z)))
                x *= q
        return total


def taylor_expand(f, pair: BasisPair, n: int, ctx: QContext) -> TaylorExpansion:
    """Extract coefficients 0..n (each via the closed-form functional)."""
    coeffs = tuple(taylor_coefficient(f, pair, k, ctx) for k in range(n + 1))
    return TaylorExpansion(pair, coeffs)


def taylor_sum_and_remainder(f, pair: BasisPair, n: int, z: complex,
                             ctx: QContext) -> tuple[complex, complex]:
    """(T_n f(z), f(z) - T_n f(z)); the pair sums to f(z) by construction."""
    if n < 0:
        raise DomainError("Taylor order must be nonnegative")
    expansion = taylor_expand(f, pair, n, ctx)
    t = expansion.sum_at(z, ctx)
    return t, f(z) - t


def flatness_check(h, pair: BasisPair, k_max: int, ctx: QContext) -> float:
    """Max over k <= k_max of |t_k(h)| relative to the functional's reach.

    The scale at order k is (sum_i |weight_i|) * max |h| sampled on the
    circle through the outer grid node: what the coefficient functional
    could produce from a function of h's magnitude.  A function vanishing
    on the grid therefore scores at rounding level, while a genuinely
    visible function scores far above it.
    """
    a, c = pair.a, pair.c
    h_scale = max(abs(h(abs(a) * cmath.exp(2j * math.pi * (j + 0.13) / 8)))
                  for j in range(8))
    if h_scale == 0.0:
        return 0.0
    values: dict[int, complex] = {}

    def node_value(i: int) -> complex:
        if i not in values:
            values[i] = h(a * ctx.q ** i)
        return values[i]

    worst = 0.0
    for k in range(k_max + 1):
        pref = _coeff_prefactor(pair, k, ctx)
        weights = grid_functional_weights(a, c, k, ctx)
        tk = sum(pref * w * node_value(i) for i, w in enumerate(weights))
        norm = sum(abs(pref * w) for w in weights)
        worst = max(worst, abs(tk) / (norm * h_scale))
    return worst


def basis_sup_estimate(pair: BasisPair, annulus: tuple[float, float], k_max: int,
                       ctx: QContext, *, n_radii: int = 3, n_angles: int = 48) -> float:
    """Empirical sup of |Phi_k| over sampled z in the annulus and k <= k_max.

    Evidence for uniform boundedness: the per-k sups plateau because the
    ratio of consecutive basis elements tends to 1.
    """
    return max(basis_sup_curve(pair, annulus, k_max, ctx,
                               n_radii=n_radii, n_angles=n_angles))


def basis_sup_curve(pair: BasisPair, annulus: tuple[float, float], k_max: int,
                    ctx: QContext, *, n_radii: int = 3, n_angles: int = 48) -> list[float]:
    """Per-k sampled sups sup_z |Phi_k(z)| on the annulus (k = 0..k_max)."""
    r_lo, r_hi = annulus
    if not 0.0 < r_lo <= r_hi:
        raise DomainError("annulus radii must satisfy 0 < r_lo <= r_hi")
    for mod in _pole_moduli(pair, ctx):
        if r_lo - ctx.pole_margin <= mod <= r_hi + ctx.pole_margin:
            raise PoleProximity(f"annulus [{r_lo}, {r_hi}] touches pole circle |z| = {mod:.4g}")
    radii = [r_lo] if n_radii == 1 else [
        r_lo * (r_hi / r_lo) ** (i / (n_radii - 1)) for i in range(n_radii)]
    sups = [1.0] + [0.0] * k_max
    q = ctx.q
    a, c = pair.a, pair.c
    for r in radii:
        for j in range(n_angles):
            z = r * cmath.exp(2j * math.pi * (j + 0.21) / n_angles)
            basis = 1.0 + 0.0j
            x = 1.0 + 0.0j
            for k in range(1, k_max + 1):
                den = (1.0 - c * z * x) * (1.0 - c * x / z)
                if abs(den) <= ctx.pole_margin ** 2:
                    raise PoleProximity("sample point within margin of the pole set")
                basis *= (1.0 - a * z * x) * (1.0 - a * x / z) / den
                x *= q
                sups[k] = max(sups[k], abs(basis))
    return sups


def basis_limit_modulus(z: complex, pair: BasisPair, ctx: QContext) -> float:
    """|(az, a/z;q)_inf / (cz, c/z;q)_inf|: the large-k limit of |Phi_k(z)|."""
    num = (qpoch_infinite(pair.a * z, ctx).value
           * qpoch_infinite(pair.a / z, ctx).value)
    den = (qpoch_infinite(pair.c * z, ctx).value
           * qpoch_infinite(pair.c / z, ctx).value)
    if abs(den) == 0.0:
        raise PoleProximity("z lies on the basis pole set")
    return abs(num / den)


def _pole_moduli(pair: BasisPair, ctx: QContext) -> list[float]:
    mods = []
    if pair.c != 0:
        ac, aq = abs(pair.c), abs(ctx.q)
        m = 0
        while ac * aq ** m > 1e-12 and m < 64:
            mods.append(ac * aq ** m)
            mods.append(1.0 / (ac * aq ** m))
            m += 1
    return mods
