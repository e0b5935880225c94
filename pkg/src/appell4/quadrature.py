"""Gauss-Laguerre quadrature and the integral-representation cross-checks.

The two-axis analogue with equal steps k1 = k2 = k has two integral
representations obtained by trading one coupled rising factorial for a
Gamma integral: with weight e^{-u} on (0, inf),

    F = (1/Gamma(a)) integral e^{-u} u^(a-1) G_b(u) du          (rep_a)
    F = (1/Gamma(b)) integral e^{-u} u^(b-1) G_a(u) du          (rep_b)

where G_p(u) is the Kampe de Feriet function with coupled numerator (p),
axis numerator sequences (-t1 + i)/k and (-t2 + i)/k for i = 0..k-1, empty
coupled denominator, axis denominators c1 and c2, at arguments
(-k)^k u x and (-k)^k u y (plain u x, u y when k = 0, where the sequences
are empty).

For k >= 1 the check is restricted to terminating t (nonnegative integers):
the inner series is then a polynomial in u and the Gauss rule integrates it
exactly.  For non-integer t the inner series diverges as u grows, so the
printed representation is formal and is not checked numerically.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .catalog import ParamPoint, RelationReport, VerificationMode, point_to_dict
from .errors import ConstraintError, QuadratureConvergenceError, RegimeError
from .kernels import gamma
from .series import (EVAL_POLICY, F41Params, KdfParams, TruncationPolicy,
                     eval_f41, eval_kdf)

_MAX_ORDER = 256
_MOMENT_SPOTS = (1, 2, 5, 10)


@dataclass(frozen=True)
class LaguerreRule:
    """Nodes and weights for integral of e^(-u) f(u) over (0, inf)."""

    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def __post_init__(self):
        nodes, weights = self.nodes, self.weights
        if len(nodes) != self.order or len(weights) != self.order:
            raise QuadratureConvergenceError("rule arrays do not match order")
        if not (np.all(nodes > 0) and np.all(np.diff(nodes) > 0)):
            raise QuadratureConvergenceError("nodes must be positive and "
                                             "strictly increasing")
        if abs(float(weights.sum()) - 1.0) > 1e-14:
            raise QuadratureConvergenceError("weights must sum to 1 (the "
                                             "total mass of e^(-u))")
        for j in _MOMENT_SPOTS:
            if j > 2 * self.order - 1:
                continue
            moment = float(weights @ nodes ** j)
            if abs(moment - math.factorial(j)) > 1e-12 * math.factorial(j):
                raise QuadratureConvergenceError(
                    f"moment {j} off by more than 1e-12 relative")


def _christoffel_weights(nodes: np.ndarray) -> np.ndarray:
    """w_i = 1 / sum_j p_j(u_i)^2 over the orthonormal Laguerre polynomials.

    This is the same quantity as the squared first eigenvector components of
    the Jacobi matrix, but the recurrence keeps tiny edge weights accurate in
    log scale (dense eigenvectors drown them in roundoff, and the integrand
    checks multiply them by exponentially growing inner values).
    """
    n = len(nodes)
    x = nodes.astype(np.float64)
    p_prev = np.ones_like(x)
    p_cur = x - 1.0
    log_scale = np.zeros_like(x)
    with np.errstate(divide="ignore"):
        log_sum = 2.0 * (np.log(np.abs(p_prev)) + log_scale)
        for j in range(1, n):
            log_sum = np.logaddexp(
                log_sum, 2.0 * (np.log(np.abs(p_cur)) + log_scale))
            if j == n - 1:
                break
            p_next = ((x - (2.0 * j + 1.0)) * p_cur - j * p_prev) / (j + 1.0)
            p_prev, p_cur = p_cur, p_next
            mag = np.maximum(np.abs(p_prev), np.abs(p_cur))
            big = mag > 1e120
            if big.any():
                factor = np.where(big, mag, 1.0)
                p_prev = p_prev / factor
                p_cur = p_cur / factor
                log_scale = log_scale + np.where(big, np.log(factor), 0.0)
    return np.exp(-log_sum)


def laguerre_rule(order: int) -> LaguerreRule:
    """Golub-Welsch construction from the Laguerre recurrence coefficients."""
    if not isinstance(order, int) or isinstance(order, bool) or \
            not 2 <= order <= _MAX_ORDER:
        raise ConstraintError(f"order must be an integer in [2, {_MAX_ORDER}], "
                              f"got {order!r}")
    j = np.arange(order, dtype=np.float64)
    jacobi = np.diag(2.0 * j + 1.0) + np.diag(j[1:], 1) + np.diag(j[1:], -1)
    try:
        nodes = np.linalg.eigvalsh(jacobi)
    except np.linalg.LinAlgError as exc:
        raise QuadratureConvergenceError(
            f"eigen-iteration failed at order {order}: {exc}") from exc
    weights = _christoffel_weights(nodes)
    total = float(weights.sum())
    if abs(total - 1.0) > 1e-12:
        raise QuadratureConvergenceError(
            f"weight mass {total} too far from 1 at order {order}")
    # the exact weights sum to the zeroth moment 1; remove the summation drift
    weights = weights / total
    return LaguerreRule(nodes=nodes, weights=weights, order=order)


class RepKind(str, Enum):
    REP_A = "rep_a"   # Gamma integral taken in a; inner numerator carries b
    REP_B = "rep_b"   # Gamma integral taken in b; inner numerator carries a


@dataclass(frozen=True)
class IntegralRepSpec:
    """Which representation to check, at which equal-step parameters."""

    which: RepKind
    k: int
    params: F41Params

    def __post_init__(self):
        object.__setattr__(self, "which", RepKind(self.which))
        p = self.params
        if p.k1 != self.k or p.k2 != self.k:
            raise ConstraintError("the representations assume equal steps: "
                                  f"need k1 = k2 = {self.k}, got "
                                  f"({p.k1}, {p.k2})")
        if self.k < 0:
            raise ConstraintError(f"k must be nonnegative, got {self.k}")
        if self.which is RepKind.REP_A and p.a.real <= 0:
            raise ConstraintError("rep_a needs Re(a) > 0 for the Gamma "
                                  "integral to converge")
        if self.which is RepKind.REP_B and p.b.real <= 0:
            raise ConstraintError("rep_b needs Re(b) > 0 for the Gamma "
                                  "integral to converge")


def _require_terminating(spec: IntegralRepSpec) -> None:
    p = spec.params
    for name in ("t1", "t2"):
        t = getattr(p, name)
        if abs(t.imag) > 1e-12 or abs(t.real - round(t.real)) > 1e-12 or \
                round(t.real) < 0:
            raise RegimeError(
                f"k = {spec.k} >= 1 needs nonnegative integer {name} (the "
                f"inner series must terminate), got {t}")


def integrand_kdf(spec: IntegralRepSpec, u: float,
                  pol: TruncationPolicy = EVAL_POLICY) -> complex:
    """Inner Kampe de Feriet value at integration variable u."""
    p = spec.params
    coupled = p.b if spec.which is RepKind.REP_A else p.a
    if spec.k >= 1:
        _require_terminating(spec)
        B = tuple((-p.t1 + i) / spec.k for i in range(spec.k))
        C = tuple((-p.t2 + i) / spec.k for i in range(spec.k))
        arg = (-spec.k) ** spec.k * u
    else:
        B = C = ()
        arg = u
    kdf = KdfParams(A=(coupled,), B=B, C=C, D=(), E=(p.c1,), F=(p.c2,),
                    x=arg * p.x, y=arg * p.y)
    return eval_kdf(kdf, pol).value


def integral_rep_check(spec: IntegralRepSpec, rule: LaguerreRule,
                       pol: TruncationPolicy = EVAL_POLICY,
                       tolerance: float = 1e-8) -> RelationReport:
    """Quadrature value of the representation against the direct series."""
    p = spec.params
    if spec.k >= 1:
        _require_terminating(spec)
        # inner polynomial degree in u, then the u^(a-1) Gamma-piece on top
        degree = round(p.t1.real) // spec.k + round(p.t2.real) // spec.k
        if rule.order < degree // 2 + 1:
            raise ConstraintError(
                f"order {rule.order} cannot integrate the degree-{degree} "
                "terminating integrand exactly")
    exponent = p.a if spec.which is RepKind.REP_A else p.b
    contribs = np.empty(rule.order, dtype=np.complex128)
    for i, (u, w) in enumerate(zip(rule.nodes, rule.weights)):
        power = cmath.exp((exponent - 1.0) * math.log(float(u)))
        contribs[i] = w * power * integrand_kdf(spec, float(u), pol)
    quad = complex(contribs.sum() / gamma(exponent))
    direct = eval_f41(p, pol).value

    max_abs = abs(quad - direct)
    scale = max(abs(quad), abs(direct), float(np.abs(contribs).max()))
    rel = max_abs / max(scale, 1e-300)
    return RelationReport(
        identity_id=f"F41.intrep.{spec.which.value}",
        params={**point_to_dict(ParamPoint(p)), "order": rule.order,
                "quadrature_value": [quad.real, quad.imag],
                "series_value": [direct.real, direct.imag]},
        mode=VerificationMode.INTEGRAL,
        max_abs_residual=max_abs,
        scale=scale,
        rel_residual=rel,
        passed=bool(rel <= tolerance),
        cells_checked=rule.order,
        tolerance=tolerance,
    )
