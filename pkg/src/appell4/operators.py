"""Discrete and differential operator calculus for the series engine.

Primitives: forward difference delta_t f = f(t+1) - f(t), backward shift
rho_t f = f(t-1), their combination big_theta_t f = t * (f(t) - f(t-1)),
the Euler operators theta_x = x d/dx and phi_y = y d/dy, parameter shifts,
scalar multiples, and multiplication by x or y.  The scaled primitives
(1/k) big_theta exist separately so that k = 0 callers never build them.

Each primitive has two interchangeable realizations: numeric (re-evaluation
at shifted arguments, finite differences for theta/phi) and exact termwise
action on coefficient grids.  Termwise t-operator weights hold on pure
series instances, where big_theta_t1 acts diagonally with eigenvalue m*k1
on the factor (-1)^{m k1} (-t1)_{m k1}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Tuple, Union

import numpy as np

from .errors import InvalidOperatorError, MarginError, PoleError
from .series import (CoefficientGrid, F41Params, F42Params, GridProvenance,
                     _grid_coeffs)


class OpKind(str, Enum):
    DELTA_T1 = "delta_t1"
    DELTA_T2 = "delta_t2"
    DELTA_T = "delta_t"
    RHO_T1 = "rho_t1"
    RHO_T2 = "rho_t2"
    RHO_T = "rho_t"
    BIG_THETA_T1 = "big_theta_t1"
    BIG_THETA_T2 = "big_theta_t2"
    BIG_THETA_T = "big_theta_t"
    SCALED_BIG_THETA_T1 = "scaled_big_theta_t1"
    SCALED_BIG_THETA_T2 = "scaled_big_theta_t2"
    SCALED_BIG_THETA_T = "scaled_big_theta_t"
    THETA_X = "theta_x"
    PHI_Y = "phi_y"
    SHIFT_PARAM = "shift_param"
    SCALE = "scale"
    MUL_X = "mul_x"
    MUL_Y = "mul_y"


@dataclass(frozen=True)
class PrimitiveOp:
    kind: OpKind
    name: str = ""
    offset: int = 0
    constant: complex = 1.0

    def __post_init__(self):
        if self.kind is OpKind.SHIFT_PARAM:
            if not self.name:
                raise InvalidOperatorError("shift_param needs a field name")
            if not isinstance(self.offset, int):
                raise InvalidOperatorError("shift offsets must be integers")
        if self.kind is OpKind.SCALE:
            c = complex(self.constant)
            if not (np.isfinite(c.real) and np.isfinite(c.imag)):
                raise InvalidOperatorError("scale constants must be finite")
            object.__setattr__(self, "constant", c)


delta_t1 = PrimitiveOp(OpKind.DELTA_T1)
delta_t2 = PrimitiveOp(OpKind.DELTA_T2)
delta_t = PrimitiveOp(OpKind.DELTA_T)
rho_t1 = PrimitiveOp(OpKind.RHO_T1)
rho_t2 = PrimitiveOp(OpKind.RHO_T2)
rho_t = PrimitiveOp(OpKind.RHO_T)
big_theta_t1 = PrimitiveOp(OpKind.BIG_THETA_T1)
big_theta_t2 = PrimitiveOp(OpKind.BIG_THETA_T2)
big_theta_t = PrimitiveOp(OpKind.BIG_THETA_T)
scaled_big_theta_t1 = PrimitiveOp(OpKind.SCALED_BIG_THETA_T1)
scaled_big_theta_t2 = PrimitiveOp(OpKind.SCALED_BIG_THETA_T2)
scaled_big_theta_t = PrimitiveOp(OpKind.SCALED_BIG_THETA_T)
theta_x = PrimitiveOp(OpKind.THETA_X)
phi_y = PrimitiveOp(OpKind.PHI_Y)
mul_x = PrimitiveOp(OpKind.MUL_X)
mul_y = PrimitiveOp(OpKind.MUL_Y)


def shift_param(name: str, offset: int) -> PrimitiveOp:
    return PrimitiveOp(OpKind.SHIFT_PARAM, name=name, offset=offset)


def scale(constant) -> PrimitiveOp:
    return PrimitiveOp(OpKind.SCALE, constant=constant)


@dataclass(frozen=True)
class OperatorExpr:
    """Sum of scalar-weighted ordered products of primitives.

    terms = ((coeff, (op, ...)), ...); factor tuples apply right-to-left,
    so (A, B) means A after B.  No simplification is performed: the
    t-operators do not commute with parameter-dependent coefficients.
    """

    terms: Tuple[Tuple[complex, Tuple[PrimitiveOp, ...]], ...]

    @staticmethod
    def of(*factors: PrimitiveOp, coeff=1.0) -> "OperatorExpr":
        return OperatorExpr(((complex(coeff), tuple(factors)),))

    def __add__(self, other: "OperatorExpr") -> "OperatorExpr":
        return OperatorExpr(self.terms + other.terms)

    def __sub__(self, other: "OperatorExpr") -> "OperatorExpr":
        return self + (-1.0) * other

    def __rmul__(self, c) -> "OperatorExpr":
        return OperatorExpr(tuple((complex(c) * co, fa) for co, fa in self.terms))

    def __matmul__(self, other: "OperatorExpr") -> "OperatorExpr":
        # operator product: right factor acts first
        return OperatorExpr(tuple((ca * cb, fa + fb)
                                  for ca, fa in self.terms
                                  for cb, fb in other.terms))

    @property
    def depth(self) -> int:
        return max((len(fa) for _, fa in self.terms), default=0)


identity_expr = OperatorExpr.of()


# ---------------------------------------------------------------------------
# numeric realization
# ---------------------------------------------------------------------------

_T_FIELD = {
    OpKind.DELTA_T1: "t1", OpKind.RHO_T1: "t1", OpKind.BIG_THETA_T1: "t1",
    OpKind.SCALED_BIG_THETA_T1: "t1",
    OpKind.DELTA_T2: "t2", OpKind.RHO_T2: "t2", OpKind.BIG_THETA_T2: "t2",
    OpKind.SCALED_BIG_THETA_T2: "t2",
    OpKind.DELTA_T: "t", OpKind.RHO_T: "t", OpKind.BIG_THETA_T: "t",
    OpKind.SCALED_BIG_THETA_T: "t",
}

_K_FIELD = {
    OpKind.SCALED_BIG_THETA_T1: "k1", OpKind.DELTA_T1: "k1",
    OpKind.SCALED_BIG_THETA_T2: "k2", OpKind.DELTA_T2: "k2",
    OpKind.SCALED_BIG_THETA_T: "k", OpKind.DELTA_T: "k",
}


def _scaled_divisor(op: PrimitiveOp, p) -> int:
    k = int(getattr(p, _K_FIELD[op.kind]))
    if k < 1:
        raise InvalidOperatorError(
            f"{op.kind.value} is undefined at k = {k}; needs k >= 1")
    return k


def apply_numeric(op: PrimitiveOp, f: Callable[[complex], complex], p) -> complex:
    """Apply one primitive numerically.

    f is a closure over the single params field the primitive acts on
    (t1/t2/t for the difference operators, x for theta_x, y for phi_y,
    op.name for shift_param); p supplies the base field values.  scale and
    mul evaluate f at the unshifted base (x, or y for mul_y).
    """
    kind = op.kind
    if kind in (OpKind.DELTA_T1, OpKind.DELTA_T2, OpKind.DELTA_T):
        t = getattr(p, _T_FIELD[kind])
        return f(t + 1) - f(t)
    if kind in (OpKind.RHO_T1, OpKind.RHO_T2, OpKind.RHO_T):
        return f(getattr(p, _T_FIELD[kind]) - 1)
    if kind in (OpKind.BIG_THETA_T1, OpKind.BIG_THETA_T2, OpKind.BIG_THETA_T):
        t = getattr(p, _T_FIELD[kind])
        return t * (f(t) - f(t - 1))
    if kind in (OpKind.SCALED_BIG_THETA_T1, OpKind.SCALED_BIG_THETA_T2,
                OpKind.SCALED_BIG_THETA_T):
        t = getattr(p, _T_FIELD[kind])
        return t * (f(t) - f(t - 1)) / _scaled_divisor(op, p)
    if kind is OpKind.THETA_X:
        x = p.x
        h = 1e-5 * max(1.0, abs(x))
        return x * (f(x + h) - f(x - h)) / (2 * h)
    if kind is OpKind.PHI_Y:
        y = p.y
        h = 1e-5 * max(1.0, abs(y))
        return y * (f(y + h) - f(y - h)) / (2 * h)
    if kind is OpKind.SHIFT_PARAM:
        return f(getattr(p, op.name) + op.offset)
    if kind is OpKind.SCALE:
        return op.constant * f(p.x)
    if kind is OpKind.MUL_X:
        return p.x * f(p.x)
    if kind is OpKind.MUL_Y:
        return p.y * f(p.y)
    raise InvalidOperatorError(f"unknown primitive kind {kind!r}")


# ---------------------------------------------------------------------------
# termwise realization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShiftDescriptor:
    """Parameter and index shifts accompanying a termwise weight."""

    params: Tuple[Tuple[str, int], ...] = ()
    dm: int = 0
    dn: int = 0


_NO_SHIFT = ShiftDescriptor()


def shifted_params(p, desc: ShiftDescriptor):
    if not desc.params:
        return p
    return p.replace(**{name: getattr(p, name) + off
                        for name, off in desc.params})


def termwise_weight(op: PrimitiveOp, m: int, n: int, p):
    """(diagonal weight, shift descriptor) of a primitive on term (m, n) of
    a pure series instance; delta is diagonal only at k = 1."""
    kind = op.kind
    if kind is OpKind.THETA_X:
        return complex(m), _NO_SHIFT
    if kind is OpKind.PHI_Y:
        return complex(n), _NO_SHIFT
    if kind is OpKind.BIG_THETA_T1:
        return complex(m * p.k1), _NO_SHIFT
    if kind is OpKind.BIG_THETA_T2:
        return complex(n * p.k2), _NO_SHIFT
    if kind is OpKind.BIG_THETA_T:
        return complex((m + n) * p.k), _NO_SHIFT
    if kind is OpKind.SCALED_BIG_THETA_T1:
        _scaled_divisor(op, p)
        return complex(m), _NO_SHIFT
    if kind is OpKind.SCALED_BIG_THETA_T2:
        _scaled_divisor(op, p)
        return complex(n), _NO_SHIFT
    if kind is OpKind.SCALED_BIG_THETA_T:
        _scaled_divisor(op, p)
        return complex(m + n), _NO_SHIFT
    if kind is OpKind.RHO_T1:
        return 1.0 + 0j, ShiftDescriptor(params=(("t1", -1),))
    if kind is OpKind.RHO_T2:
        return 1.0 + 0j, ShiftDescriptor(params=(("t2", -1),))
    if kind is OpKind.RHO_T:
        return 1.0 + 0j, ShiftDescriptor(params=(("t", -1),))
    if kind in (OpKind.DELTA_T1, OpKind.DELTA_T2, OpKind.DELTA_T):
        k = int(getattr(p, _K_FIELD[kind]))
        if k != 1:
            raise InvalidOperatorError(
                f"{kind.value} has no diagonal termwise action at k = {k}")
        t = getattr(p, _T_FIELD[kind])
        idx = {OpKind.DELTA_T1: m, OpKind.DELTA_T2: n,
               OpKind.DELTA_T: m + n}[kind]
        den = t - idx + 1
        if den == 0:
            raise PoleError(f"termwise {kind.value} weight pole at "
                            f"index {idx}, t = {t}")
        return idx / den, _NO_SHIFT
    if kind is OpKind.SHIFT_PARAM:
        return 1.0 + 0j, ShiftDescriptor(params=((op.name, op.offset),))
    if kind is OpKind.SCALE:
        return complex(op.constant), _NO_SHIFT
    if kind is OpKind.MUL_X:
        return 1.0 + 0j, ShiftDescriptor(dm=1)
    if kind is OpKind.MUL_Y:
        return 1.0 + 0j, ShiftDescriptor(dn=1)
    raise InvalidOperatorError(f"unknown primitive kind {kind!r}")


# ---------------------------------------------------------------------------
# exact grid application
# ---------------------------------------------------------------------------

def _index_grids(M: int, N: int):
    return (np.arange(M + 1, dtype=np.complex128)[:, None],
            np.arange(N + 1, dtype=np.complex128)[None, :])


def apply_ops(factors: Tuple[PrimitiveOp, ...], p, M: int, N: int) -> np.ndarray:
    """Exact coefficient grid of the factor product (right factor first)
    applied to the series instance p, on the rectangle [0..M] x [0..N].

    Recursive: parameter-shifting primitives re-enter with shifted params,
    and each delta/big_theta doubles the evaluations beneath it.  Grid
    construction is cached, so repeated shifted instances are cheap.
    """
    if not factors:
        return np.asarray(_grid_coeffs(p, M, N))
    op, rest = factors[0], factors[1:]
    kind = op.kind
    if kind is OpKind.SCALE:
        return op.constant * apply_ops(rest, p, M, N)
    if kind is OpKind.THETA_X:
        ms, _ = _index_grids(M, N)
        return ms * apply_ops(rest, p, M, N)
    if kind is OpKind.PHI_Y:
        _, ns = _index_grids(M, N)
        return ns * apply_ops(rest, p, M, N)
    if kind is OpKind.MUL_X:
        inner = apply_ops(rest, p, M, N)
        out = np.zeros_like(inner)
        out[1:, :] = inner[:-1, :]
        return out
    if kind is OpKind.MUL_Y:
        inner = apply_ops(rest, p, M, N)
        out = np.zeros_like(inner)
        out[:, 1:] = inner[:, :-1]
        return out
    if kind is OpKind.SHIFT_PARAM:
        q = p.replace(**{op.name: getattr(p, op.name) + op.offset})
        return apply_ops(rest, q, M, N)
    if kind in (OpKind.RHO_T1, OpKind.RHO_T2, OpKind.RHO_T):
        fld = _T_FIELD[kind]
        q = p.replace(**{fld: getattr(p, fld) - 1})
        return apply_ops(rest, q, M, N)
    if kind in (OpKind.DELTA_T1, OpKind.DELTA_T2, OpKind.DELTA_T):
        fld = _T_FIELD[kind]
        up = p.replace(**{fld: getattr(p, fld) + 1})
        return apply_ops(rest, up, M, N) - apply_ops(rest, p, M, N)
    if kind in (OpKind.BIG_THETA_T1, OpKind.BIG_THETA_T2, OpKind.BIG_THETA_T,
                OpKind.SCALED_BIG_THETA_T1, OpKind.SCALED_BIG_THETA_T2,
                OpKind.SCALED_BIG_THETA_T):
        fld = _T_FIELD[kind]
        t = getattr(p, fld)
        down = p.replace(**{fld: t - 1})
        out = t * (apply_ops(rest, p, M, N) - apply_ops(rest, down, M, N))
        if kind in (OpKind.SCALED_BIG_THETA_T1, OpKind.SCALED_BIG_THETA_T2,
                    OpKind.SCALED_BIG_THETA_T):
            out = out / _scaled_divisor(op, p)
        return out
    raise InvalidOperatorError(f"unknown primitive kind {kind!r}")


def apply_expr_to_params(e: OperatorExpr, p, M: int, N: int) -> np.ndarray:
    acc = np.zeros((M + 1, N + 1), dtype=np.complex128)
    for coeff, factors in e.terms:
        acc += coeff * apply_ops(factors, p, M, N)
    return acc


def _index_shift_requirement(e: OperatorExpr):
    dm = dn = 0
    for _, factors in e.terms:
        dm = max(dm, sum(1 for f in factors if f.kind is OpKind.MUL_X))
        dn = max(dn, sum(1 for f in factors if f.kind is OpKind.MUL_Y))
    return dm, dn


def apply_expr_grid(e: OperatorExpr, g: CoefficientGrid) -> CoefficientGrid:
    """Apply an operator expression exactly to a coefficient grid.

    Parameter shifts regenerate the shifted-parameter grid; index shifts
    fill from lower rows, so all output cells on the same rectangle stay
    exact.  Grids derived here carry (expression, base params) provenance
    so further applications can keep regenerating.
    """
    dm, dn = _index_shift_requirement(e)
    if dm > g.max_m or dn > g.max_n:
        raise MarginError(f"rectangle {g.coeffs.shape} cannot absorb index "
                          f"shifts ({dm}, {dn})")
    prov = g.provenance
    if prov.kind == "derived":
        base_expr, base_params = prov.params
        effective = e @ base_expr
    else:
        base_expr, base_params = None, prov.params
        effective = e
    coeffs = apply_expr_to_params(effective, base_params, g.max_m, g.max_n)
    coeffs.flags.writeable = False
    return CoefficientGrid(coeffs, GridProvenance(
        "derived", (effective, base_params), g.max_m, g.max_n))
