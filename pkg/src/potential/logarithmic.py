"""
Logarithmic double-well potential and its Moreau-Yosida regularization.

    f(r) = f1(r) + f2(r),
    f1(r) = c1 ((1 + r) ln(1 + r) + (1 - r) ln(1 - r)),   f2(r) = -c2 r^2.

The resolvent R_eps = (I + eps f1')^{-1} is computed in the variable
t = atanh(r): there f1'(tanh t) = 2 c1 t and the scalar equation
tanh(t) + 2 eps c1 t = s stays well conditioned even when r rounds to +-1.
All functions are vectorized over numpy arrays and return floats for
scalar input.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.special import xlogy

logger = logging.getLogger("vch_control.potential")

LN2 = float(np.log(2.0))
RESOLVENT_RTOL = 1e-12
RESOLVENT_MAX_ITER = 200
RESOLVENT_BOUND = 1.0 - 1e-15


class PotentialDomainError(ValueError):
    """Raised when a derivative of f1 is requested outside (-1, 1)."""


class ResolventConvergenceError(RuntimeError):
    """Raised when the safeguarded resolvent iteration does not converge."""


class PotentialParams(BaseModel):
    """Coefficients of the logarithmic potential; nonconvex iff c2 > c1."""

    model_config = ConfigDict(frozen=True)

    c1: float = Field(default=1.0, ge=0.0, description="Entropy weight")
    c2: float = Field(default=2.5, ge=0.0, description="Concave (mixing) weight")

    @model_validator(mode="after")
    def _validate_nonconvex(self) -> "PotentialParams":
        if not self.c2 > self.c1:
            raise ValueError(f"potential must be nonconvex: need c2 > c1, got c1={self.c1}, c2={self.c2}")
        return self


def _out(values: np.ndarray, like: ArrayLike):
    return float(values) if np.ndim(like) == 0 else values


def _check_eps(eps: float) -> None:
    if not 0.0 < eps <= 1.0:
        raise ValueError(f"eps must lie in (0, 1], got {eps}")


def _strict_interior(r: ArrayLike) -> np.ndarray:
    arr = np.asarray(r, dtype=np.float64)
    if np.any(~(np.abs(arr) < 1.0)):
        raise PotentialDomainError(f"argument must lie in (-1, 1); max |r| = {np.max(np.abs(arr)):.17g}")
    return arr


def _log_cosh(t: np.ndarray) -> np.ndarray:
    a = np.abs(t)
    return a + np.log1p(np.exp(-2.0 * a)) - LN2


# =============================================================================
# Exact potential
# =============================================================================

def f1_value(r: ArrayLike, p: PotentialParams):
    """Convex part; +inf outside [-1, 1], 2 c1 ln 2 at r = +-1."""
    arr = np.asarray(r, dtype=np.float64)
    out = np.full(arr.shape, np.inf)
    inside = np.abs(arr) <= 1.0
    ri = arr[inside]
    out[inside] = p.c1 * (xlogy(1.0 + ri, 1.0 + ri) + xlogy(1.0 - ri, 1.0 - ri))
    return _out(out, r)


def f2_value(r: ArrayLike, p: PotentialParams):
    arr = np.asarray(r, dtype=np.float64)
    return _out(-p.c2 * arr**2, r)


def f_value(r: ArrayLike, p: PotentialParams):
    """f = f1 + f2 as an extended real: +inf outside [-1, 1]."""
    arr = np.asarray(r, dtype=np.float64)
    out = np.asarray(f1_value(arr, p), dtype=np.float64) + np.where(np.abs(arr) <= 1.0, f2_value(arr, p), 0.0)
    return _out(out, r)


def f1_deriv(r: ArrayLike, order: int, p: PotentialParams):
    arr = _strict_interior(r)
    one_minus = 1.0 - arr**2
    if order == 1:
        out = 2.0 * p.c1 * np.arctanh(arr)
    elif order == 2:
        out = 2.0 * p.c1 / one_minus
    elif order == 3:
        out = 4.0 * p.c1 * arr / one_minus**2
    else:
        raise ValueError(f"derivative order must be 1, 2 or 3, got {order}")
    return _out(out, r)


def f2_deriv(r: ArrayLike, order: int, p: PotentialParams):
    arr = np.asarray(r, dtype=np.float64)
    if order == 1:
        out = -2.0 * p.c2 * arr
    elif order == 2:
        out = np.full(arr.shape, -2.0 * p.c2)
    elif order == 3:
        out = np.zeros(arr.shape)
    else:
        raise ValueError(f"derivative order must be 1, 2 or 3, got {order}")
    return _out(out, r)


def f_deriv(r: ArrayLike, order: int, p: PotentialParams):
    """Analytic derivative of f of order 1, 2 or 3 on (-1, 1)."""
    arr = _strict_interior(r)
    out = np.asarray(f1_deriv(arr, order, p)) + np.asarray(f2_deriv(arr, order, p))
    return _out(out, r)


def f1_deriv_inverse(y: ArrayLike, p: PotentialParams):
    """Inverse of f1' on the reals: tanh(y / (2 c1))."""
    arr = np.asarray(y, dtype=np.float64)
    if p.c1 == 0.0:
        out = np.sign(arr)
    else:
        out = np.tanh(arr / (2.0 * p.c1))
    return _out(out, y)


# =============================================================================
# Moreau-Yosida regularization
# =============================================================================

def _resolvent_t(s: np.ndarray, eps: float, p: PotentialParams) -> np.ndarray:
    """Solve tanh(t) + a t = s for t, a = 2 eps c1 > 0 (safeguarded Newton)."""
    a = 2.0 * eps * p.c1
    lo = (s - 1.0) / a
    hi = (s + 1.0) / a
    t = np.clip(s / (1.0 + a), lo, hi)
    tol = RESOLVENT_RTOL * (1.0 + np.abs(s))

    for _ in range(RESOLVENT_MAX_ITER):
        g = np.tanh(t) + a * t - s
        done = np.abs(g) <= tol
        if np.all(done):
            return t
        hi = np.where(g > 0.0, t, hi)
        lo = np.where(g < 0.0, t, lo)
        with np.errstate(over="ignore"):
            slope = 1.0 / np.cosh(t) ** 2 + a
        trial = t - g / slope
        outside = (trial <= lo) | (trial >= hi)
        trial = np.where(outside, 0.5 * (lo + hi), trial)
        t = np.where(done, t, trial)

    raise ResolventConvergenceError(
        f"resolvent did not converge in {RESOLVENT_MAX_ITER} iterations (eps={eps}, c1={p.c1})"
    )


def resolvent(s: ArrayLike, eps: float, p: PotentialParams):
    """
    Unique r in (-1, 1) with r + eps f1'(r) = s.

    tanh saturates to +-1 for large |s|; results are kept within +-RESOLVENT_BOUND.
    """
    _check_eps(eps)
    arr = np.asarray(s, dtype=np.float64)
    if p.c1 == 0.0:
        return _out(np.clip(arr, -1.0, 1.0), s)
    return _out(np.clip(np.tanh(_resolvent_t(arr, eps, p)), -RESOLVENT_BOUND, RESOLVENT_BOUND), s)


def yosida_deriv(r: ArrayLike, eps: float, p: PotentialParams):
    """f1_eps'(r) = (r - R_eps(r)) / eps, Lipschitz with constant 1/eps."""
    _check_eps(eps)
    arr = np.asarray(r, dtype=np.float64)
    if p.c1 == 0.0:
        return _out((arr - np.clip(arr, -1.0, 1.0)) / eps, r)
    # At the resolvent, (r - tanh t)/eps = 2 c1 t up to the solve tolerance.
    return _out(2.0 * p.c1 * _resolvent_t(arr, eps, p), r)


def yosida_second_deriv(r: ArrayLike, eps: float, p: PotentialParams):
    """Derivative of yosida_deriv: 2 c1 / (sech^2 t + 2 eps c1), bounded by 1/eps."""
    _check_eps(eps)
    arr = np.asarray(r, dtype=np.float64)
    if p.c1 == 0.0:
        return _out(np.where(np.abs(arr) > 1.0, 1.0 / eps, 0.0), r)
    t = _resolvent_t(arr, eps, p)
    with np.errstate(over="ignore"):
        sech2 = 1.0 / np.cosh(t) ** 2
    return _out(2.0 * p.c1 / (sech2 + 2.0 * eps * p.c1), r)


def yosida_value(r: ArrayLike, eps: float, p: PotentialParams):
    """Moreau envelope (1/2eps)|r - R|^2 + f1(R), finite for every real r."""
    _check_eps(eps)
    arr = np.asarray(r, dtype=np.float64)
    if p.c1 == 0.0:
        return _out((arr - np.clip(arr, -1.0, 1.0)) ** 2 / (2.0 * eps), r)
    t = _resolvent_t(arr, eps, p)
    big_r = np.tanh(t)
    # f1(tanh t) = c1 (2 t tanh t - 2 ln cosh t)
    f1_at_r = p.c1 * (2.0 * t * big_r - 2.0 * _log_cosh(t))
    return _out((arr - big_r) ** 2 / (2.0 * eps) + f1_at_r, r)


# =============================================================================
# Potential model used by the time stepper
# =============================================================================

@dataclass(frozen=True)
class LogarithmicPotential:
    """
    f' and f'' as used by Newton on the state step.

    With ``eps`` set, f1 is replaced by its Moreau-Yosida envelope so the
    derivatives are defined on all of R (numerical fallback only).
    """

    params: PotentialParams
    eps: Optional[float] = None

    @property
    def regularized(self) -> bool:
        return self.eps is not None

    def with_eps(self, eps: Optional[float]) -> "LogarithmicPotential":
        return LogarithmicPotential(params=self.params, eps=eps)

    def d1(self, r: np.ndarray) -> np.ndarray:
        if self.eps is None:
            return f_deriv(r, 1, self.params)
        return yosida_deriv(r, self.eps, self.params) + f2_deriv(r, 1, self.params)

    def d2(self, r: np.ndarray) -> np.ndarray:
        if self.eps is None:
            return f_deriv(r, 2, self.params)
        return yosida_second_deriv(r, self.eps, self.params) + f2_deriv(r, 2, self.params)

    def d3(self, r: np.ndarray) -> np.ndarray:
        if self.eps is not None:
            raise ValueError("third derivative is only used with the exact potential")
        return f_deriv(r, 3, self.params)
