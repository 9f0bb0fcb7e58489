"""Low-level numerical utilities: gamma, Gaussian quadrature, trapezoid, simplex search.

Everything here is pure and reentrant; no state is shared between calls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import minimize

LEGENDRE_01 = "legendre01"
LAGUERRE = "laguerre"

_MAX_RULE_SIZE = 256


def gamma_real(x: float) -> float:
    """Gamma function for real positive arguments.

    Raises ValueError for x <= 0; negative arguments are never needed here
    and keeping the domain tight catches sign bugs upstream.
    """
    if not x > 0.0:
        raise ValueError(f"gamma_real requires x > 0, got {x}")
    return math.gamma(x)


@dataclass(frozen=True)
class QuadratureRule:
    """Gaussian quadrature rule.

    For ``laguerre`` the weights integrate against e^{-y} on [0, inf);
    ``mod_weights`` are the e^{+y}-compensated weights w_i * e^{y_i} used to
    integrate a raw function f0 directly (stable for any n <= 256, whereas the
    raw weights underflow in double precision around n ~ 190).
    """

    kind: str
    nodes: np.ndarray
    weights: np.ndarray
    mod_weights: np.ndarray | None = field(default=None)

    def __post_init__(self):
        if self.kind not in (LEGENDRE_01, LAGUERRE):
            raise ValueError(f"unknown rule kind {self.kind!r}")
        if np.any(np.diff(self.nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")

    @property
    def n(self) -> int:
        return self.nodes.size


def build_rule(kind: str, n: int) -> QuadratureRule:
    """Build an n-point Gauss-Legendre (on [0,1]) or Gauss-Laguerre rule.

    Nodes come from the symmetric tridiagonal Jacobi matrix (Golub-Welsch).
    Laguerre weights are recovered from the scaled functions
    l_k(x) = e^{-x/2} L_k(x), which keeps w_i e^{x_i} representable where the
    eigenvector route loses the small tail components.
    """
    if not 1 <= n <= _MAX_RULE_SIZE:
        raise ValueError(f"rule size must be in [1, {_MAX_RULE_SIZE}], got {n}")
    if kind == LEGENDRE_01:
        if n == 1:
            return QuadratureRule(kind, np.array([0.5]), np.array([1.0]))
        k = np.arange(1, n, dtype=float)
        off = k / np.sqrt(4.0 * k * k - 1.0)
        x, v = eigh_tridiagonal(np.zeros(n), off)
        w = 2.0 * v[0, :] ** 2
        # map [-1,1] -> [0,1]
        return QuadratureRule(kind, (x + 1.0) / 2.0, w / 2.0)
    if kind == LAGUERRE:
        k = np.arange(n, dtype=float)
        if n == 1:
            x = np.array([1.0])
        else:
            x = eigh_tridiagonal(2.0 * k + 1.0, np.arange(1, n, dtype=float),
                                 eigvals_only=True)
        ex = np.exp(-x / 2.0)
        l_prev = ex.copy()            # l_0
        l_cur = (1.0 - x) * ex        # l_1
        for m in range(1, n + 1):
            l_prev, l_cur = l_cur, ((2 * m + 1 - x) * l_cur - m * l_prev) / (m + 1)
        mod_w = x / ((n + 1) * l_cur) ** 2   # w_i e^{x_i}
        w = mod_w * np.exp(-x)
        return QuadratureRule(kind, x, w, mod_w)
    raise ValueError(f"unknown rule kind {kind!r}")


def trapezoid_complex(values: Sequence[complex] | np.ndarray, step: float) -> complex:
    """End-half-weighted trapezoid sum of uniformly spaced complex samples."""
    v = np.asarray(values)
    if v.shape[-1] < 2:
        raise ValueError("need at least 2 samples")
    return step * (v[..., 1:-1].sum(axis=-1) + 0.5 * (v[..., 0] + v[..., -1]))


@dataclass(frozen=True)
class SimplexConfig:
    """Termination settings for the Nelder-Mead search."""

    f_tol: float = 1e-8
    x_tol: float = 1e-8
    max_iter: int = 400
    max_fev: int = 800

    def __post_init__(self):
        if min(self.f_tol, self.x_tol, self.max_iter, self.max_fev) <= 0:
            raise ValueError("all simplex settings must be positive")


class NelderMeadResult(NamedTuple):
    x: np.ndarray
    fun: float
    n_iter: int
    converged: bool


def _initial_simplex(x0: np.ndarray) -> np.ndarray:
    # second vertex per coordinate: 5% bump, or absolute 0.00025 near zero
    n = x0.size
    simplex = np.tile(x0, (n + 1, 1))
    for i in range(n):
        if abs(x0[i]) < 0.005:
            simplex[i + 1, i] = x0[i] + 0.00025
        else:
            simplex[i + 1, i] = x0[i] * 1.05
    return simplex


def nelder_mead(f: Callable[[np.ndarray], float], x0, cfg: SimplexConfig = SimplexConfig()) -> NelderMeadResult:
    """Derivative-free simplex minimization of f starting at x0.

    Works in any dimension including 1; respects the iteration/evaluation
    budgets and reports converged=False when a budget is exhausted first.
    """
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    f0 = f(x0)
    if not np.isfinite(f0):
        raise ValueError("objective not finite at the starting point")
    res = minimize(
        f, x0, method="Nelder-Mead",
        options=dict(
            xatol=cfg.x_tol, fatol=cfg.f_tol,
            maxiter=cfg.max_iter, maxfev=cfg.max_fev,
            initial_simplex=_initial_simplex(x0),
        ),
    )
    return NelderMeadResult(np.atleast_1d(res.x), float(res.fun), int(res.nit), bool(res.success))
