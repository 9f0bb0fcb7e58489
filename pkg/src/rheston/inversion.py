"""Fourier-inversion pricers.

All pricers evaluate variants of the damped-payoff integral

    V = -(K e^{-rT} / 2pi) * integral_{Im xi = w1} e^{i xi ln(S0/K)} Phi(xi,T)
                                                   / (xi (xi + i)) dxi.

The raw integral equals the put on a line with w1 in (0, mu+), the call on a
line with w1 in (mu-, -1), and minus the covered call S0 - call on a line
inside (-1, 0).  `convert_payoff` moves between the three via put-call parity.

The workhorse is the sinh-deformed trapezoid (`price_sinh`): the contour
xi(y) = i w1 + b sinh(i w + y) turns slow oscillatory decay into
double-exponential decay, so a few dozen terms reach near machine precision.
Flat-line trapezoid variants, Gauss-Legendre / Gauss-Laguerre rules on the
Im xi = -1/2 line, and an FFT log-strike grid pricer are provided for
benchmarking against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Literal

import numpy as np
from scipy.interpolate import PchipInterpolator

from .charfn import DecayProfile
from .numerics import LAGUERRE, LEGENDRE_01, build_rule

PUT = "put"
CALL = "call"
COVERED_CALL = "covered_call"
_KINDS = (PUT, CALL, COVERED_CALL)


class ContourError(ValueError):
    """Contour parameters inconsistent with the payoff or analyticity data."""


class SideFlip(ValueError):
    """Decay rate non-positive on this side; price the opposite payoff side."""


class UnstableQuadrature(RuntimeError):
    """Gauss-Laguerre weights not representable in double precision at this N."""


@dataclass(frozen=True)
class OptionSpec:
    S0: float
    K: float
    T: float
    r: float = 0.0
    kind: str = PUT

    def __post_init__(self):
        if min(self.S0, self.K, self.T) <= 0 or self.r < 0:
            raise ValueError("require S0, K, T > 0 and r >= 0")
        if self.kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}")

    @property
    def log_moneyness(self) -> float:
        return math.log(self.S0 / self.K)


def no_arbitrage_bounds(opt: OptionSpec) -> tuple[float, float]:
    df = math.exp(-opt.r * opt.T)
    if opt.kind == PUT:
        return max(opt.K * df - opt.S0, 0.0), opt.K * df
    if opt.kind == CALL:
        return max(opt.S0 - opt.K * df, 0.0), opt.S0
    lo, hi = no_arbitrage_bounds(replace(opt, kind=CALL))
    return opt.S0 - hi, opt.S0 - lo


def convert_payoff(raw: float, from_kind: str, to_kind: str, opt: OptionSpec) -> float:
    """Exact parity conversion: covered call = S0 - call, put = call - S0 + K e^{-rT}."""
    if from_kind not in _KINDS or to_kind not in _KINDS:
        raise ValueError("unknown payoff kind")
    df = math.exp(-opt.r * opt.T)
    if from_kind == CALL:
        call = raw
    elif from_kind == COVERED_CALL:
        call = opt.S0 - raw
    else:
        call = raw + opt.S0 - opt.K * df
    if to_kind == CALL:
        return call
    if to_kind == COVERED_CALL:
        return opt.S0 - call
    return call - opt.S0 + opt.K * df


# ---------------------------------------------------------------------------
# sinh contour
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SinhContour:
    """Deformation xi(y) = i omega1 + b sinh(i omega + y) plus trapezoid data.

    strip is the (lambda-, lambda+) band the deformation maps the y-strip
    onto at the imaginary axis; cone the admissible asymptote angles
    (gamma-, gamma+); d the half-width of the strip of analyticity in the
    y-coordinate.  N is the one-sided term count; None until a truncation
    plan fills it in.
    """

    omega1: float
    b: float
    omega: float
    zeta: float
    N: int | None = None
    strip: tuple[float, float] = (-1.0, 0.0)
    cone: tuple[float, float] = (-math.pi / 4, math.pi / 4)
    d: float | None = None

    def __post_init__(self):
        if self.b <= 0 or self.zeta <= 0:
            raise ValueError("b and zeta must be positive")


def sinh_map(y, c: SinhContour):
    """Contour point xi(y) and the derivative factor cosh(i omega + y)."""
    z = 1j * c.omega + np.asarray(y, dtype=float)
    return 1j * c.omega1 + c.b * np.sinh(z), np.cosh(z)


def build_sinh_contour(kind: str, strip: tuple[float, float],
                       cone: tuple[float, float] = (-math.pi / 4, math.pi / 4),
                       omega_override: float | None = None,
                       k_d: float = 0.9, eps: float = 1e-10,
                       side: int | None = None) -> SinhContour:
    """Contour construction for a payoff kind.

    strip = (lambda-, lambda+) must match the kind: (0, mu+) for puts,
    (mu-, -1) for calls, (-1, 0) for the covered call.  The asymptote angle
    defaults to half the cone opening on the side selected by `side`
    (+1 upper / -1 lower; for the covered call pass the sign of z_T or of
    ln(S0/K)).  side=0 centers the angle for ATM use.

    d = k_d * d0 with d0 the angular margin; zeta = 2 pi d / ln(100/eps);
    b and omega1 are fixed by requiring the strip S_(-d,d) in y to map
    exactly onto (lambda-, lambda+) on the imaginary axis.
    """
    if kind not in _KINDS:
        raise ValueError("unknown payoff kind")
    lam_m, lam_p = strip
    if not lam_m < lam_p:
        raise ContourError("strip must satisfy lambda- < lambda+")
    g_m, g_p = cone
    if omega_override is not None:
        om = omega_override
        d0 = min(g_p - om, om - g_m)
    else:
        if side is None:
            side = {PUT: 1, CALL: -1, COVERED_CALL: 0}[kind]
        if side > 0:
            om, d0 = g_p / 2.0, g_p / 2.0
        elif side < 0:
            om, d0 = g_m / 2.0, -g_m / 2.0
        else:
            om, d0 = (g_m + g_p) / 2.0, (g_p - g_m) / 2.0
    if d0 <= 0:
        raise ContourError(f"empty angular margin for omega={om} in cone {cone}")
    d = k_d * d0
    den = math.sin(om + d) - math.sin(om - d)
    b = (lam_p - lam_m) / den
    om1 = (lam_m * math.sin(om + d) - lam_p * math.sin(om - d)) / den
    zeta = 2.0 * math.pi * d / math.log(100.0 / eps)
    c = SinhContour(omega1=om1, b=b, omega=om, zeta=zeta, strip=strip, cone=cone, d=d)
    _check_poles(c)
    return c


def contour_base_level(c: SinhContour) -> float:
    """Imaginary part of the contour's y=0 image, i(omega1 + b sin omega)."""
    return c.omega1 + c.b * math.sin(c.omega)


def _check_poles(c: SinhContour):
    # the mapped strip covers (lambda-, lambda+) on the imaginary axis; the
    # integrand poles at Im xi = 0 and -1 must not fall strictly inside it,
    # and the contour base point must stay off both
    lam_m, lam_p = c.strip
    base = contour_base_level(c)
    for pole in (0.0, -1.0):
        if lam_m < pole < lam_p:
            raise ContourError(
                f"strip ({lam_m}, {lam_p}) straddles the pole at Im xi = {pole}")
        if base == pole:
            raise ContourError(f"contour base point sits on the pole Im xi = {pole}")


# ---------------------------------------------------------------------------
# truncation planning
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TruncationPlan:
    Lambda: float
    N: int
    H_const: float


def plan_truncation(profile: DecayProfile, c: SinhContour, eps: float,
                    H_const: float = 100.0, inflate: float = 1.2,
                    integrand_at: Callable[[complex], float] | None = None) -> TruncationPlan:
    """Pick the truncation length for the one-sided sinh trapezoid sum.

    The integrand decays like H |xi|^{-2} exp(-c_inf(omega) |xi|) along the
    contour and |xi(y)| ~ (b/2) e^y, so with E = ln(H/eps) the y-cut solves
    e^Lambda ~ (2/(b c_inf)) (ln(...) + E).  One fixed-point sweep from
    Lambda10 = 2E/(b c_inf) suffices; the result is floored at 1.2 and then
    inflated by `inflate` for safety.  N = ceil(Lambda / zeta).

    If `integrand_at` is given, H is instead estimated Hardy-norm style from
    the integrand magnitude near the edges of the mapped analyticity strip.
    """
    cinf = profile.c_inf_of(c.omega)
    if cinf <= 0.0:
        raise SideFlip(
            f"c_inf(omega={c.omega:.4g}) = {cinf:.4g} <= 0; price the opposite side")
    H = H_const
    if integrand_at is not None:
        d9 = 0.95 * (c.d if c.d is not None
                     else min(c.cone[1] - c.omega, c.omega - c.cone[0]))
        xi_up = 1j * (c.omega1 + c.b * math.sin(c.omega + d9))
        xi_dn = 1j * (c.omega1 + c.b * math.sin(c.omega - d9))
        H = max(abs(integrand_at(xi_up)) + abs(integrand_at(xi_dn)), 1.0)
    E = math.log(H / eps)
    if E <= 0:
        raise ValueError("eps must be below the H estimate")
    bc = c.b * cinf
    lam10 = 2.0 * E / bc
    lam1 = max(1.2, (2.0 / bc) * (math.log(lam10) + E))
    Lambda = inflate * math.log(lam1)
    N = max(4, math.ceil(Lambda / c.zeta))
    return TruncationPlan(Lambda=Lambda, N=N, H_const=H)


def plan_truncation_flat(profile: DecayProfile, zeta: float, eps: float,
                         K: float = 1.0, b: float = 1.0) -> TruncationPlan:
    """Truncation for the flat-line trapezoid, in the xi-coordinate.

    Solves e^{-g(Lambda0)} / Lambda0 = b pi eps / (K zeta) with
    g(L) = Re(c_inf) L by two fixed-point sweeps of
    Lambda0 = (ln Lambda0 + E') / Re(c_inf), E' = ln(K zeta/(b pi eps)).
    N = ceil(Lambda0 / zeta).
    """
    g = profile.re_c_inf
    if g <= 0.0:
        raise SideFlip("flat decay rate non-positive")
    E1 = math.log(K * zeta / (b * math.pi * eps))
    lam0 = max(E1, 2.0) / g
    for _ in range(4):
        lam0 = max((E1 - math.log(lam0)) / g, 2.0 / g)
    N = max(4, math.ceil(lam0 / zeta))
    return TruncationPlan(Lambda=lam0, N=N, H_const=1.0)


# ---------------------------------------------------------------------------
# pricers
# ---------------------------------------------------------------------------

def _raw_to_kind(raw, opt: OptionSpec, line_kind: str):
    """Map the raw integral value on a line to the requested payoff value.

    Raw integral semantics: put line -> put, call line -> call,
    covered-call line -> put - K e^{-rT} (equivalently call - S0).
    """
    df = math.exp(-opt.r * opt.T)
    if line_kind == PUT:
        put = raw
    elif line_kind == CALL:
        put = raw - opt.S0 + opt.K * df
    else:
        put = raw + opt.K * df
    if opt.kind == PUT:
        return put
    if opt.kind == CALL:
        return put + opt.S0 - opt.K * df
    return opt.K * df - put  # covered call = S0 - call


def _line_kind_for_omega1(omega1: float) -> str:
    if omega1 > 0.0:
        return PUT
    if omega1 < -1.0:
        return CALL
    if -1.0 < omega1 < 0.0:
        return COVERED_CALL
    raise ContourError(f"integration line Im xi = {omega1} passes through a pole")


def price_sinh(opt: OptionSpec, cf, c: SinhContour, N: int | None = None,
               strikes=None):
    """Sinh-deformed simplified trapezoid rule.

    V = -(b zeta K e^{-rT}/pi) Re sum_{j=0..N} (1 - delta_j0/2)
        e^{i xi(j zeta) ln(S0/K)} Phi(xi(j zeta)) / (xi (xi+i)) cosh(i omega + y_j),
    folded one-sided via the conjugation symmetry of Phi.

    `strikes` prices a strike vector on the shared contour, reusing the Phi
    samples (the contour depends on K only through the planned N).
    """
    n_terms = N if N is not None else c.N
    if n_terms is None:
        raise ValueError("no term count: pass N or plan the contour first")
    line_kind = _line_kind_for_omega1(contour_base_level(c))
    y = c.zeta * np.arange(n_terms + 1)
    xi, dfac = sinh_map(y, c)
    Phi = np.asarray(cf(xi))
    g = Phi / (xi * (xi + 1j)) * dfac
    return _trapezoid_value(opt, g, xi, c.b * c.zeta, line_kind, strikes)


def _trapezoid_value(opt: OptionSpec, g: np.ndarray, xi: np.ndarray,
                     prefactor_step: float, line_kind: str, strikes):
    df = math.exp(-opt.r * opt.T)
    if strikes is None:
        x = opt.log_moneyness
        terms = np.exp(1j * xi * x) * g
        terms[0] = 0.5 * terms[0]
        raw = -(prefactor_step * opt.K * df / math.pi) * float(np.real(terms.sum()))
        return _raw_to_kind(raw, opt, line_kind)
    ks = np.asarray(strikes, dtype=float)
    x = np.log(opt.S0 / ks)
    w = np.ones_like(xi.real)
    w[0] = 0.5
    mat = np.exp(1j * np.outer(x, xi)) * (g * w)[None, :]
    raws = -(prefactor_step * ks * df / math.pi) * np.real(mat.sum(axis=1))
    return np.array([
        _raw_to_kind(raws[i], replace(opt, K=float(ks[i])), line_kind)
        for i in range(ks.size)
    ])


def price_flat_ift(opt: OptionSpec, cf, omega1: float, zeta: float, N: int,
                   strikes=None):
    """Simplified trapezoid rule on the flat line Im xi = omega1."""
    line_kind = _line_kind_for_omega1(omega1)
    xi = 1j * omega1 + zeta * np.arange(N + 1)
    Phi = np.asarray(cf(xi))
    g = Phi / (xi * (xi + 1j))
    return _trapezoid_value(opt, g, xi, zeta, line_kind, strikes)


def flat_step_rule(strip: tuple[float, float], eps: float, k_d: float = 0.95) -> float:
    """Step recommendation for the flat line centered in the strip:
    zeta = 2 d / ln(100/eps) with d = k_d (lambda+ - lambda-)/2."""
    d = k_d * (strip[1] - strip[0]) / 2.0
    return 2.0 * d / math.log(100.0 / eps)


def _bs_closed_form(opt: OptionSpec, sigma: float) -> float:
    from .calibration import bs_price  # local import; calibration owns Black-Scholes
    return bs_price(opt, sigma)


def price_flat_ift_bm(opt: OptionSpec, cf_model, cf_ad, omega1: float,
                      zeta: float, N: int, strikes=None):
    """Flat trapezoid with a Brownian-motion control variate.

    V(Phi) = V(Phi_ad) + flat integral of (Phi - Phi_ad)/(xi(xi+i));
    Phi - Phi_ad vanishes at xi = 0 and -i, so the integrand is analytic
    across the whole strip and omega1 may sit anywhere inside (mu-, mu+).
    V(Phi_ad) is the Black-Scholes price in closed form, with cf_ad a BMCF
    whose sigma supplies the closed-form leg.  Nodes landing within 1e-6 of
    a pole are replaced by a 4-point Richardson limit.
    """
    sigma_ad = cf_ad.sigma
    xi = 1j * omega1 + zeta * np.arange(N + 1)
    diff = np.asarray(cf_model(xi)) - np.asarray(cf_ad(xi))
    denom = xi * (xi + 1j)
    g = np.empty_like(diff)
    near_pole = (np.abs(xi) < 1e-6) | (np.abs(xi + 1j) < 1e-6)
    ok = ~near_pole
    g[ok] = diff[ok] / denom[ok]
    if near_pole.any():
        for idx in np.nonzero(near_pole)[0]:
            g[idx] = _richardson_pole_limit(cf_model, cf_ad, xi[idx])
    df = math.exp(-opt.r * opt.T)

    def correction_and_bs(k: float):
        x = math.log(opt.S0 / k)
        terms = np.exp(1j * xi * x) * g
        terms[0] = 0.5 * terms[0]
        corr = -(zeta * k * df / math.pi) * float(np.real(terms.sum()))
        o = replace(opt, K=float(k))
        return _bs_closed_form(o, sigma_ad) + corr

    if strikes is None:
        return correction_and_bs(opt.K)
    return np.array([correction_and_bs(float(k)) for k in np.asarray(strikes)])


def _richardson_pole_limit(cf_model, cf_ad, xi0: complex, h: float = 1e-3) -> complex:
    """Analytic limit of (Phi - Phi_ad)/(xi(xi+i)) at a removable singularity,
    by 4-point Richardson extrapolation along the integration line."""
    pts = np.array([xi0 + h, xi0 - h, xi0 + 2 * h, xi0 - 2 * h])
    vals = (np.asarray(cf_model(pts)) - np.asarray(cf_ad(pts))) / (pts * (pts + 1j))
    g1 = 0.5 * (vals[0] + vals[1])
    g2 = 0.5 * (vals[2] + vals[3])
    return (4.0 * g1 - g2) / 3.0


def _lewis_line_value(opt: OptionSpec, cf, y: np.ndarray, w: np.ndarray,
                      strikes) :
    # weighted sum of the covered-call-line integrand over y >= 0 nodes,
    # sharing the Phi samples across a strike vector
    xi = -0.5j + y
    Phi = np.asarray(cf(xi))
    g = Phi / (y * y + 0.25)
    df = math.exp(-opt.r * opt.T)
    if strikes is None:
        integral = float(np.sum(w * np.real(np.exp(1j * xi * opt.log_moneyness) * g)))
        raw = -(opt.K * df / math.pi) * integral
        return _raw_to_kind(raw, opt, COVERED_CALL)
    ks = np.asarray(strikes, dtype=float)
    x = np.log(opt.S0 / ks)
    mat = np.real(np.exp(1j * np.outer(x, xi)) * g[None, :])
    integrals = mat @ w
    raws = -(ks * df / math.pi) * integrals
    return np.array([
        _raw_to_kind(raws[i], replace(opt, K=float(ks[i])), COVERED_CALL)
        for i in range(ks.size)])


def price_lewis_gl(opt: OptionSpec, cf, N: int, strikes=None):
    """Lewis-line pricer: Gauss-Legendre on (0,1) after y = u/(1-u).

    The raw half-line integral with the -(K e^{-rT}/pi) prefactor equals the
    covered-call-line value (put - K e^{-rT}); parity gives the rest.
    """
    rule = build_rule(LEGENDRE_01, N)
    u = rule.nodes
    y = u / (1.0 - u)
    jac = 1.0 / (1.0 - u) ** 2
    return _lewis_line_value(opt, cf, y, rule.weights * jac, strikes)


def price_gauss_laguerre(opt: OptionSpec, cf, N: int, strict_double: bool = True,
                         strikes=None):
    """Lewis-line pricer with an N-point Gauss-Laguerre rule on [0, inf).

    strict_double mirrors the behavior of a plain double-precision
    implementation: when the raw rule weights underflow to zero (N around
    190 and above) the weight*e^{y} products degenerate to 0*inf and the
    naive sum is NaN, so an UnstableQuadrature error is raised instead of
    returning a silently wrong number.  Pass strict_double=False to use the
    stable compensated weights anyway (the quadrature truncation error
    remains whatever it is).
    """
    rule = build_rule(LAGUERRE, N)
    if strict_double and rule.weights.min() == 0.0:
        raise UnstableQuadrature(
            f"Gauss-Laguerre raw weights underflow at N={N}; "
            "double-precision evaluation would produce NaN")
    return _lewis_line_value(opt, cf, rule.nodes, rule.mod_weights, strikes)


# ---------------------------------------------------------------------------
# FFT pricer on a log-strike grid
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FFTResult:
    strikes: np.ndarray
    prices: np.ndarray
    in_bounds: np.ndarray
    grid_strikes: np.ndarray
    grid_prices: np.ndarray


def price_carr_madan_fft(strikes, opt: OptionSpec, cf, zeta: float = 0.25,
                         M_fft: int = 4096, omega1: float = -0.5,
                         interp: Literal["pchip", "linear"] = "pchip") -> FFTResult:
    """FFT evaluation of the flat-line trapezoid over a uniform log-strike grid.

    The Nyquist relation Delta * zeta = 2 pi / M ties the log-strike spacing
    to the frequency step, so one FFT yields all grid strikes; requested
    strikes are then interpolated (monotone cubic on the raw line values by
    default, linear as a fallback).  On-grid strikes reproduce
    `price_flat_ift` at identical (omega1, zeta, N=M_fft-1) to roundoff.
    Prices outside the no-arbitrage bounds are flagged, not clipped.
    """
    if M_fft < 4 or (M_fft & (M_fft - 1)) != 0:
        raise ValueError("M_fft must be a power of two")
    ks = np.atleast_1d(np.asarray(strikes, dtype=float))
    line_kind = _line_kind_for_omega1(omega1)
    dx = 2.0 * math.pi / (M_fft * zeta)
    # center the log-moneyness grid at 0 (x = ln(S0/K))
    x0 = -dx * (M_fft // 2)
    xs = x0 + dx * np.arange(M_fft)
    xi = 1j * omega1 + zeta * np.arange(M_fft)
    Phi = np.asarray(cf(xi))
    g = Phi / (xi * (xi + 1j))
    g[0] = 0.5 * g[0]
    # e^{i xi_j x} = e^{-omega1 x} e^{i j zeta x};
    # sum_j g_j e^{i j zeta (x0 + m dx)} = ifft(g * e^{i j zeta x0}) * M
    spectrum = g * np.exp(1j * zeta * np.arange(M_fft) * x0)
    sums = np.fft.ifft(spectrum) * M_fft
    grid_K = opt.S0 * np.exp(-xs)
    df = math.exp(-opt.r * opt.T)
    raw_grid = (-(zeta * grid_K * df / math.pi) * np.exp(-omega1 * xs)
                * np.real(sums))
    # raw values normalized by strike are smooth in x; interpolate those
    order = np.argsort(xs)
    xs_s, raw_s = xs[order], (raw_grid / grid_K)[order]
    x_req = np.log(opt.S0 / ks)
    if x_req.min() < xs_s[0] or x_req.max() > xs_s[-1]:
        raise ValueError("requested strike outside the FFT grid span")
    if interp == "pchip":
        raw_req = PchipInterpolator(xs_s, raw_s)(x_req) * ks
    elif interp == "linear":
        raw_req = np.interp(x_req, xs_s, raw_s) * ks
    else:
        raise ValueError("interp must be 'pchip' or 'linear'")
    prices = np.empty_like(raw_req)
    ok = np.empty(ks.size, dtype=bool)
    grid_prices = np.empty_like(raw_grid)
    for i, k in enumerate(ks):
        o = replace(opt, K=float(k))
        prices[i] = _raw_to_kind(raw_req[i], o, line_kind)
        lo, hi = no_arbitrage_bounds(o)
        ok[i] = lo - 1e-12 <= prices[i] <= hi + 1e-12
    for i in range(M_fft):
        grid_prices[i] = _raw_to_kind(raw_grid[i],
                                      replace(opt, K=float(grid_K[i])), line_kind)
    return FFTResult(strikes=ks, prices=prices, in_bounds=ok,
                     grid_strikes=grid_K, grid_prices=grid_prices)
