"""Black-Scholes utilities, implied-vol inversion, smile objective, surface
calibration, the average-volatility-error metric, and the ghost/sundial
calibration diagnostic.

Calibration minimizes a weighted sum of squared implied-vol differences over
the six model parameters, searched in a transformed space (log for the
positive parameters, logit for alpha and rho) so the simplex can never leave
the admissible region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .charfn import RoughHestonParams
from .inversion import CALL, COVERED_CALL, PUT, OptionSpec, no_arbitrage_bounds
from .numerics import NelderMeadResult, SimplexConfig, nelder_mead

# prices below RESOLUTION_FLOOR * S0 are numerically unresolvable;
# quotes whose model price is below CALIB_FLOOR * S0 are dropped from fits
RESOLUTION_FLOOR = 1e-12
CALIB_FLOOR = 1e-7


class NoArbitrageViolation(ValueError):
    """Price outside the static no-arbitrage bounds; implied vol undefined."""


def _norm_cdf(x):
    # erfc keeps full relative accuracy in the lower tail, where the
    # erf-based form loses the digits that deep-OTM prices live on
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


_SQRT_HALF_PI = math.sqrt(0.5 * math.pi)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _mills(d: float) -> float:
    # N(-d)/phi(d) for d >= 0, to full relative accuracy
    from scipy.special import erfcx
    return _SQRT_HALF_PI * float(erfcx(d / math.sqrt(2.0)))


def bs_price(opt: OptionSpec, sigma: float) -> float:
    """Black-Scholes price for put/call/covered call.

    Out-of-the-money values are computed in the Mills-ratio form
    S0 phi(d1) (Q(d2) - Q(d1)), which keeps relative accuracy where the
    plain N(d) differences cancel to rounding noise.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    df = math.exp(-opt.r * opt.T)
    srt = sigma * math.sqrt(opt.T)
    d1 = (math.log(opt.S0 / opt.K) + (opt.r + 0.5 * sigma * sigma) * opt.T) / srt
    d2 = d1 - srt
    phi1 = _INV_SQRT_2PI * math.exp(-0.5 * d1 * d1)
    if d2 >= 0.0:      # OTM put side
        put = opt.S0 * phi1 * (_mills(d2) - _mills(d1))
        call = put + opt.S0 - opt.K * df
    elif d1 <= 0.0:    # OTM call side
        call = opt.S0 * phi1 * (_mills(-d1) - _mills(-d2))
        put = call - opt.S0 + opt.K * df
    else:
        call = opt.S0 * _norm_cdf(d1) - opt.K * df * _norm_cdf(d2)
        put = call - opt.S0 + opt.K * df
    if opt.kind == CALL:
        return call
    if opt.kind == PUT:
        return put
    return opt.S0 - call


def bs_vega(opt: OptionSpec, sigma: float) -> float:
    srt = sigma * math.sqrt(opt.T)
    d1 = (math.log(opt.S0 / opt.K) + (opt.r + 0.5 * sigma * sigma) * opt.T) / srt
    return opt.S0 * math.sqrt(opt.T) * math.exp(-0.5 * d1 * d1) / math.sqrt(2.0 * math.pi)


def implied_vol(opt: OptionSpec, price: float, tol: float = 1e-12,
                sigma_lo: float = 1e-6, sigma_hi: float = 20.0) -> float:
    """Safeguarded Newton-bisection inversion of the Black-Scholes price.

    Works on the forward-normalized out-of-the-money value to avoid
    cancellation deep in the money.  Raises NoArbitrageViolation when the
    price sits outside the static bounds.
    """
    lo, hi = no_arbitrage_bounds(opt)
    if not lo <= price <= hi:
        raise NoArbitrageViolation(
            f"{opt.kind} price {price} outside no-arbitrage bounds [{lo}, {hi}]")
    # covered call inherits the call's vol
    if opt.kind == COVERED_CALL:
        from dataclasses import replace
        return implied_vol(replace(opt, kind=CALL), opt.S0 - price, tol)
    # work with the OTM payoff (same implied vol by parity, better conditioning)
    from dataclasses import replace
    df = math.exp(-opt.r * opt.T)
    if opt.kind == PUT and opt.K * df > opt.S0:
        opt, price = replace(opt, kind=CALL), price + opt.S0 - opt.K * df
    elif opt.kind == CALL and opt.K * df < opt.S0:
        opt, price = replace(opt, kind=PUT), price - opt.S0 + opt.K * df
    lo_b, hi_b = no_arbitrage_bounds(opt)
    if price <= lo_b:  # at/below intrinsic after conversion: vol floor
        return sigma_lo
    f_lo = bs_price(opt, sigma_lo) - price
    f_hi = bs_price(opt, sigma_hi) - price
    if f_lo > 0:
        return sigma_lo
    if f_hi < 0:
        return sigma_hi
    a, b = sigma_lo, sigma_hi
    sig = 0.5 * (a + b)
    for _ in range(200):
        f = bs_price(opt, sig) - price
        if f > 0:
            b = sig
        else:
            a = sig
        if b - a < 1e-11:  # vol bracket resolved beyond the round-trip bar
            break
        v = bs_vega(opt, sig)
        step = f / v if v > 1e-300 else math.inf
        newton = sig - step
        sig = newton if a < newton < b else 0.5 * (a + b)
    return 0.5 * (a + b)


# ---------------------------------------------------------------------------
# quotes and objective
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Quote:
    T: float
    K: float
    iv: float
    weight: float = 1.0

    def __post_init__(self):
        if self.iv <= 0 or self.weight < 0 or self.T <= 0 or self.K <= 0:
            raise ValueError("quote requires T, K, iv > 0 and weight >= 0")


# A smile pricer maps (params, T, strikes, S0, r) -> array of OTM option
# prices (puts for K <= S0, calls for K > S0), np.nan where unresolved.
SmilePricer = Callable[[RoughHestonParams, float, np.ndarray, float, float], np.ndarray]


def otm_kind(K: float, S0: float) -> str:
    return PUT if K <= S0 else CALL


def model_ivs(quotes: Sequence[Quote], p: RoughHestonParams, pricer: SmilePricer,
              S0: float = 1.0, r: float = 0.0) -> np.ndarray:
    """Model implied vols for quotes, np.nan where the price is unresolvable."""
    out = np.full(len(quotes), np.nan)
    by_T: dict[float, list[int]] = {}
    for i, q in enumerate(quotes):
        by_T.setdefault(q.T, []).append(i)
    for T, idx in by_T.items():
        ks = np.array([quotes[i].K for i in idx])
        prices = pricer(p, T, ks, S0, r)
        for j, i in enumerate(idx):
            pr = prices[j]
            if not np.isfinite(pr) or pr < CALIB_FLOOR * S0:
                continue
            opt = OptionSpec(S0=S0, K=float(ks[j]), T=T, r=r, kind=otm_kind(ks[j], S0))
            try:
                out[i] = implied_vol(opt, float(pr))
            except NoArbitrageViolation:
                continue
    return out


def smile_objective(quotes: Sequence[Quote], p: RoughHestonParams,
                    pricer: SmilePricer, S0: float = 1.0, r: float = 0.0) -> float:
    """Weighted sum of squared (model - market) implied-vol differences.

    Quotes whose model price is unresolved are dropped with their weight;
    raises if nothing remains.
    """
    ivs = model_ivs(quotes, p, pricer, S0, r)
    good = np.isfinite(ivs)
    if not good.any():
        raise ValueError("no quote could be priced at these parameters")
    w = np.array([q.weight for q in quotes])
    mkt = np.array([q.iv for q in quotes])
    return float(np.sum(w[good] * (ivs[good] - mkt[good]) ** 2))


def ave_metric(quotes: Sequence[Quote], model_iv: Sequence[float]) -> float:
    """Average volatility error in percent:
    mean |iv_mkt - iv_model| / mean iv_mkt * 100."""
    mkt = np.asarray([q.iv for q in quotes], dtype=float)
    mod = np.asarray(model_iv, dtype=float)
    if mkt.size == 0 or mkt.size != mod.size:
        raise ValueError("need equally many quotes and model vols")
    return float(np.mean(np.abs(mkt - mod)) / np.mean(mkt) * 100.0)


# ---------------------------------------------------------------------------
# parameter transform and calibration
# ---------------------------------------------------------------------------

_ALPHA_LO, _ALPHA_HI = 0.05, 0.99
_RHO_LO, _RHO_HI = -0.999, 0.999


def _logit(x, lo, hi):
    u = (x - lo) / (hi - lo)
    u = min(max(u, 1e-12), 1 - 1e-12)
    return math.log(u / (1 - u))


def _unlogit(z, lo, hi):
    return lo + (hi - lo) / (1.0 + math.exp(-z))


def params_to_vector(p: RoughHestonParams) -> np.ndarray:
    return np.array([
        _logit(p.alpha, _ALPHA_LO, _ALPHA_HI),
        math.log(p.gamma), math.log(p.theta), math.log(p.nu),
        _logit(p.rho, _RHO_LO, _RHO_HI),
        math.log(p.v0),
    ])


def vector_to_params(x: np.ndarray) -> RoughHestonParams:
    return RoughHestonParams(
        alpha=_unlogit(x[0], _ALPHA_LO, _ALPHA_HI),
        gamma=math.exp(x[1]), theta=math.exp(x[2]), nu=math.exp(x[3]),
        rho=_unlogit(x[4], _RHO_LO, _RHO_HI),
        v0=math.exp(x[5]),
    )


@dataclass(frozen=True)
class CalibrationResult:
    params: RoughHestonParams
    objective_value: float
    ave_by_expiry: dict[float, float]
    n_evals: int
    converged: bool
    per_quote_status: tuple[bool, ...]  # True = priced, False = dropped


def calibrate(quotes: Sequence[Quote], x0: RoughHestonParams,
              cfg: SimplexConfig = SimplexConfig(f_tol=1e-10, x_tol=1e-6,
                                                 max_iter=2000, max_fev=3000),
              pricer: SmilePricer | None = None, S0: float = 1.0, r: float = 0.0,
              restarts: int = 2) -> CalibrationResult:
    """Fit the six rough Heston parameters to implied-vol quotes.

    Nelder-Mead in the transformed space, restarted from the best point a
    couple of times (a fresh simplex escapes the degenerate shapes the
    simplex tends to collapse into in six dimensions).
    """
    if pricer is None:
        from .engine import calibration_smile_pricer
        pricer = calibration_smile_pricer
    n_evals = 0

    def objective(x):
        nonlocal n_evals
        n_evals += 1
        try:
            p = vector_to_params(x)
        except (ValueError, OverflowError):
            return 1e6
        try:
            return smile_objective(quotes, p, pricer, S0, r)
        except (ValueError, RuntimeError):
            return 1e6

    x = params_to_vector(x0)
    best: NelderMeadResult | None = None
    for _ in range(max(1, restarts + 1)):
        res = nelder_mead(objective, x, cfg)
        if best is None or res.fun < best.fun:
            best = res
        if best.fun <= cfg.f_tol:
            break
        if np.allclose(res.x, x, rtol=0, atol=cfg.x_tol):
            break
        x = res.x
    p_best = vector_to_params(best.x)
    ivs = model_ivs(quotes, p_best, pricer, S0, r)
    status = tuple(bool(np.isfinite(v)) for v in ivs)
    ave = {}
    for T in sorted({q.T for q in quotes}):
        idx = [i for i, q in enumerate(quotes) if q.T == T and status[i]]
        if idx:
            ave[T] = ave_metric([quotes[i] for i in idx], [ivs[i] for i in idx])
    return CalibrationResult(
        params=p_best, objective_value=best.fun, ave_by_expiry=ave,
        n_evals=n_evals, converged=best.converged, per_quote_status=status,
    )


# ---------------------------------------------------------------------------
# ghost / sundial diagnostic
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GhostCalibrationReport:
    """Outcome of calibrating the same quotes with two pricers.

    curves: per requested expiry, implied-vol arrays for
      market      - the input quotes,
      fit_inacc   - inaccurate-pricer params seen through the inaccurate pricer
                    (the apparent fit),
      true_inacc  - the same params re-priced accurately (the actual smile),
      fit_acc     - accurate-pricer params re-priced accurately.
    """

    params_inaccurate: RoughHestonParams
    params_accurate: RoughHestonParams
    max_param_deviation: float
    mean_param_deviation: float
    curves: dict[float, dict[str, np.ndarray]]


def _param_rel_devs(a: RoughHestonParams, b: RoughHestonParams) -> np.ndarray:
    va = np.array([a.alpha, a.gamma, a.theta, a.sigma, a.rho, a.v0])
    vb = np.array([b.alpha, b.gamma, b.theta, b.sigma, b.rho, b.v0])
    return np.abs(va - vb) / np.abs(vb)


def ghost_calibration_demo(quotes: Sequence[Quote], x0: RoughHestonParams,
                           inaccurate_pricer: SmilePricer,
                           accurate_pricer: SmilePricer,
                           cfg: SimplexConfig | None = None,
                           S0: float = 1.0, r: float = 0.0) -> GhostCalibrationReport:
    """Calibrate twice (inaccurate vs accurate pricer) and re-price both fits
    accurately, exposing error cancellation between pricer and model."""
    cfg = cfg or SimplexConfig(f_tol=1e-10, x_tol=1e-6, max_iter=2000, max_fev=3000)
    fit_in = calibrate(quotes, x0, cfg, pricer=inaccurate_pricer, S0=S0, r=r)
    fit_ac = calibrate(quotes, x0, cfg, pricer=accurate_pricer, S0=S0, r=r)
    devs = _param_rel_devs(fit_in.params, fit_ac.params)
    curves: dict[float, dict[str, np.ndarray]] = {}
    for T in sorted({q.T for q in quotes}):
        qs = [q for q in quotes if q.T == T]
        curves[T] = {
            "strikes": np.array([q.K for q in qs]),
            "market": np.array([q.iv for q in qs]),
            "fit_inacc": model_ivs(qs, fit_in.params, inaccurate_pricer, S0, r),
            "true_inacc": model_ivs(qs, fit_in.params, accurate_pricer, S0, r),
            "fit_acc": model_ivs(qs, fit_ac.params, accurate_pricer, S0, r),
        }
    return GhostCalibrationReport(
        params_inaccurate=fit_in.params, params_accurate=fit_ac.params,
        max_param_deviation=float(devs.max()), mean_param_deviation=float(devs.mean()),
        curves=curves,
    )
