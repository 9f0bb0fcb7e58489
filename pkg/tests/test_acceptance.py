"""Acceptance suite: one test per criterion, each printing a PASS line.

Heavy fixtures (the synthetic high-vol surface generated by the benchmark
pricer and the calibration fits) are module-scoped and shared across the
calibration criteria.  Run with -s to see the per-criterion lines.
"""

import math
from dataclasses import replace

import numpy as np
import pytest

from rheston.calibration import (Quote, ave_metric, calibrate, implied_vol,
                                 model_ivs)
from rheston.charfn import (AdamsConfig, BMCF, HestonCF, RoughCF,
                            RoughHestonParams, decay_profile,
                            heston_decay_profile, solve_volterra_bl)
from rheston.engine import benchmark_price, calibration_smile_pricer
from rheston.inversion import (OptionSpec, build_sinh_contour, SinhContour,
                               plan_truncation, price_carr_madan_fft,
                               price_flat_ift, price_flat_ift_bm,
                               price_gauss_laguerre, price_sinh)
from rheston.numerics import LAGUERRE, SimplexConfig, build_rule

from conftest import (HESTON_T01_PRICES, PAR_EUROS, ROUGH_T252_PRICES,
                      THREE_CONTOUR_CASES, HESTON_T4, TSLA)


def report(criterion: str, detail: str):
    print(f"\n[ACCEPTANCE {criterion}] PASS  {detail}")


# ---------------------------------------------------------------------------
# shared synthetic surface at the high-vol parameter set
# ---------------------------------------------------------------------------

REVERSE_EXPIRIES = (4 / 365, 11 / 365, 17 / 365, 25 / 365)
TABLE8_EXPIRIES = (7 / 365, 14 / 365, 21 / 365, 49 / 365, 150 / 365)
CAL_CFG = SimplexConfig(f_tol=1e-10, x_tol=1e-6, max_iter=520, max_fev=700)


def _grid_for(T: float) -> np.ndarray:
    if T <= 14.1 / 365:
        return np.linspace(0.6, 1.6, 5) if T in REVERSE_EXPIRIES \
            else np.linspace(0.4, 1.3, 6)
    if T in REVERSE_EXPIRIES:
        return np.linspace(0.4, 1.75, 5)
    if T <= 49.1 / 365:
        return np.linspace(0.3, 1.6, 6)
    return np.linspace(0.3, 2.2, 6)


@pytest.fixture(scope="module")
def tsla_surface():
    """Quotes generated by the benchmark pricer at the high-vol set."""
    quotes: dict[float, list[Quote]] = {}
    for T in sorted(set(REVERSE_EXPIRIES) | set(TABLE8_EXPIRIES)):
        row = []
        for k in _grid_for(T):
            kind = "put" if k <= 1.0 else "call"
            rep = benchmark_price(OptionSpec(S0=1.0, K=float(k), T=T, kind=kind),
                                  TSLA)
            if rep.status.value != "ok" or rep.value < 1e-7:
                continue
            iv = implied_vol(OptionSpec(S0=1.0, K=float(k), T=T, kind=kind),
                             rep.value)
            row.append(Quote(T=T, K=float(k), iv=float(iv)))
        quotes[T] = row
    return quotes


@pytest.fixture(scope="module")
def fit_reverse(tsla_surface):
    quotes = [q for T in REVERSE_EXPIRIES for q in tsla_surface[T]]
    x0 = RoughHestonParams(alpha=TSLA.alpha * 1.1, gamma=TSLA.gamma * 0.9,
                           theta=TSLA.theta * 1.1, nu=TSLA.nu * 0.9,
                           rho=TSLA.rho * 1.1, v0=TSLA.v0 * 1.1)
    return calibrate(quotes, x0, CAL_CFG, restarts=1)


@pytest.fixture(scope="module")
def fit_short(tsla_surface):
    quotes = [q for T in TABLE8_EXPIRIES[:2] for q in tsla_surface[T]]
    x0 = RoughHestonParams(alpha=TSLA.alpha * 1.1, gamma=TSLA.gamma * 0.9,
                           theta=TSLA.theta * 1.1, nu=TSLA.nu * 0.9,
                           rho=TSLA.rho * 1.1, v0=TSLA.v0 * 1.1)
    return calibrate(quotes, x0, CAL_CFG, restarts=1)


def gl_smile_pricer(N: int = 200, M: int = 1000):
    """Fixed-setting Gauss-Laguerre pricer (the ghost-calibration culprit)."""

    def pricer(p, T, strikes, S0, r):
        cf = RoughCF(p, T, AdamsConfig(M=M, corrector="exact"), r=r)
        opt = OptionSpec(S0=S0, K=float(np.atleast_1d(strikes)[0]), T=T, r=r,
                         kind="put")
        ks = np.atleast_1d(np.asarray(strikes, dtype=float))
        out = np.empty(ks.size)
        puts = ks <= S0
        try:
            if puts.any():
                out[puts] = price_gauss_laguerre(opt, cf, N,
                                                 strict_double=False,
                                                 strikes=ks[puts])
            if (~puts).any():
                out[~puts] = price_gauss_laguerre(replace(opt, kind="call"),
                                                  cf, N, strict_double=False,
                                                  strikes=ks[~puts])
        except Exception:
            return np.full(ks.size, np.nan)
        return out

    return pricer


# ---------------------------------------------------------------------------
# criterion 1 - short-maturity benchmark prices
# ---------------------------------------------------------------------------

class TestCriterion1RoughBenchmark:
    STRIKES = (0.95, 0.975, 1.0, 1.025)

    def _prices(self, M: int) -> np.ndarray:
        # one contour and one solve serve the whole strike batch; the OTM
        # call at 1.025 is recovered from its put by parity (r = 0)
        c = build_sinh_contour("covered_call", (-1.0, 0.0), omega_override=0.1,
                               eps=1e-10)
        n_max = max(plan_truncation(decay_profile(PAR_EUROS, 1 / 252, 1.0, k),
                                    c, 1e-10).N for k in self.STRIKES)
        cf = RoughCF(PAR_EUROS, 1 / 252, AdamsConfig(M=M, n=2))
        puts = price_sinh(OptionSpec(S0=1.0, K=1.0, T=1 / 252, kind="put"),
                          cf, c, N=n_max, strikes=np.array(self.STRIKES))
        out = np.asarray(puts, dtype=float)
        out[3] = out[3] + 1.0 - self.STRIKES[3]
        return out

    def test_full_m20000(self):
        vals = self._prices(20000)
        rels = [abs(v / ROUGH_T252_PRICES[k] - 1.0)
                for v, k in zip(vals, self.STRIKES)]
        assert max(rels) <= 1e-5, rels
        report("1", f"M=20000 benchmark strikes, max rel err {max(rels):.2e} <= 1e-5")

    def test_fallback_m4000(self):
        vals = self._prices(4000)
        rels = [abs(v / ROUGH_T252_PRICES[k] - 1.0)
                for v, k in zip(vals, self.STRIKES)]
        assert max(rels) <= 1e-4, rels
        report("1", f"M=4000 desk fallback, max rel err {max(rels):.2e} <= 1e-4")


# ---------------------------------------------------------------------------
# criterion 2 - closed-form suite
# ---------------------------------------------------------------------------

class TestCriterion2HestonSuite:
    def test_nine_reference_prices(self):
        errs = []
        cf = HestonCF(HESTON_T4, 0.1)
        for k, expected in HESTON_T01_PRICES.items():
            kind = "put" if k <= 1.0 else "call"
            om = math.pi / 4 if k <= 1.0 else -math.pi / 4
            c = build_sinh_contour("covered_call", (-1.0, 0.0),
                                   cone=(-math.pi / 2, math.pi / 2),
                                   omega_override=om, eps=1e-15)
            plan = plan_truncation(heston_decay_profile(HESTON_T4, 0.1, 1.0, k),
                                   c, 1e-15)
            v = price_sinh(OptionSpec(S0=1.0, K=k, T=0.1, kind=kind), cf, c,
                           N=plan.N)
            errs.append(abs(v - expected))
        assert max(errs) <= 1e-12, errs
        report("2", f"nine T=0.1 prices, max abs err {max(errs):.1e} <= 1e-12")

    def test_flat_bm_atm(self):
        cf = HestonCF(HESTON_T4, 0.1)
        bm = BMCF(sigma=0.15, T=0.1, r=0.0)
        atm = OptionSpec(S0=1.0, K=1.0, T=0.1, kind="put")
        bench = HESTON_T01_PRICES[1.0]
        # documented settings: the bare trapezoid tail at N*zeta = 402 floors
        # the error near 3.5e-9 (the sub-1e-9 figure needs the tail extended)
        v60 = price_flat_ift_bm(atm, cf, bm, omega1=-0.1, zeta=6.7, N=60)
        assert abs(v60 / bench - 1.0) <= 1e-8
        v90 = price_flat_ift_bm(atm, cf, bm, omega1=-0.1, zeta=6.7, N=90)
        assert abs(v90 / bench - 1.0) <= 1e-9
        report("2", f"control-variate ATM: rel {abs(v60/bench-1):.1e} <= 1e-8 "
                    f"at N=60, {abs(v90/bench-1):.1e} <= 1e-9 with tail extended")

    def test_gauss_laguerre_atm(self):
        cf = HestonCF(HESTON_T4, 0.1)
        v = price_gauss_laguerre(OptionSpec(S0=1.0, K=1.0, T=0.1, kind="put"),
                                 cf, 175)
        rel = abs(v / HESTON_T01_PRICES[1.0] - 1.0)
        assert rel <= 5e-9
        report("2", f"Gauss-Laguerre N=175 ATM rel err {rel:.1e} <= 5e-9")


# ---------------------------------------------------------------------------
# criterion 3 - Gauss-Laguerre fragility table
# ---------------------------------------------------------------------------

class TestCriterion3LaguerreFragility:
    TABLE = {
        100: (-0.6798, -0.1440, -0.0207, -0.00043),
        125: (-0.6149, -0.0878, -0.0077, -5.88e-05),
        150: (-0.5569, -0.0535, -0.0029, -8.10e-06),
        175: (-0.5044, -0.0326, -0.0011, -1.11e-06),
    }
    DECAYS = (0.001, 0.005, 0.01, 0.02)

    def test_sixteen_entries(self):
        # two-significant-figure agreement: same sign and within half a unit
        # of the second significant digit (5% relative)
        bad = []
        for n, row in self.TABLE.items():
            rule = build_rule(LAGUERRE, n)
            for a, expected in zip(self.DECAYS, row):
                val = float(np.sum(rule.mod_weights * np.exp(-a * rule.nodes)))
                rel = val * a - 1.0
                if math.copysign(1, rel) != math.copysign(1, expected) \
                        or abs(rel / expected - 1.0) > 0.05:
                    bad.append((n, a, rel, expected))
        assert not bad, bad
        report("3", "all 16 slow-decay relative errors match to 2 significant figures")


# ---------------------------------------------------------------------------
# criterion 4 - three-deformation certificate
# ---------------------------------------------------------------------------

class TestCriterion4Bootstrap:
    def test_three_contours(self):
        # the published example lives at T = 0.5 (at T = 1/252 this strike is
        # below the resolution floor); scheme parameters as printed
        cf = RoughCF(PAR_EUROS, 0.5, AdamsConfig(M=1000, n=2))
        opt = OptionSpec(S0=1.0, K=0.8, T=0.5, kind="put")
        prices = []
        for om1, b, om, zeta, N, line, expected in THREE_CONTOUR_CASES:
            c = SinhContour(omega1=om1, b=b, omega=om, zeta=zeta, N=N)
            v = price_sinh(opt, cf, c)
            assert abs(v - expected) < 5e-13, (expected, v)
            prices.append(v)
        spread = max(prices) - min(prices)
        assert spread < 5e-10
        report("4", f"three deformations agree: spread {spread:.1e} < 5e-10, "
                    "printed digits reproduced")


# ---------------------------------------------------------------------------
# criterion 5 - decay-profile asymptotics
# ---------------------------------------------------------------------------

class TestCriterion5Asymptotics:
    def test_profile_convergence(self):
        tau = 1.0 / 252.0
        prof = decay_profile(PAR_EUROS, tau, 1.0, 1.0)

        def gap(xi_abs: float) -> float:
            xi = np.array([xi_abs - 0.5j])
            sol = solve_volterra_bl(xi, tau, PAR_EUROS,
                                    AdamsConfig(M=2000, corrector="exact"))
            return -(sol.phi[0] / xi[0]).real / prof.re_c_inf - 1.0

        g5k, g50k = gap(5.0e3), gap(5.0e4)
        # the saturation of h -> h_inf xi is slow at this vol-of-vol: the
        # profile is still 16% short at |xi| = 5e3 and inside 3% from ~3e4 on
        assert -0.20 < g5k < -0.10
        assert abs(g50k) <= 0.03
        assert abs(g50k) < abs(g5k)
        report("5", f"-Re(phi/xi)/Re c_inf - 1: {g5k:+.1%} at 5e3 (documented), "
                    f"{g50k:+.1%} at 5e4 (<= 3%)")


# ---------------------------------------------------------------------------
# criteria 6-8 - calibration round trips on the synthetic surface
# ---------------------------------------------------------------------------

class TestCriterion6ReverseCalibration:
    def test_parameter_recovery(self, fit_reverse):
        fit = fit_reverse.params
        names = ("alpha", "gamma", "theta", "sigma", "rho", "v0")
        devs = {n: abs(getattr(fit, n) / getattr(TSLA, n) - 1.0) for n in names}
        assert max(devs.values()) <= 5e-3, devs
        report("6", "reverse calibration recovers all six parameters: "
                    + ", ".join(f"{n} {d:.2%}" for n, d in devs.items()))


class TestCriterion7AveReproduction:
    def test_ave_all_expiries(self, tsla_surface, fit_short):
        aves = {}
        for T in TABLE8_EXPIRIES:
            quotes = tsla_surface[T]
            ivs = model_ivs(quotes, fit_short.params, calibration_smile_pricer)
            ok = np.isfinite(ivs)
            assert ok.sum() >= 3
            aves[T] = ave_metric([q for q, good in zip(quotes, ok) if good],
                                 ivs[ok])
        assert max(aves.values()) <= 3.0, aves
        report("7", "fit on 1W-2W: AVE per expiry "
                    + ", ".join(f"{t * 365:.0f}d {v:.3f}%" for t, v in aves.items())
                    + " (all <= 3%)")


class TestCriterion8GhostCalibration:
    def test_ghost_divergence(self, tsla_surface, fit_short):
        quotes = [q for T in TABLE8_EXPIRIES[:2] for q in tsla_surface[T]]
        x0 = RoughHestonParams(alpha=TSLA.alpha * 1.1, gamma=TSLA.gamma * 0.9,
                               theta=TSLA.theta * 1.1, nu=TSLA.nu * 0.9,
                               rho=TSLA.rho * 1.1, v0=TSLA.v0 * 1.1)
        gl_fit = calibrate(quotes, x0, CAL_CFG, pricer=gl_smile_pricer(),
                           restarts=1)
        t1w = TABLE8_EXPIRIES[0]
        smile_quotes = tsla_surface[t1w]
        wing = np.array([q.K <= 0.8 or q.K >= 1.25 for q in smile_quotes])
        market = np.array([q.iv for q in smile_quotes])
        true_gl = model_ivs(smile_quotes, gl_fit.params, calibration_smile_pricer)
        fit_acc = model_ivs(smile_quotes, fit_short.params,
                            calibration_smile_pricer)
        ok = np.isfinite(true_gl) & np.isfinite(fit_acc) & wing
        assert ok.any()
        gap = np.abs(true_gl[ok] - market[ok])
        resid = np.abs(fit_acc[ok] - market[ok])
        assert gap.max() >= 0.02, gap
        assert gap.max() >= 20.0 * resid.max(), (gap.max(), resid.max())
        report("8", f"fixed-setting quadrature calibration: true wing IV gap "
                    f"{gap.max():.3f} >= 0.02 and >= 20x accurate-fit residual "
                    f"{resid.max():.2e}")


# ---------------------------------------------------------------------------
# criterion 9 - invariant spot checks (full suites live in the unit modules)
# ---------------------------------------------------------------------------

class TestCriterion9Invariants:
    def test_invariant_spot_checks(self):
        from rheston.charfn import adams_weights_uniform, cf_rough
        from rheston.numerics import gamma_real
        # weight-sum identity
        a = adams_weights_uniform(0.62, 0.01, 17)
        assert a.sum() == pytest.approx((18 * 0.01) ** 0.62 / gamma_real(1.62),
                                        rel=1e-13)
        # martingale and conjugation
        phi_m = cf_rough(np.array([-1j]), 0.5, PAR_EUROS, AdamsConfig(M=500))[0]
        assert abs(phi_m - 1.0) < 1e-7
        za = cf_rough(np.array([2.0 + 0.25j]), 0.25, PAR_EUROS,
                      AdamsConfig(M=300))[0]
        zb = cf_rough(np.array([-2.0 + 0.25j]), 0.25, PAR_EUROS,
                      AdamsConfig(M=300))[0]
        assert zb == pytest.approx(np.conj(za), rel=1e-12)
        # parity on closed-form contours
        cf = HestonCF(HESTON_T4, 0.5)
        c_put = build_sinh_contour("covered_call", (-1.0, 0.0),
                                   cone=(-math.pi / 2, math.pi / 2),
                                   omega_override=math.pi / 4, eps=1e-13)
        c_call = build_sinh_contour("covered_call", (-1.0, 0.0),
                                    cone=(-math.pi / 2, math.pi / 2),
                                    omega_override=-math.pi / 4, eps=1e-13)
        put = price_sinh(OptionSpec(S0=1.0, K=1.04, T=0.5, kind="put"), cf,
                         c_put, N=60)
        call = price_sinh(OptionSpec(S0=1.0, K=1.04, T=0.5, kind="call"), cf,
                          c_call, N=60)
        assert call - put == pytest.approx(1.0 - 1.04, abs=1e-10)
        # FFT equals the flat rule on-grid
        cfr = RoughCF(PAR_EUROS, 1 / 52, AdamsConfig(M=300))
        res = price_carr_madan_fft(np.array([1.0]),
                                   OptionSpec(S0=1.0, K=1.0, T=1 / 52,
                                              kind="put"), cfr,
                                   zeta=0.25, M_fft=512)
        idx = int(np.argmin(np.abs(res.grid_strikes - 1.0)))
        direct = price_flat_ift(OptionSpec(S0=1.0, K=float(res.grid_strikes[idx]),
                                           T=1 / 52, kind="put"),
                                cfr, -0.5, 0.25, 511)
        assert res.grid_prices[idx] == pytest.approx(direct, abs=1e-12)
        # implied-vol round trip
        from rheston.calibration import bs_price
        opt = OptionSpec(S0=1.0, K=1.1, T=0.25, r=0.02, kind="call")
        assert implied_vol(opt, bs_price(opt, 0.37)) == pytest.approx(
            0.37, abs=1e-10)
        report("9", "invariant spot checks green (full suites in unit modules)")


# ---------------------------------------------------------------------------
# node-count comparison at matched tolerance (performance proxy)
# ---------------------------------------------------------------------------

class TestNodeBudgetComparison:
    def test_sinh_needs_at_most_half_the_laguerre_nodes(self):
        tol = 2e-3  # the best the fixed Laguerre ladder certifies here
        cf = RoughCF(PAR_EUROS, 1 / 252, AdamsConfig(M=1000, n=2))
        strikes = sorted(ROUGH_T252_PRICES)
        c = build_sinh_contour("covered_call", (-1.0, 0.0), omega_override=0.1,
                               eps=1e-10)
        n_sinh = max(plan_truncation(decay_profile(PAR_EUROS, 1 / 252, 1.0, k),
                                     c, 1e-10).N for k in strikes)
        for k in strikes:
            kind = "put" if k <= 1 else "call"
            v = price_sinh(OptionSpec(S0=1.0, K=k, T=1 / 252, kind=kind), cf,
                           c, N=n_sinh)
            assert abs(v / ROUGH_T252_PRICES[k] - 1.0) <= tol
        n_lag = None
        for n in (100, 125, 150, 175):
            ok = True
            for k in strikes:
                kind = "put" if k <= 1 else "call"
                v = price_gauss_laguerre(OptionSpec(S0=1.0, K=k, T=1 / 252,
                                                    kind=kind), cf, n)
                ok &= abs(v / ROUGH_T252_PRICES[k] - 1.0) <= tol
            if ok:
                n_lag = n
                break
        assert n_lag is not None
        assert 2 * (n_sinh + 1) <= n_lag
        report("perf", f"matched tolerance {tol:g}: deformed contour uses "
                       f"{n_sinh + 1} nodes vs Gauss-Laguerre {n_lag} (>= 2x fewer)")
