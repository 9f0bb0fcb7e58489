import math
from dataclasses import replace

import numpy as np
import pytest

from rheston.charfn import (CharFnDivergence, HestonParams,
                            RoughHestonParams, decay_profile,
                            heston_decay_profile, cf_heston)
from rheston.engine import (NumericalSettings, PriceStatus, SinhEvaluator,
                            benchmark_price, calib_price, calib_price_batch,
                            refine_settings)
from rheston.inversion import (OptionSpec, build_sinh_contour, plan_truncation,
                               price_sinh)

from conftest import PAR_EUROS, ROUGH_T252_PRICES

ATM_252 = OptionSpec(S0=1.0, K=1.0, T=1.0 / 252.0, kind="put")


class TestNumericalSettings:
    def test_n_property(self):
        s = NumericalSettings(omega=0.1, M=500, n=2, zeta=0.1, Lambda=5.5)
        assert s.N == 55

    def test_validation(self):
        with pytest.raises(ValueError):
            NumericalSettings(omega=0.1, M=1, n=2, zeta=0.1, Lambda=5.0)
        with pytest.raises(ValueError):
            NumericalSettings(omega=0.1, M=100, n=0, zeta=0.1, Lambda=5.0)


class TestRefineSettings:
    START = NumericalSettings(omega=0.0, M=1000, n=2, zeta=0.1, Lambda=6.0)

    def test_stub_returns_start_settings(self):
        # a price independent of every knob: all trial deltas are zero and
        # each loop reverts its trial, leaving the settings untouched
        calls = []

        def stub(s):
            calls.append(s)
            return np.array([0.0163700005331343])

        v, s_fin, converged = refine_settings(stub, self.START, is_flat=True)
        assert converged
        assert s_fin == self.START
        assert float(v[0]) == pytest.approx(0.0163700005331343)
        assert len(calls) <= 6  # single trial per loop

    def test_divergent_start_recovers_by_shrinking(self):
        # injected overflow for large truncation: the retry loop shrinks
        # Lambda by 0.8 per attempt until the price is finite
        lam_ok = self.START.Lambda * 10.0 * 0.8 ** 6

        def price_fn(s):
            if s.Lambda > lam_ok * 1.0000001:
                raise CharFnDivergence("overflow injected")
            return np.array([1.25])

        start = replace(self.START, Lambda=self.START.Lambda * 10.0)
        v, s_fin, _ = refine_settings(price_fn, start, is_flat=True)
        assert np.isfinite(v[0])
        assert s_fin.Lambda <= lam_ok * 1.0000001

    def test_unrecoverable_divergence(self):
        def price_fn(s):
            raise CharFnDivergence("always")

        v, s_fin, converged = refine_settings(price_fn, self.START, is_flat=True)
        assert not converged
        assert not np.isfinite(v[0])

    def test_m_escalation_on_coarse_start(self):
        # price depends on M like a first-order scheme until 800 steps
        def price_fn(s):
            return np.array([1.0 + 0.3 / min(s.M, 800)])

        start = replace(self.START, M=100)
        v, s_fin, _ = refine_settings(price_fn, start, is_flat=False,
                                      do_m_reduction=False)
        assert s_fin.M > 100

    def test_requires_m_at_least_100(self):
        with pytest.raises(ValueError):
            refine_settings(lambda s: np.array([1.0]),
                            replace(self.START, M=50))


class TestBenchmarkPrice:
    def test_short_maturity_atm(self):
        rep = benchmark_price(ATM_252, PAR_EUROS)
        assert rep.status is PriceStatus.OK
        assert rep.value == pytest.approx(ROUGH_T252_PRICES[1.0], rel=1e-6)
        assert rep.bootstrap is not None and rep.bootstrap.agreed
        assert rep.n_cf_evals > 0

    def test_put_call_reports_agree_atm(self):
        put = benchmark_price(ATM_252, PAR_EUROS)
        call = benchmark_price(replace(ATM_252, kind="call"), PAR_EUROS)
        tol = max(put.bootstrap.certified_tolerance,
                  call.bootstrap.certified_tolerance)
        assert abs(put.value - call.value) <= max(tol, 1e-9)

    def test_heston_limit_against_closed_form(self):
        p1 = RoughHestonParams(alpha=0.999, gamma=PAR_EUROS.gamma,
                               theta=PAR_EUROS.theta, nu=PAR_EUROS.nu,
                               rho=PAR_EUROS.rho, v0=PAR_EUROS.v0)
        hp = HestonParams(kappa=p1.gamma, m=p1.theta, sigma0=p1.gamma * p1.nu,
                          rho=p1.rho, v0=p1.v0)
        rep = benchmark_price(OptionSpec(S0=1.0, K=1.0, T=0.5, kind="put"), p1)
        c = build_sinh_contour("covered_call", (-1.0, 0.0),
                               cone=(-math.pi / 2, math.pi / 2),
                               omega_override=math.pi / 4, eps=1e-14)
        plan = plan_truncation(heston_decay_profile(hp, 0.5, 1.0, 1.0), c, 1e-14)
        exact = price_sinh(OptionSpec(S0=1.0, K=1.0, T=0.5, kind="put"),
                           lambda xi: cf_heston(xi, 0.5, hp), c, N=plan.N)
        assert rep.value == pytest.approx(exact, rel=1e-3)

    def test_long_maturity_records_reduced_m(self):
        rep = benchmark_price(OptionSpec(S0=1.0, K=1.0, T=2.0, kind="put"),
                              PAR_EUROS)
        assert rep.status is PriceStatus.OK
        # the recorded settings stay cheap: far fewer steps than the 1000 start
        assert rep.settings.M < 1000
        assert rep.settings.reduced_M
        # and those settings still reproduce the value near the refinement
        # tolerance (the 0.8-step reduction drifts by < 1e-5 per step)
        c = build_sinh_contour("put", (0.0, 1.0),
                               omega_override=rep.settings.omega, eps=1e-16)
        ev = SinhEvaluator(PAR_EUROS, 2.0, c, 1.0, np.array([1.0]), ["put"])
        v_cheap = float(ev.price(rep.settings)[0])
        assert v_cheap == pytest.approx(rep.value, rel=1e-4)

    def test_unresolved_below_price_floor(self):
        rep = benchmark_price(OptionSpec(S0=1.0, K=0.7, T=1.0 / 252.0,
                                         kind="put"), PAR_EUROS)
        assert rep.status is PriceStatus.UNRESOLVED
        assert math.isnan(rep.value)

    def test_determinism(self):
        a = benchmark_price(ATM_252, PAR_EUROS)
        b = benchmark_price(ATM_252, PAR_EUROS)
        assert a.value == b.value
        assert a.settings == b.settings


class TestCalibPrice:
    def test_matches_benchmark_at_desk_tolerance(self, tsla):
        opt = OptionSpec(S0=1.0, K=1.0, T=2.0 / 365.0, kind="put")
        fast = calib_price(opt, tsla)
        slow = benchmark_price(opt, tsla)
        assert fast.status is PriceStatus.OK
        assert fast.value == pytest.approx(slow.value, rel=1e-4)

    def test_easy_case_no_fallback_flags(self):
        rep = calib_price(OptionSpec(S0=1.0, K=1.0, T=2.0, kind="put"),
                          PAR_EUROS)
        assert rep.status is PriceStatus.OK
        assert not rep.settings.used_flat_fallback

    def test_tiny_price_unresolved(self):
        rep = calib_price(OptionSpec(S0=1.0, K=0.55, T=1.0 / 252.0,
                                     kind="put"), PAR_EUROS)
        assert rep.status is PriceStatus.UNRESOLVED
        assert math.isnan(rep.value)

    def test_batch_prices_table_strikes(self):
        ks = np.array(sorted(ROUGH_T252_PRICES))
        v, settings, status, evals = calib_price_batch(PAR_EUROS, 1.0 / 252.0, ks)
        assert status is PriceStatus.OK
        for i, k in enumerate(ks):
            assert v[i] == pytest.approx(ROUGH_T252_PRICES[k], rel=2e-4), k
        assert evals > 0

    def test_plan_shrinks_with_looser_tolerance(self):
        # settings monotonicity: a looser tolerance never needs more terms
        c6 = build_sinh_contour("put", (0.0, 1.0), omega_override=0.1, eps=1e-6)
        c12 = build_sinh_contour("put", (0.0, 1.0), omega_override=0.1, eps=1e-12)
        prof = decay_profile(PAR_EUROS, 0.5, 1.0, 1.0)
        n6 = plan_truncation(prof, c6, 1e-6).N
        n12 = plan_truncation(prof, c12, 1e-12).N
        assert n6 <= n12
        assert c6.zeta >= c12.zeta
