"""Command-line front end.

Subcommands: price, smile, surface, calibrate, compare, bootstrap.
Configuration comes from a JSON document (--config) with flag overrides;
quotes come in as CSV with header T,K,iv,weight.  Output is deterministic
CSV or JSON.  Exit codes: 0 all rows resolved, 1 bad configuration or
input, 2 at least one row unresolved.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict

import numpy as np

from .bootstrap import bootstrap_price, default_contour_specs
from .calibration import (NoArbitrageViolation, Quote, calibrate,
                          implied_vol)
from .charfn import (AdamsConfig, BMCF, HestonCF, HestonParams, RoughCF,
                     RoughHestonParams, decay_profile, heston_decay_profile)
from .engine import (PriceStatus, benchmark_price, calib_price_batch)
from .inversion import (CALL, PUT, OptionSpec, build_sinh_contour,
                        plan_truncation, plan_truncation_flat,
                        price_carr_madan_fft, price_flat_ift,
                        price_flat_ift_bm, price_gauss_laguerre,
                        price_lewis_gl, price_sinh)

METHODS = ("sinh", "flat", "flat-bm", "lewis-gl", "laguerre", "carr-madan",
           "benchmark", "calib")


class ConfigError(ValueError):
    pass


def _load_config(args) -> dict:
    cfg: dict = {}
    if args.config:
        with open(args.config) as f:
            cfg = json.load(f)
    for key in ("method", "eps", "M", "omega", "out", "format", "daycount"):
        v = getattr(args, key.replace("-", "_"), None)
        if v is not None:
            cfg[key] = v
    cfg.setdefault("eps", 1e-10)
    cfg.setdefault("daycount", 365)
    return cfg


def _model(cfg: dict):
    m = cfg.get("model")
    if not m:
        raise ConfigError("config must contain a 'model' object")
    kind = m.get("type", "rough")
    if kind == "rough":
        p = RoughHestonParams(alpha=m["alpha"], gamma=m["gamma"], theta=m["theta"],
                              nu=m["nu"], rho=m["rho"], v0=m["v0"])
        return "rough", p
    if kind == "heston":
        hp = HestonParams(kappa=m["kappa"], m=m["m"], sigma0=m["sigma0"],
                          rho=m["rho"], v0=m["v0"])
        return "heston", hp
    raise ConfigError(f"unknown model type {kind!r}")


def _grid(cfg: dict) -> tuple[np.ndarray, list[float]]:
    ks = cfg.get("strikes")
    if isinstance(ks, dict):
        strikes = np.linspace(ks["min"], ks["max"], int(ks["count"]))
    elif isinstance(ks, (list, tuple)) and ks:
        strikes = np.asarray(ks, dtype=float)
    else:
        raise ConfigError("config must list strikes (array or {min,max,count})")
    dc = float(cfg.get("daycount", 365))
    if "maturities" in cfg:
        mats = [float(t) for t in cfg["maturities"]]
    elif "maturities_days" in cfg:
        mats = [float(d) / dc for d in cfg["maturities_days"]]
    else:
        raise ConfigError("config must list 'maturities' (years) or 'maturities_days'")
    if not mats:
        raise ConfigError("empty maturity list")
    return strikes, mats


def _cf_for(model_kind, p, T, r, num):
    if model_kind == "rough":
        cfg = AdamsConfig(M=int(num.get("M", 1000)), n=int(num.get("n", 2)))
        return RoughCF(p, T, cfg, r=r)
    return HestonCF(p, T, r=r)


def _profile_for(model_kind, p, T, S0, K):
    if model_kind == "rough":
        return decay_profile(p, T, S0, K)
    return heston_decay_profile(p, T, S0, K)


def _otm_kind(K, S0):
    return PUT if K <= S0 else CALL


def _price_rows(cfg: dict) -> tuple[list[dict], bool]:
    model_kind, p = _model(cfg)
    strikes, mats = _grid(cfg)
    S0 = float(cfg.get("S0", 1.0))
    r = float(cfg.get("r", 0.0))
    method = cfg.get("method", "sinh")
    if method not in METHODS:
        raise ConfigError(f"method must be one of {METHODS}")
    num = dict(cfg.get("numerics", {}))
    if "M" in cfg:
        num["M"] = cfg["M"]
    if "omega" in cfg:
        num["omega"] = cfg["omega"]
    eps = float(cfg.get("eps", 1e-10))
    kind_req = cfg.get("kind", "otm")
    rows: list[dict] = []
    any_unresolved = False
    for T in mats:
        kinds = [kind_req if kind_req != "otm" else _otm_kind(k, S0) for k in strikes]
        settings_base = {"method": method, "eps": eps}
        if method == "benchmark":
            for k, kd in zip(strikes, kinds):
                rep = benchmark_price(OptionSpec(S0=S0, K=float(k), T=T, r=r, kind=kd), p)
                st = rep.settings
                rows.append(_row(k, T, kd, rep.value, dict(
                    settings_base, M=st.M, n=st.n, zeta=st.zeta, Lambda=st.Lambda,
                    N=st.N, omega=st.omega),
                    rep.status.value,
                    rep.bootstrap.spread if rep.bootstrap else None))
                any_unresolved |= rep.status == PriceStatus.UNRESOLVED
        elif method == "calib":
            v, st, status, _ = calib_price_batch(p, T, strikes, S0=S0, r=r, kinds=kinds)
            for i, k in enumerate(strikes):
                rows.append(_row(k, T, kinds[i], v[i], dict(
                    settings_base, M=st.M, n=st.n, zeta=st.zeta, Lambda=st.Lambda,
                    N=st.N, omega=st.omega), status.value, None))
            any_unresolved |= status == PriceStatus.UNRESOLVED
        elif method == "carr-madan":
            zeta = float(num.get("zeta", 0.25))
            m_fft = int(num.get("M_fft", 4096))
            om1 = float(num.get("omega1", -0.5))
            interp = num.get("interp", "pchip")
            cf = _cf_for(model_kind, p, T, r, num)
            for kd in sorted(set(kinds)):
                ks_k = np.array([k for k, kk in zip(strikes, kinds) if kk == kd])
                res = price_carr_madan_fft(ks_k, OptionSpec(S0=S0, K=float(ks_k[0]),
                                                            T=T, r=r, kind=kd),
                                           cf, zeta=zeta, M_fft=m_fft,
                                           omega1=om1, interp=interp)
                for i, k in enumerate(ks_k):
                    status = "ok" if res.in_bounds[i] else "no_arbitrage"
                    any_unresolved |= not res.in_bounds[i]
                    rows.append(_row(k, T, kd, res.prices[i], dict(
                        settings_base, zeta=zeta, N=m_fft, omega1=om1,
                        interp=interp), status, None))
        else:
            cf = _cf_for(model_kind, p, T, r, num)
            for k, kd in zip(strikes, kinds):
                opt = OptionSpec(S0=S0, K=float(k), T=T, r=r, kind=kd)
                prof = _profile_for(model_kind, p, T, S0, float(k))
                try:
                    value, extra = _price_one(method, opt, cf, prof, num, eps)
                    status = "ok"
                except Exception as exc:  # divergence, side flip, instability
                    value, extra, status = float("nan"), {}, f"error:{type(exc).__name__}"
                    any_unresolved = True
                rows.append(_row(k, T, kd, value, dict(settings_base, **extra), status, None))
    return rows, any_unresolved


def _price_one(method, opt, cf, prof, num, eps):
    m_used = int(num.get("M", 1000)) if isinstance(cf, RoughCF) else None
    n_used = int(num.get("n", 2)) if isinstance(cf, RoughCF) else None
    if method == "sinh":
        side = 1 if prof.z_T > 0 else -1
        strip = tuple(num.get("strip", (-1.0, 0.0)))
        omega = float(num["omega"]) if "omega" in num else None
        c = build_sinh_contour(opt.kind, strip, omega_override=omega,
                               eps=eps, side=side)
        N = int(num["N"]) if "N" in num else plan_truncation(prof, c, eps).N
        return float(price_sinh(opt, cf, c, N=N)), dict(
            omega=c.omega, omega1=c.omega1, b=c.b, zeta=c.zeta, N=N,
            M=m_used, n=n_used)
    if method == "flat":
        om1 = float(num.get("omega1", -0.5))
        zeta = float(num.get("zeta", 0.1))
        N = int(num["N"]) if "N" in num else plan_truncation_flat(
            prof, zeta, eps, K=opt.K).N
        return float(price_flat_ift(opt, cf, om1, zeta, N)), dict(
            omega1=om1, zeta=zeta, N=N, M=m_used, n=n_used)
    if method == "flat-bm":
        om1 = float(num.get("omega1", -0.5))
        zeta = float(num.get("zeta", 0.5))
        N = int(num.get("N", 200))
        sigma_ad = float(num.get("sigma_ad", 0.5))
        bm = BMCF(sigma=sigma_ad, T=opt.T, r=opt.r)
        return float(price_flat_ift_bm(opt, cf, bm, om1, zeta, N)), dict(
            omega1=om1, zeta=zeta, N=N, sigma_ad=sigma_ad,
            M=m_used, n=n_used)
    if method == "lewis-gl":
        N = int(num.get("N", 150))
        return float(price_lewis_gl(opt, cf, N)), dict(N=N, M=m_used, n=n_used)
    if method == "laguerre":
        N = int(num.get("N", 175))
        return float(price_gauss_laguerre(opt, cf, N)), dict(
            N=N, M=m_used, n=n_used)
    raise ConfigError(f"unsupported method {method!r}")


def _row(K, T, kind, price, settings, status, spread):
    return {
        "K": float(K), "T": float(T), "kind": kind,
        "price": None if price is None or not np.isfinite(price) else float(price),
        "status": status,
        "bootstrap_spread": spread,
        **{f"set_{k}": v for k, v in sorted(settings.items()) if v is not None},
    }


def _emit(rows: list[dict], cfg: dict):
    fmt = cfg.get("format", "csv")
    out_path = cfg.get("out")
    if fmt == "json":
        text = json.dumps(rows, indent=2, default=_json_default, sort_keys=True) + "\n"
    else:
        cols: list[str] = []
        for row in rows:
            for k in row:
                if k not in cols:
                    cols.append(k)
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: _fmt_cell(row.get(k)) for k in cols})
        text = buf.getvalue()
    if out_path:
        with open(out_path, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _fmt_cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".12g")
    return v


def _json_default(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    raise TypeError(type(v))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_price(args) -> int:
    cfg = _load_config(args)
    rows, unresolved = _price_rows(cfg)
    _emit(rows, cfg)
    return 2 if unresolved else 0


def _smile_rows(cfg: dict) -> tuple[list[dict], bool]:
    rows, unresolved = _price_rows(cfg)
    out = []
    for row in rows:
        price = row["price"]
        iv, status = 0.0, row["status"]
        if price is not None and status in ("ok", "fallback_flat"):
            opt = OptionSpec(S0=float(cfg.get("S0", 1.0)), K=row["K"], T=row["T"],
                             r=float(cfg.get("r", 0.0)), kind=row["kind"])
            try:
                iv = implied_vol(opt, price)
            except NoArbitrageViolation:
                iv, status = 0.0, "no_arbitrage"  # the (*) marker of the tables
                unresolved = True
        elif status == "no_arbitrage":
            iv = 0.0
            unresolved = True
        out.append({"K": row["K"], "T": row["T"], "iv": iv, "status": status})
    return out, unresolved


def cmd_smile(args) -> int:
    cfg = _load_config(args)
    rows, unresolved = _smile_rows(cfg)
    _emit(rows, cfg)
    return 2 if unresolved else 0


def cmd_surface(args) -> int:
    # same rows as smile over the full (K, T) grid; kept separate so surface
    # files can carry their own output path / format defaults
    return cmd_smile(args)


def cmd_calibrate(args) -> int:
    cfg = _load_config(args)
    if not args.quotes:
        print("calibrate requires --quotes CSV (header T,K,iv,weight)", file=sys.stderr)
        return 1
    quotes: list[Quote] = []
    with open(args.quotes) as f:
        rd = csv.DictReader(f)
        need = {"T", "K", "iv"}
        if rd.fieldnames is None or not need.issubset(set(rd.fieldnames)):
            print("quotes CSV must have header T,K,iv[,weight]", file=sys.stderr)
            return 1
        for rec in rd:
            quotes.append(Quote(T=float(rec["T"]), K=float(rec["K"]),
                                iv=float(rec["iv"]),
                                weight=float(rec.get("weight") or 1.0)))
    if len(quotes) < 6:
        print("underdetermined: at least 6 quotes required for 6 parameters",
              file=sys.stderr)
        return 1
    model_kind, p0 = _model(cfg)
    if model_kind != "rough":
        print("calibration targets the rough model", file=sys.stderr)
        return 1
    S0 = float(cfg.get("S0", 1.0))
    r = float(cfg.get("r", 0.0))
    res = calibrate(quotes, p0, S0=S0, r=r)
    payload = {
        "params": asdict(res.params),
        "objective_value": res.objective_value,
        "ave_by_expiry": {format(k, ".10g"): v for k, v in res.ave_by_expiry.items()},
        "n_evals": res.n_evals,
        "converged": res.converged,
        "per_quote_status": list(res.per_quote_status),
    }
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if cfg.get("out"):
        with open(cfg["out"], "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0 if all(res.per_quote_status) else 2


def cmd_compare(args) -> int:
    cfg = _load_config(args)
    methods = cfg.get("methods") or [m for m in (cfg.get("method"),) if m]
    if not methods:
        methods = ["sinh", "flat-bm", "flat", "lewis-gl", "laguerre"]
    rows_by_method: dict[str, list[dict]] = {}
    bench_cfg = dict(cfg, method="benchmark")
    bench_rows, unresolved = _price_rows(bench_cfg)
    bench = {(r["K"], r["T"]): r["price"] for r in bench_rows}
    out = []
    for method in methods:
        m_rows, unres_m = _price_rows(dict(cfg, method=method))
        unresolved |= unres_m
        for r in m_rows:
            bv = bench.get((r["K"], r["T"]))
            rel = None
            if bv and r["price"] is not None and abs(bv) > 0:
                rel = (r["price"] - bv) / bv
            out.append({"method": method, "K": r["K"], "T": r["T"],
                        "benchmark": bv, "price": r["price"],
                        "rel_err": rel, "status": r["status"]})
    _emit(out, cfg)
    return 2 if unresolved else 0


def cmd_bootstrap(args) -> int:
    cfg = _load_config(args)
    model_kind, p = _model(cfg)
    strikes, mats = _grid(cfg)
    S0 = float(cfg.get("S0", 1.0))
    r = float(cfg.get("r", 0.0))
    eps = float(cfg.get("eps", 1e-10))
    num = dict(cfg.get("numerics", {}))
    rows = []
    unresolved = False
    for T in mats:
        cf = _cf_for(model_kind, p, T, r, num)
        for k in strikes:
            kd = cfg.get("kind", "otm")
            kd = _otm_kind(k, S0) if kd == "otm" else kd
            opt = OptionSpec(S0=S0, K=float(k), T=T, r=r, kind=kd)
            prof = _profile_for(model_kind, p, T, S0, float(k))
            specs = default_contour_specs(prof, kd, include_flat=bool(cfg.get("include_flat", True)))
            rep = bootstrap_price(opt, cf, specs, eps=eps, profile=prof,
                                  threshold=float(cfg.get("threshold", 1e-5)))
            unresolved |= not rep.agreed
            rows.append({
                "K": float(k), "T": T, "kind": kd,
                "prices": list(rep.prices), "spread": rep.spread,
                "certified_tolerance": rep.certified_tolerance,
                "agreed": rep.agreed, "status": rep.status.value,
            })
    cfg.setdefault("format", "json")
    _emit(rows, cfg)
    return 2 if unresolved else 0


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="rheston",
                                 description="Rough Heston pricing and calibration")
    ap.add_argument("--config", help="JSON configuration file")
    ap.add_argument("--method", choices=METHODS)
    ap.add_argument("--eps", type=float)
    ap.add_argument("--M", type=int)
    ap.add_argument("--omega", type=float)
    ap.add_argument("--out")
    ap.add_argument("--format", choices=("csv", "json"))
    ap.add_argument("--daycount", type=int, choices=(365, 252))
    ap.add_argument("--quotes", help="quotes CSV for calibrate")
    ap.add_argument("command", choices=("price", "smile", "surface", "calibrate",
                                        "compare", "bootstrap"))
    args = ap.parse_args(argv)
    handler = {
        "price": cmd_price, "smile": cmd_smile, "surface": cmd_surface,
        "calibrate": cmd_calibrate, "compare": cmd_compare,
        "bootstrap": cmd_bootstrap,
    }[args.command]
    try:
        return handler(args)
    except (ConfigError, FileNotFoundError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
