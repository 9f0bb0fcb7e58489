import numpy as np
import pytest

from rheston import HestonParams, RoughHestonParams

# model parameter set calibrated to the S&P surface, reused across the tables
PAR_EUROS = RoughHestonParams(alpha=0.62, gamma=0.1, theta=0.3156,
                              nu=0.331, rho=-0.681, v0=0.0392)

# short-maturity Heston set used for the closed-form comparison tables
HESTON_T4 = HestonParams(kappa=1.5768, m=0.0398, sigma0=0.5751,
                         rho=-0.5711, v0=0.0175)

# high-vol equity set from the calibration study (sigma = gamma * nu)
TSLA = RoughHestonParams(alpha=0.511913, gamma=2.36609, theta=0.424949,
                         nu=1.36839 / 2.36609, rho=-0.178493, v0=0.527527)

# one-week-equivalent example set with alpha = 0.6
KAMURAN = RoughHestonParams(alpha=0.6, gamma=2.0, theta=0.025,
                            nu=0.2, rho=-0.6, v0=0.025)

# reference prices, T = 0.1, S0 = 1: puts for K <= 1, calls above
HESTON_T01_PRICES = {
    0.6: 1.17218e-09,
    0.7: 2.36354837e-07,
    0.8: 1.9869991862e-05,
    0.9: 8.057899470805e-04,
    1.0: 0.0163700005331343,
    1.1: 6.855305756e-05,
    1.2: 1.22377846e-07,
    1.3: 2.538235e-10,
    1.4: 6.968e-13,
}

# rough Heston reference prices at T = 1/252, S0 = 1 (OTM side)
ROUGH_T252_PRICES = {
    0.95: 2.4557955e-07,
    0.975: 1.29117047e-04,
    1.0: 5.0111443104e-03,
    1.025: 9.16277402e-05,
    1.05: 3.3118e-08,
}

# three-deformation put example: K = 0.8, T = 0.5, M = 1000
THREE_CONTOUR_CASES = [
    # (omega1, b, omega, zeta, N, line, price)
    (0.429259757, 0.868680815, 0.1, 0.100193684, 42, "put",
     0.00611179127528501),
    (0.325762041, 1.014615984, 0.2, 0.085575366, 47, "put",
     0.00611179083570821),
    (-0.5, 0.769884522, 0.0, 0.114812002, 41, "covered_call",
     0.00611179093246816),
]


@pytest.fixture(scope="session")
def par_euros():
    return PAR_EUROS


@pytest.fixture(scope="session")
def heston_t4():
    return HESTON_T4


@pytest.fixture(scope="session")
def tsla():
    return TSLA


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
