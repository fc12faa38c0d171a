"""Regenerates the stationarity fixtures and prints reference statistics.

Requires numpy and statsmodels. The printed values are frozen in
tests/reference_stats.rs.
"""
import warnings

import numpy as np
from statsmodels.tsa.stattools import adfuller, kpss

warnings.simplefilter("ignore")
rng = np.random.default_rng(2024)
series = {
    "random_walk": np.cumsum(rng.normal(size=60)),
    "trend_noise": 5 + 0.3 * np.arange(51) + rng.normal(scale=2.0, size=51),
}
e = rng.normal(size=80)
a = np.zeros(80)
for i in range(1, 80):
    a[i] = 0.6 * a[i - 1] + e[i]
series["ar1"] = a

for name, v in series.items():
    v = np.round(v, 6)
    with open(f"{name}.csv", "w") as f:
        f.write("value\n")
        f.write("\n".join(repr(float(x)) for x in v) + "\n")
    n = len(v)
    for lag in [0, int(np.floor((n - 1) ** (1 / 3)))]:
        stat = adfuller(v, maxlag=lag, regression="ct", autolag=None)[0]
        print(name, "adf", lag, repr(float(stat)))
    for lag in [2, int(np.floor(4 * (n / 100) ** 0.25))]:
        stat = kpss(v, regression="c", nlags=lag)[0]
        print(name, "kpss", lag, repr(float(stat)))
