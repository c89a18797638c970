"""Synthetic closes and volatility indices for trying the CLI.

A log-volatility Ornstein-Uhlenbeck process drives daily returns; the two
indices quote the annualized volatility with a premium and noise.
"""
import numpy as np
import pandas as pd

rng = np.random.default_rng(20240601)
days = pd.bdate_range("2000-01-03", periods=2600)
n = len(days)
log_vol = np.empty(n)
log_vol[0] = np.log(0.01)
for i in range(1, n):
    log_vol[i] = log_vol[i - 1] + 0.02 * (np.log(0.01) - log_vol[i - 1]) + 0.12 * rng.standard_normal()
vol = np.exp(log_vol)
returns = vol * rng.standard_normal(n)
returns[0] = 0.0
close = 1000.0 * np.exp(np.cumsum(returns))
annual = 100.0 * np.sqrt(252.0) * vol

pd.DataFrame({"date": days.strftime("%Y-%m-%d"), "close": close.round(4)}).to_csv("prices.csv", index=False)
vix = annual * 1.15 * np.exp(0.08 * rng.standard_normal(n))
pd.DataFrame({"date": days.strftime("%Y-%m-%d"), "close": vix.round(2)}).to_csv("vix.csv", index=False)
later = days >= "2001-01-01"
vxo = annual[later] * 1.2 * np.exp(0.1 * rng.standard_normal(later.sum()))
pd.DataFrame({"date": days[later].strftime("%Y-%m-%d"), "close": vxo.round(2)}).to_csv("vxo.csv", index=False)

ga = rng.gamma(2.0, 5.0, 5000)
pd.DataFrame({"value": ga}).to_csv("gamma_samples.csv", index=False)
