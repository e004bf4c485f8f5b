"""
Conjugate Gaussian updates of a finite set of priors
====================================================

Three normal priors on a mean theta, each updated with the same batch of
20 observations from N(0, 1) again and again. Each posterior variance
shrinks like 1 / (t n) and each mean is pulled to the sample mean, so the
spread of the set collapses. The printed quantity is the average squared
change of (mu, tau^2) between consecutive rounds.
"""
import numpy as np

from credalfix import DataBatch, GaussianFGCS, run_illustration

np.set_printoptions(precision=5, suppress=True)

init = GaussianFGCS.default()
batch = DataBatch.generate(20, seed=0, theta_star=0.0)
print(f"sample mean of the batch: {batch.mean:.5f}")
print("prior rows (mu, tau2):")
print(init.as_array())

tr = run_illustration(init, batch, rounds=50)
for t in (1, 2, 5, 10, 20, 32, 50):
    print(f"round {t:2d}: avg sq diff = {tr.avg_sq_diff[t - 1]:.3e}")
print("after 50 rounds (mu, tau2):")
print(tr.params[-1])
