"""Degree-distribution tails and the discrete power-law fit.

The estimator solves the zeta-likelihood score equation for P(k) ~ k^-alpha
with k_min = 1. First a calibration check on samples with a known exponent,
then the generator's richer-get-richer mechanism: raising the attachment
strength stretches the participation tail while uniform choice stays light.
"""

import numpy as np
from scipy.stats import zipf

from collabnet import metrics, syngen

# Known-exponent calibration: draw from the zeta distribution and recover.
rng = np.random.Generator(np.random.Philox(5))
samples = zipf.rvs(2.5, size=50_000, random_state=rng)
fit = metrics.powerlaw_fit(samples)
print(f"zeta(2.5) samples: alpha_hat = {fit.alpha:.3f}")

# Growth-phase generator snapshots: participation counts per country.
def participation(strength: float, seed: int = 0):
    cfg = syngen.GenConfig(
        seed=seed, n_countries=250, n_papers=400, years=(2010,),
        countries_per_paper={1: 0.3, 2: 0.5, 3: 0.2},
        attachment_strength=strength,
        citation_model=syngen.CitationModel(means={("F", 2010, "article"): 5.0}))
    _, truth = syngen.generate(cfg)
    return sorted(syngen.participation_counts(truth).values())

for strength in (0.0, 1.0, 2.0):
    counts = participation(strength)
    line = f"strength {strength}: countries {len(counts)}, max count {max(counts)}"
    try:
        alpha = metrics.powerlaw_fit(counts).alpha
        line += f", alpha_hat {alpha:.2f}"
    except ValueError as exc:
        line += f", no fit ({exc})"
    print(line)

print("\nuniform choice keeps every country near the mean; linear attachment")
print("concentrates papers on early movers, and superlinear attachment")
print("condenses onto a handful of hubs.")
