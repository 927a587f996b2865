# Application-level accuracy: whole-kernel results per number system.
#
# Small ensembles; the CLI runs the full desk-scale ones:
#   positstat app-accuracy --app forward --out results/
#   positstat app-accuracy --app pbd --out results/

from positstat import datagen, harness
from positstat.oracle import exponent_of

# Forward-algorithm likelihoods in a regime far below binary64 (around
# 2^-3000): binary64 underflows outright, log space and posit survive.
ensemble = datagen.forward_ensemble_specs(11, 6, (-4_000, -2_000), n_symbols=64)
result = harness.run_app_accuracy("forward", ("binary64", "log", "posit64e18"), ensemble)

print("oracle likelihood exponents:", [exponent_of(t) for t in result.truths])
print(f"\n{'system':>12} {'median err':>12} {'underflows':>11}")
for name in ("binary64", "log", "posit64e18"):
    recs = [r for r in result.records if r.system == name]
    errs = sorted(r.relative_error for r in recs)
    med = harness.nearest_rank_percentile(errs, 50)
    print(f"{name:>12} {med:>12.2e} {sum(r.underflowed for r in recs):>11}")

# Poisson-binomial p-values around 2^-900: same picture, and the error CDF
# rows are what the frontend's cdf figure plots.
inst, truth = datagen.gen_pbd_targeted(11, 0, -900, (-1_200, -600), threshold=64)
print(f"\none PBD instance: N={inst.n_trials} K={inst.threshold} "
      f"p-value exponent {exponent_of(truth)}")
