# Track the forward algorithm's alpha states sinking below binary64's floor.

import numpy as np

from positstat import datagen, kernels
from positstat.oracle import exponent_of
from positstat.systems import OracleSystem, get_system

# A Dirichlet-sampled 4-state model over a 4-symbol alphabet.  The oracle
# runs the recurrence with a huge exponent range, so the exact base-2
# exponent of the largest alpha state is visible long after a double would
# have flushed to zero.
spec = datagen.GenSpec(master_seed=7, kind="hmm", n_states=4, n_symbols=4, n_obs=2_000)
model = datagen.gen_hmm(spec)
trace = kernels.exponent_trace(model)

crossing = next(t for t, e in trace if e < -1_074)
print(f"alpha exponent after 1 step : {trace[0][1]}")
print(f"alpha exponent after {trace[-1][0]} steps: {trace[-1][1]}")
print(f"first iteration below binary64's 2^-1074: t = {crossing}")

# The likelihood itself tells the same story per number system.
truth = kernels.forward_likelihood(model, OracleSystem())
print("\noracle likelihood exponent:", exponent_of(truth))
print("binary64 result:", kernels.forward_likelihood(model, get_system("binary64")).to_float())
p18 = kernels.forward_likelihood(model, get_system("posit64e18"))
print("posit(64,18) result exponent:", exponent_of(p18))
