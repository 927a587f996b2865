# Why log-space code uses the max-shifted LSE instead of the naive formula.

import math

from positstat import LogNum, lse2, lse_n, naive_log_add, log_mul

# Multiplication in log space is a plain add.
a, b = LogNum(-402.1), LogNum(-6.0)
print("log multiply:", log_mul(a, b).lx)       # -408.1

# Adding two tiny probabilities naively: both exponentials underflow in
# binary64 and the sum collapses to log(0).
x, y = LogNum(-1000.0), LogNum(-999.0)
naive = naive_log_add(x, y)
print("naive add of e^-1000 + e^-999:", "zero flag" if naive.is_zero else naive.lx)

# The stable form shifts by the max first, so the larger term is exp(0) = 1.
stable = lse2(x, y)
print("stable add:", stable.lx)                # -999 + ln(1 + e^-1)
assert not stable.is_zero and abs(stable.lx - (-998.6867383124818)) < 1e-10

# Overflow is impossible for lse2 but easy to trigger naively.
big = LogNum(710.0)
print("naive add at +710:", naive_log_add(big, big).lx)   # inf
print("stable add at +710:", lse2(big, big).lx)           # 710 + ln 2

# n-ary version, with exact zeros simply vanishing.
terms = [LogNum(math.log(k)) for k in (1, 2, 3)]
print("lse_n(ln 1, ln 2, ln 3):", lse_n(terms).lx, "~= ln 6 =", math.log(6))
