# Analytic cycle counts for the two pipelined accelerator designs.
#
# total cycles = outer iterations x (pipeline fill + PE latency); the log
# PE carries an n-ary LSE (exp units, adders, comparators, one log unit),
# the posit PE is a plain multiply-accumulate tree.

from positstat.harness import CycleParams, cycle_model

print("forward-algorithm unit, T = 500,000 observations:")
print(f"{'H':>5} {'log PE':>7} {'posit PE':>9} {'log total':>12} {'posit total':>12} {'speedup':>8}")
for h in (16, 32, 64, 128):
    log = cycle_model(CycleParams("forward", 500_000, h, "log"))
    pos = cycle_model(CycleParams("forward", 500_000, h, "posit"))
    print(f"{h:>5} {log.pe_latency:>7} {pos.pe_latency:>9} "
          f"{log.total_cycles:>12,} {pos.total_cycles:>12,} "
          f"{log.total_cycles / pos.total_cycles:>8.2f}")

print("\ncolumn unit, average SARS-CoV-2 column (N = 309,189):")
for k in (8, 13, 32):
    log = cycle_model(CycleParams("column", 309_189, k, "log"))
    pos = cycle_model(CycleParams("column", 309_189, k, "posit"))
    print(f"  K={k:>3}: log {log.total_cycles:>12,}  posit {pos.total_cycles:>12,}  "
          f"speedup {log.total_cycles / pos.total_cycles:.2f}")
