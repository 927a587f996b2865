# Per-operation accuracy of each number system, bucketed by result magnitude.
#
# A desk-scale version of the full sweep (use the CLI for the real thing):
#   positstat ops-accuracy --seed 42 --out results/

from positstat import datagen, harness

specs = [
    datagen.GenSpec(42, "operands", 0, op="add", count=1_500, exponent_range=(-10_000, 0)),
    datagen.GenSpec(42, "operands", 1, op="mul", count=800, exponent_range=(-10_000, 0)),
]
systems = ("binary64", "log", "posit64e9", "posit64e12", "posit64e18")
records, summaries = harness.run_ops_accuracy(systems, specs)

print(f"{'system':>12} {'op':>4} {'bucket':>18} {'median err':>12} {'n':>5} {'uflow':>6}")
for s in summaries:
    if s.op_or_app != "add":
        continue
    med = "-" if s.count == s.excluded_count else f"{s.p50:.2e}"
    print(f"{s.system:>12} {s.op_or_app:>4} [{s.bucket_lo:>7},{s.bucket_hi:>7}) "
          f"{med:>12} {s.count:>5} {s.underflow_count:>6}")

# binary64 vanishes below 2^-1074; log-space error grows as numbers shrink;
# the posits stay flat until their regime bits start eating the fraction.
