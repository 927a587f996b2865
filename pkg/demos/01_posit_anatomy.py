# Decode a posit by hand and watch the format trade range for precision.

from positstat import PositConfig, PositValue
from positstat.posit import config_properties, decode_fields, field_widths_for, to_real
from positstat.oracle import BigReal

# The 8-bit pattern 0_0001_10_1 in posit(8,2): sign 0, regime 0001 (k=-3),
# exponent bits 10 (e=2), one fraction bit (1.5 significand).
c = PositConfig(8, 2)
p = PositValue(0b0_0001_10_1, c)
f = decode_fields(p)
print(f"bits=0x{p.to_hex()}  sign={f.sign} k={f.k} e={f.e} fraction={f.fraction}/{1 << f.fraction_bit_count}")
print("value:", to_real(p))          # 1.5 x 2^-10
assert to_real(p) == BigReal.from_dyadic(3, -11)

# The same 64 bits buy very different ranges depending on ES.
print(f"\n{'format':>13} {'useed':>10} {'minpos':>16} {'max frac bits':>14}")
print(f"{'binary64':>13} {'-':>10} {'2^-1074':>16} {52:>14}")
for es in (6, 9, 12, 15, 18, 21):
    cfg = PositConfig(64, es)
    props = config_properties(cfg)
    print(f"{str(cfg):>13} {'2^' + str(cfg.useed_log2):>10} "
          f"{'2^' + str(cfg.minpos_log2):>16} {props.max_fraction_bits:>14}")

# Precision depends on where the value sits: encoding 2^-2048 in posit(64,6)
# burns 33 regime bits, while posit(64,9) reaches it with 5.
x = BigReal.power_of_two(-2048)
for es in (6, 9):
    w = field_widths_for(x, PositConfig(64, es))
    print(f"\n2^-2048 in posit(64,{es}): regime {w.regime_bits} bits, "
          f"exponent {w.exponent_bits}, fraction {w.fraction_bits}")
