#!/usr/bin/env python3
"""How the fractional orders shape the infestation.

Time order alpha < 1 adds memory: the response to the decaying point
source is weaker, so the peak total drops as alpha drops (subdiffusion).
Space order beta < 2 fattens the spreading tails. Both sweeps run the
uncontrolled scenarios so the orders act alone.
"""

from fracspray import bundled_config, load_scenario, run_sweep

base1 = load_scenario(
    bundled_config("example1"),
    ["actuators.enabled=false", "output.snapshot_times="],
    name="alpha_sweep",
)
print("time order sweep (peak of the sensor sum rises with alpha):")
for rec in run_sweep(base1, "alpha", [0.7, 0.8, 0.9, 1.0]):
    print(f"  alpha={rec['value']:<4}  peak {rec['peak_total']:>9.1f}   final {rec['final_total']:>9.1f}")

base2 = load_scenario(
    bundled_config("example2"),
    ["actuators.enabled=false", "output.snapshot_times="],
    name="beta_sweep",
)
print("\nspace order sweep (T = 4 s, absorbing boundary):")
for rec in run_sweep(base2, "beta", [2.0, 1.9, 1.7, 1.6, 1.5]):
    print(f"  beta={rec['value']:<4}  peak {rec['peak_total']:>9.1f}   final {rec['final_total']:>9.1f}")

print("\ngain sweep at alpha=0.7 (controlled; lowest final total wins):")
base3 = load_scenario(bundled_config("example1"), ["output.snapshot_times="], name="kp_sweep")
records = run_sweep(base3, "k_p", [1, 2, 3, 4, 5, 6, 7, 8, 9])
for rec in records:
    print(f"  k_p={rec['value']:<3}  final {rec['final_total']:>9.1f}  (final/peak {rec['final_peak_ratio']:.3f})")
best = min((r for r in records if "final_total" in r), key=lambda r: r["final_total"])
print(f"  -> lowest final total at k_p={best['value']:g}")
