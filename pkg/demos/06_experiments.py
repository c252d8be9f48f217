"""
Sweeps from a configuration
===========================

The experiment drivers read the same INI format as the command line tool
(``oamswipt power-sweep --config my.ini``).  Here a coarse power sweep and a
short stretch of the distance sweep run in-process.
"""

from oamswipt import parse_config
from oamswipt.experiments import run_distance_sweep, run_power_sweep

config = parse_config(
    """
[power_sweep]
start = 20
stop = 40
step = 10
schemes = ris-8x8, ris-4x4, los-oam, mimo-ris-8x8

[distance_sweep]
start = 0.4
stop = 0.7
step = 0.02
schemes = ris-8x8
"""
)

table = run_power_sweep(config, seed=0, jobs=1)
for row in table.select():
    print("%4.0f dBm  %-13s %.5f bit/s/Hz" % (row["sweep_value"], row["scheme"], row["capacity_bps_hz"]))

# the dip just after 0.4 m and the bump near 0.5 m
for row in run_distance_sweep(config, seed=0, jobs=1).select():
    print("%.2f m  %.5f" % (row["sweep_value"], row["capacity_bps_hz"]))

# table.write("results/power_sweep.csv") stores the same rows as CSV
