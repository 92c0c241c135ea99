"""The event-regulated pendulum: anti-phase bursts balance it, in-phase
bursts swing it hard.

Runs the event-pendulum scenario (gain switch mid-run) and plots angle
plus the two motor-neuron voltages around the switch.
"""

import tempfile
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from eventreg.experiments import ExperimentSpec, run_experiment
from eventreg.io import read_trajectory_csv

out = Path(tempfile.mkdtemp()) / "event-pendulum"
rs = run_experiment(ExperimentSpec("event-pendulum", out_dir=out, force=True))
print(f"peak |theta| before switch: {rs.metrics['peak_theta_pre_switch']:.3f}")
print(f"peak |theta| after switch:  {rs.metrics['peak_theta_post_switch']:.3f}")
print(f"burst offset after switch:  {rs.metrics['post_switch_burst_offset']:+.3f}")

t, cols = read_trajectory_csv(rs.trajectories["closed_loop"])
switch = rs.manifest["config"]["switch_time"]

fig, axes = plt.subplots(2, 1, figsize=(8, 5), sharex=True)
axes[0].plot(t, cols["theta"], lw=0.9)
axes[0].axvline(switch, color="k", ls="--", lw=0.8)
axes[0].set_ylabel("theta")
axes[0].set_title("pendulum angle; dashed line marks the inhibitory-to-excitatory switch",
                  fontsize=9)
axes[1].plot(t, cols["v_1"], lw=0.5, label="v1")
axes[1].plot(t, cols["v_3"], lw=0.5, label="v3")
axes[1].axvline(switch, color="k", ls="--", lw=0.8)
axes[1].set_ylabel("v")
axes[1].set_xlabel("t")
axes[1].legend(fontsize=8)
fig.tight_layout()
fig.savefig("demos/06_bursting_oscillator_pendulum.svg")
print("wrote demos/06_bursting_oscillator_pendulum.svg")
