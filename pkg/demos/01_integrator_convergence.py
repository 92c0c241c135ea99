"""Fourth-order convergence of the fixed-step integrator.

Halving the step on the harmonic oscillator should divide the terminal
error by ~16; the plot shows the error curve over a decade of steps.
"""

import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from eventreg import TimeGrid, integrate

oscillator = lambda t, x: np.array([x[1], -x[0]])
exact = lambda t: np.array([np.cos(t), -np.sin(t)])

steps = [100, 200, 400, 800, 1600]
errors = []
for n in steps:
    grid = TimeGrid.from_steps(0.0, 2 * np.pi, n)
    traj = integrate(oscillator, [1.0, 0.0], grid)
    final = np.array([traj["x0"][-1], traj["x1"][-1]])
    errors.append(np.max(np.abs(final - exact(grid.t_end))))
    print(f"n={n:5d}  dt={grid.dt:.5f}  terminal error={errors[-1]:.3e}")

ratios = np.array(errors[:-1]) / np.array(errors[1:])
print("halving ratios:", np.round(ratios, 2), "(16 = clean 4th order)")

fig, ax = plt.subplots(figsize=(5, 3.2))
ax.loglog(steps, errors, "o-")
ax.set_xlabel("steps over one period")
ax.set_ylabel("terminal error")
ax.set_title("RK4 terminal error vs step count")
fig.tight_layout()
fig.savefig("demos/01_integrator_convergence.svg")
print("wrote demos/01_integrator_convergence.svg")
