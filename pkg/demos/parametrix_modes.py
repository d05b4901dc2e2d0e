"""Mode-by-mode behaviour of the FFT right inverse on the model edge.

Run:  python3 demos/parametrix_modes.py
"""

import numpy as np

from edgespec.grids import build_grid
from edgespec.parametrix import EdgeFunction, mapping_bounds

grid = build_grid(200, 1e-2, 1e2)
x, t = grid.nodes, np.log(grid.nodes)
bump = np.where((x > 0.05) & (x < 0.8),
                np.exp(-1.0 / np.clip((t - np.log(0.05)) * (np.log(0.8) - t),
                                      1e-12, None)), 0.0)
n_y = 64
y = np.arange(n_y) * 2 * np.pi / n_y
prof = np.ones(n_y)
for k in range(1, n_y // 2 + 1):
    prof += np.cos(k * y) * 0.95 ** k

for order, n_c, power in (("first", 2, 1), ("second", 1, 2)):
    s = (bump[:, None, None, None] * prof[None, :, None, None]
         * np.ones((1, 1, 1, n_c)))
    rep = mapping_bounds(EdgeFunction(s, support_flag=True), (2.1,), grid,
                         order)
    print(f"{order} order:")
    print(f"  discrete right-inverse residual: {rep.residual_rel:.2e}")
    print(f"  ||X^-{power} Qu|| / ||u||       : {rep.w11_bound:.4f}")
    print(f"  fitted envelope constant C     : {rep.fitted_c:.4f}")
    xis = np.asarray(rep.xi_modes)
    ratios = np.asarray(rep.per_mode_decay)
    print("  per-mode inverse norms vs C (1+|xi|)^-%d:" % power)
    for xi in (0, 2, 8, 32):
        r = ratios[np.abs(xis) == xi].max()
        env = rep.fitted_c * (1 + xi) ** (-power)
        bar = "#" * max(1, int(50 * r / ratios.max()))
        print(f"    xi = {xi:3d}:  {r:.4f}  <= {env:.4f}  {bar}")
    print()
