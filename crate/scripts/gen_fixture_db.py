#!/usr/bin/env python3
"""Writes the small synthetic reflectance database used by tests and examples.

Each record is a sum of one or two Gaussian bumps on a flat floor, sampled
every 5 nm from 380 to 730 nm. The output is deterministic.
"""
import pathlib

import numpy as np

OUT = pathlib.Path(__file__).resolve().parent.parent / "crates" / "core" / "data" / "db"

rng = np.random.default_rng(20240611)
wl = np.arange(380, 731, 5)

rows = []
for i in range(24):
    floor = rng.uniform(0.02, 0.15)
    r = np.full(wl.shape, floor)
    for _ in range(rng.integers(1, 3)):
        centre = rng.uniform(400, 700)
        width = rng.uniform(15, 80)
        height = rng.uniform(0.3, 0.8)
        r += height * np.exp(-0.5 * ((wl - centre) / width) ** 2)
    rows.append((f"syn_{i:02d}", np.clip(r, 0.0, 1.0)))

OUT.mkdir(parents=True, exist_ok=True)
with open(OUT / "synthetic_wide.csv", "w") as f:
    f.write("id," + ",".join(str(w) for w in wl) + "\n")
    for rid, r in rows:
        f.write(rid + "," + ",".join(f"{v:.6f}" for v in r) + "\n")

with open(OUT / "synthetic_long.csv", "w") as f:
    f.write("id,wavelength_nm,value\n")
    for rid, r in rows[:4]:
        for w, v in zip(wl, r):
            f.write(f"{rid},{w},{v:.6f}\n")
