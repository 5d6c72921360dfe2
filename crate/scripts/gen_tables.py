#!/usr/bin/env python3
"""Regenerates the embedded colorimetric tables under crates/core/data/.

Requires colour-science. CMFs are the CIE 1 nm tabulations (360-830 nm).
D65 is the CIE 5 nm tabulation (300-780 nm) linearly interpolated to 1 nm.
"""
import pathlib

import colour
import numpy as np

OUT = pathlib.Path(__file__).resolve().parent.parent / "crates" / "core" / "data"


def write_cmfs(name, key, source):
    cmfs = colour.MSDS_CMFS[key]
    lines = [
        f"# {source}",
        "# generated by scripts/gen_tables.py from colour-science "
        + colour.__version__,
        "wavelength_nm,x_bar,y_bar,z_bar",
    ]
    for w in range(int(cmfs.shape.start), int(cmfs.shape.end) + 1):
        # the source carries a few -1e-21 round-off values
        x, y, z = (max(float(v), 0.0) for v in cmfs[w])
        lines.append(f"{w},{x:.6e},{y:.6e},{z:.6e}")
    (OUT / name).write_text("\n".join(lines) + "\n")


def write_d65():
    sd = colour.SDS_ILLUMINANTS["D65"]
    src_w = sd.wavelengths
    grid = np.arange(int(src_w[0]), int(src_w[-1]) + 1)
    vals = np.interp(grid, src_w, sd.values)
    lines = [
        "# CIE standard illuminant D65, relative spectral power",
        "# 5 nm CIE tabulation linearly interpolated to 1 nm; generated by "
        "scripts/gen_tables.py from colour-science " + colour.__version__,
        "wavelength_nm,value",
    ]
    lines += [f"{w},{v:.6f}" for w, v in zip(grid, vals)]
    (OUT / "d65_1nm.csv").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    write_cmfs(
        "cie1931_2deg_1nm.csv",
        "CIE 1931 2 Degree Standard Observer",
        "CIE 1931 2 degree standard observer colour-matching functions, 1 nm",
    )
    write_cmfs(
        "cie1964_10deg_1nm.csv",
        "CIE 1964 10 Degree Standard Observer",
        "CIE 1964 10 degree standard observer colour-matching functions, 1 nm",
    )
    write_d65()
