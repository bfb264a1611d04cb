#!/usr/bin/env python3
"""Generate multiprecision golden fixtures for the cylinder functions.

Computes reference values with mpmath at 50 significant digits and writes
them as CSV under tests/data/. Run from the repository root:

    python tools/make_golden_fixtures.py

The fixtures are committed; the test suite compares the fast
implementations against them without needing mpmath at test time.
"""

from pathlib import Path

import mpmath as mp
import numpy as np

mp.mp.dps = 50

OUT_DIR = Path(__file__).resolve().parent.parent / "tests" / "data"

ORDERS = [0, 1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64]
ARGS = np.geomspace(1e-3, 500.0, 25)

# (n, arg_out, arg_in) stress points for the outward transfer ratios; the
# first row sits deep in the evanescent regime where the function values
# themselves are ~1e236
TRANSFER_POINTS = [
    (60, 2.0 * np.pi * 1e-3 * 2.0, 2.0 * np.pi * 1e-3 * 0.8),
    (60, (np.pi / 3.0) * 1e-3 * 6.0, (np.pi / 3.0) * 1e-3 * 5.0),
    (0, 2.0 * np.pi * 2.0, 2.0 * np.pi * 0.8),
    (16, 40.0, 11.0),
    (64, 2.0 * np.pi * 20.0 * np.sqrt(2.0) * 2.0, 2.0 * np.pi * 20.0 * np.sqrt(2.0) * 0.8),
]


def fmt(x) -> str:
    return format(float(x), ".17g")


def hankel1(n, x):
    return mp.besselj(n, x) + 1j * mp.bessely(n, x)


def main() -> None:
    OUT_DIR.mkdir(parents=True, exist_ok=True)

    rows = ["func,n,x,re,im"]
    for n in ORDERS:
        for x in ARGS:
            xm = mp.mpf(float(x))
            h = hankel1(n, xm)
            rows.append(f"hankel1,{n},{fmt(x)},{fmt(h.real)},{fmt(h.imag)}")
            k = mp.besselk(n, xm)
            rows.append(f"bessel_k,{n},{fmt(x)},{fmt(k)},0")
    (OUT_DIR / "cylinder_golden.csv").write_text("\n".join(rows) + "\n")

    rows = ["n,arg_out,arg_in,h_val_re,h_val_im,h_der_re,h_der_im,k_val,k_der"]
    for n, zo, zi in TRANSFER_POINTS:
        zom, zim = mp.mpf(float(zo)), mp.mpf(float(zi))
        hv = hankel1(n, zom) / hankel1(n, zim)
        hd = (hankel1(n - 1, zom) - n / zom * hankel1(n, zom)) / hankel1(n, zim)
        kv = mp.besselk(n, zom) / mp.besselk(n, zim)
        kd = -(mp.besselk(n - 1, zom) + mp.besselk(n + 1, zom)) / 2 / mp.besselk(n, zim)
        rows.append(
            ",".join(
                [str(n), fmt(zo), fmt(zi), fmt(hv.real), fmt(hv.imag),
                 fmt(hd.real), fmt(hd.imag), fmt(kv), fmt(kd)]
            )
        )
    (OUT_DIR / "transfer_golden.csv").write_text("\n".join(rows) + "\n")
    print(f"wrote fixtures to {OUT_DIR}")


if __name__ == "__main__":
    main()
