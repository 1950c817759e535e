#!/usr/bin/env python3
"""Independent oracle for the positive-frequency kernel on the periodic box.

Computes D+(t, x) = (1/L) * sum_n exp(-i(w_n t - k_n x)) / (2 w_n) with
50-digit mpmath arithmetic, summing in plain ascending index order with
no pairing tricks, and deliberately importing nothing from the package
under test.  Used to freeze the reference constants in the test suite.

Usage:
    python3 scripts/dplus_oracle.py [--n-space 64] [--box-length 10]
        [--mass 1] [t x]...

With no positional arguments it prints a default table of probe points.
"""
from __future__ import annotations

import argparse

import mpmath as mp

mp.mp.dps = 50


def dplus(t, x, n_space: int, box_length, mass):
    """Plain-order mode sum over n = -(N/2 - 1) .. (N/2 - 1)."""
    L = mp.mpf(box_length)
    m = mp.mpf(mass)
    t = mp.mpf(t)
    x = mp.mpf(x)
    half = n_space // 2
    total = mp.mpc(0)
    for n in range(-(half - 1), half):
        k = 2 * mp.pi * n / L
        w = mp.sqrt(m * m + k * k)
        total += mp.e ** (-1j * (w * t - k * x)) / (2 * w)
    return total / L


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n-space", type=int, default=64)
    parser.add_argument("--box-length", type=float, default=10.0)
    parser.add_argument("--mass", type=float, default=1.0)
    parser.add_argument("points", nargs="*", type=float,
                        help="flat list: t1 x1 t2 x2 ...")
    args = parser.parse_args()

    if args.points and len(args.points) % 2 != 0:
        parser.error("points must come in (t, x) pairs")
    pairs = (
        list(zip(args.points[0::2], args.points[1::2]))
        if args.points
        else [(0.5, 0.0), (1.0, 2.5), (-0.75, 4.0), (2.0, 9.5)]
    )

    print(f"# n_space={args.n_space} box_length={args.box_length} "
          f"mass={args.mass} (50-digit arithmetic, printed to 17 digits)")
    for t, x in pairs:
        value = dplus(t, x, args.n_space, args.box_length, args.mass)
        re = mp.nstr(value.real, 17, strip_zeros=False)
        im = mp.nstr(value.imag, 17, strip_zeros=False)
        print(f"D+({t}, {x}) = {re} {'+' if value.imag >= 0 else '-'} "
              f"{im.lstrip('-')}j")


if __name__ == "__main__":
    main()
