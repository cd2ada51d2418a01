"""Zeros of the cos-type kernel K(z, w) = cosh(sqrt(z conj w)).

The weight |z|^-1 e^{-|z|} / (2 pi) on the plane has moments (2k)!, so its
kernel profile is cosh(sqrt(s)) with zeros at s = -(pi/2 + k pi)^2. This
locates them with the argument-principle solver and compares.

    python3 scripts/cos_zeros.py --radius 400
"""

import argparse
import math

from radial_bergman import CLOSED, KernelEvaluator, MittagLefflerWeight, find_zeros_in_disk


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--radius", type=float, default=100.0)
    ap.add_argument("--tol", type=float, default=1e-8)
    args = ap.parse_args()

    ev = KernelEvaluator.from_weight(MittagLefflerWeight(-1, 1, 0.5), CLOSED)
    rep = find_zeros_in_disk(ev.profile_function(), args.radius, tol=args.tol)
    print(f"|s| < {args.radius:g}: winding count {rep.count}, located {len(rep.zeros)}")
    print(f"{'k':>3} {'found':>22} {'exact':>22} {'error':>9} {'residual':>9}")
    found = sorted(zip(rep.zeros, rep.residuals), key=lambda t: -t[0].real)
    for k, (z, res) in enumerate(found):
        exact = -(math.pi / 2 + k * math.pi) ** 2
        print(f"{k:3d} {z.real:22.12f} {exact:22.12f} {abs(z - exact):9.1e} {res:9.1e}")


if __name__ == "__main__":
    main()
