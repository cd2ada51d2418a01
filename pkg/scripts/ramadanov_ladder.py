"""Kernels of min(q, 1/|z|^2) on the unit disk as q grows.

Prints, per truncation level q, the sup distance to the limit kernel
s / (pi (1 - s)^2) over a polar grid, the kernel at the origin, and the real
negative zero of K_q(., w) once it has entered the disk.

    python3 scripts/ramadanov_ladder.py --q-ladder 1,10,100,1e3,1e4,1e6,1e8
"""

import argparse

from radial_bergman import convergence_report, hypothesis_check


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q-ladder", default="1,10,100,1e3,1e4,1e6,1e8")
    ap.add_argument("--grid-radius", type=float, default=0.5)
    ap.add_argument("--grid-n", type=int, default=16)
    ap.add_argument("--w", type=complex, default=0.5)
    args = ap.parse_args()

    qs = [float(x) for x in args.q_ladder.split(",")]
    radii = [i / 100 for i in range(1, 100)]
    monotone = all(hypothesis_check(a, b, radii) for a, b in zip(qs, qs[1:]))
    print(f"weights increase along the ladder: {monotone}")
    rep = convergence_report(qs, args.grid_radius, args.grid_n, args.w)
    print(f"{'q':>8} {'sup |K_q - K|':>14} {'K_q(0, w)':>12} {'zero z*':>14}")
    for q, d, o, e in zip(rep.q_values, rep.sup_distances, rep.origin_values, rep.emergent_zeros):
        zero = f"{e.z.real:+.10f}" if e.inside else e.status
        print(f"{q:8.0e} {d:14.6e} {o:12.8f} {zero:>14}")
    print(f"first q with a zero inside the disk: {rep.first_inside}")


if __name__ == "__main__":
    main()
