#!/usr/bin/env python3
"""
Error Decay vs Region Size
==========================

Sweeps the half-width K of the atomistic window and tabulates the exact
goal error |Q(e)| next to the two estimates.  Three things to watch:

  * |Q(e)| decays exponentially in K: every extra atomistic shell buys a
    fixed number of digits, until the double-precision floor (~1e-15).
  * eta1 tracks |Q(e)| with a flat effectivity (~1.39 for the default
    constants) across the whole useful range: the estimate is reliable
    AND efficient, so tolerance-driven stopping is trustworthy.
  * eta2 is a bit looser (it gives up cancellation to become localizable)
    but stays within a small constant factor.

Usage:
    python3 demos/02_error_vs_region_size.py
    python3 demos/02_error_vs_region_size.py --m 500 --k-max 30
"""

import argparse

from qcfk import ChainParams, fixed_k_run


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[1])
    ap.add_argument("--m", type=int, default=1000, help="half chain size")
    ap.add_argument("--k-max", type=int, default=40, help="largest window half-width")
    ap.add_argument("--step", type=int, default=5, help="K stride")
    args = ap.parse_args()

    params = ChainParams(m=args.m)
    ks = list(range(0, args.k_max + 1, args.step))

    print(f"M = {args.m}, sweeping K = {ks}")
    print()
    header = f"{'K':>3} {'|Q(e)|':>13} {'eta1':>13} {'eta2':>13} {'eta1/|Qe|':>10} {'eta2/|Qe|':>10}"
    print(header)
    print("-" * len(header))

    prev = None
    for k in ks:
        res = fixed_k_run(params, k)
        qe = res.abs_q_error
        e1 = res.efficiency(res.report.eta1)
        e2 = res.efficiency(res.report.eta2)
        print(f"{k:>3} {qe:>13.6e} {res.report.eta1:>13.6e} {res.report.eta2:>13.6e} "
              f"{e1 if e1 is not None else float('nan'):>10.4f} "
              f"{e2 if e2 is not None else float('nan'):>10.4f}")
        if prev is not None and prev > 1e-13 and qe > 0:
            rate = (prev / qe) ** (1.0 / args.step)
            last_rate = rate
        prev = qe

    print()
    print(f"decay rate per atomistic shell (last resolved interval): "
          f"~{last_rate:.3f}x")
    print("effectivities stay O(1): halving the tolerance costs a predictable")
    print("number of extra shells, which is what the adaptive loop exploits.")


if __name__ == "__main__":
    main()
