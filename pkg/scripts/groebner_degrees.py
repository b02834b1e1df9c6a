"""Quotient dimensions of the Floquet invariant systems for small periods.

For each period vector the system D_V = D_ref is solved exactly; the
reference is V = 0 or a random integer potential (--generic).  Prints the
number of generators, Groebner basis size, quotient dimension and whether
the only solution is the reference.

    python3 scripts/groebner_degrees.py 3,2 2,2 3,1
    python3 scripts/groebner_degrees.py 3,2 --generic --seeds 0 1 2
    python3 scripts/groebner_degrees.py 3,3          # about two minutes
"""

import argparse
import random
import time

from isospectra.floquet import Periods, Potential, spectral_invariant_system
from isospectra.polycore import GroebnerConfig, quotient_dimension, vanishes_only_at_origin


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("periods", nargs="+")
    ap.add_argument("--generic", action="store_true")
    ap.add_argument("--seeds", type=int, nargs="*", default=[0])
    ap.add_argument("--seconds", type=float, default=1800.0)
    args = ap.parse_args()
    cfg = GroebnerConfig(max_reductions=10**7, max_seconds=args.seconds)
    for text in args.periods:
        Q = Periods.parse(text)
        for seed in args.seeds if args.generic else [None]:
            ref = None
            if seed is not None:
                rng = random.Random(seed)
                ref = Potential(Q, tuple(rng.randint(-3, 3) for _ in range(Q.total)))
            t = time.monotonic()
            system = spectral_invariant_system(Q, ref)
            gb = system.groebner(config=cfg)
            dim = quotient_dimension(gb)
            only = vanishes_only_at_origin(gb) if ref is None else None
            label = "V'=0" if ref is None else f"V'={[int(x) for x in ref.values]}"
            print(f"{text:>8} {label:28s} gens={len(system.generators):3d} gb={len(gb):4d} "
                  f"dim={dim} only_zero={only} ({time.monotonic() - t:.1f} s)", flush=True)


if __name__ == "__main__":
    main()
