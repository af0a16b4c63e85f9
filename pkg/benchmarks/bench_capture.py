"""Time the per-sample capture kernels: numba loop vs vectorised numpy.

    python3 benchmarks/bench_capture.py [--samples 100000] [--repeat 5]

Also times a full jittered estimate through each backend, the way the
report uses it, by running a child interpreter with PADDLESAT_NUMBA set.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from paddlesat import _kernels

ESTIMATE = """
import timeit
from paddlesat import optics, _kernels
tx = optics.OpticalTxSpec(beam_profile="{profile}")
rx = optics.ReceiverSpec(0.1, 500.0)
j = optics.JitterSpec(20e-6, 0.0)
optics.capture_fraction_jittered(tx, rx, j, 1000, seed=1)
t = min(timeit.repeat(lambda: optics.capture_fraction_jittered(tx, rx, j, {samples}, seed=1), number=1, repeat={repeat}))
print(_kernels.BACKEND, t)
"""


def best(fn, repeat):
    fn()  # warm-up (and JIT compile)
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    offsets = np.abs(rng.normal(0.0, 0.05, args.samples))
    cases = {
        "flat_top": (0.08, 0.1, _kernels.flat_top_capture_numpy,
                     getattr(_kernels, "flat_top_capture_numba", None)),
        "gaussian": (0.025, 0.1, _kernels.gaussian_capture_numpy,
                     getattr(_kernels, "gaussian_capture_numba", None)),
    }
    print(f"kernel timings, {args.samples} offsets, best of {args.repeat}")
    for name, (size, radius, np_fn, nb_fn) in cases.items():
        t_np = best(lambda: np_fn(size, radius, offsets), args.repeat)
        line = f"  {name:<9} numpy {t_np * 1e3:9.2f} ms"
        if nb_fn is not None:
            t_nb = best(lambda: nb_fn(size, radius, offsets), args.repeat)
            diff = np.max(np.abs(np_fn(size, radius, offsets) - nb_fn(size, radius, offsets)))
            line += f"   numba {t_nb * 1e3:9.2f} ms   speedup {t_np / t_nb:6.1f}x   max|diff| {diff:.1e}"
        else:
            line += "   numba unavailable"
        print(line)

    print("jittered estimate end to end")
    for profile in ("flat_top", "gaussian"):
        for flag in ("0", "1"):
            code = ESTIMATE.format(profile=profile, samples=args.samples, repeat=args.repeat)
            out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True,
                                 env={**os.environ, "PADDLESAT_NUMBA": flag}).stdout.split()
            print(f"  {profile:<9} {out[0]:<6} {float(out[1]) * 1e3:9.2f} ms")


if __name__ == "__main__":
    main()
