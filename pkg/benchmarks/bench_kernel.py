"""Time the compiled and pure-Python canonical-form kernels on the same configurations.

Usage: python benchmarks/bench_kernel.py [--size N] [--count N] [--repeat N]
"""
import argparse
import timeit

import intercalc as ic
from intercalc import _pykernel

try:
    from intercalc import _ckernel
except ImportError:
    _ckernel = None


def corpus(size: int, count: int) -> list:
    configs = []
    for name in ic.BUILTINS:
        s = ic.builtin(name).system
        for seed in range(count):
            c = ic.random_config(s, size, seed)
            configs.append(c)
            configs.extend(st.result for st in ic.steps(s, c))
    return configs


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=5)
    ap.add_argument("--count", type=int, default=60)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    configs = corpus(args.size, args.count)
    kernels = {"python": _pykernel.canonical_key}
    if _ckernel is not None:
        kernels["compiled"] = _ckernel.canonical_key
        assert all(_ckernel.canonical_key(c) == _pykernel.canonical_key(c) for c in configs)

    print(f"{len(configs)} configurations (size <= {args.size}), best of {args.repeat}")
    times = {}
    for label, key in kernels.items():
        best = min(timeit.repeat(lambda: [key(c) for c in configs], number=1, repeat=args.repeat))
        times[label] = best
        print(f"  {label:>8}: {best:.3f}s  ({1e6 * best / len(configs):.1f} us/config)")
    if len(times) == 2:
        print(f"  speedup: {times['python'] / times['compiled']:.2f}x")
    else:
        print("  compiled kernel not built; run `python setup.py build_ext --inplace`")


if __name__ == "__main__":
    main()
