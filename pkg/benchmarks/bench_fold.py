"""Compare the compiled fold/sweep kernels with the numpy fallback.

    python3 benchmarks/bench_fold.py [--fold-log-size 20] [--fs-n 12]
"""
import argparse
import json

from obddmin.bench import run

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--fold-log-size", type=int, default=20)
    ap.add_argument("--fs-n", type=int, default=12)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(json.dumps(run(args.fold_log_size, args.fs_n, args.repeat), indent=2))
