"""Time the brute-force oracle scan with the numba kernel and the numpy fallback.

    python3 benchmarks/bench_oracle.py [--repeat N]

Runs the oracle over every (variant, candidate) pair of the family and arches
fixtures and reports the best wall time per backend. Both backends must
return identical results; the script exits non-zero otherwise.
"""

import argparse
import sys
import time

from genme import _kernels, datasets
from genme.oracle import brute_force_oracle
from genme.search import near_miss_candidates, variants

CASES = [
    ("family", "family_gf.json", False),
    ("family", "family_dt.json", False),
    ("arches", "arches.json", True),
]


def workload():
    jobs = []
    for name, config, constrained in CASES:
        theory = datasets.load(name)
        cfg = datasets.load_config(config, theory)
        cands = near_miss_candidates(theory, cfg.target, cfg.candidate_domains)
        for v in variants(theory, cfg.target, cfg.filters, cfg.lift):
            jobs += [(f"{name}/{config}", theory, v, c, constrained) for c in cands]
    return jobs


def run(jobs, use_numba):
    _kernels.USE_NUMBA = use_numba
    per_case, results = {}, []
    for label, theory, v, cand, constrained in jobs:
        t0 = time.perf_counter()
        results.append(brute_force_oracle(theory, v.clause, v.theta, cand, head_constrained=constrained))
        per_case[label] = per_case.get(label, 0.0) + time.perf_counter() - t0
    return per_case, results


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    jobs = workload()
    backends = [("numpy", False)]
    if _kernels.HAVE_NUMBA:
        run(jobs[:1] + jobs[-1:], True)  # warm the JIT cache outside the timing
        backends.insert(0, ("numba", True))
    best, outputs = {}, {}
    for backend, flag in backends:
        for _ in range(args.repeat):
            per_case, results = run(jobs, flag)
            outputs[backend] = results
            for label, t in per_case.items():
                key = (backend, label)
                best[key] = min(best.get(key, float("inf")), t)
    labels = sorted({label for _, label in best})
    print(f"{'case':<28}" + "".join(f"{b:>12}" for b, _ in backends))
    for label in labels:
        print(f"{label:<28}" + "".join(f"{best[(b, label)]:>11.3f}s" for b, _ in backends))
    if len(outputs) == 2 and outputs["numba"] != outputs["numpy"]:
        print("backends disagree", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
