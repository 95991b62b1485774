"""Benchmark the numba kernels against the pure-numpy fallback.

Covers the three hot paths: suffix-array construction, substring-count
queries, and the logistic-regression sweep used by the trainer.

    python benchmarks/bench_kernels.py [--corpus-size N] [--queries N]
"""

import argparse
import time

import numpy as np

from adi import kernels
from adi.extract import Document
from adi.reranker import FeatureSet, FeatureVector
from adi.suffix_index import build_index, count_occurrences
from adi.training import TrainingInstance, design_matrix


def timed(fn, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def make_corpus(rng, size):
    words = ["heat", "shock", "protein", "virus", "cell", "healthy",
             "controls", "latent", "herpes", "simplex", "acid", "gene"]
    parts = []
    total = 0
    while total < size:
        w = str(rng.choice(words))
        parts.append(w)
        total += len(w) + 1
    return " ".join(parts)[:size]


def bench_backend(name, corpus, queries, X, y, beta):
    kernels.set_backend(name)
    doc = Document("corpus", corpus)

    # one throwaway round so JIT compilation is not measured
    warm = build_index([Document("w", "warmup")])
    count_occurrences(warm, "war")
    kernels.logistic_stats(X[:10], y[:10], beta)

    t_build, index = timed(lambda: build_index([doc]))
    t_query, _ = timed(
        lambda: sum(count_occurrences(index, q) for q in queries)
    )
    t_logreg, _ = timed(lambda: kernels.logistic_stats(X, y, beta))

    print(f"{name:>6}  build {t_build * 1e3:9.1f} ms   "
          f"queries {t_query * 1e3:9.1f} ms   "
          f"logistic sweep {t_logreg * 1e3:8.1f} ms")
    return t_build, t_query, t_logreg


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--corpus-size", type=int, default=200_000)
    parser.add_argument("--queries", type=int, default=20_000)
    parser.add_argument("--instances", type=int, default=100_000)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    corpus = make_corpus(rng, args.corpus_size)
    queries = [
        corpus[i : i + int(rng.integers(3, 15))]
        for i in rng.integers(0, len(corpus) - 20, size=args.queries)
    ]
    data = [
        TrainingInstance(
            FeatureVector(int(rng.integers(0, 5)),
                          int(rng.integers(0, 2)),
                          float(rng.random() * 7)),
            int(rng.integers(0, 2)),
        )
        for _ in range(args.instances)
    ]
    X, y = design_matrix(data, FeatureSet.RANK_CHARMATCH_FREQ)
    beta = np.array([-1.0, -2.0, 3.0, 0.5])

    print(f"corpus {args.corpus_size} chars, {args.queries} queries, "
          f"{args.instances} training instances\n")
    results = {}
    for backend in ("numpy", "numba"):
        try:
            results[backend] = bench_backend(backend, corpus, queries, X, y, beta)
        except ImportError:
            print(f"{backend:>6}  unavailable")
    if len(results) == 2:
        print()
        for label, i in (("build", 0), ("queries", 1), ("logistic sweep", 2)):
            ratio = results["numpy"][i] / results["numba"][i]
            print(f"numba speedup on {label}: {ratio:.1f}x")


if __name__ == "__main__":
    main()
