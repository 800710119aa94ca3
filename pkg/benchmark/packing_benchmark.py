import argparse
import math
import time

from cyclepack import (
    ResourceError,
    SamplerConfig,
    build_c4_hypergraph,
    canonical_bipartite,
    color_pack,
    exact_max_pack,
    greedy_pack,
    local_search_pack,
    randomize_bipartite,
    verify_packing,
)
from cyclepack.config import default_steps_bipartite, spawn_seeds

TARGET_FACTOR = 4 + math.sqrt(8)


def pack(method, G, seed, H):
    if method == "greedy":
        return greedy_pack(G, seed, H)
    if method == "local":
        return local_search_pack(G, seed, H.num_edges, H)
    if method == "color":
        return color_pack(G, seed, H)
    try:
        return exact_max_pack(G, seed=seed, hypergraph=H)
    except ResourceError as e:
        return e.partial


def benchmark(method: str, m: int, n: int, instances: int, seed: int) -> dict:
    desc = f"{method} {m}x{n}"
    print(f"Starting benchmark {desc}")

    start_graph = canonical_bipartite(m, n)
    steps = default_steps_bipartite(m, n)
    times, sizes = [], []
    for child in spawn_seeds(seed, instances):
        G = randomize_bipartite(start_graph, SamplerConfig(seed=child, steps=steps))
        H = build_c4_hypergraph(G)
        start = time.monotonic()
        packing = pack(method, G, child, H)
        times.append(time.monotonic() - start)
        verify_packing(G, packing)
        sizes.append(packing.size)

    times.sort()
    total = len(times)
    avg = sum(times) / total
    p90 = times[int((90 * total) / 100)] if total > 1 else times[0]
    p99 = times[int((99 * total) / 100)] if total > 1 else times[0]
    mean_size = sum(sizes) / total
    ratio = mean_size * TARGET_FACTOR / (m * n)

    print("Tests results:")
    print(f"\tSize: {mean_size:.3f}")
    print(f"\tRatio: {ratio:.4f}")
    print(f"\tAvg: {avg:.6f}")
    print(f"\tP90: {p90:.6f}")
    print(f"\tP99: {p99:.6f}")

    return {"name": desc, "size": mean_size, "ratio": ratio, "avg": avg, "p90": p90, "p99": p99}


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument(
        "--method",
        help="Packer to time, by default local",
        choices=["greedy", "local", "color", "exact"],
        default="local",
    )
    parser.add_argument(
        "--sizes",
        help="Sizes as MxN, by default 4x4 8x8 12x12",
        nargs="+",
        default=["4x4", "8x8", "12x12"],
    )
    parser.add_argument(
        "--instances",
        help="Random instances per size, by default 20",
        type=int,
        default=20,
    )
    parser.add_argument("--seed", help="Random seed, by default 0", type=int, default=0)
    args = parser.parse_args()

    results = []
    for size in args.sizes:
        m, n = (int(v) for v in size.lower().split("x"))
        results.append(benchmark(args.method, m, n, args.instances, args.seed))
    return args.method, results


if __name__ == "__main__":
    method, results = main()

    print("\n" + "=" * 80)
    print(f"SUMMARY - {method}")
    print("=" * 80)
    for result in results:
        print(
            f"{result['name']:20s} | size {result['size']:8.3f} | ratio {result['ratio']:.4f} | "
            f"avg: {result['avg']:.6f}s | p90: {result['p90']:.6f}s | p99: {result['p99']:.6f}s"
        )
