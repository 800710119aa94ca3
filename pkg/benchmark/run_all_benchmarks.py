#!/usr/bin/env python3
"""
Unified benchmark runner comparing the cyclepack packers.

Runs packing_benchmark.py once per method, then the tournament partition
experiment over a range of n, and writes a markdown report with packing sizes,
ratios against the asymptotic targets and timings.
"""

import argparse
import json
import subprocess
import sys
from datetime import datetime
from pathlib import Path

METHODS = ["greedy", "local", "color", "exact"]
SCRIPT = Path(__file__).with_name("packing_benchmark.py")


def run_benchmark(method: str, sizes: list[str], instances: int, seed: int) -> list[dict] | None:
    """Run the benchmark script for one packer and capture results."""
    print(f"\n{'=' * 80}")
    print(f"Running {method}...")
    print(f"{'=' * 80}\n")

    try:
        result = subprocess.run(
            [
                sys.executable,
                str(SCRIPT),
                "--method",
                method,
                "--instances",
                str(instances),
                "--seed",
                str(seed),
                "--sizes",
                *sizes,
            ],
            capture_output=True,
            text=True,
            timeout=3600,
        )

        if result.returncode != 0:
            print(f"Error running {method}:")
            print(result.stderr)
            return None

        print(result.stdout)
        return parse_output(result.stdout)

    except subprocess.TimeoutExpired:
        print(f"Timeout running {method}")
        return None


def run_partition_trend(sizes: list[int], seeds: int) -> list[dict]:
    """Run the partition experiment through the CLI and average the ratio per n."""
    rows = []
    for n in sizes:
        ratios, packed = [], []
        for seed in range(seeds):
            result = subprocess.run(
                [
                    sys.executable,
                    "-m",
                    "cyclepack",
                    "experiment",
                    "partition",
                    "--n",
                    str(n),
                    "--seed",
                    str(seed),
                    "--json",
                ],
                capture_output=True,
                text=True,
                timeout=3600,
            )
            if result.returncode != 0:
                print(f"Error running partition n={n} seed={seed}:")
                print(result.stderr)
                continue
            payload = json.loads(result.stdout)["payload"]
            ratios.append(payload["ratio"])
            packed.append(payload["total_packed"])
        if ratios:
            rows.append(
                {
                    "n": n,
                    "runs": len(ratios),
                    "mean_packed": sum(packed) / len(packed),
                    "mean_ratio": sum(ratios) / len(ratios),
                }
            )
            print(f"partition n={n}: mean ratio {rows[-1]['mean_ratio']:.4f}")
    return rows


def parse_output(output: str) -> list[dict]:
    """Parse benchmark output to extract metrics."""
    results = []
    current: dict | None = None
    for line in output.split("\n"):
        if "Starting benchmark" in line:
            current = {"name": line.split("Starting benchmark")[1].strip()}
        elif current is not None and ":" in line and line.startswith("\t"):
            key, value = line.strip().split(":", 1)
            current[key.lower()] = float(value)
            if key == "P99":
                results.append(current)
                current = None
    return results


def generate_markdown_report(
    results: dict[str, list[dict]],
    trend: list[dict],
    instances: int,
    seed: int,
    output_file: str,
) -> None:
    """Generate a markdown comparison report."""
    timestamp = datetime.now().strftime("%Y-%m-%d %H:%M:%S")
    sizes = sorted(
        {r["name"].split()[-1] for rows in results.values() for r in rows},
        key=lambda s: [int(v) for v in s.split("x")],
    )

    with open(output_file, "w") as f:
        f.write("# C4 Packing Benchmark\n\n")
        f.write(f"**Generated:** {timestamp}\n\n")
        f.write("**Test Configuration:**\n")
        f.write(f"- Instances per size: {instances}\n")
        f.write(f"- Seed: {seed}\n")
        f.write("- Ratio: mean packing size x (4 + sqrt 8) / mn\n\n")

        f.write("## Packing Size\n\n")
        f.write("| Size | " + " | ".join(results) + " |\n")
        f.write("|------|" + "|".join("-" * (len(m) + 2) for m in results) + "|\n")
        for size in sizes:
            row = f"| {size} |"
            for method, rows in results.items():
                match = [r for r in rows if r["name"].endswith(size)]
                if match:
                    row += f" {match[0]['size']:.2f} ({match[0]['ratio']:.3f}) |"
                else:
                    row += " N/A |"
            f.write(row + "\n")

        f.write("\n## Timing\n\n")
        f.write("| Benchmark | Avg (s) | P90 (s) | P99 (s) |\n")
        f.write("|-----------|---------|---------|---------|\n")
        for rows in results.values():
            for r in rows:
                f.write(f"| {r['name']} | {r['avg']:.6f} | {r['p90']:.6f} | {r['p99']:.6f} |\n")

        if trend:
            f.write("\n## Partition Trend\n\n")
            f.write("Ratio: C4s packed in the tournament x (8 + sqrt 32) / n^2\n\n")
            f.write("| n | Runs | Mean packed | Mean ratio |\n")
            f.write("|---|------|-------------|------------|\n")
            for row in trend:
                f.write(
                    f"| {row['n']} | {row['runs']} | {row['mean_packed']:.1f} | "
                    f"{row['mean_ratio']:.4f} |\n"
                )
            ratios = [row["mean_ratio"] for row in trend]
            verdict = "non-decreasing" if ratios == sorted(ratios) else "NOT monotone"
            f.write(f"\nMean ratio across n is {verdict}.\n")

        f.write("\n## Raw Benchmark Data\n\n")
        f.write("```json\n")
        f.write(json.dumps({"packers": results, "partition": trend}, indent=2))
        f.write("\n```\n")

    print(f"\n\nReport generated: {output_file}")


def main():
    parser = argparse.ArgumentParser(description="Compare the cyclepack packers")
    parser.add_argument(
        "--sizes",
        nargs="+",
        default=["4x4", "8x8", "12x12"],
        help="Bipartite sizes (default: 4x4 8x8 12x12)",
    )
    parser.add_argument(
        "--instances", type=int, default=20, help="Random instances per size (default: 20)"
    )
    parser.add_argument("--seed", type=int, default=0, help="Random seed (default: 0)")
    parser.add_argument(
        "--output",
        type=str,
        default="benchmark_results.md",
        help="Output markdown file (default: benchmark_results.md)",
    )
    parser.add_argument(
        "--trend-sizes",
        nargs="*",
        type=int,
        default=[49, 101, 225],
        help="Tournament sizes for the partition trend, odd (default: 49 101 225)",
    )
    parser.add_argument(
        "--trend-seeds", type=int, default=10, help="Seeds per tournament size (default: 10)"
    )
    parser.add_argument(
        "--methods",
        nargs="+",
        choices=METHODS,
        default=["greedy", "local", "color"],
        help="Packers to benchmark (default: greedy local color)",
    )
    args = parser.parse_args()

    results = {}
    for method in args.methods:
        method_results = run_benchmark(method, args.sizes, args.instances, args.seed)
        if method_results:
            results[method] = method_results
        else:
            print(f"Warning: No results for {method}")

    trend = run_partition_trend(args.trend_sizes, args.trend_seeds)

    if not results and not trend:
        print("Error: No benchmark results collected")
        sys.exit(1)

    generate_markdown_report(results, trend, args.instances, args.seed, args.output)


if __name__ == "__main__":
    main()
