#!/usr/bin/env python3
"""Regenerate the benchmark task corpus.

Every task is defined by a plain-Python reference function plus a fixed
input list, so the corpus is honest data: nothing here depends on what
the component catalog can or cannot express.  A handful of tasks are
intentionally out of reach of the catalog (recursion, cross products,
adjacent deduplication) and act as the unsolved tail of the benchmark.

Run from the repository root:

    python3 scripts/make_corpus.py [--out corpus]
"""
from __future__ import annotations

import argparse
import math
import pathlib

from propsig import parse_type, save_task
from propsig.specio import IOSpec, Task

# name, input type, output type, reference, inputs (first 6 become the
# spec, the rest are held out)
TASKS = [
    ("square", "Int", "Int",
     lambda x: x * x,
     [0, 1, 2, 3, -4, 7, 11, -9]),
    ("abs_val", "Int", "Int",
     lambda x: abs(x),
     [0, 3, -4, 7, -1, -12, 5, -9]),
    ("fibonacci", "Int", "Int",
     lambda n: _fib(n),
     [0, 1, 2, 3, 4, 5, 8, 10]),
    ("is_positive", "Int", "Bool",
     lambda x: x > 0,
     [1, 0, -1, 5, -12, 3, 100, -2]),
    ("is_odd", "Int", "Bool",
     lambda x: x % 2 != 0,
     [0, 1, 2, 3, -4, -5, 10, 7]),
    ("negate_bool", "Bool", "Bool",
     lambda b: not b,
     [True, False]),
    ("count_up", "Int", "List<Int>",
     lambda n: list(range(0, n)),
     [0, 1, 2, 4, 5, 3, 6, 7]),
    ("repeat_self", "Int", "List<Int>",
     lambda n: [n] * max(n, 0),
     [0, 1, 2, 3, 5, 4, 6, -1]),
    ("negate", "Int", "Int",
     lambda x: -x,
     [0, 1, -3, 7, 12, -25, 4, -9]),
    ("singleton", "Int", "List<Int>",
     lambda x: [x],
     [0, 1, -3, 7, 12, -25, 4, 9]),
    ("pair_sum", "(Int, Int)", "Int",
     lambda p: p[0] + p[1],
     [(1, 2), (0, 0), (-3, 5), (10, -4), (7, 7), (2, -9), (6, 1), (-1, -1)]),
    ("pair_max", "(Int, Int)", "Int",
     lambda p: max(p),
     [(1, 2), (5, 3), (-1, -7), (0, 4), (9, 9), (-2, 6), (3, -8), (12, 5)]),
    ("abs_diff", "(Int, Int)", "Int",
     lambda p: abs(p[0] - p[1]),
     [(1, 4), (6, 2), (0, 0), (-3, 5), (7, -2), (10, 10), (-4, -9), (3, 8)]),
    ("gcd", "(Int, Int)", "Int",
     lambda p: math.gcd(p[0], p[1]),
     [(12, 18), (7, 3), (10, 5), (9, 6), (21, 14), (8, 8), (25, 15), (4, 7)]),
    ("pair_eq", "(Int, Int)", "Bool",
     lambda p: p[0] == p[1],
     [(1, 1), (2, 3), (0, 0), (-4, -4), (5, -5), (7, 2), (9, 9), (3, 6)]),
    ("swap", "(Int, Int)", "(Int, Int)",
     lambda p: (p[1], p[0]),
     [(1, 2), (5, -3), (0, 7), (-4, -9), (12, 6), (3, 3), (8, 1), (-2, 10)]),
    ("pair_min", "(Int, Int)", "Int",
     lambda p: min(p),
     [(2, 1), (1, 2), (5, -3), (0, 0), (-7, -2), (9, 4), (3, 8), (6, -1)]),
    ("sum_list", "List<Int>", "Int",
     lambda xs: sum(xs),
     [[1, 2, 3], [], [5], [-2, 4], [10, -3, 7, 1], [0, 0], [6, 6, 6], [-1, -2, -3]]),
    ("list_len", "List<Int>", "Int",
     lambda xs: len(xs),
     [[1, 2, 3], [], [7], [4, 4], [9, -1, 3, 6, 2], [5, 8], [0], [1, 1, 1, 1]]),
    ("list_max", "List<Int>", "Int",
     lambda xs: max(xs),
     [[1, 5, 3], [7], [-2, -9, -4], [0, 12, 8], [6, 6], [3, 1, 4, 1, 5], [-1, 0], [20, 2]]),
    ("list_min", "List<Int>", "Int",
     lambda xs: min(xs),
     [[1, 5, 3], [7], [-2, -9, -4], [0, 12, 8], [6, 6], [3, 1, 4, 1, 5], [-1, 0], [20, 2]]),
    ("last_elem", "List<Int>", "Int",
     lambda xs: xs[-1],
     [[1, 2, 3], [5], [4, -2], [7, 0, 9], [-1, 6], [10, 10, 2], [3, 8, -5, 1], [0, 4]]),
    ("second_element", "List<Int>", "Int",
     lambda xs: xs[1],
     [[4, 5, 6], [7, 1], [1, 2, 3, 4], [9, 8], [2, 0, 6], [5, -3, 1], [3, 12, -4], [10, 20]]),
    ("first_elem", "List<Int>", "Int",
     lambda xs: xs[0],
     [[4, 5, 6], [7], [1, 2, 3, 4], [9, 8], [-2, 0, 6], [5, 5], [3, 12, -4], [10, 1]]),
    ("list_product", "List<Int>", "Int",
     lambda xs: math.prod(xs),
     [[1, 2, 3], [], [5], [2, 2, 2], [4, -1, 3], [0, 7], [3, 1, 4], [-2, -5]]),
    ("head_plus_last", "List<Int>", "Int",
     lambda xs: xs[0] + xs[-1],
     [[1, 2, 3], [5], [4, -2], [7, 0, 0, 3], [-1, 6, 2], [10, 10], [2, 9, -5], [8, 1, 1, 4]]),
    ("count_zeros", "List<Int>", "Int",
     lambda xs: xs.count(0),
     [[0, 1, 0], [], [3, 4], [0, 0, 0], [5, 0, 2, 0], [7], [1, 2, 3], [0]]),
    ("all_positive", "List<Int>", "Bool",
     lambda xs: all(x > 0 for x in xs),
     [[1, 2, 3], [4, -1, 5], [7], [0, 3], [9, 8, 2, 6], [-5], [2, 2], [1, -1, 1]]),
    ("any_even", "List<Int>", "Bool",
     lambda xs: any(x % 2 == 0 for x in xs),
     [[1, 3, 5], [1, 4, 7], [2], [9, 11], [6, 6], [3, 3, 3, 8], [5, 7, 9, 13], [10, 1]]),
    ("contains_zero", "List<Int>", "Bool",
     lambda xs: 0 in xs,
     [[1, 0, 2], [3, 4], [0], [5, 6, 7], [9, 0], [8], [1, 2, 3, 0, 4], [7, 7]]),
    ("reverse_list", "List<Int>", "List<Int>",
     lambda xs: xs[::-1],
     [[1, 2, 3], [], [5], [4, -1, 6, 2], [7, 7, 0], [9, 3], [1, 2, 3, 4, 5], [-2, 8]]),
    ("sort_list", "List<Int>", "List<Int>",
     lambda xs: sorted(xs),
     [[3, 1, 2], [], [5], [9, -2, 4, 0], [6, 6, 1], [2, 10], [8, 3, 5, 1], [-1, -7, 4]]),
    ("reverse_concat", "List<Int>", "List<Int>",
     lambda xs: xs[::-1] + xs,
     [[1, 2, 3], [], [5], [4, 7], [0, -2, 6], [9], [3, 1, 4, 1], [2, 8, -5]]),
    ("keep_positive", "List<Int>", "List<Int>",
     lambda xs: [x for x in xs if x > 0],
     [[1, -2, 3], [], [-5, -1], [4, 0, 7], [2, 2, -3, 6], [9], [-4, 8, -6, 1], [0, 5]]),
    ("map_double", "List<Int>", "List<Int>",
     lambda xs: [2 * x for x in xs],
     [[1, 2, 3], [], [5], [-2, 4], [0, 7, -1], [6, 6], [3, 1, 4, 1], [10, -8]]),
    ("unique_justseen", "List<Int>", "List<Int>",
     lambda xs: _unique_justseen(xs),
     [[1, 1, 2, 2, 1], [], [3, 3, 3], [4, 5, 4], [6], [7, 7, 8, 8, 8, 9],
      [1, 2, 1, 2], [5, 5, 5, 2]]),
    ("nth_element", "(List<Int>, Int)", "Int",
     lambda p: p[0][p[1]],
     [([4, 5, 6], 1), ([7], 0), ([1, 2, 3, 4], 3), ([9, 8], 0), ([2, 0, 6], 2),
      ([5, 5, 1], 1), ([3, 12, -4, 8], 2), ([10, 20], 1)]),
    ("count_occ", "(List<Int>, Int)", "Int",
     lambda p: p[0].count(p[1]),
     [([1, 2, 1], 1), ([], 5), ([3, 3, 3], 3), ([4, 5, 6], 7), ([0, 0, 2], 0),
      ([8, 1, 8, 8], 8), ([2, 4], 4), ([6, 6], 1)]),
    ("sum_plus", "(List<Int>, Int)", "Int",
     lambda p: sum(p[0]) + p[1],
     [([1, 2], 3), ([], 5), ([4], -1), ([7, 0, 2], 10), ([-3, 3], 0),
      ([6, 1, 1], 2), ([9], 9), ([2, 2, 2], -6)]),
    ("take_n", "(List<Int>, Int)", "List<Int>",
     lambda p: p[0][: max(p[1], 0)],
     [([1, 2, 3], 2), ([4, 5], 0), ([6], 3), ([7, 8, 9, 10], 1), ([], 2),
      ([3, 1, 4, 1, 5], 3), ([2, 2], 1), ([9, 0, 6], 5)]),
    ("cons_front", "(List<Int>, Int)", "List<Int>",
     lambda p: [p[1]] + p[0],
     [([1, 2], 0), ([], 5), ([4], 4), ([7, 8, 9], -1), ([3, 3], 6),
      ([2], 10), ([0, 1, 0], 2), ([6, 7], 8)]),
    ("append_n", "(List<Int>, Int)", "List<Int>",
     lambda p: p[0] + [p[1]],
     [([1, 2], 3), ([], 0), ([4], 5), ([7, 8, 9], -1), ([6, 6], 6),
      ([2, 0], 10), ([5], 1), ([3, 1, 4], 9)]),
    ("sum_both", "(List<Int>, List<Int>)", "Int",
     lambda p: sum(p[0]) + sum(p[1]),
     [([1, 2], [3]), ([], [4, 5]), ([6], []), ([7, 1], [2, 2]), ([], []),
      ([0, 9], [8, -3]), ([5, 5, 5], [1]), ([-2], [2])]),
    ("concat_both", "(List<Int>, List<Int>)", "List<Int>",
     lambda p: p[0] + p[1],
     [([1, 2], [3]), ([], [4, 5]), ([6], []), ([7, 8], [9, 0]), ([], []),
      ([2, 4, 6], [1]), ([5], [5, 5]), ([-1, 3], [0, 7])]),
    ("set_intersection", "(List<Int>, List<Int>)", "List<Int>",
     lambda p: [x for x in p[0] if x in p[1]],
     [([1, 2, 3], [2, 3, 4]), ([5, 6], [7]), ([], [1]), ([4, 4, 2], [4]),
      ([9, 0, 1], [1, 9]), ([3], [3]), ([8, 2, 8], [8, 5]), ([1, 2], [])]),
    ("sum_all_pairs", "(List<Int>, List<Int>)", "List<Int>",
     lambda p: [x + y for x in p[0] for y in p[1]],
     [([1, 2], [10, 20]), ([3], [4]), ([], [5, 6]), ([7, 8], []),
      ([0, 1, 2], [5]), ([2, 4], [1, 3]), ([9], [9, 9]), ([-1, 1], [6, 0])]),
]


def _fib(n: int) -> int:
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def _unique_justseen(xs):
    out = []
    for x in xs:
        if not out or out[-1] != x:
            out.append(x)
    return out


def build_tasks() -> list[Task]:
    tasks = []
    for name, tin, tout, ref, inputs in TASKS:
        pairs = tuple((x, ref(x)) for x in inputs)
        spec = IOSpec(parse_type(tin), parse_type(tout), pairs[:6])
        tasks.append(Task(name, spec, pairs[6:]))
    return tasks


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="corpus", help="output directory")
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    tasks = build_tasks()
    for task in tasks:
        save_task(task, str(out / f"{task.name}.json"))
    print(f"wrote {len(tasks)} tasks to {out}/")


if __name__ == "__main__":
    main()
