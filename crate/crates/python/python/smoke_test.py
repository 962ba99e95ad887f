"""Quick end-to-end check of the Python bindings."""

import json
import math
from fractions import Fraction

import prefattach as pa


def main():
    seed = pa.PlaneTree("((()))")
    tree = pa.grow(seed, 200, rng=7)
    assert tree.num_vertices == 200
    assert tree.canonical_code() == pa.grow(seed, 200, rng=7).canonical_code()
    assert sum(tree.degrees()) == 2 * 200 - 2

    law = dict(pa.exact_law(pa.PlaneTree.path(3), 6))
    assert sum(Fraction(p) for p in law.values()) == 1

    star = pa.PlaneTree.star(4)
    assert pa.d_tau("(2)", star) == 6
    assert math.isfinite(pa.martingale("(1(1))", tree))

    planted = pa.grow(pa.PlaneTree.planted_vertex(), 500, rng=3)
    edges = pa.looptree_edges(planted)
    assert len(edges) == planted.corner_count()
    assert pa.looptree_diameter(planted) > 0

    square = [[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]]
    point = [[0]]
    assert abs(pa.gh_exact(square, point) - 1.0) < 1e-12
    try:
        big = [[abs(i - j) for j in range(9)] for i in range(9)]
        pa.gh_exact(big, point)
    except pa.GuardError:
        pass
    else:
        raise AssertionError("expected a guard violation")

    alphas = pa.split_alphas(20000, rng=1)
    mean = sum(alphas) / len(alphas)
    assert abs(mean - 1 / 3) < 0.01, mean

    total, diameter = pa.line_breaking(50, rng=2)
    assert 0 < diameter <= total

    report = json.loads(pa.run_verify([3, 4]))
    assert all(c["passed"] for c in report["criteria"])
    print("smoke test passed")


if __name__ == "__main__":
    main()
