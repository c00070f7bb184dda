"""Regenerate midpoints.json from the mpmath oracle: python tests/fixtures/make_midpoint_fixtures.py"""

import sys
from pathlib import Path

import numpy as np

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE.parent))

from helpers import ball_points  # noqa: E402
from oracles import gyromidpoint, to_floats  # noqa: E402

from hyperball.atlas import write_midpoint_fixtures  # noqa: E402


def main():
    rng = np.random.default_rng(20240611)
    records = []
    for i in range(40):
        c = [0.5, 1.0, 2.0][i % 3]
        n = int(rng.integers(1, 9))
        count = int(rng.integers(1, 12))
        points = ball_points(rng, (count, n), c)
        weights = rng.uniform(0.05, 1.0, size=count)
        if i % 4 == 3:
            weights = weights * rng.choice([-1.0, 1.0], size=count)
        records.append(
            {"c": c, "points": points, "weights": weights, "expected_midpoint": to_floats(gyromidpoint(points, weights, c))}
        )
    write_midpoint_fixtures(HERE / "midpoints.json", records)


if __name__ == "__main__":
    main()
