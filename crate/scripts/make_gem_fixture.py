#!/usr/bin/env python3
"""Writes the synthetic survey fixture used by the CLI demo and tests.

60 synthetic countries drawn from four latent regimes, 40 respondents each.
Columns: country, gender (1 = male, 2 = female), age, and 13 yes/no items.
About 2% of item cells are left empty to exercise missing-value handling.
"""

import csv
import random
import sys

ITEMS = ["Q1A1", "Q2A", "Q4A", "Q3A", "Q3B", "Qi1", "Qi2", "Qi3", "Qi4", "Qi5", "Qi6", "Qi7", "Qi8"]

# (age mean, age sd, per-item yes probability)
REGIMES = [
    (38.0, 11.0, [0.20, 0.15, 0.10, 0.35, 0.06, 0.55, 0.60, 0.65, 0.30, 0.55, 0.75, 0.80, 0.70]),
    (46.0, 12.0, [0.05, 0.08, 0.03, 0.08, 0.02, 0.35, 0.35, 0.40, 0.45, 0.65, 0.55, 0.70, 0.50]),
    (42.0, 10.0, [0.10, 0.12, 0.06, 0.18, 0.04, 0.45, 0.50, 0.50, 0.40, 0.45, 0.65, 0.75, 0.60]),
    (34.0, 9.0, [0.30, 0.20, 0.15, 0.50, 0.10, 0.65, 0.70, 0.70, 0.25, 0.70, 0.85, 0.85, 0.80]),
]


def main(path: str) -> None:
    rng = random.Random(2015)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["country", "gender", "age"] + ITEMS)
        for c in range(60):
            regime = c % 4
            age_mu, age_sd, probs = REGIMES[regime]
            jitter = [min(0.95, max(0.01, p + rng.uniform(-0.04, 0.04))) for p in probs]
            for _ in range(40):
                gender = 1 if rng.random() < 0.5 else 2
                age = int(min(64, max(18, round(rng.gauss(age_mu, age_sd)))))
                answers = []
                for p in jitter:
                    if rng.random() < 0.02:
                        answers.append("")
                    else:
                        answers.append("yes" if rng.random() < p else "no")
                w.writerow([f"C{c + 1:02d}", gender, age] + answers)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "crates/cli/fixtures/gem_like.csv")
