#!/usr/bin/env python3
"""Regenerates scenarios/jump_suite/: 50 random OU models with compound Poisson jumps."""
import json
import pathlib

import numpy as np

SEED = 20241015
COUNT = 50
FUNCTIONS = ["sigmoid", "one_plus_indicator", "clipped_exp:0.5:20", "bump", "exp:0.3", "indicator"]


def r(x):
    return [[round(float(v), 6) for v in row] for row in x] if np.ndim(x) == 2 else [round(float(v), 6) for v in x]


def model(rng, k):
    d = int(rng.integers(1, 4))
    A = -np.diag(rng.uniform(0.3, 2.0, d)) + np.triu(rng.uniform(-0.5, 0.5, (d, d)), 1)
    rank = d - 1 if d > 1 and rng.uniform() < 0.2 else d
    # two-decimal factor so the product is exact after rounding
    B = np.round(rng.normal(0.0, 0.8, (d, rank)), 2)
    R = B @ B.T + (0.05 * np.eye(d) if rank == d else 0.0)
    atoms = int(rng.integers(1, 4))
    probs = np.round(rng.dirichlet(np.ones(atoms)), 3)
    probs[-1] = round(1.0 - probs[:-1].sum(), 3)
    doc = {
        "description": f"random jump model {k}",
        "dim": d,
        "A": r(A),
        "R": r(R),
        "a": r(rng.normal(0.0, 0.2, d)),
        "jump": {
            "rate": round(float(rng.uniform(0.5, 3.0)), 6),
            "atoms": [{"value": r(rng.normal(0.0, 0.5, d)), "prob": round(float(p), 6)} for p in probs],
        },
        "defaults": {"n": 100000, "K": 512, "seed": int(rng.integers(1, 2**31))},
        "checks": [],
    }
    t = round(float(rng.uniform(0.3, 2.0)), 6)
    x, y = r(rng.normal(0.0, 0.5, d)), r(rng.normal(0.0, 0.5, d))
    f = FUNCTIONS[int(rng.integers(len(FUNCTIONS)))]
    for alpha in (2.0, 4.0):
        doc["checks"].append({"id": f"harnack_a{int(alpha)}", "type": "harnack", "t": t, "x": x, "y": y,
                              "alpha": alpha, "f": f})
    return doc


def main():
    rng = np.random.default_rng(SEED)
    out = pathlib.Path(__file__).resolve().parent.parent / "scenarios" / "jump_suite"
    out.mkdir(parents=True, exist_ok=True)
    for k in range(COUNT):
        (out / f"s{k:02d}.json").write_text(json.dumps(model(rng, k), indent=1) + "\n")


if __name__ == "__main__":
    main()
