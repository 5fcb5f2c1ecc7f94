"""Shared inputs for the test modules."""

import random

from k3kit import InvalidInput
from k3kit.weierstrass import analyze, random_model

EXAMPLE4 = [[2, -1, -1, -1], [-1, -2, 0, 0], [-1, 0, -2, 0], [-1, 0, 0, -2]]


def seeded_minimal_reports(count, r=2, seed=3):
    """Reports of the first ``count`` minimal models drawn from a seeded stream."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        W = random_model(r, rng)
        try:
            rep = analyze(W)
        except InvalidInput:  # identically vanishing discriminant
            continue
        if rep.minimal:
            out.append(rep)
    return out
