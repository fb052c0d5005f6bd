"""Shared generators for the test suite."""

import random

from hodgedeg.linalg import RatMatrix


def partitions(n, largest=None):
    if n == 0:
        yield []
        return
    largest = n if largest is None else largest
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield [k] + rest


def random_conjugator(rng: random.Random, n: int) -> RatMatrix:
    while True:
        p = RatMatrix([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
        if p.is_invertible():
            return p
