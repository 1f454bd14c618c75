"""Seeded, splittable randomness.

Every random draw in the package comes from a Philox generator keyed by a
root seed plus a spawn path, so a (seed, path) pair always reproduces the
same stream regardless of how many other streams were drawn before it.
"""
import numpy as np


def generator(seed: int, *path: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed) & (2**64 - 1), spawn_key=tuple(int(p) for p in path))
    return np.random.Generator(np.random.Philox(ss))


def random_sign_matrix(m: int, n: int, seed: int, *path: int) -> np.ndarray:
    g = generator(seed, *path)
    return np.where(g.integers(0, 2, size=(m, n)) == 1, 1.0, -1.0)


def signs(shape, seed: int, *path: int) -> np.ndarray:
    g = generator(seed, *path)
    return (2.0 * g.integers(0, 2, size=shape) - 1.0)
