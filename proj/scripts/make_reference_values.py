#!/usr/bin/env python3
"""Reference values for the C++ test suite, computed independently.

Every constant asserted in tests/ that is not a hand-derivable number comes
from this script: PRNG streams from textbook implementations of splitmix64 /
xoshiro256**, quadrature nodes and tail probabilities from scipy. Run it and
paste the printed blocks into the matching test file when anything changes.
"""

import hashlib

MASK = (1 << 64) - 1


def splitmix64_stream(seed, n):
    out = []
    state = seed
    for _ in range(n):
        state = (state + 0x9E3779B97F4A7C15) & MASK
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        out.append(z ^ (z >> 31))
    return out


def rotl(x, k):
    return ((x << k) | (x >> (64 - k))) & MASK


def xoshiro256ss_stream(seed, n):
    s = splitmix64_stream(seed, 4)
    out = []
    for _ in range(n):
        out.append((rotl((s[1] * 5) & MASK, 7) * 9) & MASK)
        t = (s[1] << 17) & MASK
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = rotl(s[3], 45)
    return out


def fnv1a64(data):
    h = 0xCBF29CE484222325
    for b in data:
        h = ((h ^ b) * 0x100000001B3) & MASK
    return h


def derive_seed(root, label):
    state = root ^ fnv1a64(label.encode())
    stream = splitmix64_stream(state, 2)
    return stream[1]


def main():
    print("== splitmix64(seed=0), first 3 ==")
    for v in splitmix64_stream(0, 3):
        print(f"0x{v:016x}")
    print("== splitmix64(seed=1234567), first 3 ==")
    for v in splitmix64_stream(1234567, 3):
        print(f"0x{v:016x}")
    print("== xoshiro256** seeded by splitmix64(42), first 5 ==")
    for v in xoshiro256ss_stream(42, 5):
        print(f"0x{v:016x}")
    print("== fnv1a64 ==")
    for s in [b"", b"a", b"folds", b"models"]:
        print(f"{s!r}: 0x{fnv1a64(s):016x}")
    print("== derive_seed ==")
    for root, label in [(0, "folds"), (7, "models"), (123456789, "tuning/Dis_min_max")]:
        print(f"({root}, {label!r}): 0x{derive_seed(root, label):016x}")
    print("== md5 ==")
    for s in [b"", b"abc", b"message digest", b"The quick brown fox jumps over the lazy dog"]:
        print(f"{s!r}: {hashlib.md5(s).hexdigest()}")

    import numpy as np
    from scipy.special import roots_hermite
    from scipy.stats import chi2, studentized_range

    print("== gauss-hermite (normal weight) Q=21: node, weight ==")
    x, w = roots_hermite(21)
    nodes = x * np.sqrt(2.0)
    weights = w / np.sqrt(np.pi)
    weights = weights / weights.sum()
    for n, wt in zip(nodes, weights):
        print(f"{n!r}, {wt!r}")
    print("prior mean %r  var %r" % (float(weights @ nodes), float(weights @ nodes**2)))

    print("== chi2 sf ==")
    for stat, df in [(8.0, 2), (3.5, 11), (0.0, 3), (25.0, 11), (1e-8, 2)]:
        print(f"sf({stat}, {df}) = {chi2.sf(stat, df)!r}")

    print("== studentized range sf (k treatments, inf dof) ==")
    for q, k in [(3.314, 3), (4.0, 3), (2.0, 3), (3.0, 2), (1.0, 4), (2.5, 12), (5.0, 12), (3.0, 6)]:
        print(f"sf({q}, {k}) = {studentized_range.sf(q, k, np.inf)!r}")


if __name__ == "__main__":
    main()
