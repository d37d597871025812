"""Independent brute-force oracles for the test suite.

Everything here enumerates literally (all pairs, all tuples, all vectors)
and never touches the convolution or encoding machinery it is used to
check.  The numpy versions vectorize the same literal enumeration; the
pure-Python micro-oracles exist to validate those on the smallest cases.
"""

from itertools import product

import numpy as np

from ffdist.sets import FieldSubset


def materialized_points(A: FieldSubset, n: int) -> list[tuple[int, ...]]:
    return list(product(A.elements(), repeat=n))


def dist_pair_counts_py(A: FieldSubset, n: int) -> list[int]:
    p = A.modulus.p
    out = [0] * p
    pts = materialized_points(A, n)
    for x in pts:
        for y in pts:
            out[sum((a - b) * (a - b) for a, b in zip(x, y)) % p] += 1
    return out


def dot_pair_counts_py(A: FieldSubset, n: int) -> list[int]:
    p = A.modulus.p
    out = [0] * p
    pts = materialized_points(A, n)
    for x in pts:
        for y in pts:
            out[sum(a * b for a, b in zip(x, y)) % p] += 1
    return out


def dist_pair_counts(A: FieldSubset, n: int) -> list[int]:
    """All-pairs distance counts over A^n x A^n by direct enumeration."""
    p = A.modulus.p
    pts = np.array(materialized_points(A, n), dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for row in pts:
        d = (pts - row) % p
        vals = (d * d % p).sum(axis=1) % p
        acc += np.bincount(vals, minlength=p)
    return [int(c) for c in acc]


def dot_pair_counts(A: FieldSubset, n: int) -> list[int]:
    """All-pairs dot-product counts over A^n x A^n by direct enumeration."""
    p = A.modulus.p
    pts = np.array(materialized_points(A, n), dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for row in pts:
        vals = (pts * row % p).sum(axis=1) % p
        acc += np.bincount(vals, minlength=p)
    return [int(c) for c in acc]


def sphere_counts(p: int, d: int) -> list[int]:
    """#{v in F_p^d : sum v_i^2 = t} for each t, by exhausting F_p^d."""
    out = [0] * p
    for v in product(range(p), repeat=d):
        out[sum(c * c for c in v) % p] += 1
    return out


def weighted_pair_counts_dim2(E, F) -> list[int]:
    p = E.modulus.p
    out = [0] * p
    for (e1, e2), me in E.entries.items():
        for (f1, f2), mf in F.entries.items():
            out[(e1 * f1 + e2 + f2) % p] += me * mf
    return out


def weighted_pair_counts_dim3(E, F) -> list[int]:
    p = E.modulus.p
    out = [0] * p
    for (e1, e2, e3), me in E.entries.items():
        for (f1, f2, f3), mf in F.entries.items():
            out[(e1 * f1 + e2 * f2 + e3 + f3) % p] += me * mf
    return out


def energy_by_tuples(A: FieldSubset, d: int, kind: str) -> int:
    """Literal 4d-tuple count; exponential, smallest cases only."""
    p = A.modulus.p
    elements = A.elements()

    def form(tuples):
        acc = 0
        for i in range(d):
            a, b = tuples[2 * i], tuples[2 * i + 1]
            acc += (a - b) * (a - b) if kind == "distance" else a * b
        return acc % p

    count = 0
    for left in product(elements, repeat=2 * d):
        lv = form(left)
        for right in product(elements, repeat=2 * d):
            if form(right) == lv:
                count += 1
    return count


def quadruple_energy(A: FieldSubset, kind: str) -> int:
    """E^+ or E^x by literal quadruple enumeration."""
    p = A.modulus.p
    count = 0
    for a, b, c, e in product(A.elements(), repeat=4):
        if kind == "additive":
            if (a + b) % p == (c + e) % p:
                count += 1
        else:
            if a * b % p == c * e % p:
                count += 1
    return count
