"""Exact representation-function spectra over F_p.

A Spectrum maps each t in F_p to an exact non-negative integer count.
The squared-difference and product base spectra, their d-fold additive
convolutions, and the distance / dot-product spectra of Cartesian powers
all live here, together with supports and sumsets.
"""

from __future__ import annotations

import numpy as np

from .convolution import exact_cyclic
from .errors import GuardExceeded, InvariantViolation, ParseError
from .field import PrimeModulus
from .sets import FieldSubset, PointSet

# Below this many pairs, base spectra enumerate directly instead of
# routing through a length-p convolution.
_PAIR_LOOP_LIMIT = 262_144

GENERAL_SPECTRUM_GUARD = 100_000


class Spectrum:
    """Exact count function F_p -> N with a cached total."""

    __slots__ = ("modulus", "counts", "total")

    def __init__(self, modulus: PrimeModulus, counts: list[int], expected_total: int | None = None):
        if len(counts) != modulus.p:
            raise ValueError(f"need {modulus.p} counts, got {len(counts)}")
        for c in counts:
            if c < 0:
                raise ValueError("negative count")
        self.modulus = modulus
        self.counts = counts
        self.total = sum(counts)
        if expected_total is not None and self.total != expected_total:
            raise InvariantViolation(
                f"spectrum total {self.total} != forced combinatorial total {expected_total}"
            )

    @classmethod
    def point_mass(cls, modulus: PrimeModulus, at: int, count: int = 1) -> "Spectrum":
        counts = [0] * modulus.p
        counts[at % modulus.p] = count
        return cls(modulus, counts)

    def __getitem__(self, t: int) -> int:
        return self.counts[t % self.modulus.p]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Spectrum)
            and other.modulus == self.modulus
            and other.counts == self.counts
        )

    def __repr__(self) -> str:
        nz = sum(1 for c in self.counts if c)
        return f"Spectrum(p={self.modulus.p}, support={nz}, total={self.total})"

    def max_count(self) -> int:
        return max(self.counts)

    def items(self):
        """(t, count) pairs over the support."""
        for t, c in enumerate(self.counts):
            if c:
                yield t, c


def diff_square_spectrum(A: FieldSubset) -> Spectrum:
    """counts[t] = #{(a,b) in A^2 : (a-b)^2 = t}; total |A|^2."""
    p = A.modulus.p
    m = len(A)
    if m == 0:
        raise ValueError("empty set has no pair spectrum")
    counts = [0] * p
    if m * m <= _PAIR_LOOP_LIMIT:
        elements = A.elements()
        for a in elements:
            for b in elements:
                d = a - b
                counts[d * d % p] += 1
    else:
        # #{(a,b): a-b = delta} is the cyclic autocorrelation of the
        # indicator; push each difference count onto its square.
        ind = [0] * p
        for a in A:
            ind[a] = 1
        ind_neg = [0] * p
        for a in A:
            ind_neg[-a % p] = 1
        diff_counts = exact_cyclic(ind, ind_neg)
        for delta, c in enumerate(diff_counts):
            if c:
                counts[delta * delta % p] += c
    return Spectrum(A.modulus, counts, expected_total=m * m)


def product_spectrum(A: FieldSubset) -> Spectrum:
    """counts[t] = #{(a,b) in A^2 : a*b = t}; total |A|^2."""
    p = A.modulus.p
    m = len(A)
    if m == 0:
        raise ValueError("empty set has no pair spectrum")
    counts = [0] * p
    if m * m <= _PAIR_LOOP_LIMIT:
        elements = A.elements()
        for a in elements:
            for b in elements:
                counts[a * b % p] += 1
    else:
        # Discrete logs turn products into sums: convolve the indicator
        # of A\{0} over Z_{p-1}, then map exponents back.
        g = _primitive_root(A.modulus)
        log = [0] * p
        acc = 1
        for k in range(p - 1):
            log[acc] = k
            acc = acc * g % p
        ind = [0] * (p - 1)
        nonzero = 0
        for a in A:
            if a:
                ind[log[a]] = 1
                nonzero += 1
        conv = exact_cyclic(ind, ind)
        acc = 1
        for k in range(p - 1):
            counts[acc] = conv[k]
            acc = acc * g % p
        if 0 in A:
            counts[0] += 2 * nonzero + 1
    return Spectrum(A.modulus, counts, expected_total=m * m)


def _primitive_root(modulus: PrimeModulus) -> int:
    p = modulus.p
    phi = p - 1
    factors = []
    m = phi
    d = 2
    while d * d <= m:
        if m % d == 0:
            factors.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        factors.append(m)
    for g in range(2, p):
        if all(pow(g, phi // f, p) != 1 for f in factors):
            return g
    raise AssertionError(f"no primitive root mod {p}")


def cyclic_convolve(S: Spectrum, T: Spectrum, method: str | None = None) -> Spectrum:
    """out[t] = sum_u S[u] * T[t-u] with indices mod p, exact.

    method forces the direct or transform path (None = automatic switch).
    """
    if S.modulus != T.modulus:
        raise ValueError("mixed moduli")
    counts = exact_cyclic(S.counts, T.counts, method=method)
    return Spectrum(S.modulus, counts, expected_total=S.total * T.total)


def fold(S: Spectrum, d: int, method: str | None = None) -> Spectrum:
    """d-fold cyclic self-convolution by binary exponentiation; exact."""
    if d < 1:
        raise ValueError(f"fold depth must be >= 1, got {d}")
    result: Spectrum | None = None
    base = S
    e = d
    while e:
        if e & 1:
            result = base if result is None else cyclic_convolve(result, base, method)
        e >>= 1
        if e:
            base = cyclic_convolve(base, base, method)
    assert result is not None
    return result


def distance_spectrum_power(A: FieldSubset, n: int, method: str | None = None) -> Spectrum:
    """Pair counts of each distance over A^n x A^n, via the fold shortcut."""
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    return fold(diff_square_spectrum(A), n, method)


def dot_spectrum_power(A: FieldSubset, n: int, method: str | None = None) -> Spectrum:
    """Pair counts of each dot product over A^n x A^n."""
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    return fold(product_spectrum(A), n, method)


def self_dot_spectrum(A: FieldSubset, n: int) -> Spectrum:
    """counts[v] = #{x in A^n : x.x = v}; the diagonal of the dot spectrum.

    Diagonal pairs of the distance spectrum always sit at 0, but a point's
    dot product with itself does not, so the off-diagonal variant needs
    these counts per value.
    """
    p = A.modulus.p
    counts = [0] * p
    for a in A:
        counts[a * a % p] += 1
    return fold(Spectrum(A.modulus, counts, expected_total=len(A)), n)


def distance_spectrum_general(
    E: PointSet, guard: int = GENERAL_SPECTRUM_GUARD, force: bool = False
) -> Spectrum:
    """Pair counts of each distance over E x E by full enumeration.

    Quadratic in |E|; guarded, with force=True overriding the guard.
    """
    m = len(E)
    if m > guard and not force:
        raise GuardExceeded(f"|E| = {m} exceeds enumeration guard {guard}")
    p = E.modulus.p
    pts = np.array(E.points, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for i in range(m):
        d = (pts - pts[i]) % p
        vals = (d * d % p).sum(axis=1) % p
        acc += np.bincount(vals, minlength=p)
    return Spectrum(E.modulus, [int(c) for c in acc], expected_total=m * m)


def support(S: Spectrum, include_zero: bool = True) -> FieldSubset:
    """The set {t : S[t] > 0}, optionally without t = 0."""
    mask = 0
    for t, c in enumerate(S.counts):
        if c:
            mask |= 1 << t
    if not include_zero:
        mask &= ~1
    return FieldSubset(S.modulus, mask)


def sumset(X: FieldSubset, Y: FieldSubset) -> FieldSubset:
    """{x + y : x in X, y in Y}."""
    if X.modulus != Y.modulus:
        raise ValueError("mixed moduli")
    p = X.modulus.p
    full = (1 << p) - 1
    mask = 0
    for y in Y:
        mask |= (X.mask << y) | (X.mask >> (p - y)) if y else X.mask
    return FieldSubset(X.modulus, mask & full)


# -- serialization ---------------------------------------------------------
#
# CSV with a "p=<p>" first line, then "lambda,count" rows in decimal.


def spectrum_to_csv(S: Spectrum) -> str:
    lines = [f"p={S.modulus.p}", "lambda,count"]
    lines.extend(f"{t},{c}" for t, c in enumerate(S.counts))
    return "\n".join(lines) + "\n"


def spectrum_from_csv(text: str) -> Spectrum:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2 or not lines[0].startswith("p=") or lines[1] != "lambda,count":
        raise ParseError("spectrum CSV must start with 'p=<p>' then 'lambda,count'")
    try:
        modulus = PrimeModulus(int(lines[0][2:]))
    except ValueError as exc:
        raise ParseError(f"bad modulus line {lines[0]!r}: {exc}") from None
    counts = [0] * modulus.p
    for ln in lines[2:]:
        try:
            t_text, c_text = ln.split(",")
            counts[int(t_text)] = int(c_text)
        except (ValueError, IndexError):
            raise ParseError(f"malformed spectrum row {ln!r}") from None
    return Spectrum(modulus, counts)
