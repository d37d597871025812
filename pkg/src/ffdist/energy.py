"""Energy functionals: d-fold distance and dot-product energies, additive and
multiplicative energies, the brute-force oracle, dyadic level sets, and the
report-only recursion diagnostics.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .convolution import exact_cyclic
from .errors import GuardExceeded, InvariantViolation
from .sets import FieldSubset
from .spectra import Spectrum, diff_square_spectrum, fold, product_spectrum

KINDS = ("distance", "dot", "additive", "multiplicative")

ORACLE_GUARD = 10**9  # on |A|**(4d)


@dataclass(frozen=True)
class EnergyValue:
    """An exact energy count with its provenance."""

    value: int
    kind: str
    d: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown energy kind {self.kind!r}")
        if self.value < 0:
            raise ValueError("negative energy")


def energy_from_spectrum(S: Spectrum, kind: str = "distance", d: int = 1) -> EnergyValue:
    """sum_t S[t]^2, exactly.

    Checks the two forced bounds on any such sum of squared counts:
    p * E >= total^2 (Cauchy-Schwarz) and E <= max * total.
    """
    value = sum(c * c for c in S.counts)
    p = S.modulus.p
    if p * value < S.total * S.total:
        raise InvariantViolation("energy below its Cauchy-Schwarz floor")
    if value > S.max_count() * S.total:
        raise InvariantViolation("energy above max*total ceiling")
    return EnergyValue(value, kind, d)


def distance_energy(A: FieldSubset, d: int) -> EnergyValue:
    """Number of 4d-tuples whose two d-fold sums of squared differences agree."""
    return energy_from_spectrum(fold(diff_square_spectrum(A), d), "distance", d)


def dot_energy(A: FieldSubset, d: int) -> EnergyValue:
    """Number of 4d-tuples whose two d-fold sums of products agree."""
    return energy_from_spectrum(fold(product_spectrum(A), d), "dot", d)


def _sum_spectrum(A: FieldSubset) -> Spectrum:
    p = A.modulus.p
    ind = [0] * p
    for a in A:
        ind[a] = 1
    return Spectrum(A.modulus, exact_cyclic(ind, ind), expected_total=len(A) ** 2)


def additive_energy(A: FieldSubset) -> EnergyValue:
    """#{(a,b,c,e) in A^4 : a+b = c+e}."""
    return energy_from_spectrum(_sum_spectrum(A), "additive", 1)


def multiplicative_energy(A: FieldSubset) -> EnergyValue:
    """#{(a,b,c,e) in A^4 : a*b = c*e}."""
    return energy_from_spectrum(product_spectrum(A), "multiplicative", 1)


def energy_bruteforce_oracle(
    A: FieldSubset, d: int, kind: str, guard: int = ORACLE_GUARD, force: bool = False
) -> EnergyValue:
    """Independent oracle: enumerate the 2d-tuples on each side directly.

    Every left tuple's form value is computed by plain field arithmetic, no
    convolutions, so this stays independent of the fast paths it checks.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown energy kind {kind!r}")
    if kind in ("additive", "multiplicative") and d != 1:
        raise ValueError(f"{kind} energy has no fold depth (got d={d})")
    m = len(A)
    if m == 0:
        raise ValueError("empty set has no energy")
    if m ** (4 * d) > guard and not force:
        raise GuardExceeded(f"|A|^(4d) = {m ** (4 * d)} exceeds oracle guard {guard}")
    p = A.modulus.p
    elements = A.elements()
    tally: Counter[int] = Counter()
    if kind == "additive":
        for a in elements:
            for b in elements:
                tally[(a + b) % p] += 1
    elif kind == "multiplicative":
        for a in elements:
            for b in elements:
                tally[a * b % p] += 1
    else:
        for pair_tuple in product(elements, repeat=2 * d):
            acc = 0
            for i in range(d):
                a, b = pair_tuple[2 * i], pair_tuple[2 * i + 1]
                if kind == "distance":
                    acc += (a - b) * (a - b)
                else:
                    acc += a * b
            tally[acc % p] += 1
    value = sum(c * c for c in tally.values())
    return EnergyValue(value, kind, d)


# -- dyadic level sets ------------------------------------------------------


@dataclass(frozen=True)
class DyadicLevels:
    """Partition of a spectrum's support by floor(log2(count))."""

    levels: tuple[tuple[int, FieldSubset], ...]

    def level(self, i: int) -> FieldSubset:
        for j, subset in self.levels:
            if j == i:
                return subset
        raise KeyError(f"no dyadic level {i}")

    def exponents(self) -> list[int]:
        return [i for i, _ in self.levels]


def dyadic_levels(S: Spectrum) -> DyadicLevels:
    """Level sets P_i = {t : 2^i <= S[t] < 2^(i+1)}; they partition the support."""
    buckets: dict[int, int] = {}
    for t, c in S.items():
        i = c.bit_length() - 1
        buckets[i] = buckets.get(i, 0) | (1 << t)
    levels = tuple(
        (i, FieldSubset(S.modulus, buckets[i])) for i in sorted(buckets)
    )
    for i, subset in levels:
        weight = sum(S.counts[t] for t in subset)
        sq_weight = sum(S.counts[t] ** 2 for t in subset)
        size = len(subset)
        if (1 << i) * size > 2 * weight or (1 << (2 * i)) * size > 4 * sq_weight:
            raise InvariantViolation(f"dyadic level {i} violates its mass bounds")
    return DyadicLevels(levels)


# -- recursion diagnostics ---------------------------------------------------


def recursion_diagnostic(A: FieldSubset, d: int, kind: str = "distance") -> dict:
    """Empirical ratios of E_d against the recursive and closed-form bound
    shapes (their constants are unspecified, so nothing is asserted here).

    Logs are natural logs; a different base only moves the implied constant.
    """
    if d < 2:
        raise ValueError(f"the recursion needs d >= 2, got {d}")
    if kind not in ("distance", "dot"):
        raise ValueError(f"recursion diagnostic covers distance/dot, got {kind!r}")
    base = diff_square_spectrum(A) if kind == "distance" else product_spectrum(A)
    e_prev = energy_from_spectrum(fold(base, d - 1), kind, d - 1).value
    e_d = energy_from_spectrum(fold(base, d), kind, d).value
    m = len(A)
    p = A.modulus.p
    main_term = Fraction(m ** (4 * d), p)
    recursive_term = m ** (2 * d + 1) * math.sqrt(e_prev)
    log_m = math.log(m)
    recursive_rhs = d**2 * log_m**2 * (float(main_term) + recursive_term)
    closed_form_rhs = d**2 * log_m**2 * float(main_term) + d**4 * log_m**4 * m ** (
        4 * d - 2 + 1 / 2 ** (d - 1)
    )
    return {
        "kind": kind,
        "d": d,
        "set_size": m,
        "p": p,
        "energy_d": e_d,
        "energy_d_minus_1": e_prev,
        "main_term": float(main_term),
        "recursive_term": recursive_term,
        "recursive_rhs": recursive_rhs,
        "closed_form_rhs": closed_form_rhs,
        "ratio_recursive": e_d / recursive_rhs if recursive_rhs > 0 else None,
        "ratio_closed_form": e_d / closed_form_rhs if closed_form_rhs > 0 else None,
        "ratio_main_term": float(Fraction(e_d) / main_term) if m > 0 else None,
    }
