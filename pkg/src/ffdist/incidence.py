"""Point-plane incidences in F_p^3: exact counting by two strategies,
collinearity analysis, the incidence-bound diagnostic, and the explicit
point/plane instance arising from the dyadic energy decomposition.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import sqrt

from .convolution import exact_cyclic
from .encodings import WeightedPointSet
from .energy import dyadic_levels
from .errors import GuardExceeded, InvariantViolation, ParseError
from .field import PrimeModulus
from .sets import FieldSubset
from .spectra import Spectrum, diff_square_spectrum, fold

COLLINEAR_GUARD = 5000


class PlaneSet:
    """Affine planes a*X + b*Y + c*Z = e in F_p^3; repeats carry multiplicity."""

    __slots__ = ("modulus", "planes")

    def __init__(self, modulus: PrimeModulus, planes) -> None:
        p = modulus.p
        canonical = []
        for a, b, c, e in planes:
            a, b, c, e = a % p, b % p, c % p, e % p
            if a == 0 and b == 0 and c == 0:
                raise ValueError("plane with zero normal vector")
            canonical.append((a, b, c, e))
        self.modulus = modulus
        self.planes: list[tuple[int, int, int, int]] = canonical

    def __len__(self) -> int:
        return len(self.planes)

    def __iter__(self):
        return iter(self.planes)

    def grouped(self) -> dict[tuple[int, int, int], Counter]:
        """normal -> Counter(constant -> multiplicity)."""
        groups: dict[tuple[int, int, int], Counter] = {}
        for a, b, c, e in self.planes:
            groups.setdefault((a, b, c), Counter())[e] += 1
        return groups


@dataclass
class IncidenceInstance:
    """Points (with multiplicity), planes, and the collinearity parameter k.

    Instances built from the energy decomposition also carry the exact
    weighted pair sum their incidence count must reproduce.
    """

    points: WeightedPointSet
    planes: PlaneSet
    k: int
    expected_incidences: int | None = None

    def __post_init__(self):
        if not 0 <= self.k <= self.points.total:
            raise ValueError(f"collinearity parameter k={self.k} exceeds |points|")


def count_incidences(
    points: WeightedPointSet, planes: PlaneSet, strategy: str = "grouped"
) -> int:
    """Multiplicity-weighted number of (point, plane) pairs with the point
    on the plane.

    strategy "direct" tests every pair; "grouped" joins on the evaluation
    of each plane normal against all points.  Both are exact and must agree.
    """
    if points.modulus != planes.modulus:
        raise ValueError("mixed moduli")
    if points.dim != 3:
        raise ValueError("incidence points live in F_p^3")
    p = points.modulus.p
    if strategy == "direct":
        total = 0
        for (x, y, z), mult in points.entries.items():
            for a, b, c, e in planes:
                if (a * x + b * y + c * z) % p == e:
                    total += mult
        return total
    if strategy == "grouped":
        total = 0
        for (a, b, c), constants in planes.grouped().items():
            histogram: Counter = Counter()
            for (x, y, z), mult in points.entries.items():
                histogram[(a * x + b * y + c * z) % p] += mult
            for e, plane_mult in constants.items():
                total += histogram[e] * plane_mult
        return total
    raise ValueError(f"unknown strategy {strategy!r}")


def _canonical_direction(v: tuple[int, int, int], modulus: PrimeModulus) -> tuple[int, int, int]:
    """Scale a nonzero direction so its first nonzero coordinate is 1.

    Among all scalings this is the lexicographically least representative,
    so equal lines hash equal.
    """
    p = modulus.p
    for c in v:
        if c:
            inv = modulus.inv(c)
            return tuple(x * inv % p for x in v)  # type: ignore[return-value]
    raise ValueError("zero direction")


def line_key(
    P: tuple[int, int, int], Q: tuple[int, int, int], modulus: PrimeModulus
) -> tuple[tuple[int, int, int], tuple[int, int, int]]:
    """Canonical (base point, direction) form of the line through P != Q."""
    p = modulus.p
    d = _canonical_direction(tuple((q - r) % p for q, r in zip(Q, P)), modulus)
    pivot = next(i for i, c in enumerate(d) if c)  # d[pivot] == 1
    t = P[pivot]
    base = tuple((c - t * dc) % p for c, dc in zip(P, d))
    return base, d


def max_collinear(points, modulus: PrimeModulus | None = None, guard: int = COLLINEAR_GUARD, force: bool = False) -> int:
    """Largest number of distinct points on a single line of F_p^3.

    Accepts a WeightedPointSet or an iterable of coordinate triples;
    multiplicities do not inflate the count.
    """
    if isinstance(points, WeightedPointSet):
        modulus = points.modulus
        pts = list(points.entries.keys())
    else:
        if modulus is None:
            raise ValueError("modulus required for raw point lists")
        p = modulus.p
        pts = list({tuple(c % p for c in pt) for pt in points})
    n = len(pts)
    if n > guard and not force:
        raise GuardExceeded(f"|R| = {n} exceeds collinearity guard {guard}")
    if n <= 2:
        return n
    best = 2
    for i, anchor in enumerate(pts):
        directions: Counter = Counter()
        for j, other in enumerate(pts):
            if i == j:
                continue
            d = tuple((a - b) % modulus.p for a, b in zip(other, anchor))
            directions[_canonical_direction(d, modulus)] += 1
        local = 1 + max(directions.values())
        if local > best:
            best = local
    return best


def max_collinear_vertical(points: WeightedPointSet) -> int:
    """Largest distinct-point count on a line in the Z direction."""
    columns: Counter = Counter()
    for (x, y, _z) in points.entries:
        columns[(x, y)] += 1
    return max(columns.values()) if columns else 0


@dataclass
class RudnevReport:
    """Exact incidence count beside the three incidence-bound terms.

    The bound's constant is implicit, so only the ratio count / term-sum is
    reported; nothing is asserted.
    """

    incidences: int
    n_points: int
    n_planes: int
    k: int
    term_main: float
    term_sqrt: float
    term_collinear: float
    ratio: float
    swapped_roles: bool
    note: str


def rudnev_diagnostic(inst: IncidenceInstance) -> RudnevReport:
    count = count_incidences(inst.points, inst.planes)
    direct = count_incidences(inst.points, inst.planes, strategy="direct")
    if direct != count:
        raise InvariantViolation(
            f"incidence strategies disagree: grouped {count} vs direct {direct}"
        )
    p = inst.points.modulus.p
    n_r = inst.points.total
    n_s = len(inst.planes)
    swapped = n_r > n_s
    r, s = (n_s, n_r) if swapped else (n_r, n_s)
    note = "roles swapped: |R| > |S|, bound applied to the transposed instance" if swapped else ""
    term_main = float(Fraction(r * s, p))
    term_sqrt = sqrt(r) * s
    term_collinear = inst.k * s
    denom = term_main + term_sqrt + term_collinear
    return RudnevReport(
        incidences=count,
        n_points=n_r,
        n_planes=n_s,
        k=inst.k,
        term_main=term_main,
        term_sqrt=term_sqrt,
        term_collinear=term_collinear,
        ratio=count / denom if denom else float("inf"),
        swapped_roles=swapped,
        note=note,
    )


def build_proof_instance(
    A: FieldSubset, d: int, i0: int, j0: int
) -> IncidenceInstance:
    """The point/plane instance whose incidences equal the restricted
    two-level pair sum of the (d-1)-fold squared-difference spectrum.

    Points: (-2a, e, t1 + a^2 - e^2) over a, e in A, t1 in level i0.
    Planes: b*X + 2c*Y + Z = t2 - b^2 + c^2 over b, c in A, t2 in level j0.
    The carried value is sum over (t1, t2) in the two levels of
    sum_s r(s - t1) * r(s - t2) with r the base squared-difference counts.
    """
    if d < 2:
        raise ValueError(f"the decomposition needs d >= 2, got {d}")
    p = A.modulus.p
    base = diff_square_spectrum(A)
    levels = dyadic_levels(fold(base, d - 1))
    P_i = levels.level(i0)
    P_j = levels.level(j0)
    if len(P_i) == 0 or len(P_j) == 0:
        raise ValueError("empty dyadic level")

    elements = A.elements()
    point_entries: dict[tuple[int, ...], int] = {}
    for a in elements:
        for e in elements:
            shift = (a * a - e * e) % p
            for t1 in P_i:
                key = (-2 * a % p, e, (t1 + shift) % p)
                point_entries[key] = point_entries.get(key, 0) + 1
    points = WeightedPointSet(A.modulus, 3, point_entries)

    plane_list = []
    for b in elements:
        for c in elements:
            const_shift = (c * c - b * b) % p
            for t2 in P_j:
                plane_list.append((b, 2 * c % p, 1, (t2 + const_shift) % p))
    planes = PlaneSet(A.modulus, plane_list)

    # Cross-correlation of the base counts: corr[delta] = sum_s r(s)*r(s-delta),
    # so the carried sum is sum over level pairs of corr[t1 - t2].
    reversed_counts = [base.counts[-t % p] for t in range(p)]
    corr = Spectrum(A.modulus, exact_cyclic(base.counts, reversed_counts))
    expected = 0
    for t1 in P_i:
        for t2 in P_j:
            expected += corr[(t1 - t2) % p]

    k = max_collinear(points)
    return IncidenceInstance(points=points, planes=planes, k=k, expected_incidences=expected)


def verify_proof_instance(inst: IncidenceInstance) -> int:
    """Count incidences both ways and require equality with the carried sum."""
    grouped = count_incidences(inst.points, inst.planes, strategy="grouped")
    direct = count_incidences(inst.points, inst.planes, strategy="direct")
    if grouped != direct:
        raise InvariantViolation(
            f"incidence strategies disagree: grouped {grouped} vs direct {direct}"
        )
    if inst.expected_incidences is not None and grouped != inst.expected_incidences:
        raise InvariantViolation(
            f"incidence count {grouped} != carried pair sum {inst.expected_incidences}"
        )
    return grouped


# -- instance dump ----------------------------------------------------------
#
# Text sections POINTS / PLANES, one tuple per line; the trailing field is
# the multiplicity.


def format_instance(inst: IncidenceInstance) -> str:
    lines = [f"p={inst.points.modulus.p}", "POINTS"]
    for pt in sorted(inst.points.entries):
        lines.append(",".join(str(c) for c in pt) + f",{inst.points.entries[pt]}")
    lines.append("PLANES")
    for plane, mult in sorted(Counter(inst.planes.planes).items()):
        lines.append(",".join(str(c) for c in plane) + f",{mult}")
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> tuple[WeightedPointSet, PlaneSet]:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("p="):
        raise ParseError("instance dump must start with 'p=<prime>'")
    modulus = PrimeModulus(int(lines[0][2:]))
    section = None
    point_entries: dict[tuple[int, ...], int] = {}
    plane_list: list[tuple[int, int, int, int]] = []
    for ln in lines[1:]:
        if ln == "POINTS":
            section = "points"
            continue
        if ln == "PLANES":
            section = "planes"
            continue
        try:
            parts = [int(c) for c in ln.split(",")]
        except ValueError:
            raise ParseError(f"malformed instance row {ln!r}") from None
        if section == "points":
            if len(parts) != 4:
                raise ParseError(f"point row needs x,y,z,mult: {ln!r}")
            key = tuple(parts[:3])
            point_entries[key] = point_entries.get(key, 0) + parts[3]
        elif section == "planes":
            if len(parts) != 5:
                raise ParseError(f"plane row needs a,b,c,e,mult: {ln!r}")
            plane_list.extend([tuple(parts[:4])] * parts[4])
        else:
            raise ParseError(f"row outside POINTS/PLANES sections: {ln!r}")
    if not point_entries or not plane_list:
        raise ParseError("instance dump needs both POINTS and PLANES rows")
    return WeightedPointSet(modulus, 3, point_entries), PlaneSet(modulus, plane_list)
