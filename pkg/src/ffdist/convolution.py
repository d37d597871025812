"""Exact cyclic convolution of non-negative integer sequences.

Two interchangeable paths produce identical Python-int results:

* direct: the O(n^2) schoolbook sum with arbitrary-precision accumulators,
  used for lengths up to DIRECT_LIMIT;
* transform: number-theoretic transforms modulo several 31-bit primes,
  recombined by remaindering (CRT).  The prime pool is grown until its
  product exceeds an a-priori bound on the output coefficients, which
  makes the reconstruction exact, not approximate.

The transform path needs primes q = 1 (mod N) below 2**31.5 (so numpy
int64 products never overflow), where N is the power-of-two transform
length.  Such primes exist in bulk for every N up to 2**25, which covers
all desk-scale moduli; beyond that the direct path is the fallback.
"""

from __future__ import annotations

import numpy as np

from .field import is_prime

# Lengths at or below this use the schoolbook path.
DIRECT_LIMIT = 512

# Largest q with q*q < 2**63, keeping int64 butterflies overflow-free.
_MAX_NTT_PRIME = 3_037_000_499

_prime_pool: dict[int, list[tuple[int, int]]] = {}  # N -> [(q, generator_of_order_N)]
_pool_cursor: dict[int, int] = {}  # N -> next candidate multiplier to test
_twiddle_cache: dict[tuple[int, int, bool], list[np.ndarray]] = {}
_bitrev_cache: dict[int, np.ndarray] = {}


def exact_cyclic(a: list[int], b: list[int], method: str | None = None) -> list[int]:
    """Cyclic convolution out[t] = sum_u a[u]*b[(t-u) mod n], exact.

    method: None picks direct for n <= DIRECT_LIMIT and transform beyond;
    "direct" / "transform" force a path (the spot-check tests rely on this).
    """
    n = len(a)
    if len(b) != n:
        raise ValueError(f"length mismatch: {n} vs {len(b)}")
    if n == 0:
        return []
    if method not in (None, "direct", "transform"):
        raise ValueError(f"unknown convolution method {method!r}")
    if method is None:
        if n <= DIRECT_LIMIT:
            return _convolve_direct(a, b)
        try:
            return _convolve_transform(a, b)
        except RuntimeError:
            # Transform-friendly primes ran out (enormous n or counts);
            # correctness wins over speed.
            return _convolve_direct(a, b)
    if method == "direct" or n <= 2:
        return _convolve_direct(a, b)
    return _convolve_transform(a, b)


def _convolve_direct(a: list[int], b: list[int]) -> list[int]:
    n = len(a)
    out = [0] * n
    nz_b = [(v, bv) for v, bv in enumerate(b) if bv]
    for u, av in enumerate(a):
        if not av:
            continue
        for v, bv in nz_b:
            w = u + v
            if w >= n:
                w -= n
            out[w] += av * bv
    return out


def _convolve_transform(a: list[int], b: list[int]) -> list[int]:
    n = len(a)
    total_a, total_b = sum(a), sum(b)
    if total_a == 0 or total_b == 0:
        return [0] * n
    # Every output coefficient is a sub-sum of all products, so this bounds
    # both the linear coefficients and their cyclic wrap-around sums.
    bound = total_a * total_b + 1

    size = 1 << (2 * n - 1).bit_length()
    primes = _primes_for(size, bound)

    residues = []
    for q, gen in primes:
        ra = np.array([x % q for x in a] + [0] * (size - n), dtype=np.int64)
        rb = np.array([x % q for x in b] + [0] * (size - n), dtype=np.int64)
        fa = _ntt(ra, q, gen, inverse=False)
        if a is b:
            fb = fa
        else:
            fb = _ntt(rb, q, gen, inverse=False)
        fc = fa * fb % q
        lin = _ntt(fc, q, gen, inverse=True)
        # Wrap the linear convolution back to cyclic length n.
        wrapped = lin[:n].copy()
        tail = lin[n : 2 * n - 1]
        wrapped[: len(tail)] = (wrapped[: len(tail)] + tail) % q
        residues.append(wrapped)

    return _crt_combine(residues, [q for q, _ in primes])


def _primes_for(size: int, bound: int) -> list[tuple[int, int]]:
    """Primes q = 1 (mod size) whose product exceeds bound, with generators."""
    pool = _prime_pool.setdefault(size, [])
    cursor = _pool_cursor.setdefault(size, (_MAX_NTT_PRIME - 1) // size)
    chosen: list[tuple[int, int]] = []
    product = 1
    idx = 0
    while product < bound:
        while idx >= len(pool):
            if cursor < 1:
                raise RuntimeError(
                    f"not enough transform-friendly primes for length {size}"
                )
            q = cursor * size + 1
            cursor -= 1
            if is_prime(q):
                pool.append((q, _order_n_generator(q, size)))
        _pool_cursor[size] = cursor
        q, gen = pool[idx]
        chosen.append((q, gen))
        product *= q
        idx += 1
    return chosen


def _order_n_generator(q: int, n: int) -> int:
    """An element of exact multiplicative order n mod q (n | q-1)."""
    g = _primitive_root(q)
    return pow(g, (q - 1) // n, q)


def _primitive_root(q: int) -> int:
    factors = _prime_factors(q - 1)
    for g in range(2, q):
        if all(pow(g, (q - 1) // f, q) != 1 for f in factors):
            return g
    raise AssertionError(f"no primitive root found for {q}")


def _prime_factors(m: int) -> list[int]:
    factors = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            factors.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        factors.append(m)
    return factors


def _bit_reverse_indices(n: int) -> np.ndarray:
    cached = _bitrev_cache.get(n)
    if cached is None:
        bits = n.bit_length() - 1
        idx = np.arange(n, dtype=np.int64)
        rev = np.zeros(n, dtype=np.int64)
        for _ in range(bits):
            rev = (rev << 1) | (idx & 1)
            idx >>= 1
        cached = _bitrev_cache[n] = rev
    return cached


def _power_table(w: int, m: int, q: int) -> np.ndarray:
    """Powers w^0 .. w^(m-1) mod q via repeated doubling (few numpy ops)."""
    table = np.ones(1, dtype=np.int64)
    step = w
    while table.size < m:
        table = np.concatenate([table, table * step % q])
        step = step * step % q
    return table[:m]


def _stage_twiddles(q: int, n: int, gen: int, inverse: bool) -> list[np.ndarray]:
    key = (q, n, inverse)
    cached = _twiddle_cache.get(key)
    if cached is None:
        root = pow(gen, q - 2, q) if inverse else gen
        stages = []
        length = 2
        while length <= n:
            w = pow(root, n // length, q)
            stages.append(_power_table(w, length // 2, q))
            length *= 2
        cached = _twiddle_cache[key] = stages
    return cached


def _ntt(values: np.ndarray, q: int, gen: int, inverse: bool) -> np.ndarray:
    """Iterative radix-2 transform; gen has order len(values) mod q."""
    n = values.size
    a = values[_bit_reverse_indices(n)].copy()
    stages = _stage_twiddles(q, n, gen, inverse)
    length = 2
    for ws in stages:
        m = a.reshape(-1, length)
        lo = m[:, : length // 2]
        hi = m[:, length // 2 :]
        t = hi * ws % q
        hi[...] = (lo - t) % q
        lo[...] = (lo + t) % q
        length *= 2
    if inverse:
        n_inv = pow(n, q - 2, q)
        a = a * n_inv % q
    return a


def _crt_combine(residues: list[np.ndarray], moduli: list[int]) -> list[int]:
    if len(moduli) == 1:
        return [int(x) for x in residues[0]]
    product = 1
    for q in moduli:
        product *= q
    # x = sum_i r_i * (P/q_i) * ((P/q_i)^-1 mod q_i)  (mod P)
    coeffs = []
    for q in moduli:
        partial = product // q
        coeffs.append(partial * pow(partial % q, q - 2, q))
    columns = [[int(x) for x in r] for r in residues]
    out = []
    for t in range(len(columns[0])):
        acc = 0
        for ci, col in zip(coeffs, columns):
            acc += ci * col[t]
        out.append(acc % product)
    return out
