"""Rank-2 lattices over Z_p, the (p+1)-regular tree, and conductor counting.

A lattice commensurable with Z_p^2 of p-power index is stored as an integer
Hermite matrix [[a, b], [0, d]] (columns (a,0) and (b,d), a and d powers of p,
0 <= b < a) plus a homothety scale exponent; a tree vertex is the same thing
with the scale dropped and the matrix made primitive.  All arithmetic is
integer arithmetic.

Two counting functions live side by side and must not be confused:

* ``closed_form_N`` / ``brute_force_N`` count K^x-orbits of *pairs* of
  lattices with prescribed conductor exponents (n', n'') and distance delta.
  The count is symmetric in (n', n'').  Fixing a vertex of conductor
  max(n', n'') identifies these orbits with the vertices of conductor
  min(n', n'') on the sphere of radius delta around it, which is how the
  brute force works.

* ``closed_sphere_profile`` / ``sphere_profile`` count plain *vertices*: how
  many vertices of each conductor sit on the sphere of radius delta around a
  fixed vertex of conductor n'.  For n'' <= n' this agrees with the orbit
  count; for n'' > n' it is strictly larger (the stabilizer of the base
  vertex moves the sphere around), e.g. with q = 2 inert the root has three
  conductor-1 neighbours but there is a single orbit of such pairs.  The
  vertex counts are what partition the sphere: their sum over n'' is exactly
  (q+1) q^(delta-1).
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass

from .arith import is_prime, kronecker, valuation

DEFAULT_SPHERE_CAP = 10**7


class CapExceeded(RuntimeError):
    """An enumeration would exceed the configured resource cap."""


class Kind(enum.Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


def _companion(t: int, n: int) -> tuple[int, int, int, int]:
    # companion matrix of x^2 - t x + n, columns (0,1) and (-n, t)
    return (0, -n, 1, t)


def inert_constant(p: int) -> int:
    """Smallest c >= 1 for which 1 - 4c is a non-square in Q_p."""
    c = 1
    while kronecker(1 - 4 * c, p) != -1:
        c += 1
    return c


@dataclass(frozen=True)
class LocalQuadratic:
    """A quadratic algebra over Q_p with a generator of its maximal order.

    ``omega`` acts on the standard basis of Q_p^2 as the matrix
    ((w00, w01), (w10, w11)); Z_p[omega] is the maximal order.
    """

    p: int
    kind: Kind
    omega: tuple[int, int, int, int]


def make_local_quadratic(p: int, kind: Kind) -> LocalQuadratic:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    kind = Kind(kind)
    if kind is Kind.SPLIT:
        omega = _companion(1, 0)
    elif kind is Kind.INERT:
        omega = _companion(1, inert_constant(p))
    else:
        omega = _companion(0, -p)  # x^2 - p, Eisenstein
    return LocalQuadratic(p, kind, omega)


# ---------------------------------------------------------------------------
# lattices and vertices


def _canon_tuple(p: int, a: int, b: int, d: int) -> tuple[int, int, int, int]:
    """Reduce (a, b, d) to primitive Hermite form; returns (a, b, d, stripped)."""
    if a <= 0 or d <= 0:
        raise ValueError("diagonal entries must be positive")
    b %= a
    stripped = 0
    while a % p == 0 and b % p == 0 and d % p == 0:
        a //= p
        b //= p
        d //= p
        stripped += 1
    return a, b, d, stripped


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


@dataclass(frozen=True)
class Lattice2:
    """p^scale times the column span of [[a, b], [0, d]]."""

    p: int
    a: int
    b: int
    d: int
    scale: int = 0

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if not (_is_p_power(self.a, self.p) and _is_p_power(self.d, self.p)):
            raise ValueError("diagonal entries must be powers of p")
        if not 0 <= self.b < self.a:
            raise ValueError("b must satisfy 0 <= b < a")
        if self.a % self.p == 0 and self.b % self.p == 0 and self.d % self.p == 0:
            raise ValueError("matrix must be primitive; move content into scale")


@dataclass(frozen=True)
class TreeVertex:
    """Homothety class of a lattice: primitive Hermite matrix, no scale."""

    p: int
    a: int
    b: int
    d: int

    def __post_init__(self) -> None:
        Lattice2(self.p, self.a, self.b, self.d)

    def lattice(self) -> Lattice2:
        return Lattice2(self.p, self.a, self.b, self.d)


def standard_lattice(p: int) -> Lattice2:
    return Lattice2(p, 1, 0, 1)


def base_vertex(p: int, n: int) -> TreeVertex:
    """Canonical vertex of conductor n (for every kind): [[1, 0], [0, p^n]]."""
    return TreeVertex(p, 1, 0, p**n)


def _tuple_conductor(p, omega, a, b, d) -> int:
    w00, w01, w10, w11 = omega
    cols = ((w00 * a, w10 * a), (w00 * b + w01 * d, w10 * b + w11 * d))
    bound = valuation(a, p) + valuation(d, p)
    pk = 1
    for k in range(bound + 1):
        ok = True
        for x, y in cols:
            ys = pk * y
            if ys % d:
                ok = False
                break
            if (pk * x - (ys // d) * b) % a:
                ok = False
                break
        if ok:
            return k
        pk *= p
    raise AssertionError("conductor exceeded its index bound")


def conductor_exponent(lat: Lattice2 | TreeVertex, K: LocalQuadratic) -> int:
    """Smallest n >= 0 with p^n * omega * lat contained in lat (scale-free)."""
    if lat.p != K.p:
        raise ValueError("lattice and algebra live over different primes")
    return _tuple_conductor(K.p, K.omega, lat.a, lat.b, lat.d)


def relative_position(lat1: Lattice2, lat2: Lattice2) -> tuple[int, int]:
    """Invariant-factor pair (i1, i2), i1 <= i2, of lat2 relative to lat1."""
    if lat1.p != lat2.p:
        raise ValueError("lattices live over different primes")
    p = lat1.p
    # B = adj(M1) * M2, an integer matrix; M1^{-1} M2 = B / det(M1)
    a1, b1, d1 = lat1.a, lat1.b, lat1.d
    a2, b2, d2 = lat2.a, lat2.b, lat2.d
    B = (d1 * a2, d1 * b2 - b1 * d2, 0, a1 * d2)
    e = valuation(a1 * d1, p)
    vmin = min(valuation(x, p) for x in B if x != 0)
    vdet = valuation(a1 * d1, p) + valuation(a2 * d2, p)
    shift = (lat2.scale if isinstance(lat2, Lattice2) else 0) - (
        lat1.scale if isinstance(lat1, Lattice2) else 0
    )
    i1 = vmin - e + shift
    i2 = (vdet - vmin) - e + shift
    return (i1, i2) if i1 <= i2 else (i2, i1)


def vertex_distance(v1: TreeVertex, v2: TreeVertex) -> int:
    i1, i2 = relative_position(v1.lattice(), v2.lattice())
    return i2 - i1


def _neighbor_tuples(p, a, b, d):
    out = []
    for i in range(p):
        aa, bb, dd, _ = _canon_tuple(p, p * a, b + i * a, d)
        out.append((aa, bb, dd))
    aa, bb, dd, _ = _canon_tuple(p, a, p * b, p * d)
    out.append((aa, bb, dd))
    return out


def neighbors(v: TreeVertex, p: int | None = None) -> list[TreeVertex]:
    """The p + 1 vertices at distance 1 from v."""
    if p is not None and p != v.p:
        raise ValueError("inconsistent prime")
    p = v.p
    return [TreeVertex(p, a, b, d) for (a, b, d) in _neighbor_tuples(p, v.a, v.b, v.d)]


def sphere_size(p: int, delta: int) -> int:
    return 1 if delta == 0 else (p + 1) * p ** (delta - 1)


def _check_cap(p: int, delta: int, cap: int) -> None:
    if sphere_size(p, delta) > cap:
        raise CapExceeded(
            f"sphere of radius {delta} at p={p} has {sphere_size(p, delta)} "
            f"vertices, above the cap of {cap}"
        )


def _iter_sphere(p, base, delta):
    """Yield canonical (a, b, d) tuples at distance exactly delta from base.

    Depth-first with predecessor tracking; in a tree every non-backtracking
    walk ends at a distinct vertex, so no visited set is needed.
    """
    if delta == 0:
        yield base
        return
    stack = [(base, None, 0)]
    while stack:
        v, parent, depth = stack.pop()
        for w in _neighbor_tuples(p, *v):
            if w == parent:
                continue
            if depth + 1 == delta:
                yield w
            else:
                stack.append((w, v, depth + 1))


def enumerate_sphere(
    v: TreeVertex, delta: int, p: int | None = None, cap: int = DEFAULT_SPHERE_CAP
) -> list[TreeVertex]:
    """All vertices at distance exactly delta from v."""
    if p is not None and p != v.p:
        raise ValueError("inconsistent prime")
    p = v.p
    if delta < 0:
        raise ValueError("delta must be >= 0")
    _check_cap(p, delta, cap)
    return [TreeVertex(p, a, b, d) for (a, b, d) in _iter_sphere(p, (v.a, v.b, v.d), delta)]


def sphere_profile(
    K: LocalQuadratic, n_base: int, delta: int, cap: int = DEFAULT_SPHERE_CAP
) -> dict[int, int]:
    """Conductor histogram of the delta-sphere around a conductor-n_base vertex."""
    p = K.p
    _check_cap(p, delta, cap)
    base = (1, 0, p**n_base)
    prof: dict[int, int] = defaultdict(int)
    for a, b, d in _iter_sphere(p, base, delta):
        prof[_tuple_conductor(p, K.omega, a, b, d)] += 1
    return dict(prof)


def brute_force_N(
    K: LocalQuadratic,
    n_prime: int,
    n_double: int,
    delta: int,
    cap: int = DEFAULT_SPHERE_CAP,
) -> int:
    """Orbit count of lattice pairs by exhaustive tree enumeration.

    The base vertex is taken at conductor max(n_prime, n_double): orbits of
    pairs correspond to sphere vertices of the *smaller* conductor around a
    fixed vertex of the larger one.  The count is symmetric, the enumeration
    is not.
    """
    if min(n_prime, n_double, delta) < 0:
        raise ValueError("arguments must be >= 0")
    hi = max(n_prime, n_double)
    lo = min(n_prime, n_double)
    return sphere_profile(K, hi, delta, cap).get(lo, 0)


def closed_form_N(q: int, kind: Kind, n_prime: int, n_double: int, delta: int) -> int:
    """Number of K^x-orbits of lattice pairs with the given invariants.

    Case split: writing m = min(n', n''), a nonzero count requires either
    delta = |n' - n''| + 2r with 0 <= r < m, or delta = n' + n'' + s with
    s constrained by the kind (s = 0 inert, s in {0, 1} ramified, s >= 0
    split).  Valid for any residue size q >= 2, prime power or not.
    """
    if q < 2:
        raise ValueError("q must be at least 2")
    if min(n_prime, n_double, delta) < 0:
        raise ValueError("arguments must be >= 0")
    kind = Kind(kind)
    m = min(n_prime, n_double)
    if delta < n_prime + n_double:
        r2 = delta - abs(n_prime - n_double)
        if r2 < 0 or r2 % 2:
            return 0
        r = r2 // 2
        return 1 if r == 0 else (q - 1) * q ** (r - 1)
    s = delta - (n_prime + n_double)
    if kind is Kind.INERT:
        return q**m if s == 0 else 0
    if kind is Kind.RAMIFIED:
        if s > 1:
            return 0
        if s == 1 or m == 0:
            return q**m
        return (q - 1) * q ** (m - 1)
    # split
    if m == 0:
        return 1 if s == 0 else 2
    if s == 0:
        return (q - 2) * q ** (m - 1)
    return 2 * (q - 1) * q ** (m - 1)


def closed_sphere_profile(q: int, kind: Kind, n_base: int, delta: int) -> dict[int, int]:
    """Vertex counts by conductor on the delta-sphere around a conductor-n_base vertex.

    Closed form for the histogram computed by ``sphere_profile``; the values
    sum to (q+1) q^(delta-1) for delta >= 1.  Derivation: classify the
    geodesic from the base vertex by how far it climbs toward the minimal
    convex set (a point, an adjacent pair, or a line, by kind) before
    descending.
    """
    if q < 2:
        raise ValueError("q must be at least 2")
    if n_base < 0 or delta < 0:
        raise ValueError("arguments must be >= 0")
    kind = Kind(kind)
    if delta == 0:
        return {n_base: 1}
    prof: dict[int, int] = defaultdict(int)
    n1 = n_base
    if kind is Kind.INERT:
        if n1 == 0:
            prof[delta] += (q + 1) * q ** (delta - 1)
        else:
            for u in range(0, min(n1, delta) + 1):
                d = delta - u
                if d == 0:
                    prof[n1 - u] += 1
                elif u == 0:
                    prof[n1 + delta] += q**delta
                elif u == n1:
                    prof[d] += q**d  # descend from the single minimal vertex
                else:
                    prof[n1 + d - u] += (q - 1) * q ** (d - 1)
    elif kind is Kind.RAMIFIED:
        if n1 == 0:
            prof[delta] += q**delta
            if delta == 1:
                prof[0] += 1
            else:
                prof[delta - 1] += q ** (delta - 1)
        else:
            for u in range(0, min(n1 - 1, delta) + 1):
                d = delta - u
                if d == 0:
                    prof[n1 - u] += 1
                elif u == 0:
                    prof[n1 + delta] += q**delta
                else:
                    prof[n1 + d - u] += (q - 1) * q ** (d - 1)
            if delta >= n1:
                e = delta - n1
                if e == 0:
                    prof[0] += 1
                else:
                    prof[e] += (q - 1) * q ** (e - 1)
                    if e == 1:
                        prof[0] += 1
                    else:
                        prof[e - 1] += q ** (e - 1)
    else:  # split
        if n1 == 0:
            prof[0] += 2
            prof[delta] += (q - 1) * q ** (delta - 1)
            for d in range(1, delta):
                prof[d] += 2 * (q - 1) * q ** (d - 1)
        else:
            for u in range(0, min(n1 - 1, delta) + 1):
                d = delta - u
                if d == 0:
                    prof[n1 - u] += 1
                elif u == 0:
                    prof[n1 + delta] += q**delta
                else:
                    prof[n1 + d - u] += (q - 1) * q ** (d - 1)
            if delta >= n1:
                e = delta - n1
                if e == 0:
                    prof[0] += 1
                else:
                    if q > 2:
                        prof[e] += (q - 2) * q ** (e - 1)
                    prof[0] += 2
                    for d in range(1, e):
                        prof[d] += 2 * (q - 1) * q ** (d - 1)
    return {k: v for k, v in prof.items() if v}


def sphere_count(q: int, kind: Kind, n_base: int, n_target: int, delta: int) -> int:
    """Vertices of conductor n_target at distance delta from a conductor-n_base vertex."""
    return closed_sphere_profile(q, kind, n_base, delta).get(n_target, 0)
