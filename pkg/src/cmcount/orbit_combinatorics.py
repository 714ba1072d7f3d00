"""Global orbit bookkeeping: hypotheses, fine conductors, orbit counts, kappa.

The global data is a fundamental discriminant dK < 0, a set `ram` of primes
where the indefinite quaternion algebra ramifies, an Eichler level coprime to
`ram`, and a set S of auxiliary primes.  The required hypotheses over Q are

  H.1  ram and S are disjoint,
  H.2  |S| + |ram| + 1 is even,
  H.3  every p in S is inert or ramified in the quadratic field,

plus: every p in `ram` must be non-split (the field has to embed), and the
level must be coprime to `ram`.  All counts are assembled multiplicatively
from the local orbit counts of ``local_tree.closed_form_N``; ideals of Z are
positive integers throughout, and "prime-to-S part" divides out every p in S
to full multiplicity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .arith import factorize, is_prime, prime_to_part, valuation
from .local_tree import Kind, closed_form_N
from .quad_orders import QuadOrder, class_number, is_fundamental, ring_class_degree, splitting_kind


class HypothesisError(ValueError):
    """A global context fails one of its hypotheses."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = violations


@dataclass(frozen=True)
class GlobalContext:
    dk: int
    ram: frozenset[int]
    level: int
    s: frozenset[int]

    def __init__(self, dk, ram=(), level=1, s=()):
        object.__setattr__(self, "dk", dk)
        object.__setattr__(self, "ram", frozenset(ram))
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "s", frozenset(s))

    @property
    def s_inert(self) -> frozenset[int]:
        """The subset S' of S that is inert in the quadratic field."""
        return frozenset(
            p for p in self.s if splitting_kind(self.dk, p) is Kind.INERT
        )


@dataclass(frozen=True)
class FineConductor:
    c_prime: int
    c_double: int

    def __post_init__(self) -> None:
        if self.c_prime < 1 or self.c_double < 1:
            raise ValueError("conductors must be positive")

    @property
    def coarse(self) -> int:
        return math.lcm(self.c_prime, self.c_double)

    def prime_to(self, primes) -> "FineConductor":
        return FineConductor(
            prime_to_part(self.c_prime, primes), prime_to_part(self.c_double, primes)
        )


@dataclass(frozen=True)
class SignVector:
    bits: tuple[tuple[int, int], ...]  # (prime, bit) sorted by prime

    def as_dict(self) -> dict[int, int]:
        return dict(self.bits)


def validate_context(ctx: GlobalContext) -> list[str]:
    """Return the list of violated hypotheses (empty means the context is valid)."""
    out = []
    if not is_fundamental(ctx.dk):
        out.append(f"dK = {ctx.dk} is not a negative fundamental discriminant")
        return out
    bad = [p for p in sorted(ctx.ram | ctx.s) if not (isinstance(p, int) and is_prime(p))]
    if bad:
        return [f"{p} is not prime" for p in bad]
    if ctx.level < 1:
        out.append("level must be positive")
        return out
    if ctx.ram & ctx.s:
        out.append(f"H.1 violated: ram and S share {sorted(ctx.ram & ctx.s)}")
    if (len(ctx.s) + len(ctx.ram) + 1) % 2:
        out.append(
            f"H.2 violated: |S| + |ram| + 1 = {len(ctx.s) + len(ctx.ram) + 1} is odd"
        )
    for p in sorted(ctx.s):
        if splitting_kind(ctx.dk, p) is Kind.SPLIT:
            out.append(f"H.3 violated: {p} splits in the quadratic field")
    for p in sorted(ctx.ram):
        if splitting_kind(ctx.dk, p) is Kind.SPLIT:
            out.append(
                f"{p} is a ramified prime of the algebra but splits in the field"
            )
    for p in sorted(ctx.ram):
        if ctx.level % p == 0:
            out.append(f"level {ctx.level} is not coprime to ramified prime {p}")
    return out


def require_valid(ctx: GlobalContext) -> None:
    violations = validate_context(ctx)
    if violations:
        raise HypothesisError(violations)


def _vp(n: int, p: int) -> int:
    return valuation(n, p) if n % p == 0 else 0


def admissible(fc: FineConductor, ctx: GlobalContext) -> bool:
    """Parity condition at the inert primes of S."""
    require_valid(ctx)
    for p in ctx.s_inert:
        if (_vp(fc.c_prime, p) - _vp(fc.c_double, p) - _vp(ctx.level, p)) % 2:
            return False
    return True


def local_factor(ctx: GlobalContext, p: int, fc: FineConductor) -> int:
    """Local orbit count at p: N_p(v_p(c'), v_p(c''), v_p(level))."""
    if p in ctx.ram:
        raise ValueError(f"{p} ramifies in the algebra; fine conductors avoid it")
    kind = splitting_kind(ctx.dk, p)
    return closed_form_N(p, kind, _vp(fc.c_prime, p), _vp(fc.c_double, p), _vp(ctx.level, p))


@lru_cache(maxsize=None)
def _prime_tuple(n: int) -> tuple[int, ...]:
    return factorize(n).primes()


def _support(fc: FineConductor, level: int) -> list[int]:
    ps = set(_prime_tuple(fc.c_prime)) | set(_prime_tuple(fc.c_double))
    ps |= set(_prime_tuple(level))
    return sorted(ps)


def orbit_count_B(ctx: GlobalContext, fc: FineConductor) -> int:
    """Galois-orbit count with a prescribed fine conductor, indefinite side.

    2^(inert primes among ram) times the product of the local factors over
    all primes outside ram; all but finitely many factors are 1.
    """
    require_valid(ctx)
    for p in ctx.ram:
        if (fc.c_prime * fc.c_double) % p == 0:
            raise ValueError(f"fine conductor is not coprime to ramified prime {p}")
    count = 2 ** sum(
        1 for p in ctx.ram if splitting_kind(ctx.dk, p) is Kind.INERT
    )
    for p in _support(fc, ctx.level):
        count *= local_factor(ctx, p, fc)
    return count


def orbit_count_BS(ctx: GlobalContext, fc: FineConductor) -> int:
    """Same count on the definite side: ram is enlarged by S, the level and
    the fine conductor are replaced by their prime-to-S parts.

    The fine conductor must already be prime to S.
    """
    require_valid(ctx)
    for p in ctx.s:
        if (fc.c_prime * fc.c_double) % p == 0:
            raise ValueError(f"fine conductor is not prime to S (divisible by {p})")
    ram_s = ctx.ram | ctx.s
    for p in ctx.ram:
        if (fc.c_prime * fc.c_double) % p == 0:
            raise ValueError(f"fine conductor is not coprime to ramified prime {p}")
    level_s = prime_to_part(ctx.level, ctx.s)
    count = 2 ** sum(1 for p in ram_s if splitting_kind(ctx.dk, p) is Kind.INERT)
    for p in _support(fc, level_s):
        if p in ram_s:
            continue
        count *= closed_form_N(
            p,
            splitting_kind(ctx.dk, p),
            _vp(fc.c_prime, p),
            _vp(fc.c_double, p),
            _vp(level_s, p),
        )
    return count


@dataclass(frozen=True)
class KappaResult:
    value: int
    empty_fiber: bool
    degree: int
    local_factors: tuple[tuple[int, int], ...]


def kappa(ctx: GlobalContext, fc: FineConductor) -> KappaResult:
    """Fiber multiplicity: ring-class degree times the local counts over S.

    If some local factor over S vanishes the fiber is empty; the value is
    reported as 0 with the empty_fiber flag set instead of raising.
    """
    if not admissible(fc, ctx):
        raise ValueError("fine conductor is not admissible for this context")
    c = fc.coarse
    c_s = prime_to_part(c, ctx.s)
    degree = ring_class_degree(ctx.dk, c, c_s)
    locs = tuple((p, local_factor(ctx, p, fc)) for p in sorted(ctx.s))
    value = degree
    for _, n in locs:
        value *= n
    return KappaResult(value, value == 0, degree, locs)


def sign_vector(
    fc: FineConductor, ctx: GlobalContext, base_profile: dict[int, int] | None = None
) -> SignVector:
    """Z/2-vector at the inert primes of S: v_p(c') minus the base profile.

    The base profile is the conductor exponent of the reference lattice at
    each inert p (default 0, the standard lattice pair).  Computing from c''
    with the profile shifted by v_p(level) gives the same vector; that is the
    admissibility condition.
    """
    if not admissible(fc, ctx):
        raise ValueError("fine conductor is not admissible for this context")
    base = base_profile or {}
    bits = tuple(
        (p, (_vp(fc.c_prime, p) - base.get(p, 0)) % 2) for p in sorted(ctx.s_inert)
    )
    return SignVector(bits)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    expected: object
    actual: object


@dataclass(frozen=True)
class ConsistencyReport:
    ok: bool
    checks: tuple[Check, ...]
    values: tuple[tuple[str, object], ...]

    def value(self, key: str):
        return dict(self.values)[key]


def theorem_consistency(ctx: GlobalContext, fc: FineConductor) -> ConsistencyReport:
    """Exact integer identities tying the two orbit counts together.

    (a) the indefinite-side count factors as (definite count / 2^|S'|) times
        the local factors over S, with the division exact;
    (b) orbit count times class number matches kappa times the target size.
    Both identities are vacuous (0 = 0) on empty fibers and must be exact
    integer equalities otherwise.
    """
    if not admissible(fc, ctx):
        raise ValueError("fine conductor is not admissible for this context")
    fc_s = fc.prime_to(ctx.s)
    nb = orbit_count_B(ctx, fc)
    nbs = orbit_count_BS(ctx, fc_s)
    two = 2 ** len(ctx.s_inert)
    kap = kappa(ctx, fc)
    c = fc.coarse
    c_s = prime_to_part(c, ctx.s)
    h = class_number(QuadOrder(ctx.dk, c))
    h_s = class_number(QuadOrder(ctx.dk, c_s))
    loc_prod = 1
    for _, n in kap.local_factors:
        loc_prod *= n

    checks = []
    div_ok = nbs % two == 0
    checks.append(Check("sign-class-division-exact", div_ok, 0, nbs % two))
    target_orbits = nbs // two
    checks.append(
        Check(
            "local-global-factorization",
            nb == target_orbits * loc_prod,
            nb,
            target_orbits * loc_prod,
        )
    )
    source_size = nb * h
    target_size = target_orbits * h_s
    checks.append(
        Check(
            "fiber-size-identity",
            source_size == kap.value * target_size,
            source_size,
            kap.value * target_size,
        )
    )
    values = (
        ("orbit_count_B", nb),
        ("orbit_count_BS", nbs),
        ("kappa", kap.value),
        ("empty_fiber", kap.empty_fiber),
        ("h_coarse", h),
        ("h_coarse_prime_to_S", h_s),
        ("source_fiber_size", source_size),
        ("target_fiber_size", target_size),
    )
    return ConsistencyReport(all(c.passed for c in checks), tuple(checks), values)
