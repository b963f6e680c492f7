"""Symbolic descending chains of Heisenberg box subgroups and their towers.

A chain Gamma = Gamma_0 > Gamma_1 > ... of finite-index box subgroups is
described by per-prime, per-coordinate exponent schedules

    e_p(level) = 0 if level < start else base + slope*level,

optionally together with an *indexed family*: a prime enumeration q_1,
q_2, ... where q_i enters the chain at level i with constant exponents
(one per coordinate).  Every chain used by this package fits this class;
it is closed under the questions the dynamics module asks because every
derived quantity is eventually affine in the level.

From the chain the module builds, all in exact integer arithmetic:

  * box_at / core_at          -- Gamma_l and its normal core C_l,
  * quotient_at               -- the finite group Q_l = Gamma/C_l,
  * discriminant_level        -- the subgroup D_l = Gamma_l/C_l of Q_l,
  * connecting_map            -- Q_{l+1} -> Q_l, coordinatewise reduction,
  * stable_image              -- the image of D_depth inside D_level,
  * steinitz_order            -- lcm of the coset-space sizes #(Gamma/Gamma_l),
                                 with schedule-certified infinity promotion,
  * canonical coset arithmetic and the left action on Gamma/Gamma_l.

Exponent infinity is never extrapolated: a prime is promoted to the
infinite part of a Steinitz order only when its schedule provably grows
(slope > 0), and raw finite lcm values always carry the depth at which
they were computed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Iterator, Optional

from sympy import isprime

from .errors import ContractError, ResourceError
from .heisenberg import GAMMA, BoxSubgroup, HeisenbergElement, index_in
from .steinitz import (
    INF,
    PrimeEnumeration,
    Primes,
    SteinitzNumber,
    TailSchedule,
)

__all__ = [
    "Eventually",
    "CoordSchedule",
    "PrimeSchedule",
    "IndexedFamily",
    "ChainSpec",
    "FiniteQuotient",
    "ConnectingMap",
    "QuotientSubgroup",
    "CosetSpace",
    "ChainSteinitzOrder",
    "DEFAULT_CLOSURE_CAP",
    "ex41",
    "ex42",
    "stable_chain",
    "wild_chain",
    "builtin_chain",
    "parse_chain_config",
]

COORDS = ("a", "b", "c")
DEFAULT_CLOSURE_CAP = 10**6

# Levels up to which structural invariants are checked numerically before
# the symbolic (eventually-affine) argument takes over.
_VALIDATE_MARGIN = 2


# -- eventually affine integer functions ------------------------------------


@dataclass(frozen=True)
class Eventually:
    """An integer function of the level that equals base + slope*level for
    all levels >= threshold.  Only the eventual behaviour is represented;
    exact small-level values come from the schedules directly."""

    threshold: int
    base: int
    slope: int

    def value(self, level: int) -> int:
        if level < self.threshold:
            raise ContractError(f"level {level} below threshold {self.threshold}")
        return self.base + self.slope * level

    def is_constant(self) -> bool:
        return self.slope == 0

    @staticmethod
    def constant(k: int, threshold: int = 1) -> "Eventually":
        return Eventually(threshold, k, 0)

    def shift(self, k: int) -> "Eventually":
        return Eventually(self.threshold, self.base + k, self.slope)

    def sub(self, other: "Eventually") -> "Eventually":
        t = max(self.threshold, other.threshold)
        return Eventually(t, self.base - other.base, self.slope - other.slope)

    def max_with(self, other: "Eventually") -> "Eventually":
        """Pointwise max, valid beyond the last crossing of the two lines."""
        t = max(self.threshold, other.threshold)
        f, g = self, other
        if f.slope == g.slope:
            w = f if f.base >= g.base else g
            return Eventually(t, w.base, w.slope)
        lo, hi = (f, g) if f.slope < g.slope else (g, f)
        # hi wins once hi(x) >= lo(x): x >= (lo.base - hi.base)/(hi.slope - lo.slope)
        num, den = lo.base - hi.base, hi.slope - lo.slope
        cross = -(-num // den)  # ceiling
        t = max(t, cross)
        return Eventually(t, hi.base, hi.slope)

    def relu_minus(self, k: int) -> "Eventually":
        """Pointwise max(0, value - k)."""
        return self.shift(-k).max_with(Eventually.constant(0, self.threshold))

    def equals_eventually(self, other: "Eventually") -> bool:
        return self.base == other.base and self.slope == other.slope


# -- schedules ----------------------------------------------------------------


@dataclass(frozen=True)
class CoordSchedule:
    """One prime's exponent in one coordinate: 0 below `start`, then
    base + slope*level.  Monotone because slope >= 0."""

    start: int = 0
    base: int = 0
    slope: int = 0

    def __post_init__(self):
        if self.start < 0 or self.base < 0 or self.slope < 0:
            raise ContractError("schedule parameters must be non-negative")

    def exponent(self, level: int) -> int:
        if level < self.start:
            return 0
        return self.base + self.slope * level

    def eventual(self) -> Eventually:
        return Eventually(max(1, self.start), self.base, self.slope)

    def is_zero(self) -> bool:
        return self.base == 0 and self.slope == 0


ZERO_SCHEDULE = CoordSchedule()


@dataclass(frozen=True)
class PrimeSchedule:
    """The three coordinate schedules of one explicit prime."""

    prime: int
    a: CoordSchedule = ZERO_SCHEDULE
    b: CoordSchedule = ZERO_SCHEDULE
    c: CoordSchedule = ZERO_SCHEDULE

    def __post_init__(self):
        if not isprime(self.prime):
            raise ContractError(f"not a prime: {self.prime!r}")

    def coord(self, coord: str) -> CoordSchedule:
        return getattr(self, coord)


@dataclass(frozen=True)
class IndexedFamily:
    """One new prime per level: q_i = primes.prime(i-1) enters at level i
    with constant per-coordinate exponents (a_exp, b_exp, c_exp)."""

    primes: PrimeEnumeration
    a_exp: int
    b_exp: int
    c_exp: int

    def __post_init__(self):
        if min(self.a_exp, self.b_exp, self.c_exp) < 0:
            raise ContractError("family exponents must be non-negative")
        if self.c_exp > self.a_exp + self.b_exp:
            raise ContractError(
                "family violates the box condition: c exponent exceeds a+b"
            )
        if self.a_exp + self.b_exp + self.c_exp == 0:
            raise ContractError("family must contribute at least one coordinate")

    def exp(self, coord: str) -> int:
        return {"a": self.a_exp, "b": self.b_exp, "c": self.c_exp}[coord]

    def prime_at(self, i: int) -> int:
        """The prime activated at level i (1-indexed)."""
        return self.primes.prime(i - 1)

    def activation_of(self, p: int) -> Optional[int]:
        i = self.primes.index_of(p)
        return None if i is None else i + 1


# -- the chain ----------------------------------------------------------------


@dataclass(frozen=True)
class ChainSpec:
    """A properly descending chain of box subgroups, given symbolically.

    `trivial_intersection` declares that the boxes shrink to the identity
    (all three moduli grow without bound); it is checked against the
    schedules and may be disabled to model degenerate chains on purpose.
    """

    label: str
    explicit: tuple = ()  # PrimeSchedule entries, distinct primes
    family: Optional[IndexedFamily] = None
    trivial_intersection: bool = True

    def __post_init__(self):
        entries = tuple(sorted(self.explicit, key=lambda s: s.prime))
        object.__setattr__(self, "explicit", entries)
        seen = set()
        for s in entries:
            if s.prime in seen:
                raise ContractError(f"duplicate schedule for prime {s.prime}")
            seen.add(s.prime)
            if all(s.coord(x).is_zero() for x in COORDS):
                raise ContractError(f"prime {s.prime} has an all-zero schedule")
        if self.family is not None:
            for p in seen:
                if self.family.activation_of(p) is not None:
                    raise ContractError(
                        f"prime {p} is both explicit and in the indexed family"
                    )
        self._validate_box_condition()
        self._validate_proper_descent()
        if self.trivial_intersection:
            self._validate_trivial_intersection()

    # -- structural validation -------------------------------------------

    def _horizon(self) -> int:
        starts = [s.coord(x).start for s in self.explicit for x in COORDS]
        return max([1] + starts) + _VALIDATE_MARGIN

    def _validate_box_condition(self):
        # Per prime: e_c(l) <= e_a(l) + e_b(l), numerically on the prefix
        # and symbolically beyond it (all schedules affine there).
        for s in self.explicit:
            for level in range(1, self._horizon() + 1):
                ea, eb, ec = (s.coord(x).exponent(level) for x in COORDS)
                if ec > ea + eb:
                    raise ContractError(
                        f"prime {s.prime}: box condition fails at level {level} "
                        f"(c exponent {ec} > {ea}+{eb})"
                    )
            fa, fb, fc = (s.coord(x).eventual() for x in COORDS)
            t = self._horizon()
            if fc.slope > fa.slope + fb.slope or (
                fc.slope == fa.slope + fb.slope
                and fc.value(t) > fa.value(t) + fb.value(t)
            ):
                raise ContractError(
                    f"prime {s.prime}: box condition fails for all large levels"
                )
        # The family was checked in IndexedFamily.__post_init__.

    def _validate_proper_descent(self):
        if self.family is not None:
            return  # a new prime enters at every level
        for level in range(1, self._horizon() + 1):
            if self.box_at(level + 1) == self.box_at(level):
                raise ContractError(
                    f"chain is not properly descending at level {level} -> "
                    f"{level + 1}; it is eventually constant"
                )
        if not any(
            s.coord(x).slope > 0 for s in self.explicit for x in COORDS
        ):
            raise ContractError(
                "chain is eventually constant: no growing schedule and no family"
            )

    def _validate_trivial_intersection(self):
        for coord in COORDS:
            grows = any(s.coord(coord).slope > 0 for s in self.explicit)
            if self.family is not None and self.family.exp(coord) > 0:
                grows = True
            if not grows:
                raise ContractError(
                    f"trivial intersection declared but the {coord}-modulus "
                    "is bounded; declare trivial_intersection=False "
                    "for degenerate chains"
                )

    # -- evaluation ---------------------------------------------------------

    def explicit_primes(self) -> tuple[int, ...]:
        return tuple(s.prime for s in self.explicit)

    def family_primes(self, level: int) -> tuple[int, ...]:
        if self.family is None:
            return ()
        return tuple(self.family.prime_at(i) for i in range(1, level + 1))

    def relevant_primes(self, level: int) -> tuple[int, ...]:
        """Primes with any support in boxes up to `level`."""
        return tuple(sorted(set(self.explicit_primes()) | set(self.family_primes(level))))

    def coord_exponent(self, p: int, coord: str, level: int) -> int:
        for s in self.explicit:
            if s.prime == p:
                return s.coord(coord).exponent(level)
        if self.family is not None:
            i = self.family.activation_of(p)
            if i is not None:
                return self.family.exp(coord) if level >= i else 0
        return 0

    def coord_eventual(self, p: int, coord: str) -> Eventually:
        """The eventual affine form of e_p^coord; family primes are constant
        from their activation level on."""
        for s in self.explicit:
            if s.prime == p:
                return s.coord(coord).eventual()
        if self.family is not None:
            i = self.family.activation_of(p)
            if i is not None:
                return Eventually(i, self.family.exp(coord), 0)
        return Eventually.constant(0)

    def box_at(self, level: int) -> BoxSubgroup:
        if level < 1:
            raise ContractError("level must be >= 1")
        ma = mb = mc = 1
        for p in self.relevant_primes(level):
            ma *= p ** self.coord_exponent(p, "a", level)
            mb *= p ** self.coord_exponent(p, "b", level)
            mc *= p ** self.coord_exponent(p, "c", level)
        return BoxSubgroup(ma, mb, mc)

    def core_at(self, level: int) -> BoxSubgroup:
        return self.box_at(level).core()

    def quotient_at(self, level: int) -> "FiniteQuotient":
        c = self.core_at(level)
        return FiniteQuotient(c.Ma, c.Mb, c.Mc)

    def discriminant_level(self, level: int, cap: int = DEFAULT_CLOSURE_CAP) -> "QuotientSubgroup":
        """D_level: the image of Gamma_level inside Q_level."""
        return self.stable_image(level, level, cap=cap)

    def connecting_map(self, level: int) -> "ConnectingMap":
        return ConnectingMap(self.quotient_at(level + 1), self.quotient_at(level))

    def stable_image(
        self, level: int, depth: int, cap: int = DEFAULT_CLOSURE_CAP
    ) -> "QuotientSubgroup":
        """Image of D_depth in D_level under the composed connecting maps.

        The image of a box under coordinatewise reduction is the product
        of the reduced coordinate lattices, so it has a closed form; the
        generator closure is kept as the independently checkable route.
        """
        if depth < level:
            raise ContractError("depth must be >= level")
        box = self.box_at(depth)
        amb = self.quotient_at(level)
        gens = tuple(amb.reduce(g) for g in box.generators())
        lattice = (gcd(box.Ma, amb.A), gcd(box.Mb, amb.B), gcd(box.Mc, amb.C))
        return QuotientSubgroup(amb, gens, lattice=lattice, cap=cap)

    def steinitz_order(self, depth: int) -> "ChainSteinitzOrder":
        """lcm of the coset-space sizes #(Gamma/Gamma_l), l <= depth.

        The raw value is the exact finite lcm at this depth.  The limit
        additionally promotes a prime to exponent oo exactly when its
        schedule grows without bound (slope > 0 in some coordinate), and
        carries the indexed family as a lazy tail.  Both statements are
        read off the schedules, never extrapolated from the raw numbers.
        """
        if depth < 1:
            raise ContractError("depth must be >= 1")
        raw_fp: dict[int, int] = {}
        # Schedules are monotone, so the lcm exponent is the depth value.
        for p in self.relevant_primes(depth):
            e = sum(self.coord_exponent(p, x, depth) for x in COORDS)
            if e:
                raw_fp[p] = e
        raw = SteinitzNumber(tuple(sorted(raw_fp.items())))

        promoted, limit_fp = [], {}
        for s in self.explicit:
            total = sum(s.coord(x).slope for x in COORDS)
            if total > 0:
                promoted.append(s.prime)
            else:
                at = max(1, max(s.coord(x).start for x in COORDS))
                e = sum(s.coord(x).exponent(at) for x in COORDS)
                if e:
                    limit_fp[s.prime] = e
        tail = None
        if self.family is not None:
            e = self.family.a_exp + self.family.b_exp + self.family.c_exp
            tail = TailSchedule(self.family.primes, e, start=0)
        limit = SteinitzNumber(
            tuple(sorted(limit_fp.items())), tuple(sorted(promoted)), tail
        )
        return ChainSteinitzOrder(raw=raw, limit=limit, depth=depth,
                                  promoted=tuple(sorted(promoted)))


@dataclass(frozen=True)
class ChainSteinitzOrder:
    """Steinitz order of a chain: the raw finite lcm at the computed depth
    and the schedule-certified limit (infinity promotions and lazy tail)."""

    raw: SteinitzNumber
    limit: SteinitzNumber
    depth: int
    promoted: tuple  # primes certified to have unbounded exponent

    def __str__(self) -> str:
        return f"{self.limit} (raw at depth {self.depth}: {self.raw})"


# -- finite quotients ---------------------------------------------------------


@dataclass(frozen=True)
class FiniteQuotient:
    """The group of triples (a mod A, b mod B, c mod C) under the twisted
    law (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a*b').

    Well-defined on residues exactly when C | A and C | B (changing a
    representative by A or B moves the central coordinate by a multiple
    of C); these are the moduli of a normal box, so quotients by cores
    always qualify.
    """

    A: int
    B: int
    C: int

    def __post_init__(self):
        if min(self.A, self.B, self.C) < 1:
            raise ContractError("quotient moduli must be positive")
        if self.A % self.C or self.B % self.C:
            raise ContractError(
                f"twisted product not well defined: {self.C} must divide "
                f"both {self.A} and {self.B}"
            )

    @property
    def order(self) -> int:
        return self.A * self.B * self.C

    @property
    def identity(self) -> tuple[int, int, int]:
        return (0, 0, 0)

    def reduce(self, g) -> tuple[int, int, int]:
        if isinstance(g, HeisenbergElement):
            g = (g.a, g.b, g.c)
        return (g[0] % self.A, g[1] % self.B, g[2] % self.C)

    def mul(self, x, y) -> tuple[int, int, int]:
        return (
            (x[0] + y[0]) % self.A,
            (x[1] + y[1]) % self.B,
            (x[2] + y[2] + x[0] * y[1]) % self.C,
        )

    def inv(self, x) -> tuple[int, int, int]:
        return ((-x[0]) % self.A, (-x[1]) % self.B, (-x[2] + x[0] * x[1]) % self.C)

    def elements(self, cap: int = DEFAULT_CLOSURE_CAP) -> Iterator[tuple[int, int, int]]:
        if self.order > cap:
            raise ResourceError(
                f"quotient of order {self.order} exceeds the cap {cap}"
            )
        for a in range(self.A):
            for b in range(self.B):
                for c in range(self.C):
                    yield (a, b, c)

    def random_element(self, rng) -> tuple[int, int, int]:
        return (rng.randrange(self.A), rng.randrange(self.B), rng.randrange(self.C))


@dataclass(frozen=True)
class ConnectingMap:
    """Coordinatewise residue reduction Q_{level+1} -> Q_level; a
    surjective homomorphism because the cores are nested."""

    source: FiniteQuotient
    target: FiniteQuotient

    def __post_init__(self):
        if (
            self.source.A % self.target.A
            or self.source.B % self.target.B
            or self.source.C % self.target.C
        ):
            raise ContractError("target moduli must divide source moduli")

    def __call__(self, x) -> tuple[int, int, int]:
        return self.target.reduce(x)


@dataclass(frozen=True)
class QuotientSubgroup:
    """A subgroup of a finite quotient, given by generators.

    Subgroups arising as images of boxes are product sets of coordinate
    lattices (La*Z/A) x (Lb*Z/B) x (Lc*Z/C); when known, that lattice is
    the fast path for orders and membership, and the breadth-first closure
    of the generators stays available as the independent route (capped).
    """

    ambient: FiniteQuotient
    generators: tuple
    lattice: Optional[tuple[int, int, int]] = None
    cap: int = DEFAULT_CLOSURE_CAP

    def __post_init__(self):
        gens = tuple(self.ambient.reduce(g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        if self.lattice is not None:
            la, lb, lc = self.lattice
            amb = self.ambient
            if amb.A % la or amb.B % lb or amb.C % lc:
                raise ContractError("lattice parameters must divide the moduli")
            if (la * lb) % gcd(lc, amb.C):
                raise ContractError("lattice is not closed under the product")

    @property
    def order(self) -> int:
        if self.lattice is not None:
            la, lb, lc = self.lattice
            return (self.ambient.A // la) * (self.ambient.B // lb) * (self.ambient.C // lc)
        return len(self.closure())

    def contains(self, x) -> bool:
        x = self.ambient.reduce(x)
        if self.lattice is not None:
            la, lb, lc = self.lattice
            return x[0] % la == 0 and x[1] % lb == 0 and x[2] % lc == 0
        return x in self.closure()

    @cached_property
    def _closure(self) -> frozenset:
        amb = self.ambient
        seed = set(self.generators) | {amb.identity}
        seed |= {amb.inv(g) for g in self.generators}
        frontier = list(seed)
        seen = set(seed)
        gens = list(seed)
        while frontier:
            nxt = []
            for g in gens:
                for h in frontier:
                    x = amb.mul(g, h)
                    if x not in seen:
                        seen.add(x)
                        nxt.append(x)
                        if len(seen) > self.cap:
                            raise ResourceError(
                                f"subgroup closure exceeded cap {self.cap}; "
                                "raise the cap or use the lattice fast path"
                            )
            frontier = nxt
        return frozenset(seen)

    def closure(self) -> frozenset:
        return self._closure

    def same_subgroup(self, other: "QuotientSubgroup") -> bool:
        if self.ambient != other.ambient:
            return False
        if self.lattice is not None and other.lattice is not None:
            return self.lattice == other.lattice
        return self.closure() == other.closure()


# -- coset spaces -------------------------------------------------------------


@dataclass(frozen=True)
class CosetSpace:
    """The finite space Gamma/B for a box B, with canonical representatives
    (a mod Ma, b mod Mb, reduced c).  The chain's level-l space is
    CosetSpace(box_at(l)), and the identity-coset cylinder corresponds to
    the representative (0, 0, 0)."""

    box: BoxSubgroup

    @property
    def size(self) -> int:
        return self.box.index()

    @property
    def basepoint(self) -> tuple[int, int, int]:
        return (0, 0, 0)

    def canonical(self, g: HeisenbergElement) -> tuple[int, int, int]:
        """Representative of the left coset g*B.

        Multiplying g on the right by box elements can shift c by any
        multiple of Mc and by a*(multiples of Mb); reducing a and b first
        and then c - abar*(b - bbar) mod Mc picks the same triple for the
        whole coset (Mc | Ma*Mb makes the choice independent of the lift).
        """
        ma, mb, mc = self.box.Ma, self.box.Mb, self.box.Mc
        abar = g.a % ma
        bbar = g.b % mb
        cbar = (g.c - abar * (g.b - bbar)) % mc
        return (abar, bbar, cbar)

    def is_canonical(self, x) -> bool:
        return (
            0 <= x[0] < self.box.Ma
            and 0 <= x[1] < self.box.Mb
            and 0 <= x[2] < self.box.Mc
        )

    def lift(self, x) -> HeisenbergElement:
        return HeisenbergElement(x[0], x[1], x[2])

    def act(self, g: HeisenbergElement, x) -> tuple[int, int, int]:
        if not self.is_canonical(x):
            raise ContractError(f"{x} is not a canonical representative")
        return self.canonical(g * self.lift(x))

    def orbit(self, generators, start=None, cap: int = DEFAULT_CLOSURE_CAP) -> frozenset:
        start = self.basepoint if start is None else start
        seen = {start}
        frontier = [start]
        gens = list(generators) + [g.inverse() for g in generators]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.act(g, x)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
                        if len(seen) > cap:
                            raise ResourceError(f"orbit exceeded cap {cap}")
            frontier = nxt
        return frozenset(seen)


# -- built-in chains ----------------------------------------------------------


def ex41(p: int) -> ChainSpec:
    """Self-similar one-prime chain: Gamma_l = {(p^l a, p^l b, p^{2l} c)}."""
    if not isprime(p):
        raise ContractError(f"p must be prime, got {p!r}")
    return ChainSpec(
        label=f"ex41(p={p})",
        explicit=(
            PrimeSchedule(
                p,
                a=CoordSchedule(1, 0, 1),
                b=CoordSchedule(1, 0, 1),
                c=CoordSchedule(1, 0, 2),
            ),
        ),
    )


def ex42(p: int, q: int) -> ChainSpec:
    """Two-prime chain: Gamma_l = {(p^l a, q^l b, (pq)^l c)}."""
    if not (isprime(p) and isprime(q)) or p == q:
        raise ContractError("p and q must be distinct primes")
    return ChainSpec(
        label=f"ex42(p={p},q={q})",
        explicit=(
            PrimeSchedule(p, a=CoordSchedule(1, 0, 1), c=CoordSchedule(1, 0, 1)),
            PrimeSchedule(q, b=CoordSchedule(1, 0, 1), c=CoordSchedule(1, 0, 1)),
        ),
    )


def stable_chain(pi_f, r, n, pi_inf) -> ChainSpec:
    """Finite family q_i^(r_i | n_i | n_i) plus growing primes p_j^level
    (p_j entering at level j): Gamma_l = {(a*M_l, b*N_l, c*N_l)} with
    M_l = prod q_i^r_i * prod_{j<=l} p_j^l and N_l the same with n_i."""
    pi_f, pi_inf = tuple(pi_f), tuple(pi_inf)
    r, n = tuple(r), tuple(n)
    if len(pi_f) != len(r) or len(pi_f) != len(n):
        raise ContractError("pi_f, r, n must have equal lengths")
    if set(pi_f) & set(pi_inf):
        raise ContractError("pi_f and pi_inf must be disjoint")
    for ri, ni in zip(r, n):
        if not 1 <= ri <= ni:
            raise ContractError(f"need 1 <= r <= n, got r={ri}, n={ni}")
    entries = [
        PrimeSchedule(
            q,
            a=CoordSchedule(1, ri, 0),
            b=CoordSchedule(1, ni, 0),
            c=CoordSchedule(1, ni, 0),
        )
        for q, ri, ni in zip(pi_f, r, n)
    ]
    entries += [
        PrimeSchedule(
            p,
            a=CoordSchedule(j, 0, 1),
            b=CoordSchedule(j, 0, 1),
            c=CoordSchedule(j, 0, 1),
        )
        for j, p in enumerate(sorted(pi_inf), start=1)
    ]
    label = "stable(pi_f=%s;r=%s;n=%s;pi_inf=%s)" % (
        ",".join(map(str, pi_f)),
        ",".join(map(str, r)),
        ",".join(map(str, n)),
        ",".join(map(str, sorted(pi_inf))),
    )
    return ChainSpec(label=label, explicit=tuple(entries))


def wild_chain(n: int, r: int, pi_inf=(), enumeration: PrimeEnumeration | None = None) -> ChainSpec:
    """Indexed family with one new prime per level, q_i^(r | n | n), plus
    optional growing primes as in the finite-family construction.  Needs
    1 <= r < n so each activation leaves a genuine kernel gap."""
    if not 1 <= r < n:
        raise ContractError(f"need 1 <= r < n, got r={r}, n={n}")
    pi_inf = tuple(sorted(pi_inf))
    if enumeration is None:
        enumeration = Primes(exclude=pi_inf)
    else:
        for p in pi_inf:
            if enumeration.index_of(p) is not None:
                raise ContractError(f"family enumeration must exclude {p}")
    entries = tuple(
        PrimeSchedule(
            p,
            a=CoordSchedule(j, 0, 1),
            b=CoordSchedule(j, 0, 1),
            c=CoordSchedule(j, 0, 1),
        )
        for j, p in enumerate(pi_inf, start=1)
    )
    label = "wild(n=%d;r=%d;pi_inf=%s;q=%s)" % (
        n,
        r,
        ",".join(map(str, pi_inf)),
        enumeration.key(),
    )
    return ChainSpec(
        label=label,
        explicit=entries,
        family=IndexedFamily(enumeration, a_exp=r, b_exp=n, c_exp=n),
    )


def builtin_chain(name: str, **params) -> ChainSpec:
    if name == "ex41":
        return ex41(params["p"])
    if name == "ex42":
        return ex42(params["p"], params["q"])
    if name == "stable":
        return stable_chain(params["pi_f"], params["r"], params["n"], params["pi_inf"])
    if name == "wild":
        return wild_chain(
            params["n"],
            params["r"],
            params.get("pi_inf", ()),
            params.get("enumeration"),
        )
    raise ContractError(f"unknown built-in chain {name!r}")


# -- declarative chain config -------------------------------------------------

_CONFIG_GRAMMAR = """\
one schedule per line:
    prime=2 coord=a start=1 base=0 slope=1
    family qi coord=a start=i base=1 slope=0
directives:
    label=<text>
    family exclude=5,7
    trivial_intersection=false
"""


def parse_chain_config(text: str) -> ChainSpec:
    """Parse the declarative chain format (see _CONFIG_GRAMMAR)."""
    explicit: dict[int, dict[str, CoordSchedule]] = {}
    family_coords: dict[str, int] = {}
    family_exclude: tuple = ()
    label = "config"
    trivial = True
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.split("#", 1)[0].strip()
        if not line:
            continue

        def fail(msg):
            raise ContractError(f"line {lineno}, column 1: {msg}: {rawline!r}")

        if line.startswith("label="):
            label = line.split("=", 1)[1].strip()
            continue
        if line.startswith("trivial_intersection="):
            value = line.split("=", 1)[1].strip().lower()
            if value not in ("true", "false"):
                fail("expected true or false")
            trivial = value == "true"
            continue
        tokens = line.split()
        if tokens[0] == "family":
            fields = dict(
                tok.split("=", 1) for tok in tokens[1:] if "=" in tok
            )
            if "exclude" in fields:
                family_exclude = tuple(int(x) for x in fields["exclude"].split(","))
                continue
            if tokens[1:2] != ["qi"]:
                fail("family lines read: family qi coord=<a|b|c> start=i base=<int> slope=0")
            if fields.get("start", "i") != "i" or fields.get("slope", "0") != "0":
                fail("family schedules have start=i and slope=0")
            coord = fields.get("coord")
            if coord not in COORDS:
                fail("coord must be a, b or c")
            family_coords[coord] = int(fields["base"])
            continue
        fields = dict(tok.split("=", 1) for tok in tokens if "=" in tok)
        if len(fields) != len(tokens):
            fail("expected key=value tokens")
        try:
            p = int(fields["prime"])
            coord = fields["coord"]
            sched = CoordSchedule(
                start=int(fields.get("start", 0)),
                base=int(fields.get("base", 0)),
                slope=int(fields.get("slope", 0)),
            )
        except (KeyError, ValueError) as exc:
            fail(f"bad schedule line ({exc})")
        if coord not in COORDS:
            fail("coord must be a, b or c")
        explicit.setdefault(p, {})[coord] = sched

    entries = tuple(
        PrimeSchedule(
            p,
            a=coords.get("a", ZERO_SCHEDULE),
            b=coords.get("b", ZERO_SCHEDULE),
            c=coords.get("c", ZERO_SCHEDULE),
        )
        for p, coords in sorted(explicit.items())
    )
    family = None
    if family_coords:
        family = IndexedFamily(
            Primes(exclude=family_exclude),
            a_exp=family_coords.get("a", 0),
            b_exp=family_coords.get("b", 0),
            c_exp=family_coords.get("c", 0),
        )
    return ChainSpec(
        label=label, explicit=entries, family=family, trivial_intersection=trivial
    )
