"""Exact arithmetic in the integer Heisenberg group and its box subgroups.

An element is an integer triple (a, b, c) standing for the unipotent
matrix with rows (1, a, c), (0, 1, b), (0, 0, 1), so the group law is

    (a, b, c) * (a', b', c') = (a + a', b + b', c + c' + a*b').

A *box subgroup* Box(Ma, Mb, Mc) is the set {(a*Ma, b*Mb, c*Mc)}.  Such a
triple of moduli is closed under the law exactly when Mc divides Ma*Mb,
and every subgroup handled by this package is a box.  That shape is what
makes membership, indices, normal cores and relative cores available in
closed form; the closed forms are validated against dumb enumeration in
the oracle module before being trusted at large moduli.

Everything here is immutable and pure.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd, lcm

from .errors import ContractError

__all__ = [
    "HeisenbergElement",
    "BoxSubgroup",
    "IDENTITY",
    "GAMMA",
    "multiply",
    "inverse",
    "conjugate",
    "contains",
    "index_in",
    "core",
    "relative_core",
    "is_normal_in_gamma",
]


@dataclass(frozen=True, order=True)
class HeisenbergElement:
    """Integer triple (a, b, c); identity is (0, 0, 0)."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        for v in (self.a, self.b, self.c):
            if not isinstance(v, int):
                raise ContractError(f"coordinates must be integers, got {v!r}")

    def __mul__(self, other: "HeisenbergElement") -> "HeisenbergElement":
        return HeisenbergElement(
            self.a + other.a,
            self.b + other.b,
            self.c + other.c + self.a * other.b,
        )

    def inverse(self) -> "HeisenbergElement":
        # (a,b,c)^-1 = (-a, -b, -c + a*b); check: g * g^-1 = (0,0,0).
        return HeisenbergElement(-self.a, -self.b, -self.c + self.a * self.b)

    def conjugate_by(self, by: "HeisenbergElement") -> "HeisenbergElement":
        """Return by * self * by^-1.

        Conjugation only shears the central coordinate:
        (x,y,z)(a,b,c)(x,y,z)^-1 = (a, b, c + x*b - y*a).
        """
        return HeisenbergElement(
            self.a, self.b, self.c + by.a * self.b - by.b * self.a
        )

    def is_identity(self) -> bool:
        return self.a == 0 and self.b == 0 and self.c == 0

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"

    @classmethod
    def parse(cls, text: str) -> "HeisenbergElement":
        m = re.fullmatch(r"\(\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\)", text.strip())
        if m is None:
            raise ContractError(f"not an element literal: {text!r}")
        return cls(int(m.group(1)), int(m.group(2)), int(m.group(3)))


IDENTITY = HeisenbergElement(0, 0, 0)


@dataclass(frozen=True, order=True)
class BoxSubgroup:
    """The subgroup {(a*Ma, b*Mb, c*Mc)} of the Heisenberg group.

    Requires Mc | Ma*Mb: the product of two box elements adds a*Ma*b'*Mb
    to the central coordinate, so this is exactly closure under the law.
    """

    Ma: int
    Mb: int
    Mc: int

    def __post_init__(self):
        for v in (self.Ma, self.Mb, self.Mc):
            if not isinstance(v, int) or v <= 0:
                raise ContractError(f"box moduli must be positive integers, got {v!r}")
        if (self.Ma * self.Mb) % self.Mc != 0:
            raise ContractError(
                f"Box({self.Ma},{self.Mb},{self.Mc}) is not a subgroup: "
                f"{self.Mc} does not divide {self.Ma}*{self.Mb}"
            )

    # -- membership -----------------------------------------------------

    def contains(self, g: HeisenbergElement) -> bool:
        return g.a % self.Ma == 0 and g.b % self.Mb == 0 and g.c % self.Mc == 0

    def contains_box(self, inner: "BoxSubgroup") -> bool:
        """Componentwise divisibility; for boxes this is subgroup containment."""
        return (
            inner.Ma % self.Ma == 0
            and inner.Mb % self.Mb == 0
            and inner.Mc % self.Mc == 0
        )

    # -- closed forms ----------------------------------------------------

    def core(self) -> "BoxSubgroup":
        """Largest subgroup of this box normal in the full group.

        An element (A, B, C) of the box has all its conjugates
        (A, B, C + x*B - y*A) in the box for every integer x, y iff
        Mc | A and Mc | B, so the core is the box with moduli
        (lcm(Ma, Mc), lcm(Mb, Mc), Mc).
        """
        return BoxSubgroup(lcm(self.Ma, self.Mc), lcm(self.Mb, self.Mc), self.Mc)

    def is_normal_in_gamma(self) -> bool:
        return self.Ma % self.Mc == 0 and self.Mb % self.Mc == 0

    def index(self) -> int:
        """Index in the full group: the number of cosets Ma*Mb*Mc."""
        return self.Ma * self.Mb * self.Mc

    def generators(self) -> tuple[HeisenbergElement, HeisenbergElement, HeisenbergElement]:
        return (
            HeisenbergElement(self.Ma, 0, 0),
            HeisenbergElement(0, self.Mb, 0),
            HeisenbergElement(0, 0, self.Mc),
        )

    def __str__(self) -> str:
        return f"Box({self.Ma},{self.Mb},{self.Mc})"

    @classmethod
    def parse(cls, text: str) -> "BoxSubgroup":
        m = re.fullmatch(r"Box\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)", text.strip())
        if m is None:
            raise ContractError(f"not a box literal: {text!r}")
        return cls(int(m.group(1)), int(m.group(2)), int(m.group(3)))


GAMMA = BoxSubgroup(1, 1, 1)


# -- free-standing forms of the operations -------------------------------


def multiply(g: HeisenbergElement, h: HeisenbergElement) -> HeisenbergElement:
    return g * h


def inverse(g: HeisenbergElement) -> HeisenbergElement:
    return g.inverse()


def conjugate(g: HeisenbergElement, by: HeisenbergElement) -> HeisenbergElement:
    return g.conjugate_by(by)


def contains(box: BoxSubgroup, g: HeisenbergElement) -> bool:
    return box.contains(g)


def index_in(outer: BoxSubgroup, inner: BoxSubgroup) -> int:
    """Number of cosets of `inner` in `outer`; requires nesting."""
    if not outer.contains_box(inner):
        raise ContractError(f"{inner} is not contained in {outer}")
    return (inner.Ma // outer.Ma) * (inner.Mb // outer.Mb) * (inner.Mc // outer.Mc)


def core(box: BoxSubgroup) -> BoxSubgroup:
    return box.core()


def relative_core(outer: BoxSubgroup, inner: BoxSubgroup) -> BoxSubgroup:
    """Elements of `inner` whose every `outer`-conjugate stays in `inner`.

    Conjugating (A, B, C) by (x, y, z) with Ma|x, Mb|y shifts the central
    coordinate by x*B - y*A, so membership of all conjugates needs
    Mc' | Ma*B and Mc' | Mb*A on top of inner membership.  Writing primes
    for the inner moduli this gives the box

        ( lcm(Ma', Mc'/gcd(Mc', Mb)),  lcm(Mb', Mc'/gcd(Mc', Ma)),  Mc' ).

    With the full group as `outer` this is the normal core.
    """
    if not outer.contains_box(inner):
        raise ContractError(f"{inner} is not contained in {outer}")
    ra = lcm(inner.Ma, inner.Mc // gcd(inner.Mc, outer.Mb))
    rb = lcm(inner.Mb, inner.Mc // gcd(inner.Mc, outer.Ma))
    return BoxSubgroup(ra, rb, inner.Mc)


def is_normal_in_gamma(box: BoxSubgroup) -> bool:
    return box.is_normal_in_gamma()
