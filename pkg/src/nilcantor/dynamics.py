"""Stability, wildness and freeness analysis for box-subgroup chains.

The central object is the *trivial-action kernel*: the set of elements of
Gamma_l that fix every depth-d coset inside the level-l cylinder of the
odometer.  For g in Gamma_l this says h^-1 g h in Gamma_d for every
h in Gamma_l, i.e. the kernel is the relative core of Gamma_d over
Gamma_l, available in closed form and cross-checked by enumeration.

Comparing kernels for two cylinder levels l < l' at the same depth
measures how much more can act trivially on the smaller cylinder.  A
nontrivial gap at finite depth is only *evidence*: the completion's
action has a genuine violation iff the gap survives the inverse limit of
the quotient groups.  Because every exponent schedule here is eventually
affine in the depth, that survival question is decidable:

  * a kernel-lattice exponent with positive slope outgrows every fixed
    quotient, so its component dies in the limit (the connecting maps
    eventually annihilate it);
  * a constant exponent survives verbatim.

Certificates therefore carry two grades of statement: exact finite-depth
numbers, and schedule-certified facts about the limit.  A chain is
stable (locally quasi-analytic completion) as soon as *some* cylinder
level has no surviving gaps below it, so transient gaps at small levels
are consistent with a stable verdict; wildness needs surviving gaps
inside every cylinder, which only the indexed family's endless
activations can certify.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Optional

from .errors import ContractError
from .heisenberg import BoxSubgroup, HeisenbergElement, index_in, relative_core
from .towers import COORDS, ChainSpec, Eventually

__all__ = [
    "trivial_action_kernel",
    "KernelReport",
    "Certificate",
    "DiscriminantReport",
    "lqa_witness",
    "wildness_certificate",
    "freeness_certificate",
    "discriminant_limit_report",
]


def trivial_action_kernel(chain: ChainSpec, cylinder: int, depth: int) -> BoxSubgroup:
    """Elements acting trivially on every depth-`depth` coset inside the
    level-`cylinder` cylinder; `cylinder`=0 means the whole space, whose
    pointwise stabilizer is the normal core."""
    if cylinder < 0 or depth < max(cylinder, 1):
        raise ContractError("need depth >= cylinder >= 0 and depth >= 1")
    if cylinder == 0:
        return chain.core_at(depth)
    return relative_core(chain.box_at(cylinder), chain.box_at(depth))


# -- symbolic kernel analysis -------------------------------------------------


def _kernel_eventual(chain: ChainSpec, cylinder: int, p: int, coord: str) -> Eventually:
    """Eventual affine form (in the depth) of the kernel's lattice exponent
    at prime p in the given coordinate, for a fixed cylinder level.

    From the relative-core closed form:
        a: max(e_a(d), e_c(d) - min(e_c(d), e_b(cylinder)))
        b: max(e_b(d), e_c(d) - min(e_c(d), e_a(cylinder)))
        c: e_c(d)
    """
    ec = chain.coord_eventual(p, "c")
    if coord == "c":
        return ec
    other = {"a": "b", "b": "a"}[coord]
    own = chain.coord_eventual(p, coord)
    k = chain.coord_exponent(p, other, cylinder) if cylinder >= 1 else 0
    return own.max_with(ec.relu_minus(k))


@dataclass(frozen=True)
class _PairAnalysis:
    """Schedule-level comparison of the kernels at cylinders l < l'."""

    ratio: Optional[int]  # kernel-order ratio when d-independent, else None
    limit_gap: int  # order of the gap that survives the inverse limit
    sound: bool  # structural assertions held
    notes: tuple = ()


def _analyze_pair(chain: ChainSpec, l1: int, l2: int) -> _PairAnalysis:
    assert 1 <= l1 < l2
    relevant = set(chain.explicit_primes()) | set(chain.family_primes(l2))
    ratio, limit_gap, sound, notes = 1, 1, True, []
    for p in sorted(relevant):
        for coord in ("a", "b"):
            f1 = _kernel_eventual(chain, l1, p, coord)
            f2 = _kernel_eventual(chain, l2, p, coord)
            if f1.slope != f2.slope:
                # Cannot happen for schedules in this class (the cylinder
                # level only shifts the subtracted constant); treat any
                # occurrence as a failed analysis, never as evidence.
                sound = False
                ratio = None
                notes.append(f"kernel slopes disagree at {p}/{coord}")
                continue
            gap = f1.base - f2.base
            if gap < 0:
                sound = False
                notes.append(f"kernel antitonicity violated at {p}/{coord}")
                continue
            if ratio is not None:
                ratio *= p**gap
            if f1.slope == 0:
                # Constant lattice exponents survive to the limit.
                limit_gap *= p**gap
            # else: both exponents grow without bound, so both components
            # are eventually annihilated by the connecting maps: no gap.
    return _PairAnalysis(ratio, limit_gap, sound, tuple(notes))


def _kernel_tower_surjective(chain: ChainSpec, cylinder: int, depth: int) -> bool:
    """Whether the connecting map carries the depth+1 kernel *onto* the
    depth-`depth` kernel inside Q_depth (it always maps into it)."""
    core = chain.core_at(depth)
    k0 = trivial_action_kernel(chain, cylinder, depth)
    k1 = trivial_action_kernel(chain, cylinder, depth + 1)
    img0 = (gcd(k0.Ma, core.Ma), gcd(k0.Mb, core.Mb), gcd(k0.Mc, core.Mc))
    img1 = (gcd(k1.Ma, core.Ma), gcd(k1.Mb, core.Mb), gcd(k1.Mc, core.Mc))
    return img0 == img1


def _family_activation_gap(chain: ChainSpec) -> int:
    """Order contributed to the kernel gap by each newly activated family
    prime q (as q^exponent); 1 when there is no family or no gap."""
    fam = chain.family
    if fam is None:
        return 0
    before_a = max(fam.a_exp, fam.c_exp)
    after_a = max(fam.a_exp, max(0, fam.c_exp - fam.b_exp))
    before_b = max(fam.b_exp, fam.c_exp)
    after_b = max(fam.b_exp, max(0, fam.c_exp - fam.a_exp))
    return (before_a - after_a) + (before_b - after_b)


def _stable_level(chain: ChainSpec) -> int:
    """Smallest cylinder level L such that no kernel gap survives the limit
    between any L <= l < l'.

    Only primes whose a- and c-schedules (resp. b- and c-) are eventually
    constant can leave a surviving gap, and by the box condition their
    kernel exponent is pinned to the a-base once the level passes both
    starts; below that the exact values decide.
    """
    level = 1
    for p in chain.explicit_primes():
        ec = chain.coord_eventual(p, "c")
        if ec.slope > 0:
            continue
        for coord in ("a", "b"):
            own = chain.coord_eventual(p, coord)
            if own.slope > 0:
                continue
            other = {"a": "b", "b": "a"}[coord]
            horizon = max(own.threshold, ec.threshold)

            def value(l):
                k = chain.coord_exponent(p, other, l)
                return max(own.base, max(0, ec.base - min(ec.base, k)))

            floor = value(horizon)
            first = horizon
            while first > 1 and value(first - 1) == floor:
                first -= 1
            level = max(level, first)
    return level


# -- reports and certificates --------------------------------------------------


@dataclass(frozen=True)
class KernelReport:
    """Finite-depth comparison of the trivial-action kernels at two
    cylinder levels; `persistent` means the schedule-level stabilization
    checks passed, i.e. the same gap survives the inverse limit."""

    cylinder: int  # l
    refined: int  # l' > l
    depth: int  # d
    kernel_box: BoxSubgroup  # kernel at the smaller cylinder (l')
    comparison_box: BoxSubgroup  # kernel at the larger cylinder (l)
    kernel_order: int
    witness: Optional[HeisenbergElement]
    persistent: bool = False

    def __post_init__(self):
        assert self.kernel_order >= 1
        assert (self.witness is not None) == (self.kernel_order > 1)
        if self.witness is not None:
            assert self.kernel_box.contains(self.witness)
            assert not self.comparison_box.contains(self.witness)


def _pick_witness(kernel: BoxSubgroup, comparison: BoxSubgroup):
    ratios = (
        comparison.Ma // kernel.Ma,
        comparison.Mb // kernel.Mb,
        comparison.Mc // kernel.Mc,
    )
    if max(ratios) == 1:
        return None
    coord = ratios.index(max(ratios))  # ties break a, then b, then c
    gens = (
        HeisenbergElement(kernel.Ma, 0, 0),
        HeisenbergElement(0, kernel.Mb, 0),
        HeisenbergElement(0, 0, kernel.Mc),
    )
    return gens[coord]


def lqa_witness(chain: ChainSpec, cylinder: int, refined: int, depth: int) -> KernelReport:
    """Compare the kernels at cylinder levels `cylinder` < `refined` at one
    depth.  A kernel order above 1 exhibits an element that acts trivially
    on every depth-d coset of the smaller cylinder while moving a coset of
    the larger one: the local quasi-analyticity violation pattern with the
    identity as the second element."""
    if not (depth >= refined > cylinder >= 1):
        raise ContractError("need depth >= refined > cylinder >= 1")
    kernel = trivial_action_kernel(chain, refined, depth)
    comparison = trivial_action_kernel(chain, cylinder, depth)
    if not kernel.contains_box(comparison):
        raise ContractError("kernels are not nested; schedule is inconsistent")
    order = index_in(kernel, comparison)
    analysis = _analyze_pair(chain, cylinder, refined)
    persistent = (
        analysis.sound
        and analysis.ratio is not None
        and analysis.ratio == order
        and analysis.limit_gap == order
        and _kernel_tower_surjective(chain, refined, depth)
        and _kernel_tower_surjective(chain, cylinder, depth)
    )
    return KernelReport(
        cylinder=cylinder,
        refined=refined,
        depth=depth,
        kernel_box=kernel,
        comparison_box=comparison,
        kernel_order=order,
        witness=_pick_witness(kernel, comparison),
        persistent=persistent,
    )


GRADE_FINITE = "finite-depth"
GRADE_SCHEDULE = "schedule-certified"


@dataclass(frozen=True)
class Certificate:
    """A structured verdict with exactly the evidence that was computed."""

    verdict: str  # StableCertified | WildEvidence | FreeCertified | NotFree | Inconclusive
    chain_label: str
    parameters: tuple  # ordered (name, value) pairs, echoed into reports
    evidence_grade: str
    reports: tuple = ()  # KernelReport evidence, when relevant
    stable_from_level: Optional[int] = None
    witness: Optional[HeisenbergElement] = None
    reason: Optional[str] = None
    escape_depth: Optional[int] = None


def wildness_certificate(chain: ChainSpec, max_cylinder: int, max_depth: int) -> Certificate:
    """Classify the chain as WildEvidence / StableCertified / Inconclusive.

    WildEvidence: every tested cylinder level has a refined level whose
    kernel gap is persistent (constant over the tested depths, equal to
    the schedule-level limit gap, with the kernel towers mapping onto each
    other), and the indexed family certifies that activations never stop.

    StableCertified(l0): the schedule-level limit gaps vanish for every
    pair of levels at or above l0; finite-depth gaps below l0, or gaps
    that die in the inverse limit, are consistent with this verdict.
    """
    if not (max_depth >= max_cylinder >= 2):
        raise ContractError("need max_depth >= max_cylinder >= 2")
    params = (("max_cylinder", max_cylinder), ("max_depth", max_depth))

    reports = []
    pair_state = {}
    problems = []
    for l1 in range(1, max_cylinder):
        for l2 in range(l1 + 1, max_cylinder + 1):
            orders = []
            surjective = True
            for d in range(l2, max_depth + 1):
                k = trivial_action_kernel(chain, l2, d)
                c = trivial_action_kernel(chain, l1, d)
                orders.append(index_in(k, c))
                surjective = surjective and _kernel_tower_surjective(
                    chain, l1, d
                ) and _kernel_tower_surjective(chain, l2, d)
            analysis = _analyze_pair(chain, l1, l2)
            constant = len(set(orders)) == 1
            persistent = (
                analysis.sound
                and constant
                and analysis.ratio == orders[-1]
                and analysis.limit_gap == orders[-1]
                and (analysis.limit_gap == 1 or surjective)
            )
            if not analysis.sound:
                problems.extend(analysis.notes)
            report = lqa_witness(chain, l1, l2, l2)
            reports.append(
                KernelReport(
                    cylinder=l1,
                    refined=l2,
                    depth=l2,
                    kernel_box=report.kernel_box,
                    comparison_box=report.comparison_box,
                    kernel_order=report.kernel_order,
                    witness=report.witness,
                    persistent=persistent,
                )
            )
            pair_state[(l1, l2)] = (analysis, persistent, orders)

    if problems:
        return Certificate(
            verdict="Inconclusive",
            chain_label=chain.label,
            parameters=params,
            evidence_grade=GRADE_FINITE,
            reports=tuple(reports),
            reason="; ".join(sorted(set(problems))),
        )

    endless = _family_activation_gap(chain) >= 1
    wild_everywhere = all(
        any(
            pair_state[(l1, l2)][1] and pair_state[(l1, l2)][0].limit_gap > 1
            for l2 in range(l1 + 1, max_cylinder + 1)
        )
        for l1 in range(1, max_cylinder)
    )
    if endless and wild_everywhere:
        return Certificate(
            verdict="WildEvidence",
            chain_label=chain.label,
            parameters=params,
            evidence_grade=GRADE_SCHEDULE,
            reports=tuple(reports),
        )
    if endless and not wild_everywhere:
        return Certificate(
            verdict="Inconclusive",
            chain_label=chain.label,
            parameters=params,
            evidence_grade=GRADE_FINITE,
            reports=tuple(reports),
            reason="family activations certify endless gaps but a tested "
            "pair failed its persistence checks",
        )

    level = _stable_level(chain)
    stray = [
        (l1, l2)
        for (l1, l2), (analysis, _p, _o) in pair_state.items()
        if l1 >= level and analysis.limit_gap != 1
    ]
    if stray:
        return Certificate(
            verdict="Inconclusive",
            chain_label=chain.label,
            parameters=params,
            evidence_grade=GRADE_FINITE,
            reports=tuple(reports),
            reason=f"surviving gaps above the computed stable level: {stray}",
        )
    return Certificate(
        verdict="StableCertified",
        chain_label=chain.label,
        parameters=params,
        evidence_grade=GRADE_SCHEDULE,
        reports=tuple(reports),
        stable_from_level=level,
    )


def _coordinate_unbounded(chain: ChainSpec, cylinder: int, coord: str) -> bool:
    """Whether the kernel's coordinate lattice grows without bound in the
    depth: some explicit schedule forces growth, or the family keeps
    contributing a positive exponent at every new activation."""
    for p in chain.explicit_primes():
        if _kernel_eventual(chain, cylinder, p, coord).slope > 0:
            return True
    fam = chain.family
    if fam is not None:
        exps = {
            "a": max(fam.a_exp, fam.c_exp),
            "b": max(fam.b_exp, fam.c_exp),
            "c": fam.c_exp,
        }
        if exps[coord] >= 1:
            return True
    return False


def freeness_certificate(
    chain: ChainSpec, cylinder: int, ball_radius: int, max_depth: int
) -> Certificate:
    """Certify that no non-identity element fixes the cylinder pointwise.

    FreeCertified: every non-identity element with coordinates bounded by
    `ball_radius` fails some kernel membership by `max_depth`, and all
    three kernel lattices are certifiably unbounded, so the full
    intersection of the kernels is trivial.  NotFree: some coordinate
    lattice is certifiably bounded, and its stabilized generator fixes the
    cylinder at every depth.
    """
    if ball_radius < 1 or max_depth < max(cylinder, 1) or cylinder < 0:
        raise ContractError("need ball_radius >= 1 and max_depth >= cylinder")
    params = (
        ("cylinder", cylinder),
        ("ball_radius", ball_radius),
        ("max_depth", max_depth),
    )
    first = max(cylinder, 1)
    kernels = {d: trivial_action_kernel(chain, cylinder, d) for d in range(first, max_depth + 1)}

    bounded = [x for x in COORDS if not _coordinate_unbounded(chain, cylinder, x)]
    if bounded:
        coord = "c" if "c" in bounded else bounded[0]
        starts = [1] + [
            chain.coord_eventual(p, x).threshold
            for p in chain.explicit_primes()
            for x in COORDS
        ]
        deep = max(max(starts) + 1, max_depth)
        stabilized = trivial_action_kernel(chain, cylinder, deep)
        value = {"a": stabilized.Ma, "b": stabilized.Mb, "c": stabilized.Mc}[coord]
        witness = {
            "a": HeisenbergElement(value, 0, 0),
            "b": HeisenbergElement(0, value, 0),
            "c": HeisenbergElement(0, 0, value),
        }[coord]
        assert all(k.contains(witness) for k in kernels.values())
        return Certificate(
            verdict="NotFree",
            chain_label=chain.label,
            parameters=params,
            evidence_grade=GRADE_SCHEDULE,
            witness=witness,
            reason=f"the {coord}-lattice of the kernel is bounded",
        )

    last = kernels[max_depth]
    if min(last.Ma, last.Mb, last.Mc) > ball_radius:
        escape = next(
            d
            for d in range(first, max_depth + 1)
            if min(kernels[d].Ma, kernels[d].Mb, kernels[d].Mc) > ball_radius
        )
        return Certificate(
            verdict="FreeCertified",
            chain_label=chain.label,
            parameters=params,
            evidence_grade=GRADE_SCHEDULE,
            escape_depth=escape,
        )
    return Certificate(
        verdict="Inconclusive",
        chain_label=chain.label,
        parameters=params,
        evidence_grade=GRADE_FINITE,
        reason="kernel lattices are unbounded but a ball element still "
        f"survives depth {max_depth}; raise max_depth",
    )


def element_escape_depth(
    chain: ChainSpec, cylinder: int, g: HeisenbergElement, max_depth: int
) -> Optional[int]:
    """First depth at which g stops fixing the cylinder pointwise, or None
    if it survives every tested depth."""
    for d in range(max(cylinder, 1), max_depth + 1):
        if not trivial_action_kernel(chain, cylinder, d).contains(g):
            return d
    return None


@dataclass(frozen=True)
class DiscriminantReport:
    """Orders of the stabilized images of D_depth inside D_level."""

    level: int
    depths: tuple
    orders: tuple
    stabilized: bool
    limit_order: Optional[int]
    evidence_grade: str = GRADE_FINITE


def discriminant_limit_report(chain: ChainSpec, level: int, max_depth: int) -> DiscriminantReport:
    """Track the images of the deeper discriminant levels inside D_level.

    The image orders are antitone in the depth.  `stabilized` is set when
    two consecutive images coincide as subgroups *and* the schedule-level
    floor of the image lattice equals the last computed one, so deeper
    levels provably cannot shrink it further.
    """
    if not 1 <= level <= max_depth:
        raise ContractError("need 1 <= level <= max_depth")
    depths = tuple(range(level, max_depth + 1))
    images = [chain.stable_image(level, d) for d in depths]
    orders = tuple(img.order for img in images)

    core = chain.core_at(level)
    floor = []
    for modulus, coord in ((core.Ma, "a"), (core.Mb, "b"), (core.Mc, "c")):
        lat = 1
        for p in chain.relevant_primes(level):
            box_exp = chain.coord_eventual(p, coord)
            core_exp = _prime_exponent(modulus, p)
            if box_exp.slope > 0:
                lat *= p**core_exp
            else:
                lat *= p ** min(box_exp.base, core_exp)
        floor.append(lat)
    symbolic = tuple(floor) == images[-1].lattice
    numeric = len(images) >= 2 and images[-1].same_subgroup(images[-2])
    stabilized = bool(symbolic and (numeric or len(images) == 1))
    return DiscriminantReport(
        level=level,
        depths=depths,
        orders=orders,
        stabilized=stabilized,
        limit_order=orders[-1] if stabilized else None,
        evidence_grade=GRADE_SCHEDULE if stabilized else GRADE_FINITE,
    )


def _prime_exponent(n: int, p: int) -> int:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e
