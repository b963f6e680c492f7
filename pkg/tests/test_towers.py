"""Chains, quotient towers, discriminant levels, Steinitz orders, cosets."""

import random

import pytest

from nilcantor.errors import ContractError, ResourceError
from nilcantor.heisenberg import GAMMA, BoxSubgroup, HeisenbergElement, index_in
from nilcantor.steinitz import INF, Primes, SteinitzNumber, multiplicity, product
from nilcantor.towers import (
    ChainSpec,
    CoordSchedule,
    CosetSpace,
    Eventually,
    FiniteQuotient,
    IndexedFamily,
    PrimeSchedule,
    QuotientSubgroup,
    builtin_chain,
    ex41,
    ex42,
    parse_chain_config,
    stable_chain,
    wild_chain,
)


# -- eventually affine helper ----------------------------------------------------


def test_eventually_max_crossing():
    f = Eventually(1, 0, 1)  # d
    g = Eventually(1, -3, 2)  # 2d - 3
    m = f.max_with(g)
    for d in range(m.threshold, m.threshold + 10):
        assert m.value(d) == max(d, 2 * d - 3)


def test_eventually_relu():
    f = Eventually(1, 0, 2)
    r = f.relu_minus(5)
    for d in range(r.threshold, r.threshold + 6):
        assert r.value(d) == max(0, 2 * d - 5)
    const = Eventually.constant(3).relu_minus(7)
    assert const.base == 0 and const.slope == 0


# -- schedules and boxes ------------------------------------------------------------


def test_box_at_examples():
    assert ex41(2).box_at(2) == BoxSubgroup(4, 4, 16)
    assert ex42(2, 3).box_at(1) == BoxSubgroup(2, 3, 6)
    assert wild_chain(2, 1).box_at(2) == BoxSubgroup(6, 36, 36)


def test_wild_chain_matches_product_formulas():
    chain = wild_chain(2, 1)
    qs = (2, 3, 5, 7, 11)
    for level in range(1, 6):
        m = 1
        n = 1
        for q in qs[:level]:
            m *= q
            n *= q * q
        assert chain.box_at(level) == BoxSubgroup(m, n, n)


def test_stable_chain_matches_product_formulas():
    chain = stable_chain((2, 3), (1, 1), (2, 2), (5,))
    for level in range(1, 5):
        m = 2 * 3 * 5**level
        n = 4 * 9 * 5**level
        assert chain.box_at(level) == BoxSubgroup(m, n, n)


def test_core_at_examples():
    assert ex41(2).core_at(1) == BoxSubgroup(4, 4, 4)
    chain = stable_chain((2, 3), (1, 1), (2, 2), (5,))
    for level in (1, 2, 3):
        n = chain.box_at(level).Mb
        assert chain.core_at(level) == BoxSubgroup(n, n, n)
        assert chain.core_at(level).is_normal_in_gamma()


def test_chain_descends_properly():
    for chain in (ex41(3), ex42(2, 5), wild_chain(3, 1), stable_chain((2,), (1,), (2,), (3,))):
        for level in range(1, 6):
            outer, inner = chain.box_at(level), chain.box_at(level + 1)
            assert outer.contains_box(inner)
            assert outer != inner


def test_validation_rejects_bad_chains():
    with pytest.raises(ContractError):
        # eventually constant: no slopes, no family
        ChainSpec("flat", (PrimeSchedule(2, a=CoordSchedule(1, 1, 0)),))
    with pytest.raises(ContractError):
        # box condition violated at the prime: c grows faster than a+b
        ChainSpec("badbox", (PrimeSchedule(2, c=CoordSchedule(1, 0, 1)),))
    with pytest.raises(ContractError):
        # duplicate prime
        ChainSpec(
            "dup",
            (
                PrimeSchedule(2, a=CoordSchedule(1, 0, 1), b=CoordSchedule(1, 0, 1), c=CoordSchedule(1, 0, 1)),
                PrimeSchedule(2, a=CoordSchedule(1, 0, 2), b=CoordSchedule(1, 0, 2), c=CoordSchedule(1, 0, 2)),
            ),
        )
    with pytest.raises(ContractError):
        # family and explicit overlap
        ChainSpec(
            "overlap",
            (PrimeSchedule(2, a=CoordSchedule(1, 0, 1), b=CoordSchedule(1, 0, 1), c=CoordSchedule(1, 0, 1)),),
            family=IndexedFamily(Primes(), 1, 2, 2),
        )
    with pytest.raises(ContractError):
        stable_chain((2, 3), (1, 1), (2, 2), ())  # no growing prime


def test_trivial_intersection_flag():
    bounded = (
        PrimeSchedule(
            2, a=CoordSchedule(1, 0, 1), b=CoordSchedule(1, 0, 1), c=CoordSchedule(1, 2, 0)
        ),
    )
    with pytest.raises(ContractError):
        ChainSpec("pinched", bounded)
    ChainSpec("pinched", bounded, trivial_intersection=False)  # explicit opt-out


def test_wild_chain_rejects_degenerate_exponents():
    with pytest.raises(ContractError):
        wild_chain(2, 2)
    with pytest.raises(ContractError):
        wild_chain(1, 0)


def test_wild_chain_with_infinite_part_excludes_it_from_family():
    chain = wild_chain(2, 1, pi_inf=(5,))
    assert 5 in chain.explicit_primes()
    assert chain.family.activation_of(5) is None
    assert chain.family_primes(3) == (2, 3, 7)
    order = chain.steinitz_order(3)
    assert multiplicity(order.limit, 5) is INF
    assert multiplicity(order.limit, 7) == 5
    sp = order.limit.spectra(11)
    assert sp.pi_inf.primes == (5,) and sp.pi_inf.complete
    assert sp.pi_f.primes == (2, 3, 7, 11) and not sp.pi_f.complete


# -- quotients ------------------------------------------------------------------------


def test_quotient_orders():
    assert ex42(2, 3).quotient_at(1).order == 216
    assert ex41(2).quotient_at(1).order == 64
    q = FiniteQuotient(9, 9, 9)  # one-prime component shape
    assert q.order == 9**3


def test_quotient_requires_normal_moduli():
    with pytest.raises(ContractError):
        FiniteQuotient(2, 2, 4)


def test_quotient_well_defined_on_representatives():
    q = FiniteQuotient(12, 6, 3)
    rng = random.Random(23)
    for _ in range(300):
        x = (rng.randrange(-50, 50), rng.randrange(-50, 50), rng.randrange(-50, 50))
        y = (rng.randrange(-50, 50), rng.randrange(-50, 50), rng.randrange(-50, 50))
        shifted_x = (x[0] + q.A * rng.randrange(-3, 4), x[1] + q.B * rng.randrange(-3, 4), x[2] + q.C * rng.randrange(-3, 4))
        assert q.mul(q.reduce(x), q.reduce(y)) == q.mul(q.reduce(shifted_x), q.reduce(y))
        assert q.mul(q.reduce(x), q.inv(q.reduce(x))) == q.identity


def test_connecting_map_is_surjective_homomorphism():
    for chain in (ex41(2), ex42(2, 3), wild_chain(2, 1)):
        for level in (1, 2):
            f = chain.connecting_map(level)
            rng = random.Random(29)
            for _ in range(1000):
                x = f.source.random_element(rng)
                y = f.source.random_element(rng)
                assert f(f.source.mul(x, y)) == f.target.mul(f(x), f(y))
            assert f(f.source.identity) == f.target.identity
            # surjective: coordinatewise reduction hits every target triple
            img = {f((a, b, c)) for a in range(f.target.A) for b in range(f.target.B) for c in range(f.target.C)}
            assert len(img) == f.target.order


def test_connecting_map_example_and_section():
    # element (4,0,0) of the level-2 quotient reduces to (4,0,0) at level 1
    chain = ex42(2, 3)
    f = chain.connecting_map(1)
    assert f((4, 0, 0)) == (4 % 6, 0, 0) == (4, 0, 0)
    # the coordinate section is a one-sided inverse on generator images
    for g in chain.box_at(1).generators():
        down = f.target.reduce(g)
        lifted = f.source.reduce(g)  # same coordinates, deeper modulus
        assert f(lifted) == down


def test_quotient_subgroup_order_divides_ambient():
    for chain in (ex41(2), ex42(2, 3), wild_chain(2, 1)):
        for level in (1, 2, 3):
            d = chain.discriminant_level(level)
            assert chain.quotient_at(level).order % d.order == 0
            for depth in (level, level + 1):
                img = chain.stable_image(level, depth)
                assert chain.quotient_at(level).order % img.order == 0
                assert img.order == len(img.closure())


# -- discriminant levels ---------------------------------------------------------------


def test_discriminant_orders_examples():
    assert ex41(2).discriminant_level(1).order == 4
    assert ex42(2, 3).discriminant_level(1).order == 6
    chain = stable_chain((2, 3), (1, 1), (2, 2), (5,))
    assert chain.discriminant_level(1).order == 6  # prod q_i^(n_i - r_i)


def test_discriminant_closure_confirms_lattice_order():
    for chain, level in ((ex41(2), 1), (ex42(2, 3), 1), (ex42(2, 3), 2)):
        d = chain.discriminant_level(level)
        assert len(d.closure()) == d.order


def test_discriminant_level_scaling():
    chain = ex41(2)
    for level in range(1, 5):
        assert chain.discriminant_level(level).order == 2 ** (2 * level)


def test_lagrange_identity_at_finite_levels():
    for chain in (ex41(2), ex42(2, 3)):
        for level in range(1, 5):
            q = chain.quotient_at(level).order
            x = index_in(GAMMA, chain.box_at(level))
            d = chain.discriminant_level(level).order
            assert q == x * d


def test_lagrange_identity_as_steinitz_product():
    chain = ex42(2, 3)
    for level in range(1, 5):
        q = SteinitzNumber.from_int(chain.quotient_at(level).order)
        x = SteinitzNumber.from_int(index_in(GAMMA, chain.box_at(level)))
        d = SteinitzNumber.from_int(chain.discriminant_level(level).order)
        assert product(x, d) == q


def test_stable_image_examples():
    assert ex41(2).stable_image(1, 2).order == 1
    img = ex42(2, 3).stable_image(1, 2)
    assert img.order == 6
    closure = img.closure()
    assert len(closure) == 6
    # Z/3 x Z/2 shape: the a-part has order 3, the b-part order 2
    assert {x[0] for x in closure} == {0, 2, 4}
    assert {x[1] for x in closure} == {0, 3}
    d1 = ex42(2, 3).discriminant_level(1)
    assert ex42(2, 3).stable_image(1, 1).same_subgroup(d1)


def test_stable_image_descending():
    for chain in (ex41(2), ex42(2, 3), wild_chain(2, 1)):
        for d in (1, 2, 3):
            big = chain.stable_image(1, d)
            small = chain.stable_image(1, d + 1)
            assert big.order % small.order == 0
            assert all(big.contains(g) for g in small.generators)


def test_subgroup_closure_cap():
    q = FiniteQuotient(64, 64, 64)
    sub = QuotientSubgroup(q, ((1, 0, 0), (0, 1, 0)), cap=100)
    with pytest.raises(ResourceError):
        sub.closure()


# -- Steinitz orders --------------------------------------------------------------------


def test_steinitz_order_ex41():
    order = ex41(2).steinitz_order(4)
    assert order.raw.as_int() == 2**16
    assert multiplicity(order.limit, 2) is INF
    assert order.promoted == (2,)


def test_steinitz_order_ex42():
    order = ex42(2, 3).steinitz_order(3)
    assert multiplicity(order.limit, 2) is INF
    assert multiplicity(order.limit, 3) is INF
    assert order.raw.as_int() == 6**6  # (pq)^{2l} at l = 3


def test_steinitz_order_stable_family():
    order = stable_chain((2, 3), (1, 1), (2, 2), (5,)).steinitz_order(3)
    # q-exponents r + 2n = 5, certified limit 5^inf
    assert multiplicity(order.limit, 2) == 5
    assert multiplicity(order.limit, 3) == 5
    assert multiplicity(order.limit, 5) is INF
    assert order.promoted == (5,)


def test_steinitz_order_wild_family():
    order = wild_chain(2, 1).steinitz_order(4)
    assert multiplicity(order.raw, 7) == 5
    assert multiplicity(order.raw, 11) == 0  # not activated by depth 4
    assert multiplicity(order.limit, 11) == 5  # but certified in the limit
    assert order.promoted == ()
    sp = order.limit.spectra(7)
    assert sp.pi_f.primes == (2, 3, 5, 7)
    assert not sp.pi_f.complete
    assert sp.pi_inf.primes == ()


def test_steinitz_order_growth_is_monotone():
    chain = ex42(2, 3)
    prev = None
    for depth in range(1, 5):
        raw = chain.steinitz_order(depth).raw.as_int()
        if prev is not None:
            assert raw % prev == 0 and raw > prev
        prev = raw


# -- coset spaces ------------------------------------------------------------------------


def test_canonical_examples():
    space = CosetSpace(BoxSubgroup(2, 2, 4))
    assert space.canonical(HeisenbergElement(3, 5, 7)) == (1, 1, 3)
    assert space.canonical(HeisenbergElement(0, 0, 0)) == (0, 0, 0)
    assert CosetSpace(BoxSubgroup(2, 3, 6)).canonical(HeisenbergElement(2, 3, 6)) == (0, 0, 0)


def test_canonical_constant_on_cosets():
    rng = random.Random(31)
    space = CosetSpace(BoxSubgroup(2, 3, 6))
    for _ in range(300):
        g = HeisenbergElement(rng.randrange(-30, 30), rng.randrange(-30, 30), rng.randrange(-30, 30))
        h = HeisenbergElement(2 * rng.randrange(-5, 6), 3 * rng.randrange(-5, 6), 6 * rng.randrange(-5, 6))
        assert space.canonical(g) == space.canonical(g * h)


def test_act_examples_and_axioms():
    space = CosetSpace(BoxSubgroup(2, 2, 4))
    assert space.act(HeisenbergElement(1, 0, 0), (0, 0, 0)) == (1, 0, 0)
    with pytest.raises(ContractError):
        space.act(HeisenbergElement(1, 0, 0), (5, 0, 0))
    rng = random.Random(37)
    for _ in range(1000):
        g = HeisenbergElement(rng.randrange(-9, 9), rng.randrange(-9, 9), rng.randrange(-9, 9))
        h = HeisenbergElement(rng.randrange(-9, 9), rng.randrange(-9, 9), rng.randrange(-9, 9))
        x = space.canonical(HeisenbergElement(rng.randrange(0, 8), rng.randrange(0, 8), rng.randrange(0, 8)))
        assert space.act(g, space.act(h, x)) == space.act(g * h, x)


def test_orbit_is_whole_space():
    space = CosetSpace(BoxSubgroup(2, 2, 4))
    gens = [HeisenbergElement(1, 0, 0), HeisenbergElement(0, 1, 0), HeisenbergElement(0, 0, 1)]
    orbit = space.orbit(gens)
    assert len(orbit) == 16 == space.size


def test_basepoint_stabilizer_is_the_box():
    space = CosetSpace(BoxSubgroup(2, 3, 6))
    rng = random.Random(41)
    for _ in range(500):
        g = HeisenbergElement(rng.randrange(-18, 18), rng.randrange(-18, 18), rng.randrange(-18, 18))
        fixes = space.act(g, space.basepoint) == space.basepoint
        assert fixes == space.box.contains(g)


# -- chain configs --------------------------------------------------------------------------


EX41_CONFIG = """
label=ex41-by-hand
prime=2 coord=a start=1 base=0 slope=1
prime=2 coord=b start=1 base=0 slope=1
prime=2 coord=c start=1 base=0 slope=2
"""

WILD_CONFIG = """
label=wild-by-hand
family qi coord=a start=i base=1 slope=0
family qi coord=b start=i base=2 slope=0
family qi coord=c start=i base=2 slope=0
"""


def test_parse_chain_config_explicit():
    chain = parse_chain_config(EX41_CONFIG)
    assert chain.label == "ex41-by-hand"
    for level in (1, 2, 3):
        assert chain.box_at(level) == ex41(2).box_at(level)


def test_parse_chain_config_family():
    chain = parse_chain_config(WILD_CONFIG)
    for level in (1, 2, 3):
        assert chain.box_at(level) == wild_chain(2, 1).box_at(level)


def test_parse_chain_config_errors_carry_position():
    with pytest.raises(ContractError) as err:
        parse_chain_config("prime=2 coord=q start=1 base=0 slope=1")
    assert "line 1" in str(err.value)


def test_builtin_chain_dispatch():
    assert builtin_chain("ex41", p=2).label == "ex41(p=2)"
    with pytest.raises(ContractError):
        builtin_chain("nope")
