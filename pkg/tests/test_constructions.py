import math
from fractions import Fraction

import numpy as np
import pytest

from anglechains.constructions import (
    GENERATORS,
    acute_angles,
    designated_chains,
    gen_acute_kchains_r6,
    gen_lenz,
    gen_middle_pinned,
    gen_pinned_chain,
    gen_pinned_right_r3,
    gen_pinned_st,
    gen_railroad,
    gen_right_2chains_r5,
    gen_right_kchains_r6,
    gen_right_triples_r4,
    generate,
)
from anglechains.counting import (
    Pin,
    count_chains,
    count_chains_bruteforce,
    count_chains_dp,
    count_middle_pinned_triples,
    count_pairs_at_distance,
    count_pinned_chains,
    count_triples_planar_fast,
    query,
)
from anglechains.errors import Infeasible, InvalidParams, OutOfRange
from anglechains.geometry import AngleSpec, PointSet, SimilarityTransform, angle_cosine, apply_similarity, matches_angle

RIGHT = AngleSpec.right()
THIRD = AngleSpec.from_pi_fraction(Fraction(1, 3))
ANGLES = {
    "pi/3": THIRD,
    "pi/2": RIGHT,
    "2pi/3": AngleSpec.from_pi_fraction(Fraction(2, 3)),
    "1.0rad": AngleSpec.from_radians(1.0),
    "0.3rad": AngleSpec.from_radians(0.3),
    "2.8rad": AngleSpec.from_radians(2.8),
}


def _check_designated(out, limit=5000):
    P = out.points.points
    seen = 0
    for ch in designated_chains(out, limit):
        seen += 1
        for i in range(len(ch) - 2):
            assert matches_angle(P[ch[i]], P[ch[i + 1]], P[ch[i + 2]], out.angle_type[i]), ch
    return seen


def _distinct(out):
    assert out.points.duplicates() == []


# --- Lenz ----------------------------------------------------------------------


@pytest.mark.parametrize("n, pairs", [(2, 1), (10, 25), (11, 30), (100, 2500)])
def test_lenz_pairs(n, pairs):
    out = gen_lenz(n)
    assert len(out.points) == n and out.points.dim == 4
    assert count_pairs_at_distance(out.points, math.sqrt(2)) == pairs
    _distinct(out)


# --- right-angle families -----------------------------------------------------------


def test_r4():
    out = gen_right_triples_r4(9)
    assert len(out.points) == 9 and out.claimed_exponent == 3
    assert count_chains_bruteforce(out.points, query([RIGHT])).count >= 27
    assert _check_designated(out) == 27
    assert count_chains(gen_right_triples_r4(3).points, query([RIGHT])).count >= 1


def test_r4_similarity_invariant():
    out = gen_right_triples_r4(12)
    t = SimilarityTransform.random(4, np.random.default_rng(1), shift=5.0)
    q = query([RIGHT])
    assert count_chains(apply_similarity(out.points, t), q).count == count_chains(out.points, q).count


def test_r5():
    out = gen_right_2chains_r5(8)
    assert len(out.points) == 8 and out.points.dim == 5
    assert count_chains_bruteforce(out.points, query([RIGHT, RIGHT])).count >= 16
    assert count_chains_dp(out.points, query([RIGHT, RIGHT], distinctness="local")).count >= 16
    assert _check_designated(out) == 16
    assert count_chains_dp(gen_right_2chains_r5(4).points, query([RIGHT] * 2, distinctness="local")).count >= 1


def test_r5_third_family_reading():
    out = gen_right_2chains_r5(12)
    fam3 = [out.points.points[i] for i in out.params["families"][2]]
    for a, p in enumerate(fam3, start=1):
        assert p == (1.0, 0.0, 0.0, math.cos(a), math.sin(a))


@pytest.mark.parametrize("k, floor", [(1, 27), (2, 81)])
def test_r6_unpinned(k, floor):
    out = gen_right_kchains_r6(18, k)
    assert len(out.points) == 18 and out.claimed_exponent == k + 2
    assert count_chains_dp(out.points, query([RIGHT] * k, distinctness="local")).count >= floor
    assert _check_designated(out) == floor


def test_r6_cyclic_families_all_right():
    out = gen_right_kchains_r6(24, 8)
    assert _check_designated(out, limit=3000) == 3000


def test_r6_pinned():
    out = gen_right_kchains_r6(18, 1, pinned=True)
    pin = out.points.pin
    assert out.points.points[pin] == (0.0,) * 6
    assert count_pinned_chains(out.points, query([RIGHT], pin=pin)).count >= 9
    assert _check_designated(out) == 9
    out2 = gen_right_kchains_r6(24, 3, pinned=True)
    assert count_pinned_chains(out2.points, query([RIGHT] * 3, pin=out2.points.pin, distinctness="local")).count >= 4 ** 4
    _distinct(out2)


# --- acute family -----------------------------------------------------------------


@pytest.mark.parametrize("k", [1, 2, 5])
def test_acute_unit_radii_give_sixty_degrees(k):
    alphas, betas = acute_angles([1.0] * (k + 2))
    assert all(abs(a - math.pi / 3) <= 1e-12 for a in alphas)
    assert all(abs(b - math.pi / 4) <= 1e-12 for b in betas)
    out = gen_acute_kchains_r6(6 * (k + 2), k)
    assert all(abs(s.cosine - 0.5) <= 1e-12 for s in out.angle_type)


def test_acute_count_and_designated():
    out = gen_acute_kchains_r6(12, 2)
    assert count_chains_dp(out.points, query(out.angle_type, distinctness="local")).count >= 81
    assert _check_designated(out) == 81
    _distinct(out)


@pytest.mark.parametrize("c", [[1, 2, 0.5, 1.5, 1], [3, 1, 3], [0.2, 5, 0.7, 2]])
def test_acute_general_radii(c):
    k = len(c) - 2
    out = gen_acute_kchains_r6(4 * (k + 2), k, c)
    alphas = [s.radians for s in out.angle_type]
    assert all(0 < a < math.pi / 2 for a in alphas)
    assert all(a > b for a, b in zip(alphas, out.params["betas"]))
    assert _check_designated(out, limit=10**4) == 4 ** (k + 2)


def test_acute_pinned():
    out = gen_acute_kchains_r6(13, 2, [0, 1, 2, 1], pinned=True)
    assert out.points.points[0] == (0.0,) * 6 and out.points.pin == 0
    assert len(out.points) <= 13
    m = out.params["m"]
    cnt = count_pinned_chains(out.points, query(out.angle_type, pin=0, distinctness="local")).count
    assert cnt >= m ** 3
    assert _check_designated(out) == m ** 3


def test_acute_rejects_bad_radii():
    with pytest.raises(InvalidParams):
        gen_acute_kchains_r6(12, 2, [1, 0, 1, 1])
    with pytest.raises(InvalidParams):
        gen_acute_kchains_r6(12, 2, [1, 1, 1])


def test_acute_scalar_radius():
    a = gen_acute_kchains_r6(12, 2, c=2.0)
    b = gen_acute_kchains_r6(12, 2, [2.0] * 4)
    assert a.points == b.points
    assert generate("acute-r6", 12, k=2, c=[2.0]).points == a.points


# --- pinned families -------------------------------------------------------------------


@pytest.mark.parametrize("n, expect", [(3, 2), (11, 50), (12, 60)])
def test_middle_pinned(n, expect):
    out = gen_middle_pinned(n, THIRD, 2)
    assert len(out.points) == n
    assert count_middle_pinned_triples(out.points, THIRD, out.points.pin).count == expect
    out3 = gen_middle_pinned(n, THIRD, 3)
    assert count_middle_pinned_triples(out3.points, THIRD, out3.points.pin).count == expect
    assert _check_designated(out) == expect // 2


def test_middle_pinned_right_is_exact():
    out = gen_middle_pinned(9, RIGHT, 4)
    assert out.points.is_exact
    assert count_chains(out.points, query([RIGHT], pin=Pin("middle", 0))).count == 32


def test_pinned_right_r3():
    out = gen_pinned_right_r3(10)
    assert count_pinned_chains(out.points, query([RIGHT], pin=0)).count >= 25
    assert count_pinned_chains(out.points, query([RIGHT], pin=0)).count == count_chains_bruteforce(
        out.points, query([RIGHT], pin=0)).count
    P = out.points.points
    for ch in designated_chains(out):
        assert abs(angle_cosine(P[ch[0]], P[ch[1]], P[ch[2]])) <= 1e-12
    assert count_pinned_chains(gen_pinned_right_r3(2).points, query([RIGHT], pin=0)).count >= 1


@pytest.mark.parametrize("spec", [THIRD, RIGHT, AngleSpec.from_radians(2.0)])
def test_pinned_st_small(spec):
    out = gen_pinned_st(64, spec)
    m = out.params["m"]
    assert m == 4 and out.params["grid"] == 64
    lines = out.params["lines"]
    pivots = out.params["pivots"]
    assert pivots <= 2 * lines
    if spec.exact_right:
        assert pivots == lines
        assert out.points.is_exact
    fast = count_triples_planar_fast(out.points, spec, pin=0).count
    brute = count_chains_bruteforce(out.points, query([spec], pin=0)).count
    assert fast == brute
    assert brute >= len(out.params["designated"])
    _check_designated(out)
    _distinct(out)


def test_pinned_st_too_small():
    with pytest.raises(Infeasible):
        gen_pinned_st(7, THIRD)


# --- railroad ---------------------------------------------------------------------


def test_railroad_examples():
    out = gen_railroad(60, [THIRD, THIRD])
    assert len(out.points) <= 60 and out.claimed_exponent == 3
    assert len(out.params["lines"]) == 2
    q = query([THIRD, THIRD], distinctness="local")
    c = count_chains_dp(out.points, q).count
    assert c >= 60 ** 3 / 100
    assert c == count_chains_bruteforce(out.points, q).count
    out1 = gen_railroad(40, [RIGHT])
    assert count_chains(out1.points, query([RIGHT])).count >= 40 ** 2 / 10
    _distinct(out)


@pytest.mark.parametrize("a", list(ANGLES))
@pytest.mark.parametrize("b", list(ANGLES))
@pytest.mark.parametrize("k", [2, 3])
def test_railroad_designated_chains(a, b, k):
    specs = [ANGLES[x] for x in ([a, b] * 2)[:k]]
    for gen in (gen_railroad, gen_pinned_chain):
        out = gen(60, specs)
        _distinct(out)
        assert len(out.points) <= 60
        assert _check_designated(out, limit=2000) > 0


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_railroad_line_count_and_exponent(k):
    specs = [THIRD] * k
    out = gen_railroad(4 * (k + 2) * 3, specs)
    assert len(out.params["lines"]) == (k + 1) // 2 + 1
    assert out.claimed_exponent == k // 2 + 2
    assert gen_pinned_chain(4 * (k + 2) * 3, specs).claimed_exponent == k // 2 + 1


def test_pinned_chain_counts():
    out = gen_pinned_chain(60, [THIRD, THIRD])
    pin = out.points.pin
    assert 0 <= pin < len(out.points)
    c = count_pinned_chains(out.points, query([THIRD, THIRD], pin=pin, distinctness="local")).count
    assert c >= 60 ** 2 / 20
    out1 = gen_pinned_chain(40, [RIGHT])
    assert count_pinned_chains(out1.points, query([RIGHT], pin=out1.points.pin)).count >= 40 / 4


def test_railroad_errors():
    with pytest.raises(InvalidParams):
        gen_railroad(10, [THIRD, THIRD])
    with pytest.raises(InvalidParams):
        gen_railroad(60, [])
    with pytest.raises(OutOfRange):
        gen_railroad(60, [AngleSpec.from_radians(math.pi)])


def test_railroad_deterministic():
    a = gen_railroad(80, [THIRD, RIGHT, THIRD], seed=3)
    b = gen_railroad(80, [THIRD, RIGHT, THIRD], seed=3)
    assert a.points == b.points


# --- contract over the registry -----------------------------------------------------


@pytest.mark.parametrize("name", sorted(GENERATORS))
def test_registry_contract(name):
    kw = {}
    if name in ("railroad", "pinned-chain"):
        kw["angles"] = [THIRD, RIGHT]
    elif name in ("middle-pinned", "pinned-st"):
        kw["angles"] = [THIRD]
    elif name in ("right-r6", "acute-r6"):
        kw["k"] = 2
    n = 64
    out = generate(name, n, **kw)
    again = generate(name, n, **kw)
    assert out.points == again.points
    _distinct(out)
    assert isinstance(out.claimed_exponent, Fraction)
    if name not in ("pinned-st", "pinned-right-r3", "right-r6"):
        assert len(out.points) <= n
    _check_designated(out, limit=2000)
