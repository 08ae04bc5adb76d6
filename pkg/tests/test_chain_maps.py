import json
import random

import pytest

from koszulrank.chain_maps import (
    ChainMap,
    GradingMode,
    Homotopy,
    RankMethod,
    homotopy_perturb,
    iota,
    is_degree_preserving,
    pair_coefficient,
    pair_has_multiplicative_form,
    random_chain_map,
    random_homotopy,
    rank,
    restricted_rank,
    verify_chain_map,
)
from koszulrank.koszul import ComplexDescriptor, KElem, random_kelem
from koszulrank.polynomials import Char, Poly


def test_iota_images_and_unitality():
    g = iota(2, 3, Char.ZERO)
    assert g.images[()] == g.target.one()
    expected = KElem(g.target, {(1, 2): Poly.monomial(2, Char.ZERO, (3, 3))})
    assert g.images[(1, 2)] == expected


def test_iota_passes_verification():
    for char in (Char.ZERO, Char.TWO):
        report = verify_chain_map(iota(3, 1, char))
        assert report.unital and report.commutes and report.lifts_projection
        assert not report.failures


def test_iota_rank_is_full():
    g = iota(3, 1, Char.ZERO)
    assert rank(g, RankMethod.EXACT) == 8
    assert rank(g, RankMethod.MODULAR, random.Random(0)) == 8


def test_apply_examples():
    g = iota(3, 2, Char.ZERO)
    assert g.apply(g.source.generator((1,))) == KElem(g.target, {(1,): g.target.t(1, 2)})
    assert g.apply(g.source.one()) == g.target.one()
    assert g.apply(g.source.zero()).is_zero()


def test_apply_is_linear():
    rng = random.Random(2)
    g = random_chain_map(3, 1, Char.ZERO, rng)
    x = random_kelem(g.source, rng)
    y = random_kelem(g.source, rng)
    p = Poly.parse("t1 + 2*t3", 3, Char.ZERO)
    assert g.apply(x.scale(p) + y) == g.apply(x).scale(p) + g.apply(y)


def test_broken_map_reported():
    g = iota(2, 1, Char.ZERO)
    images = dict(g.images)
    images[(1,)] = g.target.zero()
    broken = ChainMap(g.source, g.target, images)
    report = verify_chain_map(broken)
    assert report.unital
    assert not report.commutes
    assert any("I={1}" in failure for failure in report.failures)


def test_chain_law_on_random_elements():
    rng = random.Random(3)
    for char in (Char.ZERO, Char.TWO):
        g = random_chain_map(3, 1, char, rng)
        assert verify_chain_map(g).passed
        for _ in range(200):
            x = random_kelem(g.source, rng)
            assert g.apply(x).differential() == g.apply(x.differential())


def test_perturb_by_zero_returns_equal_map():
    g = iota(3, 1, Char.ZERO)
    assert homotopy_perturb(g, Homotopy({})) == g


def test_perturb_keeps_chain_law():
    g = iota(3, 1, Char.ZERO)
    h = Homotopy({(1, 2): KElem(g.target, {(3,): Poly.parse("t1*t2 - 2", 3, Char.ZERO)})})
    perturbed = homotopy_perturb(g, h)
    report = verify_chain_map(perturbed)
    assert report.passed
    assert perturbed.images[()] == g.target.one()


def test_perturb_rejects_unit_correction():
    g = iota(2, 1, Char.ZERO)
    with pytest.raises(ValueError):
        Homotopy({(): g.target.one()})
    bad = Homotopy({})
    bad.values[()] = g.target.one()  # bypass the constructor check
    with pytest.raises(ValueError):
        homotopy_perturb(g, bad)


def test_random_perturbations_verify():
    rng = random.Random(4)
    for char in (Char.ZERO, Char.TWO):
        for grading in (GradingMode.FULL, GradingMode.PARITY, None):
            g = random_chain_map(3, 1, char, rng, grading=grading)
            assert verify_chain_map(g).passed


def test_iota_is_degree_preserving_both_modes():
    for char in (Char.ZERO, Char.TWO):
        g = iota(3, 1, char)
        assert is_degree_preserving(g, GradingMode.FULL)
        assert is_degree_preserving(g, GradingMode.PARITY)


def test_degree_constrained_sampling():
    rng = random.Random(5)
    for char in (Char.ZERO, Char.TWO):
        for _ in range(10):
            g = random_chain_map(3, 1, char, rng, grading=GradingMode.FULL)
            assert is_degree_preserving(g, GradingMode.FULL)
            g = random_chain_map(3, 1, char, rng, grading=GradingMode.PARITY)
            assert is_degree_preserving(g, GradingMode.PARITY)


def test_inhomogeneous_correction_breaks_full_grading():
    g = iota(3, 1, Char.ZERO)
    h = Homotopy({(1,): KElem(g.target, {(): Poly.parse("t1^3 + 1", 3, Char.ZERO)})})
    perturbed = homotopy_perturb(g, h)
    assert verify_chain_map(perturbed).passed
    assert not is_degree_preserving(perturbed, GradingMode.FULL)


def test_rank_of_degenerate_matrix():
    g = iota(2, 1, Char.ZERO)
    images = {indices: g.target.zero() for indices in g.source.index_sets()}
    images[()] = g.target.one()
    degenerate = ChainMap(g.source, g.target, images)
    assert rank(degenerate, RankMethod.EXACT) == 1
    assert rank(degenerate, RankMethod.MODULAR, random.Random(1)) == 1


def test_rank_methods_agree_on_random_maps():
    rng = random.Random(6)
    for char in (Char.ZERO, Char.TWO):
        for n in (2, 3, 4):
            g = random_chain_map(n, 1, char, rng, max_terms=2)
            exact = rank(g, RankMethod.EXACT)
            modular = rank(g, RankMethod.MODULAR, rng)
            assert exact == modular, (char, n, exact, modular)


def test_restricted_rank_examples():
    g = iota(3, 1, Char.ZERO)
    boundary = g.source.generator((1, 2, 3)).differential()
    assert restricted_rank(g, [boundary], RankMethod.EXACT) == 1
    assert restricted_rank(g, [g.source.one()], RankMethod.EXACT) == 1
    assert restricted_rank(g, [boundary, boundary], RankMethod.EXACT) == 1


def test_serialization_round_trip_is_bit_exact():
    rng = random.Random(7)
    for char in (Char.ZERO, Char.TWO):
        g = random_chain_map(3, 2, char, rng)
        text = g.to_json()
        again = ChainMap.from_json(text)
        assert again == g
        assert again.to_json() == text
        parsed = json.loads(text)
        assert set(parsed) == {"n", "m", "char", "images"}


def test_pair_coefficient_nonzero_for_valid_maps():
    rng = random.Random(8)
    for char in (Char.ZERO, Char.TWO):
        for _ in range(20):
            g = random_chain_map(4, 1, char, rng)
            for i in range(1, 4):
                for j in range(i + 1, 5):
                    assert not pair_coefficient(g, i, j).is_zero(), (char, i, j)


def test_pair_multiplicative_form_is_reported_not_required():
    g = iota(3, 1, Char.ZERO)
    assert pair_has_multiplicative_form(g, 1, 2)
    rng = random.Random(9)
    observed = [
        pair_has_multiplicative_form(random_chain_map(3, 1, Char.ZERO, rng), 1, 2)
        for _ in range(10)
    ]
    assert all(isinstance(v, bool) for v in observed)


def test_single_index_images_are_cocycle_corrections():
    # the chain-map law forces gamma(s_i) - t_i^m s_i to be a cocycle
    rng = random.Random(11)
    for char in (Char.ZERO, Char.TWO):
        g = random_chain_map(3, 2, char, rng)
        for i in (1, 2, 3):
            baseline = KElem(g.target, {(i,): g.target.t(i, 2)})
            assert (g.images[(i,)] - baseline).differential().is_zero()


def test_homotopy_linear_extension():
    rng = random.Random(10)
    source = ComplexDescriptor(3, 1, Char.ZERO)
    h = random_homotopy(source, rng)
    target = ComplexDescriptor(3, 0, Char.ZERO)
    x = random_kelem(source, rng)
    y = random_kelem(source, rng)
    assert h.applied_to(x + y, target) == h.applied_to(x, target) + h.applied_to(y, target)
