import random

import pytest

from koszulrank.certificates import (
    CertificateFamily,
    Submodule,
    bound_report,
    certificate_generators,
    check_injectivity,
    classical_bound,
    expected_family_size,
    grading_label,
    improved_bound,
    search_noninjective_char2,
)
from koszulrank.chain_maps import GradingMode, RankMethod, iota, random_chain_map, rank, restricted_rank
from koszulrank.koszul import ComplexDescriptor
from koszulrank.polynomials import Char


def test_triple_diffs_layout():
    sub = certificate_generators(CertificateFamily.TRIPLE_DIFFS, 6, 1, Char.ZERO)
    assert len(sub) == 2
    assert sub.labels == ["d s{1,2,3}", "d s{4,5,6}"]
    desc = ComplexDescriptor(6, 1, Char.ZERO)
    assert sub.generators[0] == desc.generator((1, 2, 3)).differential()


def test_mixed_full_count_example():
    sub = certificate_generators(CertificateFamily.MIXED_FULL, 6, 1, Char.ZERO)
    assert len(sub) == 16


def test_mixed_base_n4_content():
    sub = certificate_generators(CertificateFamily.MIXED_BASE, 4, 2, Char.TWO)
    assert sub.labels == [
        "1",
        "s{1}",
        "s{1,2}",
        "s{1,3}",
        "s{1,4}",
        "d s{1,2,3}",
        "s{1,2,3}",
    ]
    assert len(sub) == 7


def test_family_sizes_match_formulas():
    for n in range(1, 13):
        for family, block_size in (
            (CertificateFamily.TRIPLE_DIFFS, None),
            (CertificateFamily.BLOCK_DIFFS, 4),
            (CertificateFamily.BLOCK_DIFFS, 5),
            (CertificateFamily.MIXED_BASE, None),
            (CertificateFamily.MIXED_FULL, None),
        ):
            sub = certificate_generators(family, n, 1, Char.ZERO, block_size=block_size)
            assert len(sub) == expected_family_size(family, n, block_size), (family, n)


def test_small_n_gives_empty_triple_section():
    assert len(certificate_generators(CertificateFamily.TRIPLE_DIFFS, 2, 1, Char.ZERO)) == 0
    assert len(certificate_generators(CertificateFamily.BLOCK_DIFFS, 3, 1, Char.ZERO, block_size=4)) == 0
    assert len(certificate_generators(CertificateFamily.MIXED_BASE, 2, 1, Char.ZERO)) == 3


def test_block_size_validation():
    with pytest.raises(ValueError):
        certificate_generators(CertificateFamily.BLOCK_DIFFS, 6, 1, Char.ZERO, block_size=2)


def test_submodule_validation():
    desc = ComplexDescriptor(2, 1, Char.ZERO)
    with pytest.raises(ValueError):
        Submodule([desc.one(), desc.one()], ["a", "b"])
    with pytest.raises(ValueError):
        Submodule([desc.one()], ["a", "b"])


def test_injectivity_of_iota_on_triples():
    g = iota(3, 1, Char.ZERO)
    sub = certificate_generators(CertificateFamily.TRIPLE_DIFFS, 3, 1, Char.ZERO)
    report = check_injectivity(g, sub, random.Random(0))
    assert report.injective and report.rank == 1 and report.expected == 1


def test_injectivity_of_iota_on_mixed_full():
    g = iota(3, 1, Char.ZERO)
    sub = certificate_generators(CertificateFamily.MIXED_FULL, 3, 1, Char.ZERO)
    report = check_injectivity(g, sub, random.Random(0))
    assert report.injective and report.rank == 8


def test_zero_generator_produces_unit_witness():
    g = iota(2, 1, Char.ZERO)
    sub = Submodule([g.source.one(), g.source.zero()], ["1", "0"])
    report = check_injectivity(g, sub, random.Random(0))
    assert not report.injective
    assert report.rank == 1
    assert report.witness is not None
    assert report.witness[0].is_zero() and not report.witness[1].is_zero()


def test_bound_values():
    assert improved_bound(3) == 8
    assert improved_bound(4) == 10
    assert improved_bound(5) == 12
    assert improved_bound(6) == 16
    assert classical_bound(1) == 2
    assert classical_bound(2) == 4
    assert classical_bound(3) == 8
    assert classical_bound(6) == 14


def test_bound_report_fields():
    g = iota(3, 1, Char.ZERO)
    report = bound_report(g, method=RankMethod.EXACT)
    data = report.to_json_dict()
    assert data == {
        "n": 3,
        "m": 1,
        "char": 0,
        "rank": 8,
        "theorem_A": 8,
        "eqn07": 8,
        "satisfies_A": True,
        "grading": "full",
    }


def test_grading_label_modes():
    rng = random.Random(1)
    assert grading_label(iota(3, 1, Char.ZERO)) == "full"
    g = random_chain_map(3, 1, Char.ZERO, rng, grading=GradingMode.PARITY)
    assert grading_label(g) in ("full", "parity")


def test_rank_dominates_restricted_rank():
    rng = random.Random(2)
    for char in (Char.ZERO, Char.TWO):
        g = random_chain_map(4, 1, char, rng)
        total = rank(g, RankMethod.MODULAR, rng)
        for family in (CertificateFamily.TRIPLE_DIFFS, CertificateFamily.MIXED_BASE):
            sub = certificate_generators(family, 4, 1, char)
            assert total >= restricted_rank(g, sub.generators, RankMethod.MODULAR, rng)


def test_char0_full_grading_sweep():
    rng = random.Random(3)
    for n in (3, 4):
        sub = certificate_generators(CertificateFamily.MIXED_FULL, n, 1, Char.ZERO)
        for _ in range(10):
            g = random_chain_map(n, 1, Char.ZERO, rng, grading=GradingMode.FULL)
            report = check_injectivity(g, sub, rng)
            assert report.injective
            assert rank(g, RankMethod.MODULAR, rng) >= improved_bound(n)


def test_char2_mixed_base_sweep():
    rng = random.Random(4)
    for n in (3, 4):
        sub = certificate_generators(CertificateFamily.MIXED_BASE, n, 1, Char.TWO)
        for _ in range(10):
            g = random_chain_map(n, 1, Char.TWO, rng)
            assert check_injectivity(g, sub, rng).injective


def test_search_harness_runs():
    result = search_noninjective_char2(trials=20, rng=random.Random(5))
    if result is not None:
        g, report = result
        assert not report.injective
        assert report.witness is not None
