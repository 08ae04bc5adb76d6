import random

import pytest

from koszulrank.chain_maps import RankMethod, iota, rank, verify_chain_map
from koszulrank.certificates import bound_report
from koszulrank.hb_model import (
    ComplexMap,
    FiltComplex,
    Generator,
    TruncationError,
    VanishingHypothesisError,
    compose_to_gamma,
    construct_alpha,
    identity_map,
    koszul_filt_complex,
    rank_two_model,
    shuffled_complex,
    twisted_two_var_model,
    verify_alpha,
    verify_beta,
    verify_filtration,
)
from koszulrank.koszul import ComplexDescriptor
from koszulrank.polynomials import Char, Poly


def _complex_map_of(g, source_filt, target_filt):
    """View a generator-image chain map as a map of filtered complexes."""
    images = []
    for indices in source_filt.index_sets:
        img = g.images[indices]
        position = {s: i for i, s in enumerate(target_filt.index_sets)}
        images.append({position[jset]: poly for jset, poly in img.coeffs.items()})
    return ComplexMap(source_filt, target_filt, images)


# ---------------------------------------------------------------------------
# filtration verification
# ---------------------------------------------------------------------------


def test_koszul_word_length_filtration_passes():
    for desc in (ComplexDescriptor(3, 0, Char.ZERO), ComplexDescriptor(2, 2, Char.TWO)):
        report = verify_filtration(koszul_filt_complex(desc))
        assert report.passed, report.violations


def test_level_violation_is_reported():
    bad = FiltComplex(
        1,
        Char.ZERO,
        [Generator("1", 0, 0), Generator("a", 1, 1), Generator("b", 2, 1)],
        {2: [(1, Poly.variable(1, Char.ZERO, 1))]},
        [1, 0, 0],
    )
    report = verify_filtration(bad)
    assert not report.lowering_ok
    assert any("level" in v for v in report.violations)


def test_zero_differential_passes_lowering():
    c = FiltComplex(1, Char.ZERO, [Generator("1", 0, 0)], {}, [1])
    report = verify_filtration(c)
    assert report.passed


def test_d_squared_violation_detected():
    t = Poly.variable(1, Char.ZERO, 1)
    bad = FiltComplex(
        1,
        Char.ZERO,
        [Generator("1", 0, 0), Generator("a", 1, 1), Generator("b", 2, 2)],
        {1: [(0, t)], 2: [(1, t)]},
        [1, 0, 0],
    )
    report = verify_filtration(bad)
    assert not report.d_squared_ok


def test_fixture_models_pass():
    assert verify_filtration(rank_two_model(1, Char.TWO)).passed
    assert verify_filtration(rank_two_model(0, Char.ZERO)).passed
    for char in (Char.ZERO, Char.TWO):
        assert verify_filtration(twisted_two_var_model(char)).passed


# ---------------------------------------------------------------------------
# inbound maps
# ---------------------------------------------------------------------------


def test_identity_alpha_passes_where_hypothesis_holds():
    # level 0: cohomology is the base field in degree 0
    c = koszul_filt_complex(ComplexDescriptor(2, 0, Char.ZERO))
    report = verify_alpha(identity_map(c))
    assert report.passed, report.failures
    # characteristic 2, one variable: cohomology lives in degrees <= level
    c = koszul_filt_complex(ComplexDescriptor(1, 2, Char.TWO))
    report = verify_alpha(identity_map(c))
    assert report.passed, report.failures


def test_identity_alpha_reports_hypothesis_separately():
    c = koszul_filt_complex(ComplexDescriptor(2, 1, Char.ZERO))
    report = verify_alpha(identity_map(c))
    assert report.chain_map_ok and report.projection_ok
    assert not report.hypothesis_ok  # classes of t^a survive above the level
    assert not report.passed


def test_alpha_with_unit_in_augmentation_kernel_fails_projection():
    # multiplication by t1 commutes with the differential but sends 1 into
    # the augmentation kernel
    c = koszul_filt_complex(ComplexDescriptor(2, 0, Char.ZERO))
    t1 = Poly.variable(2, Char.ZERO, 1)
    a = ComplexMap(c, c, [c.elem_scale(c.gen_elem(i), t1) for i in range(len(c.generators))])
    report = verify_alpha(a)
    assert report.chain_map_ok
    assert not report.projection_ok


def test_construct_alpha_on_level0_target():
    for char in (Char.ZERO, Char.TWO):
        c = koszul_filt_complex(ComplexDescriptor(2, 0, char))
        alpha = construct_alpha(c, 1)
        report = verify_alpha(alpha)
        assert report.passed, report.failures


def test_construct_alpha_on_rank_two_model():
    c = rank_two_model(1, Char.TWO)
    alpha = construct_alpha(c, 1)
    assert verify_alpha(alpha).passed
    # the image of s1 solves d(x) = t1^2 * alpha(1), i.e. x = e up to a cocycle
    image = alpha.images[1]
    assert c.apply_diff(image) == {0: Poly.t_power(1, Char.TWO, 1, 2)}
    difference = c.elem_add(image, {1: -Poly.one(1, Char.TWO)})
    assert c.apply_diff(difference) == {}


def test_construct_alpha_hypothesis_failure():
    free_rank_one = FiltComplex(1, Char.ZERO, [Generator("1", 0, 0)], {}, [1])
    with pytest.raises(VanishingHypothesisError):
        construct_alpha(free_rank_one, 1)
    with pytest.raises(VanishingHypothesisError):
        construct_alpha(twisted_two_var_model(Char.ZERO), 0)


def test_construct_alpha_truncation_error():
    c = koszul_filt_complex(ComplexDescriptor(2, 0, Char.ZERO))
    with pytest.raises(TruncationError):
        construct_alpha(c, 1, max_degree=2)


# ---------------------------------------------------------------------------
# outbound maps
# ---------------------------------------------------------------------------


def test_identity_beta_passes():
    c = koszul_filt_complex(ComplexDescriptor(2, 0, Char.ZERO))
    assert verify_beta(identity_map(c)).passed


def test_beta_filtration_violation():
    c = koszul_filt_complex(ComplexDescriptor(2, 0, Char.ZERO))
    images = [c.gen_elem(i) for i in range(len(c.generators))]
    top = c.index_sets.index((1, 2))
    images[c.index_sets.index((1,))] = c.gen_elem(top)  # level 1 -> word-length 2
    report = verify_beta(ComplexMap(c, c, images))
    assert not report.filtration_ok


def test_beta_on_rank_two_model():
    m = 1
    c = rank_two_model(m, Char.TWO)
    k0 = koszul_filt_complex(ComplexDescriptor(1, 0, Char.TWO))
    beta = ComplexMap(
        c, k0, [k0.gen_elem(0), k0.elem_scale(k0.gen_elem(1), Poly.t_power(1, Char.TWO, 1, m))]
    )
    assert verify_beta(beta).passed


def test_beta_on_twisted_model():
    c = twisted_two_var_model(Char.ZERO)
    k0 = koszul_filt_complex(ComplexDescriptor(2, 0, Char.ZERO))
    pos = {s: i for i, s in enumerate(k0.index_sets)}
    images = [
        k0.gen_elem(pos[()]),
        k0.gen_elem(pos[(1,)]),
        k0.gen_elem(pos[(2,)]),
        k0.zero_elem(),  # the twist generator dies
        k0.gen_elem(pos[(1, 2)]),
    ]
    report = verify_beta(ComplexMap(c, k0, images))
    assert report.passed, report.failures


# ---------------------------------------------------------------------------
# composition
# ---------------------------------------------------------------------------


def test_identity_alpha_composed_with_multiplicative_beta():
    desc_m = ComplexDescriptor(2, 1, Char.ZERO)
    desc_0 = ComplexDescriptor(2, 0, Char.ZERO)
    km = koszul_filt_complex(desc_m)
    k0 = koszul_filt_complex(desc_0)
    base = iota(2, 1, Char.ZERO)
    beta = _complex_map_of(base, km, k0)
    gamma = compose_to_gamma(identity_map(km), beta)
    assert gamma == base


def test_toy_pipeline_rank_two():
    m = 1
    c = rank_two_model(m, Char.TWO)
    alpha = construct_alpha(c, m)
    k0 = koszul_filt_complex(ComplexDescriptor(1, 0, Char.TWO))
    beta = ComplexMap(
        c, k0, [k0.gen_elem(0), k0.elem_scale(k0.gen_elem(1), Poly.t_power(1, Char.TWO, 1, m))]
    )
    assert verify_beta(beta).passed
    gamma = compose_to_gamma(alpha, beta)
    assert verify_chain_map(gamma).passed
    assert rank(gamma, RankMethod.EXACT) == 2


def test_pipeline_n3_satisfies_bound():
    for char in (Char.ZERO, Char.TWO):
        k30 = koszul_filt_complex(ComplexDescriptor(3, 0, char))
        alpha = construct_alpha(k30, 1)
        gamma = compose_to_gamma(alpha, identity_map(k30))
        assert verify_chain_map(gamma).passed
        report = bound_report(gamma, rng=random.Random(0))
        assert report.satisfies_A
        assert rank(gamma, RankMethod.EXACT) <= len(k30.generators)


def test_rank_bounded_by_middle_complex_size():
    m = 1
    c = rank_two_model(m, Char.TWO)
    alpha = construct_alpha(c, m)
    k0 = koszul_filt_complex(ComplexDescriptor(1, 0, Char.TWO))
    beta = ComplexMap(
        c, k0, [k0.gen_elem(0), k0.elem_scale(k0.gen_elem(1), Poly.t_power(1, Char.TWO, 1, m))]
    )
    gamma = compose_to_gamma(alpha, beta)
    assert rank(gamma, RankMethod.EXACT) <= len(c.generators)


def test_construct_alpha_rank_invariant_under_basis_order():
    rng = random.Random(5)
    base = koszul_filt_complex(ComplexDescriptor(3, 0, Char.ZERO))
    ranks = set()
    for _ in range(5):
        shuffled, unshuffle = shuffled_complex(base, rng)
        alpha = construct_alpha(shuffled, 1)
        gamma = compose_to_gamma(alpha, unshuffle)
        ranks.add(rank(gamma, RankMethod.EXACT))
    assert len(ranks) == 1


def test_compose_requires_matching_middle():
    c = rank_two_model(1, Char.TWO)
    other = rank_two_model(2, Char.TWO)
    alpha = construct_alpha(c, 1)
    k0 = koszul_filt_complex(ComplexDescriptor(1, 0, Char.TWO))
    beta = ComplexMap(
        other, k0, [k0.gen_elem(0), k0.elem_scale(k0.gen_elem(1), Poly.t_power(1, Char.TWO, 1, 2))]
    )
    with pytest.raises(ValueError):
        compose_to_gamma(alpha, beta)


# ---------------------------------------------------------------------------
# file format
# ---------------------------------------------------------------------------


def test_json_round_trip():
    for c in (
        twisted_two_var_model(Char.ZERO),
        rank_two_model(2, Char.TWO),
        koszul_filt_complex(ComplexDescriptor(2, 1, Char.ZERO)),
    ):
        again = FiltComplex.from_json(c.to_json())
        assert again == c


def test_json_loader_rejects_invalid_complex():
    bad = FiltComplex(
        1,
        Char.ZERO,
        [Generator("1", 0, 0), Generator("a", 1, 1), Generator("b", 2, 1)],
        {2: [(1, Poly.variable(1, Char.ZERO, 1))]},
        [1, 0, 0],
    )
    with pytest.raises(ValueError):
        FiltComplex.from_json(bad.to_json())
