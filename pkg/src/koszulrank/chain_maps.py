"""Module maps from a level-m Koszul complex down to level 0.

A map is stored by its images on the 2^n exterior basis monomials and
extended linearly over the polynomial ring, so linearity holds by
construction and only the differential law needs runtime verification.
The multiplicative baseline map sends s_I to the product of the t_i^m over
I times s_I; every admissible map arises from it by homotopy perturbation,
which is also how random maps are generated here.

Ranks are taken over the fraction field of the polynomial ring, either by
fraction-free elimination (authoritative) or by randomized evaluation in a
large field of the same characteristic (fast; a full answer is certain, a
deficient answer is wrong with negligible probability).
"""

from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

from .koszul import ComplexDescriptor, IndexSet, KElem
from .linalg import bareiss_rank, evaluation_rank
from .polynomials import Char, Poly

__all__ = [
    "GradingMode",
    "RankMethod",
    "ChainMap",
    "Homotopy",
    "ChainMapReport",
    "iota",
    "verify_chain_map",
    "homotopy_perturb",
    "is_degree_preserving",
    "rank",
    "restricted_rank",
    "matrix_of_images",
    "random_homotopy",
    "random_chain_map",
    "pair_coefficient",
    "pair_has_multiplicative_form",
    "prime_bits",
]


class GradingMode(Enum):
    FULL = "full"
    PARITY = "parity"


class RankMethod(Enum):
    MODULAR = "modular"
    EXACT = "exact"


def prime_bits() -> int:
    """Bit size for modular evaluation fields (env KOSZUL_PRIME_BITS, default 31)."""
    return int(os.environ.get("KOSZUL_PRIME_BITS", "31"))


class ChainMap:
    """Linear map between Koszul complexes, stored on exterior generators.

    The constructor checks only shape (every basis monomial has an image in
    the level-0 target); the algebraic laws are checked by
    :func:`verify_chain_map` so that deliberately broken maps can still be
    built, e.g. as plain matrices for rank experiments.
    """

    __slots__ = ("source", "target", "images")

    def __init__(self, source: ComplexDescriptor, target: ComplexDescriptor, images: Mapping[IndexSet, KElem]):
        if source.nvars != target.nvars or source.char is not target.char:
            raise ValueError("source and target must share variables and characteristic")
        if target.level != 0:
            raise ValueError("target must be the level-0 complex")
        fixed: dict[IndexSet, KElem] = {}
        for indices in source.index_sets():
            if indices not in images:
                raise ValueError(f"missing image for basis monomial s{set(indices) or '{}'}")
            img = images[indices]
            if img.desc != target:
                raise ValueError(f"image of {indices} lives in the wrong complex")
            fixed[indices] = img
        self.source = source
        self.target = target
        self.images = fixed

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainMap):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.images == other.images
        )

    __hash__ = None

    def apply(self, x: KElem) -> KElem:
        """Linear extension of the generator images."""
        if x.desc != self.source:
            raise ValueError("element does not live in the source complex")
        acc = self.target.zero()
        for indices, poly in x.coeffs.items():
            acc = acc + self.images[indices].scale(poly)
        return acc

    # ---------- serialization ----------

    def to_json_dict(self) -> dict:
        return {
            "n": self.source.nvars,
            "m": self.source.level,
            "char": self.source.char.value,
            "images": {
                ",".join(map(str, indices)): str(img)
                for indices, img in self.images.items()
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, data: dict) -> ChainMap:
        char = Char(data["char"])
        source = ComplexDescriptor(data["n"], data["m"], char)
        target = ComplexDescriptor(data["n"], 0, char)
        images = {}
        for key, text in data["images"].items():
            indices = tuple(int(v) for v in key.split(",")) if key else ()
            images[indices] = KElem.parse(text, target)
        return cls(source, target, images)

    @classmethod
    def from_json(cls, text: str) -> ChainMap:
        return cls.from_json_dict(json.loads(text))


@dataclass
class Homotopy:
    """Generator-indexed values of a degree -1 correction term.

    The empty index set must map to zero so perturbed maps stay unital.
    """

    values: dict[IndexSet, KElem] = field(default_factory=dict)

    def __post_init__(self):
        empty = self.values.get(())
        if empty is not None and not empty.is_zero():
            raise ValueError("a homotopy must vanish on the unit")

    def value(self, indices: IndexSet, target: ComplexDescriptor) -> KElem:
        return self.values.get(tuple(indices), target.zero())

    def applied_to(self, x: KElem, target: ComplexDescriptor) -> KElem:
        """Linear extension to an arbitrary source element."""
        acc = target.zero()
        for indices, poly in x.coeffs.items():
            val = self.values.get(indices)
            if val is not None:
                acc = acc + val.scale(poly)
        return acc


@dataclass
class ChainMapReport:
    unital: bool
    commutes: bool
    lifts_projection: bool
    failures: list[str]

    @property
    def passed(self) -> bool:
        return self.unital and self.commutes


def iota(n: int, m: int, char: Char) -> ChainMap:
    """The multiplicative baseline map s_I -> (prod_{i in I} t_i^m) s_I."""
    source = ComplexDescriptor(n, m, char)
    target = ComplexDescriptor(n, 0, char)
    images = {}
    for indices in source.index_sets():
        exps = [0] * n
        for i in indices:
            exps[i - 1] = m
        poly = Poly.monomial(n, char, exps)
        images[indices] = KElem(target, {indices: poly})
    return ChainMap(source, target, images)


def verify_chain_map(g: ChainMap) -> ChainMapReport:
    """Check unitality and the differential law on every generator.

    The homology of the level-0 target is spanned by the class of 1, so a
    unital map commuting with differentials automatically lifts the canonical
    projection in homology; the report states that conjunction.
    """
    failures: list[str] = []
    unital = g.images[()] == g.target.one()
    if not unital:
        failures.append("gamma(1) != 1")
    commutes = True
    for indices in g.source.index_sets():
        if not indices:
            continue
        left = g.images[indices].differential()
        right = g.apply(g.source.generator(indices).differential())
        if left != right:
            commutes = False
            failures.append(f"differential law fails at I={{{','.join(map(str, indices))}}}")
    return ChainMapReport(unital, commutes, unital and commutes, failures)


def homotopy_perturb(g: ChainMap, h: Homotopy) -> ChainMap:
    """The perturbed map x -> g(x) + d(h(x)) + h(d(x)) on generators.

    Perturbation preserves the chain-map law and unitality, so the result of
    perturbing a valid map is again valid by construction.
    """
    empty = h.values.get(())
    if empty is not None and not empty.is_zero():
        raise ValueError("perturbing with a homotopy that hits the unit breaks unitality")
    images = {}
    for indices in g.source.index_sets():
        img = g.images[indices]
        val = h.values.get(indices)
        if val is not None:
            img = img + val.differential()
        if indices:
            img = img + h.applied_to(g.source.generator(indices).differential(), g.target)
        images[indices] = img
    return ChainMap(g.source, g.target, images)


def is_degree_preserving(g: ChainMap, mode: GradingMode) -> bool:
    """Whether every generator image is homogeneous of the expected degree.

    FULL compares graded degrees on the nose; PARITY only mod 2.  Both use
    the grading convention of the map's characteristic.
    """
    sd = g.source.s_degree
    td = g.source.char.t_degree
    s0 = g.source.char.s_degree(0)
    for indices, img in g.images.items():
        expected = sd * len(indices)
        for jset, poly in img.coeffs.items():
            base = s0 * len(jset)
            for mono in poly.terms:
                degree = base + td * sum(mono)
                if mode is GradingMode.FULL:
                    if degree != expected:
                        return False
                elif (degree - expected) % 2:
                    return False
    return True


def matrix_of_images(target: ComplexDescriptor, columns: Sequence[KElem]):
    """Coefficient matrix of target elements over the exterior basis.

    Rows are indexed by the target's index sets in (word-length, lex) order;
    returns (matrix, row_index_sets).
    """
    rows = list(target.index_sets())
    zero = Poly.zero(target.nvars, target.char)
    matrix = [[col.coeffs.get(jset, zero) for col in columns] for jset in rows]
    return matrix, rows


def _column_rank(target, columns, method: RankMethod, rng, trials: int) -> int:
    matrix, _ = matrix_of_images(target, columns)
    if method is RankMethod.EXACT:
        return bareiss_rank(matrix)
    if rng is None:
        rng = random.Random(0x5EED)
    return evaluation_rank(matrix, target.char, rng, trials=trials, bits=prime_bits())


def rank(g: ChainMap, method: RankMethod = RankMethod.MODULAR, rng=None, trials: int = 5) -> int:
    """Rank of the map over the fraction field of the polynomial ring."""
    columns = [g.images[indices] for indices in g.source.index_sets()]
    return _column_rank(g.target, columns, method, rng, trials)


def restricted_rank(
    g: ChainMap,
    generators: Sequence[KElem],
    method: RankMethod = RankMethod.MODULAR,
    rng=None,
    trials: int = 5,
) -> int:
    """Rank of the images of the given source elements over the fraction field.

    Equals len(generators) exactly when the localized map is injective on
    their span (provided the generators themselves are independent).
    """
    columns = [g.apply(gen) for gen in generators]
    return _column_rank(g.target, columns, method, rng, trials)


# ---------------------------------------------------------------------------
# structure of pair images
# ---------------------------------------------------------------------------


def pair_coefficient(g: ChainMap, i: int, j: int) -> Poly:
    """Coefficient of s_{i,j} in the image of s_{i,j} (word-length 2 part)."""
    if not 1 <= i < j <= g.source.nvars:
        raise ValueError("need 1 <= i < j <= nvars")
    img = g.images[(i, j)].project_wordlength(2)
    poly = img.coeffs.get((i, j))
    return poly if poly is not None else Poly.zero(g.source.nvars, g.source.char)


def pair_has_multiplicative_form(g: ChainMap, i: int, j: int) -> bool:
    """Whether that coefficient equals t_i^m t_j^m exactly (reported, not required)."""
    m = g.source.level
    expected = g.source.t(i, m) * g.source.t(j, m)
    return pair_coefficient(g, i, j) == expected


# ---------------------------------------------------------------------------
# random generation
# ---------------------------------------------------------------------------


def _random_mono(rng, nvars: int, total: int) -> tuple:
    exps = [0] * nvars
    for _ in range(total):
        exps[rng.randrange(nvars)] += 1
    return tuple(exps)


def _random_term(rng, desc: ComplexDescriptor, word_degree: int, grading) -> tuple | None:
    """One (index_set, mono) pair subject to the degree constraint, or None."""
    n = desc.nvars
    char = desc.char
    target = word_degree - 1  # the correction lowers degree by one
    s0 = char.s_degree(0)
    cap = 2 * (desc.level + 1)
    if grading is GradingMode.FULL:
        if char is Char.TWO:
            if target < 0:
                return None
            size = rng.randint(0, n)
            tdeg = target  # exterior generators of level 0 have degree 0
        else:
            sizes = [k for k in range(n + 1) if k <= target and (target - k) % 2 == 0]
            if not sizes:
                return None
            size = rng.choice(sizes)
            tdeg = (target - size) // 2
    elif grading is GradingMode.PARITY:
        if char is Char.TWO:
            size = rng.randint(0, n)
            tdeg = rng.randrange(0, cap)
            if (tdeg - target) % 2:
                tdeg += 1
        else:
            size = rng.randint(0, n)
            if (size * s0 - target) % 2:
                size = size + 1 if size < n else size - 1
            tdeg = rng.randrange(0, cap)
    else:
        size = rng.randint(0, n)
        tdeg = rng.randrange(0, cap)
    jset = tuple(sorted(rng.sample(range(1, n + 1), size)))
    return jset, _random_mono(rng, n, tdeg)


def random_homotopy(
    source: ComplexDescriptor,
    rng,
    grading: GradingMode | None = None,
    max_terms: int = 3,
) -> Homotopy:
    """Random sparse correction term, degree-constrained per grading mode.

    Each nonempty index set receives at most ``max_terms`` random monomial
    summands with coefficients +-1 (always 1 in characteristic 2); small
    supports keep exact rank computations tractable.
    """
    target = ComplexDescriptor(source.nvars, 0, source.char)
    sd = source.s_degree
    values: dict[IndexSet, KElem] = {}
    for indices in source.index_sets():
        if not indices:
            continue
        coeffs: dict[IndexSet, Poly] = {}
        for _ in range(rng.randint(0, max_terms)):
            term = _random_term(rng, source, sd * len(indices), grading)
            if term is None:
                continue
            jset, mono = term
            sign = 1 if source.char is Char.TWO else rng.choice((1, -1))
            poly = Poly.monomial(source.nvars, source.char, mono, sign)
            prev = coeffs.get(jset)
            s = poly if prev is None else prev + poly
            if s.terms:
                coeffs[jset] = s
            else:
                coeffs.pop(jset, None)
        if coeffs:
            values[indices] = KElem(target, coeffs)
    return Homotopy(values)


def random_chain_map(
    n: int,
    m: int,
    char: Char,
    rng,
    grading: GradingMode | None = None,
    max_terms: int = 3,
) -> ChainMap:
    """A random valid map: the baseline perturbed by a random homotopy."""
    base = iota(n, m, char)
    h = random_homotopy(base.source, rng, grading=grading, max_terms=max_terms)
    return homotopy_perturb(base, h)
