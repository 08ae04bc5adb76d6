"""Filtered free cochain complexes over the polynomial ring, and the maps
that route a level-m Koszul complex through such a complex down to level 0.

A complex here is free on finitely many graded generators, with a twisted
differential given by a polynomial matrix, a filtration level per generator
(the differential must lower levels), and an augmentation to the base field
that is onto in cohomology.  Complexes of this shape admit a map in from the
level-m Koszul complex whenever their cohomology vanishes above m, and a
filtration-preserving map out to the level-0 Koszul complex; composing the
two yields a unital chain map whose rank is bounded by the number of
generators.  This module verifies instances of all three statements and
constructs the inbound map by solving the lifting equations degreewise with
exact linear algebra.

Elements are sparse dicts mapping generator index -> polynomial coefficient.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .chain_maps import ChainMap
from .koszul import ComplexDescriptor, KElem, IndexSet
from .linalg import field_rank, solve_linear
from .polynomials import Char, Poly, monomials_of_degree

__all__ = [
    "Generator",
    "FiltComplex",
    "ComplexMap",
    "FiltrationReport",
    "AlphaReport",
    "BetaReport",
    "VanishingHypothesisError",
    "TruncationError",
    "LiftingError",
    "verify_filtration",
    "verify_alpha",
    "construct_alpha",
    "verify_beta",
    "compose_to_gamma",
    "koszul_filt_complex",
    "rank_two_model",
    "twisted_two_var_model",
    "shuffled_complex",
    "identity_map",
]


class VanishingHypothesisError(ValueError):
    """Cohomology fails to vanish above the requested level."""


class TruncationError(ValueError):
    """The degree truncation is too small for the requested construction."""


class LiftingError(RuntimeError):
    """A lifting equation turned out unsolvable (inconsistent input complex)."""


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    level: int


class FiltComplex:
    """Free graded complex over the polynomial ring with filtration and augmentation."""

    def __init__(self, nvars: int, char: Char, generators, diff, augmentation):
        self.nvars = nvars
        self.char = char
        self.generators: list[Generator] = list(generators)
        # diff maps column generator index -> list of (row generator index, Poly)
        self.diff: dict[int, list] = {
            col: [(row, poly) for row, poly in entries if poly.terms]
            for col, entries in diff.items()
        }
        self.diff = {col: entries for col, entries in self.diff.items() if entries}
        self.augmentation: list = [self._norm_scalar(v) for v in augmentation]
        if len(self.augmentation) != len(self.generators):
            raise ValueError("augmentation vector length must match the basis")
        for col, entries in self.diff.items():
            for row, poly in entries:
                if poly.nvars != nvars or poly.char is not char:
                    raise ValueError("differential entry does not match the complex")
                if not 0 <= row < len(self.generators) or not 0 <= col < len(self.generators):
                    raise ValueError("differential index out of range")
        self.koszul_descriptor: ComplexDescriptor | None = None
        self.index_sets: list[IndexSet] | None = None

    def _norm_scalar(self, v):
        if isinstance(v, str):
            v = Fraction(v)
        if self.char is Char.TWO:
            if isinstance(v, Fraction):
                v = v.numerator
            return v & 1
        if isinstance(v, Fraction) and v.denominator == 1:
            return int(v)
        return v

    def __eq__(self, other):
        if not isinstance(other, FiltComplex):
            return NotImplemented
        return (
            self.nvars == other.nvars
            and self.char is other.char
            and self.generators == other.generators
            and {c: sorted(e, key=lambda rp: rp[0]) for c, e in self.diff.items()}
            == {c: sorted(e, key=lambda rp: rp[0]) for c, e in other.diff.items()}
            and self.augmentation == other.augmentation
        )

    __hash__ = None

    # ---------- elements ----------

    def zero_elem(self) -> dict:
        return {}

    def gen_elem(self, index: int) -> dict:
        return {index: Poly.one(self.nvars, self.char)}

    def elem_add(self, a: dict, b: dict) -> dict:
        out = dict(a)
        for g, poly in b.items():
            s = out.get(g)
            s = poly if s is None else s + poly
            if s.terms:
                out[g] = s
            else:
                out.pop(g, None)
        return out

    def elem_scale(self, a: dict, poly: Poly) -> dict:
        if not poly.terms:
            return {}
        out = {}
        for g, coeff in a.items():
            prod = poly * coeff
            if prod.terms:
                out[g] = prod
        return out

    def apply_diff(self, a: dict) -> dict:
        out: dict = {}
        for g, coeff in a.items():
            for row, poly in self.diff.get(g, ()):
                prod = coeff * poly
                if not prod.terms:
                    continue
                s = out.get(row)
                s = prod if s is None else s + prod
                if s.terms:
                    out[row] = s
                else:
                    out.pop(row, None)
        return out

    def augment(self, a: dict):
        """Evaluate the augmentation (variables act trivially, so t -> 0)."""
        zero_mono = (0,) * self.nvars
        total = 0
        for g, poly in a.items():
            c = poly.terms.get(zero_mono)
            if c:
                total = total + c * self.augmentation[g]
        if self.char is Char.TWO:
            total &= 1
        return total

    def max_level(self) -> int:
        return max((g.level for g in self.generators), default=0)

    # ---------- graded pieces ----------

    def basis_at(self, degree: int) -> list:
        """(mono, generator index) pairs spanning one graded degree."""
        td = self.char.t_degree
        out = []
        for idx, gen in enumerate(self.generators):
            rem = degree - gen.degree
            if rem < 0 or rem % td:
                continue
            for mono in monomials_of_degree(self.nvars, rem // td):
                out.append((mono, idx))
        return out

    def _diff_columns(self, basis, next_basis):
        position = {b: i for i, b in enumerate(next_basis)}
        two = self.char is Char.TWO
        columns = []
        for mono, gidx in basis:
            col: dict = {}
            for row, poly in self.diff.get(gidx, ()):
                for pm, coeff in poly.terms.items():
                    key = (tuple(a + b for a, b in zip(mono, pm)), row)
                    pos = position[key]
                    if two:
                        if pos in col:
                            del col[pos]
                        else:
                            col[pos] = 1
                    else:
                        s = col.get(pos, 0) + coeff
                        if s:
                            col[pos] = s
                        else:
                            del col[pos]
            if col:
                columns.append(set(col) if two else col)
        return columns

    def homology_dims(self, max_degree: int) -> dict[int, int]:
        """Cohomology dimension per degree by exact degreewise elimination."""
        basis = self.basis_at(0)
        prev_rank = 0
        dims: dict[int, int] = {}
        for degree in range(max_degree + 1):
            next_basis = self.basis_at(degree + 1)
            rank = field_rank(self._diff_columns(basis, next_basis), self.char)
            dims[degree] = len(basis) - rank - prev_rank
            basis = next_basis
            prev_rank = rank
        return dims

    def unit_cocycle(self) -> dict | None:
        """A degree-0 cocycle with augmentation 1, or None if none exists."""
        basis = self.basis_at(0)
        if not basis:
            return None
        next_basis = self.basis_at(1)
        position = {b: i for i, b in enumerate(basis)}
        rows: dict = {}
        zero_mono = (0,) * self.nvars
        for mono, gidx in basis:
            j = position[(mono, gidx)]
            for row, poly in self.diff.get(gidx, ()):
                for pm, coeff in poly.terms.items():
                    key = (tuple(a + b for a, b in zip(mono, pm)), row)
                    rows.setdefault(key, {})[j] = coeff if self.char is Char.ZERO else 1
        system = [(coeffs, 0) for coeffs in rows.values()]
        aug_row = {}
        for mono, gidx in basis:
            if mono == zero_mono and self.augmentation[gidx]:
                aug_row[position[(mono, gidx)]] = self.augmentation[gidx]
        if not aug_row:
            return None
        system.append((aug_row, 1))
        solution = solve_linear(system, self.char)
        if solution is None:
            return None
        elem: dict = {}
        for j, value in solution.items():
            mono, gidx = basis[j]
            term = Poly.monomial(self.nvars, self.char, mono, value)
            prev = elem.get(gidx)
            elem[gidx] = term if prev is None else prev + term
        return {g: p for g, p in elem.items() if p.terms}

    # ---------- serialization ----------

    def to_json_dict(self) -> dict:
        return {
            "n": self.nvars,
            "char": self.char.value,
            "basis": [
                {"name": g.name, "degree": g.degree, "level": g.level}
                for g in self.generators
            ],
            "diff": sorted(
                [row, col, str(poly)]
                for col, entries in self.diff.items()
                for row, poly in entries
            ),
            "augmentation": [str(v) for v in self.augmentation],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, data: dict) -> "FiltComplex":
        char = Char(data["char"])
        nvars = data["n"]
        gens = [Generator(b["name"], b["degree"], b["level"]) for b in data["basis"]]
        diff: dict[int, list] = {}
        for row, col, text in data["diff"]:
            diff.setdefault(col, []).append((row, Poly.parse(text, nvars, char)))
        c = cls(nvars, char, gens, diff, data["augmentation"])
        report = verify_filtration(c)
        if not report.passed:
            raise ValueError("complex file violates invariants: " + "; ".join(report.violations))
        return c

    @classmethod
    def from_json(cls, text: str) -> "FiltComplex":
        return cls.from_json_dict(json.loads(text))


@dataclass
class FiltrationReport:
    d_squared_ok: bool
    levels_ok: bool
    lowering_ok: bool
    augmentation_ok: bool
    surjection_ok: bool
    violations: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            self.d_squared_ok
            and self.levels_ok
            and self.lowering_ok
            and self.augmentation_ok
            and self.surjection_ok
        )


def verify_filtration(c: FiltComplex) -> FiltrationReport:
    """Check the complex axioms: d^2 = 0, level bookkeeping, lowering, augmentation."""
    violations: list[str] = []
    d_squared_ok = True
    for col in range(len(c.generators)):
        dd = c.apply_diff(c.apply_diff(c.gen_elem(col)))
        if dd:
            d_squared_ok = False
            violations.append(f"d(d({c.generators[col].name})) != 0")
    top = c.max_level()
    used_levels = {g.level for g in c.generators}
    levels_ok = all(0 <= g.level for g in c.generators) and used_levels == set(range(top + 1))
    if not levels_ok:
        violations.append("filtration levels do not form a contiguous partition 0..L")
    lowering_ok = True
    for col, entries in c.diff.items():
        lvl = c.generators[col].level
        for row, poly in entries:
            if c.generators[row].level >= lvl:
                lowering_ok = False
                violations.append(
                    f"d({c.generators[col].name}) hits level {c.generators[row].level} >= {lvl}"
                )
    augmentation_ok = True
    for idx, gen in enumerate(c.generators):
        if c.augmentation[idx] and gen.degree != 0:
            augmentation_ok = False
            violations.append(f"augmentation supported on {gen.name} of degree {gen.degree}")
    zero_mono = (0,) * c.nvars
    for col in range(len(c.generators)):
        total = 0
        for row, poly in c.diff.get(col, ()):
            constant = poly.terms.get(zero_mono)
            if constant:
                total = total + constant * c.augmentation[row]
        if c.char is Char.TWO:
            total &= 1
        if total:
            augmentation_ok = False
            violations.append(f"augmentation does not annihilate d({c.generators[col].name})")
    surjection_ok = c.unit_cocycle() is not None
    if not surjection_ok:
        violations.append("no degree-0 cocycle with augmentation 1")
    return FiltrationReport(d_squared_ok, levels_ok, lowering_ok, augmentation_ok, surjection_ok, violations)


class ComplexMap:
    """Linear map between free complexes, stored on the source basis."""

    def __init__(self, source: FiltComplex, target: FiltComplex, images: list[dict]):
        if source.nvars != target.nvars or source.char is not target.char:
            raise ValueError("source and target must share variables and characteristic")
        if len(images) != len(source.generators):
            raise ValueError("need one image per source generator")
        self.source = source
        self.target = target
        self.images = [
            {g: p for g, p in img.items() if p.terms} for img in images
        ]

    def apply(self, elem: dict) -> dict:
        out = self.target.zero_elem()
        for g, poly in elem.items():
            out = self.target.elem_add(out, self.target.elem_scale(self.images[g], poly))
        return out

    def commutes_with_diff(self) -> list[str]:
        failures = []
        for col in range(len(self.source.generators)):
            lhs = self.target.apply_diff(self.images[col])
            rhs = self.apply(self.source.apply_diff(self.source.gen_elem(col)))
            if lhs != rhs:
                failures.append(self.source.generators[col].name)
        return failures


def identity_map(c: FiltComplex) -> ComplexMap:
    return ComplexMap(c, c, [c.gen_elem(i) for i in range(len(c.generators))])


# ---------------------------------------------------------------------------
# Koszul complexes as filtered complexes
# ---------------------------------------------------------------------------


def koszul_filt_complex(desc: ComplexDescriptor) -> FiltComplex:
    """The Koszul complex with its word-length filtration and unit augmentation."""
    index_sets = list(desc.index_sets())
    position = {s: i for i, s in enumerate(index_sets)}
    gens = [
        Generator(
            name=f"s{{{','.join(map(str, indices))}}}",
            degree=desc.s_degree * len(indices),
            level=len(indices),
        )
        for indices in index_sets
    ]
    diff: dict[int, list] = {}
    for indices in index_sets:
        entries = []
        for j, i in enumerate(indices):
            sign = 1 if (j % 2 == 0 or desc.char is Char.TWO) else -1
            poly = desc.t(i, desc.level + 1).scale(sign)
            entries.append((position[indices[:j] + indices[j + 1 :]], poly))
        if entries:
            diff[position[indices]] = entries
    augmentation = [1 if not indices else 0 for indices in index_sets]
    c = FiltComplex(desc.nvars, desc.char, gens, diff, augmentation)
    c.koszul_descriptor = desc
    c.index_sets = index_sets
    return c


def elem_to_kelem(c: FiltComplex, elem: dict) -> KElem:
    """Convert an element of a Koszul-built complex back to the sparse form."""
    if c.index_sets is None:
        raise ValueError("complex was not built from a Koszul descriptor")
    return KElem(c.koszul_descriptor, {c.index_sets[g]: poly for g, poly in elem.items()})


# ---------------------------------------------------------------------------
# the inbound map alpha
# ---------------------------------------------------------------------------


@dataclass
class AlphaReport:
    hypothesis_ok: bool
    chain_map_ok: bool
    projection_ok: bool
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.hypothesis_ok and self.chain_map_ok and self.projection_ok


def default_truncation(nvars: int, m: int, char: Char) -> int:
    return (m + 2) * nvars * char.t_degree


def verify_alpha(a: ComplexMap, max_degree: int | None = None) -> AlphaReport:
    """Verify a map from a level-m Koszul complex into a filtered complex.

    Checks the chain-map law on every source generator, that the augmentation
    of the image of 1 is 1 (so the induced map on cohomology composed with
    the augmentation is the canonical projection: classes of t^a with a != 0
    augment to zero because variables act trivially), and that the target
    cohomology vanishes above the source level throughout the truncation
    range.
    """
    src = a.source
    if src.koszul_descriptor is None:
        raise ValueError("the source must be a Koszul complex")
    m = src.koszul_descriptor.level
    if max_degree is None:
        max_degree = default_truncation(src.nvars, m, src.char)
    failures: list[str] = []
    dims = a.target.homology_dims(max_degree)
    bad = {d: v for d, v in dims.items() if d > m and v}
    hypothesis_ok = not bad
    if bad:
        failures.append(f"cohomology does not vanish above level {m}: {bad}")
    chain_failures = a.commutes_with_diff()
    chain_map_ok = not chain_failures
    failures.extend(f"differential law fails at {name}" for name in chain_failures)
    unit_index = a.source.index_sets.index(())
    unit_image = a.images[unit_index]
    projection_ok = a.target.augment(unit_image) == 1
    if not projection_ok:
        failures.append("augmentation of the image of 1 is not 1")
    else:
        for i in range(1, src.nvars + 1):
            scaled = a.target.elem_scale(unit_image, Poly.variable(src.nvars, src.char, i))
            if a.target.augment(scaled) != 0:
                projection_ok = False
                failures.append(f"class of t{i} is not killed by the augmentation")
    return AlphaReport(hypothesis_ok, chain_map_ok, projection_ok, failures)


def construct_alpha(c: FiltComplex, m: int, max_degree: int | None = None) -> ComplexMap:
    """Build a chain map from the level-m Koszul complex into the complex.

    The image of 1 is a degree-0 cocycle with augmentation 1; the image of
    each s_I solves d(x) = image of d(s_I), one exact degreewise linear
    system per generator in increasing word-length.  Solvability at each step
    is exactly the cohomology-vanishing hypothesis, which is verified up
    front; degrees beyond the truncation raise TruncationError.
    """
    if max_degree is None:
        max_degree = default_truncation(c.nvars, m, c.char)
    filt_report = verify_filtration(c)
    if not filt_report.passed:
        raise ValueError("target complex is invalid: " + "; ".join(filt_report.violations))
    desc = ComplexDescriptor(c.nvars, m, c.char)
    top_degree = desc.s_degree * c.nvars + 1
    if top_degree > max_degree:
        raise TruncationError(
            f"need degrees up to {top_degree} but truncation is {max_degree}"
        )
    dims = c.homology_dims(max_degree)
    bad = {d: v for d, v in dims.items() if d > m and v}
    if bad:
        raise VanishingHypothesisError(
            f"cohomology does not vanish above level {m}: first at degree {min(bad)}"
        )
    source = koszul_filt_complex(desc)
    unit = c.unit_cocycle()
    if unit is None:
        raise ValueError("target complex has no degree-0 cocycle with augmentation 1")
    images: list[dict] = [None] * len(source.generators)
    by_index_set = {s: i for i, s in enumerate(source.index_sets)}
    images[by_index_set[()]] = unit
    for indices in source.index_sets:
        if not indices:
            continue
        target_elem = c.zero_elem()
        for j, i in enumerate(indices):
            sign = 1 if (j % 2 == 0 or c.char is Char.TWO) else -1
            poly = desc.t(i, m + 1).scale(sign)
            prev = images[by_index_set[indices[:j] + indices[j + 1 :]]]
            target_elem = c.elem_add(target_elem, c.elem_scale(prev, poly))
        degree = desc.s_degree * len(indices)
        solution = _solve_diff_equation(c, degree, target_elem)
        if solution is None:
            raise LiftingError(
                f"no lift at degree {degree} although cohomology vanishes there"
            )
        images[by_index_set[indices]] = solution
    return ComplexMap(source, c, images)


def _solve_diff_equation(c: FiltComplex, degree: int, rhs: dict) -> dict | None:
    """Solve d(x) = rhs with x in one graded degree, exactly over the field."""
    basis = c.basis_at(degree)
    next_basis = c.basis_at(degree + 1)
    position = {b: i for i, b in enumerate(basis)}
    rows: dict = {}
    for mono, gidx in basis:
        j = position[(mono, gidx)]
        for row, poly in c.diff.get(gidx, ()):
            for pm, coeff in poly.terms.items():
                key = (tuple(a + b for a, b in zip(mono, pm)), row)
                bucket = rows.setdefault(key, {})
                if c.char is Char.TWO:
                    if j in bucket:
                        del bucket[j]
                    else:
                        bucket[j] = 1
                else:
                    s = bucket.get(j, 0) + coeff
                    if s:
                        bucket[j] = s
                    else:
                        del bucket[j]
    rhs_coords: dict = {}
    for gidx, poly in rhs.items():
        for pm, coeff in poly.terms.items():
            rhs_coords[(pm, gidx)] = coeff
    next_positions = {b for b in next_basis}
    for key in rhs_coords:
        if key not in next_positions:
            return None  # right-hand side sticks out of the graded piece
    system = []
    for key in sorted(set(rows) | set(rhs_coords)):
        system.append((rows.get(key, {}), rhs_coords.get(key, 0)))
    solution = solve_linear(system, c.char)
    if solution is None:
        return None
    elem: dict = {}
    for j, value in solution.items():
        mono, gidx = basis[j]
        term = Poly.monomial(c.nvars, c.char, mono, value)
        prev = elem.get(gidx)
        elem[gidx] = term if prev is None else prev + term
    return {g: p for g, p in elem.items() if p.terms}


# ---------------------------------------------------------------------------
# the outbound map beta
# ---------------------------------------------------------------------------


@dataclass
class BetaReport:
    chain_map_ok: bool
    filtration_ok: bool
    augmentation_ok: bool
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.chain_map_ok and self.filtration_ok and self.augmentation_ok


def verify_beta(b: ComplexMap) -> BetaReport:
    """Verify an outbound map: chain law, filtration preservation, augmentations."""
    failures: list[str] = []
    chain_failures = b.commutes_with_diff()
    chain_map_ok = not chain_failures
    failures.extend(f"differential law fails at {name}" for name in chain_failures)
    filtration_ok = True
    for idx, gen in enumerate(b.source.generators):
        for g, poly in b.images[idx].items():
            if b.target.generators[g].level > gen.level:
                filtration_ok = False
                failures.append(
                    f"image of {gen.name} (level {gen.level}) hits level "
                    f"{b.target.generators[g].level}"
                )
    augmentation_ok = True
    for idx, gen in enumerate(b.source.generators):
        if b.target.augment(b.images[idx]) != b.source.augmentation[idx]:
            augmentation_ok = False
            failures.append(f"augmentation mismatch at {gen.name}")
    return BetaReport(chain_map_ok, filtration_ok, augmentation_ok, failures)


def compose_to_gamma(a: ComplexMap, b: ComplexMap) -> ChainMap:
    """Compose an inbound and an outbound map into a generator-image chain map.

    The rank of the result is bounded by the number of generators of the
    middle complex, since the matrix factors through it.
    """
    if a.target != b.source:
        raise ValueError("maps are not composable: middle complexes differ")
    if a.source.koszul_descriptor is None or b.target.koszul_descriptor is None:
        raise ValueError("composition must go from a Koszul complex to a Koszul complex")
    if b.target.koszul_descriptor.level != 0:
        raise ValueError("the outbound target must be the level-0 complex")
    if a.commutes_with_diff() or b.commutes_with_diff():
        raise ValueError("both maps must commute with the differentials")
    source_desc = a.source.koszul_descriptor
    target_desc = b.target.koszul_descriptor
    images: dict[IndexSet, KElem] = {}
    for idx, indices in enumerate(a.source.index_sets):
        through = b.apply(a.images[idx])
        images[indices] = elem_to_kelem(b.target, through)
    return ChainMap(source_desc, ComplexDescriptor(target_desc.nvars, 0, target_desc.char), images)


# ---------------------------------------------------------------------------
# fixture catalogue
# ---------------------------------------------------------------------------


def rank_two_model(m: int, char: Char) -> FiltComplex:
    """Free on two generators 1, e with d(e) = t1^(m+1); the smallest example."""
    gens = [Generator("1", 0, 0), Generator("e", char.s_degree(m), 1)]
    diff = {1: [(0, Poly.t_power(1, char, 1, m + 1))]}
    return FiltComplex(1, char, gens, diff, [1, 0])


def twisted_two_var_model(char: Char) -> FiltComplex:
    """Five generators with a twisted top differential d(e12) = t1 e2 - t2 e1 + f."""
    sd = char.s_degree(0)
    td = char.t_degree
    gens = [
        Generator("1", 0, 0),
        Generator("e1", sd, 1),
        Generator("e2", sd, 1),
        Generator("f", sd + td - 1 + 1, 1),
        Generator("e12", sd + td - 1, 2),
    ]
    t1 = Poly.variable(2, char, 1)
    t2 = Poly.variable(2, char, 2)
    diff = {
        1: [(0, t1)],
        2: [(0, t2)],
        4: [(2, t1), (1, -t2), (3, Poly.one(2, char))],
    }
    return FiltComplex(2, char, gens, diff, [1, 0, 0, 0, 0])


def shuffled_complex(c: FiltComplex, rng):
    """Same complex with the basis randomly reordered, plus the unshuffling map."""
    order = list(range(len(c.generators)))
    rng.shuffle(order)
    inverse = [0] * len(order)
    for new, old in enumerate(order):
        inverse[old] = new
    gens = [c.generators[old] for old in order]
    diff = {}
    for col, entries in c.diff.items():
        diff[inverse[col]] = [(inverse[row], poly) for row, poly in entries]
    augmentation = [c.augmentation[old] for old in order]
    shuffled = FiltComplex(c.nvars, c.char, gens, diff, augmentation)
    unshuffle = ComplexMap(shuffled, c, [c.gen_elem(order[new]) for new in range(len(order))])
    return shuffled, unshuffle
