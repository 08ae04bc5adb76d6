"""Koszul complexes of pure power sequences, with grading and products.

The complex of level m on n variables is the free module over the polynomial
ring with basis the exterior monomials s_I (I a strictly increasing index
set), equipped with the differential sending each degree-one generator s_i
to t_i^(m+1) and extended as a derivation.  Removing the j-th smallest index
of I contributes the sign (-1)^(j-1); in characteristic 2 all signs are +1.

Elements are sparse maps from index sets to polynomial coefficients.  All
values are immutable after construction and safe to share.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Mapping

from .linalg import field_rank
from .polynomials import Char, Poly, UndefinedDegreeError, monomials_of_degree

IndexSet = tuple  # strictly increasing tuple of 1-based variable indices

__all__ = [
    "IndexSet",
    "ComplexDescriptor",
    "KElem",
    "merge_index_sets",
    "truncated_homology_dim",
    "default_max_degree",
]


def _check_index_set(indices: IndexSet, nvars: int) -> IndexSet:
    indices = tuple(indices)
    if any(indices[i] >= indices[i + 1] for i in range(len(indices) - 1)):
        raise ValueError(f"index set {indices} is not strictly increasing")
    if indices and (indices[0] < 1 or indices[-1] > nvars):
        raise ValueError(f"index set {indices} out of range 1..{nvars}")
    return indices


def merge_index_sets(left: IndexSet, right: IndexSet):
    """Merge two disjoint index sets; returns (merged, sign) or None on overlap.

    The sign counts the transpositions needed to sort the concatenation, i.e.
    the pairs (a, b) in left x right with a > b.
    """
    if set(left) & set(right):
        return None
    inversions = sum(1 for a in left for b in right if a > b)
    merged = tuple(sorted(left + right))
    return merged, (-1) ** inversions


@dataclass(frozen=True)
class ComplexDescriptor:
    """Shape of a Koszul complex: variable count, level and characteristic."""

    nvars: int
    level: int
    char: Char

    def __post_init__(self):
        if self.nvars < 1:
            raise ValueError("nvars must be at least 1")
        if self.level < 0:
            raise ValueError("level must be non-negative")

    @property
    def s_degree(self) -> int:
        return self.char.s_degree(self.level)

    def index_sets(self) -> Iterator[IndexSet]:
        """All 2^n exterior basis index sets, by word-length then lexicographic."""
        for k in range(self.nvars + 1):
            yield from combinations(range(1, self.nvars + 1), k)

    def zero(self) -> KElem:
        return KElem(self, {})

    def one(self) -> KElem:
        return KElem(self, {(): Poly.one(self.nvars, self.char)})

    def generator(self, indices) -> KElem:
        """The basis monomial s_I with coefficient 1."""
        return KElem(self, {tuple(indices): Poly.one(self.nvars, self.char)})

    def t(self, index: int, exponent: int = 1) -> Poly:
        return Poly.t_power(self.nvars, self.char, index, exponent)


class KElem:
    """Element of a Koszul complex: sparse map from index sets to polynomials."""

    __slots__ = ("desc", "coeffs")

    def __init__(self, desc: ComplexDescriptor, coeffs: Mapping[IndexSet, Poly]):
        canonical: dict[IndexSet, Poly] = {}
        for indices, poly in coeffs.items():
            indices = _check_index_set(indices, desc.nvars)
            if poly.nvars != desc.nvars or poly.char is not desc.char:
                raise ValueError("coefficient polynomial does not match the complex")
            if poly.terms:
                canonical[indices] = poly
        object.__setattr__(self, "desc", desc)
        object.__setattr__(self, "coeffs", canonical)

    def __setattr__(self, name, value):
        raise AttributeError("KElem is immutable")

    @classmethod
    def _raw(cls, desc: ComplexDescriptor, coeffs: dict) -> KElem:
        x = cls.__new__(cls)
        object.__setattr__(x, "desc", desc)
        object.__setattr__(x, "coeffs", coeffs)
        return x

    # ---------- predicates ----------

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, KElem):
            return NotImplemented
        return self.desc == other.desc and self.coeffs == other.coeffs

    __hash__ = None

    def _check_compatible(self, other: KElem) -> None:
        if self.desc != other.desc:
            raise ValueError(f"complex mismatch: {self.desc} vs {other.desc}")

    # ---------- module structure ----------

    def __add__(self, other: KElem) -> KElem:
        self._check_compatible(other)
        if not self.coeffs:
            return other
        if not other.coeffs:
            return self
        out = dict(self.coeffs)
        for indices, poly in other.coeffs.items():
            s = out.get(indices)
            s = poly if s is None else s + poly
            if s.terms:
                out[indices] = s
            else:
                out.pop(indices, None)
        return KElem._raw(self.desc, out)

    def __neg__(self) -> KElem:
        if self.desc.char is Char.TWO:
            return self
        return KElem._raw(self.desc, {i: -p for i, p in self.coeffs.items()})

    def __sub__(self, other: KElem) -> KElem:
        return self + (-other)

    def scale(self, poly: Poly) -> KElem:
        if not poly.terms:
            return self.desc.zero()
        out = {}
        for indices, coeff in self.coeffs.items():
            prod = poly * coeff
            if prod.terms:
                out[indices] = prod
        return KElem._raw(self.desc, out)

    def __mul__(self, other):
        if isinstance(other, Poly):
            return self.scale(other)
        if isinstance(other, KElem):
            return self.wedge(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Poly):
            return self.scale(other)
        return NotImplemented

    # ---------- graded algebra ----------

    def wedge(self, other: KElem) -> KElem:
        """Graded-commutative product; repeated exterior indices annihilate."""
        self._check_compatible(other)
        out: dict[IndexSet, Poly] = {}
        for left, p in self.coeffs.items():
            for right, q in other.coeffs.items():
                merged = merge_index_sets(left, right)
                if merged is None:
                    continue
                indices, sign = merged
                prod = p * q
                if sign < 0:
                    prod = -prod
                s = out.get(indices)
                s = prod if s is None else s + prod
                if s.terms:
                    out[indices] = s
                else:
                    out.pop(indices, None)
        return KElem._raw(self.desc, out)

    def differential(self) -> KElem:
        """Apply the differential; each term loses exactly one exterior index."""
        desc = self.desc
        power = desc.level + 1
        out: dict[IndexSet, Poly] = {}
        for indices, poly in self.coeffs.items():
            for j, i in enumerate(indices):
                term = poly * desc.t(i, power)
                if j % 2:
                    term = -term
                rest = indices[:j] + indices[j + 1 :]
                s = out.get(rest)
                s = term if s is None else s + term
                if s.terms:
                    out[rest] = s
                else:
                    out.pop(rest, None)
        return KElem._raw(desc, out)

    def project_wordlength(self, length: int) -> KElem:
        """Keep exactly the terms whose index set has the given size."""
        return KElem._raw(
            self.desc, {i: p for i, p in self.coeffs.items() if len(i) == length}
        )

    def wordlengths(self) -> set:
        return {len(i) for i in self.coeffs}

    def graded_degree(self):
        """Common graded degree of all monomial terms, or None if mixed."""
        if not self.coeffs:
            raise UndefinedDegreeError("the zero element has no graded degree")
        desc = self.desc
        td = desc.char.t_degree
        sd = desc.s_degree
        degrees = set()
        for indices, poly in self.coeffs.items():
            base = sd * len(indices)
            for mono in poly.terms:
                degrees.add(base + td * sum(mono))
                if len(degrees) > 1:
                    return None
        return degrees.pop()

    # ---------- text form ----------

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for indices in sorted(self.coeffs, key=lambda i: (len(i), i)):
            poly = self.coeffs[indices]
            text = str(poly)
            if len(poly.terms) > 1 or text.startswith("-"):
                text = f"({text})"
            parts.append(f"{text} * s{{{','.join(map(str, indices))}}}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"KElem[n={self.desc.nvars}, m={self.desc.level}]({self})"

    @classmethod
    def parse(cls, text: str, desc: ComplexDescriptor) -> KElem:
        """Inverse of str(); multi-term coefficients must be parenthesized."""
        s = text.strip()
        if s == "0":
            return desc.zero()
        coeffs: dict[IndexSet, Poly] = {}
        for piece in _split_top_level(s):
            m = re.fullmatch(r"(.*?)\s*\*\s*s\{([\d,\s]*)\}", piece.strip())
            if not m:
                raise ValueError(f"cannot parse element term {piece!r}")
            poly_text = m.group(1).strip()
            if poly_text.startswith("(") and poly_text.endswith(")"):
                poly_text = poly_text[1:-1]
            poly = Poly.parse(poly_text, desc.nvars, desc.char)
            idx_text = m.group(2).strip()
            indices = tuple(int(v) for v in idx_text.split(",")) if idx_text else ()
            if indices in coeffs:
                coeffs[indices] = coeffs[indices] + poly
            else:
                coeffs[indices] = poly
        return cls(desc, coeffs)


def random_kelem(desc: ComplexDescriptor, rng, max_terms: int = 4, max_exp: int = 2) -> KElem:
    """Random sparse element, for property checks and verification sweeps."""
    coeffs: dict[IndexSet, Poly] = {}
    for _ in range(rng.randint(0, max_terms)):
        size = rng.randint(0, desc.nvars)
        indices = tuple(sorted(rng.sample(range(1, desc.nvars + 1), size)))
        mono = tuple(rng.randint(0, max_exp) for _ in range(desc.nvars))
        coeff = 1 if desc.char is Char.TWO else rng.choice((1, -1, 2))
        term = Poly.monomial(desc.nvars, desc.char, mono, coeff)
        prev = coeffs.get(indices)
        s = term if prev is None else prev + term
        if s.terms:
            coeffs[indices] = s
        else:
            coeffs.pop(indices, None)
    return KElem(desc, coeffs)


def random_homogeneous_kelem(desc: ComplexDescriptor, rng, max_terms: int = 3, max_exp: int = 2) -> KElem:
    """Random element whose terms all share one graded degree (possibly zero)."""
    size = rng.randint(0, desc.nvars)
    tdeg = rng.randint(0, max_exp * 2)
    coeffs: dict[IndexSet, Poly] = {}
    for _ in range(rng.randint(1, max_terms)):
        indices = tuple(sorted(rng.sample(range(1, desc.nvars + 1), size)))
        exps = [0] * desc.nvars
        for _ in range(tdeg):
            exps[rng.randrange(desc.nvars)] += 1
        coeff = 1 if desc.char is Char.TWO else rng.choice((1, -1))
        term = Poly.monomial(desc.nvars, desc.char, tuple(exps), coeff)
        prev = coeffs.get(indices)
        s = term if prev is None else prev + term
        if s.terms:
            coeffs[indices] = s
        else:
            coeffs.pop(indices, None)
    return KElem(desc, coeffs)


def _split_top_level(text: str) -> list[str]:
    """Split on ' + ' at parenthesis depth zero."""
    parts = []
    depth = 0
    start = 0
    i = 0
    while i < len(text):
        c = text[i]
        if c == "(":
            depth += 1
        elif c == ")":
            depth -= 1
        elif depth == 0 and text.startswith(" + ", i):
            parts.append(text[start:i])
            i += 3
            start = i
            continue
        i += 1
    parts.append(text[start:])
    return parts


# ---------------------------------------------------------------------------
# degreewise homology
# ---------------------------------------------------------------------------


def default_max_degree(desc: ComplexDescriptor) -> int:
    """Truncation covering the full homology plus a sanity band of zeros."""
    return (desc.level + 1) * desc.nvars * desc.char.t_degree + desc.s_degree


def graded_basis(desc: ComplexDescriptor, degree: int) -> list:
    """Basis (mono, index_set) pairs of the given graded degree."""
    td = desc.char.t_degree
    sd = desc.s_degree
    out = []
    for k in range(desc.nvars + 1):
        rem = degree - sd * k
        if rem < 0 or rem % td:
            continue
        tdeg = rem // td
        for indices in combinations(range(1, desc.nvars + 1), k):
            for mono in monomials_of_degree(desc.nvars, tdeg):
                out.append((mono, indices))
    return out


def _differential_rank(desc: ComplexDescriptor, degree: int, basis, next_basis) -> int:
    """Rank of the differential restricted to one graded piece."""
    position = {b: i for i, b in enumerate(next_basis)}
    power = desc.level + 1
    two = desc.char is Char.TWO
    columns = []
    for mono, indices in basis:
        col: dict[int, int] = {}
        for j, i in enumerate(indices):
            shifted = list(mono)
            shifted[i - 1] += power
            key = (tuple(shifted), indices[:j] + indices[j + 1 :])
            row = position[key]
            col[row] = 1 if (two or j % 2 == 0) else -1
        if col:
            columns.append(set(col) if two else col)
    return field_rank(columns, desc.char)


def truncated_homology_dim(desc: ComplexDescriptor, max_degree: int | None = None) -> dict[int, int]:
    """Homology dimension per graded degree, by exact kernel/image ranks.

    When the truncation covers the top degree of the quotient ring the totals
    sum to (level+1)^nvars.
    """
    if max_degree is None:
        max_degree = default_max_degree(desc)
    basis = graded_basis(desc, 0)
    prev_rank = 0
    dims: dict[int, int] = {}
    for degree in range(max_degree + 1):
        next_basis = graded_basis(desc, degree + 1)
        rank = _differential_rank(desc, degree, basis, next_basis)
        dims[degree] = len(basis) - rank - prev_rank
        basis = next_basis
        prev_rank = rank
    return dims
