"""Exact linear algebra used throughout the package.

Three layers live here:

* sparse Gaussian elimination over the coefficient field (rationals or F2),
  used for degreewise homology and for lifting problems;
* fraction-free (Bareiss) elimination over the polynomial ring itself, the
  authoritative rank/determinant/kernel routines over the fraction field;
* randomized evaluation ranks: matrices of polynomials are evaluated at
  random points of a large prime field (characteristic 0) or of GF(2^k)
  (characteristic 2) and ranked there.  An evaluation rank never exceeds the
  true rank, so a full evaluation rank certifies the exact answer.
"""

from __future__ import annotations

from fractions import Fraction

from .polynomials import Char, Poly, UnluckyPrimeError, poly_divexact

__all__ = [
    "field_rank",
    "solve_linear",
    "GF2k",
    "random_prime",
    "bareiss_rank",
    "bareiss_det",
    "kernel_vector",
    "evaluation_rank",
]


# ---------------------------------------------------------------------------
# sparse elimination over the coefficient field
# ---------------------------------------------------------------------------


def field_rank(vectors, char: Char) -> int:
    """Rank of a family of sparse vectors over the base field.

    Characteristic 0 vectors are dicts mapping coordinate -> int/Fraction;
    characteristic 2 vectors are sets (or dicts) of coordinates.  Vectors are
    reduced against previously found pivots by leading coordinate, so nearly
    block-diagonal families eliminate with almost no fill-in.
    """
    if char is Char.TWO:
        pivots: dict = {}
        for vec in vectors:
            row = set(vec)
            while row:
                lead = min(row)
                p = pivots.get(lead)
                if p is None:
                    pivots[lead] = row
                    break
                row ^= p
        return len(pivots)
    pivots = {}
    for vec in vectors:
        row = dict(vec)
        while row:
            lead = min(row)
            p = pivots.get(lead)
            if p is None:
                inv = Fraction(1) / Fraction(row[lead])
                pivots[lead] = {c: v * inv for c, v in row.items()}
                break
            f = row[lead]
            for c, v in p.items():
                s = row.get(c, 0) - f * v
                if s:
                    row[c] = s
                else:
                    row.pop(c, None)
    return len(pivots)


_RHS = object()  # sentinel column for right-hand sides


def solve_linear(rows, char: Char):
    """Solve a sparse linear system over the base field.

    ``rows`` is a list of (coeffs, rhs) pairs where coeffs maps unknown index
    -> coefficient.  Returns one solution as a dict (free unknowns omitted,
    i.e. set to zero), or None if the system is inconsistent.
    """
    two = char is Char.TWO
    pivots: dict = {}
    for coeffs, rhs in rows:
        if two:
            row = dict.fromkeys(coeffs, 1)
            row_rhs = rhs & 1
        else:
            row = dict(coeffs)
            row_rhs = rhs
        while row:
            lead = min(row)
            entry = pivots.get(lead)
            if entry is None:
                if two:
                    pivots[lead] = (row, row_rhs)
                else:
                    inv = Fraction(1) / Fraction(row[lead])
                    pivots[lead] = ({c: v * inv for c, v in row.items()}, row_rhs * inv)
                break
            prow, prhs = entry
            if two:
                for c in prow:
                    if c in row:
                        del row[c]
                    else:
                        row[c] = 1
                row_rhs ^= prhs
            else:
                f = row[lead]
                for c, v in prow.items():
                    s = row.get(c, 0) - f * v
                    if s:
                        row[c] = s
                    else:
                        row.pop(c, None)
                row_rhs = row_rhs - f * prhs
        else:
            if row_rhs:
                return None  # 0 = nonzero: inconsistent
    solution: dict = {}
    for lead in sorted(pivots, reverse=True):
        prow, prhs = pivots[lead]
        acc = prhs
        for c, v in prow.items():
            if c != lead and c in solution:
                if two:
                    acc ^= v & solution[c]
                else:
                    acc = acc - v * solution[c]
        if acc:
            solution[lead] = acc
    return solution


# ---------------------------------------------------------------------------
# GF(2^k)
# ---------------------------------------------------------------------------


def _gf2_poly_mulmod(a: int, b: int, mod: int, degree: int) -> int:
    top = 1 << degree
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= mod
    return acc


def _gf2_poly_gcd(a: int, b: int) -> int:
    while b:
        while a.bit_length() >= b.bit_length() and a:
            a ^= b << (a.bit_length() - b.bit_length())
        a, b = b, a
    return a


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _gf2_irreducible(degree: int) -> int:
    """Smallest irreducible trinomial/pentanomial x^degree + ... + 1 over F2."""

    def is_irreducible(f: int) -> bool:
        # Rabin test: x^(2^degree) == x mod f, and for every prime q | degree
        # gcd(x^(2^(degree/q)) - x, f) == 1.
        h = 2  # the polynomial x
        for _ in range(degree):
            h = _gf2_poly_mulmod(h, h, f, degree)
        if h != 2:
            return False
        for q in _prime_factors(degree):
            h = 2
            for _ in range(degree // q):
                h = _gf2_poly_mulmod(h, h, f, degree)
            if _gf2_poly_gcd(h ^ 2, f) != 1:
                return False
        return True

    base = (1 << degree) | 1
    for j in range(1, degree):
        f = base | (1 << j)
        if is_irreducible(f):
            return f
    for j in range(1, degree):
        for k in range(j + 1, degree):
            for l in range(k + 1, degree):
                f = base | (1 << j) | (1 << k) | (1 << l)
                if is_irreducible(f):
                    return f
    raise ValueError(f"no sparse irreducible polynomial of degree {degree} found")


class GF2k:
    """The field with 2^k elements, encoded as ints below 2^k."""

    _cache: dict[int, "GF2k"] = {}

    def __new__(cls, bits: int):
        cached = cls._cache.get(bits)
        if cached is not None:
            return cached
        self = super().__new__(cls)
        self.bits = bits
        self.order = 1 << bits
        self.modulus = _gf2_irreducible(bits)
        cls._cache[bits] = self
        return self

    def mul(self, a: int, b: int) -> int:
        return _gf2_poly_mulmod(a, b, self.modulus, self.bits)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in GF(2^k)")
        result = 1
        base = a
        e = self.order - 2
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def pow(self, a: int, e: int) -> int:
        result = 1
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def random_nonzero(self, rng) -> int:
        return rng.randrange(1, self.order)


# ---------------------------------------------------------------------------
# primes
# ---------------------------------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_prime(bits: int, rng) -> int:
    """A uniform random prime with exactly the given bit length."""
    while True:
        candidate = rng.randrange(1 << (bits - 1), 1 << bits) | 1
        if _is_prime(candidate):
            return candidate


# ---------------------------------------------------------------------------
# fraction-free elimination over the polynomial ring
# ---------------------------------------------------------------------------


def _bareiss_echelon(matrix: list[list[Poly]]):
    """Fraction-free forward elimination with full pivoting.

    Returns (pivot count, row permutation, column permutation) where the
    permutations map elimination position -> original index.  The input list
    is consumed (copied internally).
    """
    if not matrix:
        return 0, [], []
    rows = [list(r) for r in matrix]
    nrows, ncols = len(rows), len(rows[0])
    row_perm = list(range(nrows))
    col_perm = list(range(ncols))
    some = None
    for r in rows:
        for entry in r:
            some = entry
            break
        break
    prev = Poly.one(some.nvars, some.char)
    k = 0
    while k < min(nrows, ncols):
        best = None
        for i in range(k, nrows):
            for j in range(k, ncols):
                e = rows[i][j]
                if e.terms and (best is None or len(e.terms) < best[0]):
                    best = (len(e.terms), i, j)
        if best is None:
            break
        _, pi, pj = best
        if pi != k:
            rows[k], rows[pi] = rows[pi], rows[k]
            row_perm[k], row_perm[pi] = row_perm[pi], row_perm[k]
        if pj != k:
            for r in rows:
                r[k], r[pj] = r[pj], r[k]
            col_perm[k], col_perm[pj] = col_perm[pj], col_perm[k]
        pivot = rows[k][k]
        prev_is_one = prev.is_one()
        row_k = rows[k]
        for i in range(k + 1, nrows):
            row_i = rows[i]
            head = row_i[k]
            for j in range(k + 1, ncols):
                num = pivot * row_i[j] - head * row_k[j]
                row_i[j] = num if (prev_is_one or not num.terms) else poly_divexact(num, prev)
            row_i[k] = Poly.zero(pivot.nvars, pivot.char)
        prev = pivot
        k += 1
    return k, row_perm, col_perm


def bareiss_rank(matrix: list[list[Poly]]) -> int:
    """Exact rank over the fraction field via fraction-free elimination."""
    if not matrix or not matrix[0]:
        return 0
    k, _, _ = _bareiss_echelon(matrix)
    return k


def bareiss_det(matrix: list[list[Poly]]) -> Poly:
    """Exact determinant of a square polynomial matrix."""
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix has no determinant")
    if any(len(r) != n for r in matrix):
        raise ValueError("determinant requires a square matrix")
    sample = matrix[0][0]
    rows = [list(r) for r in matrix]
    prev = Poly.one(sample.nvars, sample.char)
    sign = 1
    for k in range(n):
        pi = pj = None
        for i in range(k, n):
            for j in range(k, n):
                if rows[i][j].terms:
                    pi, pj = i, j
                    break
            if pi is not None:
                break
        if pi is None:
            return Poly.zero(sample.nvars, sample.char)
        if pi != k:
            rows[k], rows[pi] = rows[pi], rows[k]
            sign = -sign
        if pj != k:
            for r in rows:
                r[k], r[pj] = r[pj], r[k]
            sign = -sign
        pivot = rows[k][k]
        prev_is_one = prev.is_one()
        for i in range(k + 1, n):
            head = rows[i][k]
            for j in range(k + 1, n):
                num = pivot * rows[i][j] - head * rows[k][j]
                rows[i][j] = num if (prev_is_one or not num.terms) else poly_divexact(num, prev)
            rows[i][k] = Poly.zero(sample.nvars, sample.char)
        prev = pivot
    det = rows[n - 1][n - 1]
    return -det if (sign < 0 and sample.char is Char.ZERO) else det


def kernel_vector(matrix: list[list[Poly]]):
    """One exact kernel vector of a polynomial matrix, or None if injective.

    The vector has entries in the polynomial ring (Cramer-style determinant
    scaling), indexed like the columns of the input.
    """
    if not matrix or not matrix[0]:
        return None
    ncols = len(matrix[0])
    k, row_perm, col_perm = _bareiss_echelon(matrix)
    if k == ncols:
        return None
    sample = matrix[0][0]
    pivot_rows = [row_perm[i] for i in range(k)]
    pivot_cols = [col_perm[i] for i in range(k)]
    free_col = min(c for c in range(ncols) if c not in set(pivot_cols))

    def minor(cols: list[int]) -> Poly:
        if not cols:
            return Poly.one(sample.nvars, sample.char)
        sub = [[matrix[r][c] for c in cols] for r in pivot_rows]
        return bareiss_det(sub)

    vec = [Poly.zero(sample.nvars, sample.char) for _ in range(ncols)]
    vec[free_col] = minor(pivot_cols)
    for pos, col in enumerate(pivot_cols):
        swapped = list(pivot_cols)
        swapped[pos] = free_col
        vec[col] = -minor(swapped)
    # sanity: the vector must lie in the kernel of every row
    for row in matrix:
        acc = Poly.zero(sample.nvars, sample.char)
        for entry, v in zip(row, vec):
            if entry.terms and v.terms:
                acc = acc + entry * v
        if acc.terms:
            raise AssertionError("kernel extraction produced a non-kernel vector")
    return vec


# ---------------------------------------------------------------------------
# randomized evaluation ranks
# ---------------------------------------------------------------------------


def _eval_gf2k(p: Poly, pows: list[list[int]], field: GF2k) -> int:
    total = 0
    for mono in p.terms:
        c = 1
        for i, e in enumerate(mono):
            if e:
                c = field.mul(c, pows[i][e])
        total ^= c
    return total


def _rank_mod_p(dense: list[list[int]], p: int) -> int:
    nrows = len(dense)
    if nrows == 0:
        return 0
    ncols = len(dense[0])
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if dense[i][c]:
                piv = i
                break
        if piv is None:
            continue
        dense[r], dense[piv] = dense[piv], dense[r]
        inv = pow(dense[r][c], -1, p)
        row_r = dense[r]
        for i in range(r + 1, nrows):
            f = dense[i][c]
            if f:
                f = f * inv % p
                row_i = dense[i]
                dense[i] = [(a - f * b) % p for a, b in zip(row_i, row_r)]
        r += 1
        if r == nrows:
            break
    return r


def _rank_gf2k(dense: list[list[int]], field: GF2k) -> int:
    nrows = len(dense)
    if nrows == 0:
        return 0
    ncols = len(dense[0])
    mul = field.mul
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if dense[i][c]:
                piv = i
                break
        if piv is None:
            continue
        dense[r], dense[piv] = dense[piv], dense[r]
        inv = field.inv(dense[r][c])
        row_r = dense[r]
        for i in range(r + 1, nrows):
            f = dense[i][c]
            if f:
                f = mul(f, inv)
                row_i = dense[i]
                dense[i] = [a ^ mul(f, b) for a, b in zip(row_i, row_r)]
        r += 1
        if r == nrows:
            break
    return r


def evaluation_rank(matrix: list[list[Poly]], char: Char, rng, trials: int = 5, bits: int = 31) -> int:
    """Probabilistic rank of a polynomial matrix over the fraction field.

    Every variable is evaluated at an independent uniform nonzero element of
    a field of size >= 2^(bits-1): a fresh random prime field in
    characteristic 0, GF(2^bits) in characteristic 2 (evaluation must stay in
    the same characteristic for minors to keep vanishing).  The maximum rank
    over the given number of independent trials is returned; it is a certain
    lower bound for the true rank and equals it with overwhelming probability.
    """
    if not matrix or not matrix[0]:
        return 0
    nvars = None
    for row in matrix:
        for e in row:
            nvars = e.nvars
            break
        break
    max_exp = [0] * nvars
    for row in matrix:
        for e in row:
            for i, m in enumerate(e.max_exponents()):
                if m > max_exp[i]:
                    max_exp[i] = m
    best = 0
    upper = min(len(matrix), len(matrix[0]))
    for _ in range(trials):
        if char is Char.ZERO:
            while True:
                prime = random_prime(bits, rng)
                point = [rng.randrange(1, prime) for _ in range(nvars)]
                pows = []
                for i in range(nvars):
                    row = [1] * (max_exp[i] + 1)
                    for e in range(1, max_exp[i] + 1):
                        row[e] = row[e - 1] * point[i] % prime
                    pows.append(row)
                try:
                    dense = [
                        [_eval_terms_mod_p(entry, pows, prime) for entry in row]
                        for row in matrix
                    ]
                except UnluckyPrimeError:
                    continue
                break
            rank = _rank_mod_p(dense, prime)
        else:
            field = GF2k(bits)
            point = [field.random_nonzero(rng) for _ in range(nvars)]
            pows = []
            for i in range(nvars):
                row = [1] * (max_exp[i] + 1)
                for e in range(1, max_exp[i] + 1):
                    row[e] = field.mul(row[e - 1], point[i])
                pows.append(row)
            dense = [[_eval_gf2k(entry, pows, field) for entry in row] for row in matrix]
            rank = _rank_gf2k(dense, field)
        if rank > best:
            best = rank
        if best == upper:
            break
    return best


def _eval_terms_mod_p(p: Poly, pows: list[list[int]], prime: int) -> int:
    total = 0
    for mono, coeff in p.terms.items():
        if isinstance(coeff, Fraction):
            den = coeff.denominator % prime
            if den == 0:
                raise UnluckyPrimeError(str(coeff))
            c = coeff.numerator % prime * pow(den, -1, prime) % prime
        else:
            c = coeff % prime
        for i, e in enumerate(mono):
            if e:
                c = c * pows[i][e] % prime
        total = (total + c) % prime
    return total
