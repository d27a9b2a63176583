"""
Exact integer and rational linear algebra.

Everything here works on Python integers and ``fractions.Fraction`` so no
value is ever rounded: determinants are fraction-free (Bareiss), the
characteristic polynomial comes from Faddeev-LeVerrier and is checked to be
integral, and lattices are kept in one pinned Hermite normal form so that
two lattices are equal exactly when their canonical bases are.

HNF convention (column style): the basis is lower triangular in echelon
form, the pivot of column j is its first nonzero row and pivot rows
increase with j, pivots are positive, every entry of a pivot row to the
left of the pivot lies in [0, pivot), and zero columns come last.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import List, Sequence, Tuple

from sympy.core.intfunc import igcdex

from errors import ConsistencyError, DimensionError

BigRational = Fraction

Vector = Tuple[Fraction, ...]


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise DimensionError(f"matrix shape must be positive, got {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )
        for value in self.entries:
            if not isinstance(value, int) or isinstance(value, bool):
                raise DimensionError(f"matrix entries must be integers, got {value!r}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise DimensionError("rows must be nonempty and of equal length")
        return cls(len(rows), len(rows[0]), tuple(int(v) for r in rows for v in r))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    def __getitem__(self, index):
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> List[List[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def trace(self) -> int:
        _require_square(self)
        return sum(self[i, i] for i in range(self.rows))

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self.entries)

    def is_positive(self) -> bool:
        return all(v > 0 for v in self.entries)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(-v for v in self.entries))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        out = []
        for i in range(self.rows):
            row = self.row(i)
            for j in range(other.cols):
                out.append(sum(row[k] * other[k, j] for k in range(self.cols)))
        return IntMatrix(self.rows, other.cols, tuple(out))

    def apply(self, vector):
        """Matrix times column vector; entries may be any ring elements"""
        if len(vector) != self.cols:
            raise DimensionError(f"vector of length {len(vector)} for {self.cols} columns")
        result = []
        for i in range(self.rows):
            acc = 0
            for j, a in enumerate(self.row(i)):
                if a:
                    acc = acc + vector[j] * a
            result.append(acc)
        return tuple(result)

    def __str__(self):
        return "(" + "; ".join(" ".join(str(v) for v in self.row(i)) for i in range(self.rows)) + ")"


def _require_square(m: IntMatrix):
    if not m.is_square:
        raise DimensionError(f"square matrix required, got {m.rows}x{m.cols}")


def matrix_power(m: IntMatrix, k: int) -> IntMatrix:
    """m**k by repeated squaring; k = 0 gives the identity"""
    _require_square(m)
    result = IntMatrix.identity(m.rows)
    base = m
    while k > 0:
        if k & 1:
            result = result @ base
        base = base @ base
        k >>= 1
    return result


# ----- determinant and characteristic polynomial -----

def _bareiss(rows: List[List[int]]) -> int:
    n = len(rows)
    if n == 0:
        return 1
    a = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
        prev = pivot
    return sign * a[n - 1][n - 1]


def det_exact(m: IntMatrix) -> int:
    """Fraction-free determinant of a square integer matrix"""
    _require_square(m)
    return _bareiss(m.to_rows())


def det_rational(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Determinant of a square matrix of rationals"""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionError("square matrix required")
    if n == 0:
        return Fraction(1)
    scale = reduce(lcm, (Fraction(v).denominator for r in rows for v in r), 1)
    scaled = [[int(Fraction(v) * scale) for v in r] for r in rows]
    return Fraction(_bareiss(scaled), scale ** n)


def charpoly(m: IntMatrix) -> List[int]:
    """
    Characteristic polynomial det(tI - m), highest degree first.

    Faddeev-LeVerrier over the rationals; the result is verified integral.
    """
    _require_square(m)
    n = m.rows
    a = [[Fraction(v) for v in r] for r in m.to_rows()]
    coeffs = [Fraction(1)]
    work = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # work <- A * work + c_{n-k+1} I
        work = [[sum(a[i][t] * work[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        for i in range(n):
            work[i][i] += coeffs[-1]
        trace = sum(sum(a[i][t] * work[t][i] for t in range(n)) for i in range(n))
        coeffs.append(-trace / k)
    if any(c.denominator != 1 for c in coeffs):
        raise ConsistencyError(f"non-integral characteristic polynomial for {m}")
    return [int(c) for c in coeffs]


def evaluate_matrix_polynomial(coeffs: Sequence[int], m: IntMatrix) -> IntMatrix:
    """Horner evaluation p(m); coefficients highest degree first"""
    _require_square(m)
    n = m.rows
    rows = [[0] * n for _ in range(n)]
    for c in coeffs:
        rows = (IntMatrix.from_rows(rows) @ m).to_rows()
        for i in range(n):
            rows[i][i] += c
    return IntMatrix.from_rows(rows)


# ----- Hermite normal form -----

def _combine_columns(h, u, p, j, x, y, z, w):
    """(col_p, col_j) <- (x col_p + y col_j, z col_p + w col_j)"""
    for mat in (h, u):
        for row in mat:
            a, b = row[p], row[j]
            row[p] = x * a + y * b
            row[j] = z * a + w * b


def _negate_column(h, u, p):
    for mat in (h, u):
        for row in mat:
            row[p] = -row[p]


def hnf(m: IntMatrix) -> Tuple[IntMatrix, IntMatrix]:
    """
    Column-style Hermite normal form.

    Returns (H, U) with H = m @ U, U unimodular and H in the pinned
    convention described in the module docstring.
    """
    h = m.to_rows()
    u = IntMatrix.identity(m.cols).to_rows()
    p = 0
    for r in range(m.rows):
        if p >= m.cols:
            break
        for j in range(p + 1, m.cols):
            b = h[r][j]
            if b == 0:
                continue
            a = h[r][p]
            x, y, _ = igcdex(a, b)
            x, y = int(x), int(y)
            g = x * a + y * b
            if g < 0:
                x, y, g = -x, -y, -g
            # [[x, -b/g], [y, a/g]] has determinant 1
            _combine_columns(h, u, p, j, x, y, -b // g, a // g)
        pivot = h[r][p]
        if pivot == 0:
            continue
        if pivot < 0:
            _negate_column(h, u, p)
            pivot = -pivot
        for k in range(p):
            q = h[r][k] // pivot
            if q:
                _combine_columns(h, u, k, p, 1, -q, 0, 1)
        p += 1
    return IntMatrix.from_rows(h), IntMatrix.from_rows(u)


def hnf_rank(h: IntMatrix) -> int:
    """Number of nonzero columns of a matrix already in Hermite normal form"""
    return sum(1 for j in range(h.cols) if any(h.column(j)))


def integer_kernel(m: IntMatrix) -> List[Tuple[int, ...]]:
    """Z-basis of {x in Z^cols : m x = 0}, read off the HNF transform"""
    h, u = hnf(m)
    rank = hnf_rank(h)
    return [u.column(j) for j in range(rank, m.cols)]


def lattice_contains(h: IntMatrix, vector: Sequence[int]) -> bool:
    """Membership of an integer vector in the column lattice of an HNF basis"""
    v = list(vector)
    if len(v) != h.rows:
        raise DimensionError("vector length does not match lattice dimension")
    for j in range(h.cols):
        col = h.column(j)
        r = next((i for i, c in enumerate(col) if c), None)
        if r is None:
            break
        q, rem = divmod(v[r], col[r])
        if rem:
            return False
        if q:
            v = [a - q * c for a, c in zip(v, col)]
    return not any(v)


# ----- rational matrices and lattices -----

def rational_inverse(rows: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    """
    Inverse by Gauss-Jordan elimination over Q.

    Raises DimensionError when the matrix is singular.
    """
    n = len(rows)
    a = [[Fraction(v) for v in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(rows)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if a[i][c] != 0), None)
        if pivot is None:
            raise DimensionError("matrix is singular")
        a[c], a[pivot] = a[pivot], a[c]
        inv = 1 / a[c][c]
        a[c] = [v * inv for v in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [r[n:] for r in a]


def common_denominator(vectors: Sequence[Sequence[Fraction]]) -> int:
    """Least common multiple of every denominator in the vectors"""
    return reduce(lcm, (Fraction(v).denominator for vec in vectors for v in vec), 1)


def rational_lattice_basis(vectors: Sequence[Sequence[Fraction]]) -> Tuple[IntMatrix, int]:
    """
    Canonical basis of the Z-span of rational column vectors.

    Returns (H, D): H is the HNF of the denominator-cleared columns with
    zero columns dropped, D the lcm of all denominators; the basis vectors
    are the columns of H divided by D.
    """
    if not vectors:
        raise DimensionError("at least one vector required")
    dim = len(vectors[0])
    if any(len(v) != dim for v in vectors):
        raise DimensionError("vectors of different lengths")
    d = common_denominator(vectors)
    cols = [[int(Fraction(x) * d) for x in v] for v in vectors]
    m = IntMatrix(dim, len(cols), tuple(cols[j][i] for i in range(dim) for j in range(len(cols))))
    h, _ = hnf(m)
    rank = hnf_rank(h)
    if rank == 0:
        raise DimensionError("the zero lattice has no basis")
    kept = IntMatrix(dim, rank, tuple(h[i, j] for i in range(dim) for j in range(rank)))
    return kept, d


def basis_vectors(h: IntMatrix, d: int) -> List[Vector]:
    """Columns of h divided by d, the inverse of rational_lattice_basis"""
    return [tuple(Fraction(c, d) for c in h.column(j)) for j in range(h.cols)]


def _dual(vectors: Sequence[Vector]) -> List[Vector]:
    n = len(vectors)
    b = [[vectors[j][i] for j in range(n)] for i in range(n)]
    inv = rational_inverse(b)
    # columns of (B^-1)^T are the rows of B^-1
    return [tuple(r) for r in inv]


def lattice_intersection(bases: Sequence[Sequence[Vector]]) -> List[Vector]:
    """Intersection of full-rank rational lattices via duals of the HNF sum"""
    duals = [v for basis in bases for v in _dual(basis)]
    h, d = rational_lattice_basis(duals)
    summed = basis_vectors(h, d)
    if len(summed) != len(summed[0]):
        raise DimensionError("lattices must have full rank")
    h, d = rational_lattice_basis(_dual(summed))
    return basis_vectors(h, d)
