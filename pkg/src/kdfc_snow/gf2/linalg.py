"""Dense bit-packed linear algebra over GF(2).

Vectors are plain Python integers used as bitsets: bit ``i`` is coordinate
``i`` (LSB-first).  Matrices are lists of row integers.  The row-vector
convention is used throughout: a linear map ``M`` acts on a row vector ``v``
as ``v * M``, implemented by XORing together the rows of ``M`` selected by
the set bits of ``v``.

The basis vector written ``(0, 0, ..., 1)`` — one in the *last* coordinate —
is ``1 << (n - 1)`` in this packing.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from kdfc_snow.gf2.poly import Gf2Poly


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


class SingularMatrixError(ValueError):
    """A square matrix required to be invertible is singular."""


class NoSolutionError(ValueError):
    """A linear system has no solution."""


def vec_to_hex(v: int, length: int) -> str:
    """Serialize a bit vector to hex, least significant nibble first."""
    if v < 0 or v >> length:
        raise ValueError("vector has bits beyond its length")
    ndigits = (length + 3) // 4
    return "".join(format((v >> (4 * k)) & 0xF, "x") for k in range(ndigits))


def vec_from_hex(s: str, length: int) -> int:
    """Inverse of :func:`vec_to_hex`."""
    ndigits = (length + 3) // 4
    if len(s) != ndigits:
        raise ValueError(f"expected {ndigits} hex digits for {length} bits")
    v = 0
    for k, ch in enumerate(s):
        v |= int(ch, 16) << (4 * k)
    if v >> length:
        raise ValueError("hex string has bits beyond the stated length")
    return v


class BitMatrix:
    """An r x c matrix over GF(2), stored as one int per row."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Sequence[int], ncols: int):
        rows = list(rows)
        if ncols < 0:
            raise DimensionError("negative column count")
        mask = (1 << ncols) - 1
        for r in rows:
            if r < 0 or r & ~mask:
                raise DimensionError("row has bits beyond the column count")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    # -- constructors -----------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls([1 << i for i in range(n)], n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls([0] * nrows, ncols)

    @classmethod
    def from_bits(cls, bits: Sequence[Sequence[int]]) -> "BitMatrix":
        """Build from a list of 0/1 rows (row[i][j] = entry i,j)."""
        ncols = len(bits[0]) if bits else 0
        rows = []
        for row in bits:
            if len(row) != ncols:
                raise DimensionError("ragged rows")
            rows.append(sum((bit & 1) << j for j, bit in enumerate(row)))
        return cls(rows, ncols)

    # -- basic access ------------------------------------------------------

    def get(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def to_bits(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.ncols)] for r in self.rows]

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.rows, self.ncols)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def transpose(self) -> "BitMatrix":
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            while r:
                j = (r & -r).bit_length() - 1
                cols[j] |= 1 << i
                r &= r - 1
        return BitMatrix(cols, self.nrows)

    def submatrix(self, row_idx: Iterable[int], col_idx: Iterable[int]) -> "BitMatrix":
        cols = list(col_idx)
        out = []
        for i in row_idx:
            r = self.rows[i]
            out.append(sum(((r >> j) & 1) << k for k, j in enumerate(cols)))
        return BitMatrix(out, len(cols))

    # -- dunder ------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return (
            self.ncols == other.ncols
            and self.nrows == other.nrows
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((tuple(self.rows), self.ncols))

    def __mul__(self, other: "BitMatrix") -> "BitMatrix":
        return mat_mul(self, other)

    def __repr__(self) -> str:
        return f"BitMatrix({self.nrows}x{self.ncols})"

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "rows": self.nrows,
            "cols": self.ncols,
            "data": [vec_to_hex(r, self.ncols) for r in self.rows],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BitMatrix":
        ncols = obj["cols"]
        rows = [vec_from_hex(s, ncols) for s in obj["data"]]
        if len(rows) != obj["rows"]:
            raise ValueError("row count mismatch in serialized matrix")
        return cls(rows, ncols)


def mat_vec_mul(v: int, m: BitMatrix) -> int:
    """Row vector times matrix: ``v * m`` (XOR of rows of m selected by v)."""
    if v >> m.nrows:
        raise DimensionError("vector longer than matrix row count")
    acc = 0
    rows = m.rows
    while v:
        i = (v & -v).bit_length() - 1
        acc ^= rows[i]
        v &= v - 1
    return acc


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """GF(2) matrix product."""
    if a.ncols != b.nrows:
        raise DimensionError(f"cannot multiply {a.ncols}-col by {b.nrows}-row")
    brows = b.rows
    out = []
    for r in a.rows:
        acc = 0
        while r:
            i = (r & -r).bit_length() - 1
            acc ^= brows[i]
            r &= r - 1
        out.append(acc)
    return BitMatrix(out, b.ncols)


def _echelon(rows: list[int], ncols: int, reduce_up: bool = True):
    """In-place row echelon form; returns list of (pivot_col, row_index).

    Deterministic pivoting: for each column left to right, the first
    remaining row with a set bit in that column becomes the pivot row.
    """
    pivots = []
    nrows = len(rows)
    rank_ = 0
    for col in range(ncols):
        bit = 1 << col
        pivot = None
        for i in range(rank_, nrows):
            if rows[i] & bit:
                pivot = i
                break
        if pivot is None:
            continue
        rows[rank_], rows[pivot] = rows[pivot], rows[rank_]
        prow = rows[rank_]
        rng = range(nrows) if reduce_up else range(rank_ + 1, nrows)
        for i in rng:
            if i != rank_ and rows[i] & bit:
                rows[i] ^= prow
        pivots.append((col, rank_))
        rank_ += 1
        if rank_ == nrows:
            break
    return pivots


def rank(a: BitMatrix) -> int:
    """GF(2) row rank."""
    rows = list(a.rows)
    return len(_echelon(rows, a.ncols, reduce_up=False))


def determinant(a: BitMatrix) -> int:
    """Determinant over GF(2): 1 iff the square matrix has full rank."""
    if not a.is_square():
        raise DimensionError("determinant of a non-square matrix")
    return 1 if rank(a) == a.nrows else 0


def mat_inverse(a: BitMatrix) -> BitMatrix:
    """Inverse of a square matrix; raises SingularMatrixError if singular."""
    if not a.is_square():
        raise DimensionError("inverse of a non-square matrix")
    n = a.nrows
    # Augment each row with an identity tracker in the high bits.
    work = [a.rows[i] | (1 << (n + i)) for i in range(n)]
    pivots = _echelon(work, n)
    if len(pivots) != n:
        raise SingularMatrixError("matrix is singular")
    # After full reduction the low part is a permutation of identity rows.
    inv = [0] * n
    for col, i in pivots:
        inv[col] = work[i] >> n
    return BitMatrix(inv, n)


def solve_row(m: BitMatrix, v: int) -> int:
    """Solve ``y * m == v`` for a row vector y.

    Deterministic: free variables are fixed to 0 (the returned combination
    uses pivot rows only).  Raises NoSolutionError when v is outside the
    row space of m.
    """
    if v >> m.ncols:
        raise DimensionError("right-hand side longer than matrix column count")
    n = m.nrows
    work = [m.rows[i] | (1 << (m.ncols + i)) for i in range(n)]
    pivots = _echelon(work, m.ncols)
    lowmask = (1 << m.ncols) - 1
    target = v
    y = 0
    for col, i in pivots:
        if (target >> col) & 1:
            target ^= work[i] & lowmask
            y ^= work[i] >> m.ncols
    if target:
        raise NoSolutionError("vector is outside the row space")
    return y


def companion_matrix(p: Gf2Poly) -> BitMatrix:
    """Companion matrix P of a monic polynomial, row-vector convention.

    P has ones on the subdiagonal (P[j+1, j] = 1) and last column
    (c_0, ..., c_{b-1}) where p(x) = x^b + sum c_j x^j, so that
    (x_n, ..., x_{n+b-1}) * P = (x_{n+1}, ..., x_{n+b}).
    """
    b = p.degree
    if b < 1:
        raise ValueError("companion matrix needs degree >= 1")
    top = 1 << (b - 1)
    rows = []
    for i in range(b):
        r = (1 << (i - 1)) if i >= 1 else 0
        if (p.coeffs >> i) & 1:
            r |= top
        rows.append(r)
    return BitMatrix(rows, b)


def companion_vec_mul(v: int, p: Gf2Poly) -> int:
    """Fast ``v * companion_matrix(p)`` without materializing the matrix."""
    b = p.degree
    tail = (v & p.coeffs & ((1 << b) - 1)).bit_count() & 1
    return (v >> 1) | (tail << (b - 1))


def krylov_matrix(c: int, a: BitMatrix, k: int) -> BitMatrix:
    """Rows c, c*a, c*a^2, ..., c*a^(k-1)."""
    if not a.is_square():
        raise DimensionError("Krylov iteration needs a square matrix")
    if c >> a.nrows:
        raise DimensionError("vector longer than matrix size")
    rows = []
    cur = c
    for _ in range(k):
        rows.append(cur)
        cur = mat_vec_mul(cur, a)
    return BitMatrix(rows, a.ncols)


def char_poly(a: BitMatrix) -> Gf2Poly:
    """Characteristic polynomial of a square matrix over GF(2).

    Deterministic O(n^3): builds a filtration of Krylov-invariant subspaces;
    on each quotient the minimal polynomial of the next standard basis
    vector is a companion block, and the characteristic polynomial is the
    product of the block polynomials.  Works for non-cyclic matrices
    (e.g. char_poly(I_2) = x^2 + 1).
    """
    if not a.is_square():
        raise DimensionError("characteristic polynomial of a non-square matrix")
    n = a.nrows
    span: list[int] = []  # echelonized basis of the invariant subspace so far
    span_pivots: list[int] = []  # pivot bit positions, parallel to span
    result = 1  # polynomial accumulator, bit i = coeff of x^i
    dim = 0

    def reduce_vec(x: int) -> int:
        for pb, row in zip(span_pivots, span):
            if (x >> pb) & 1:
                x ^= row
        return x

    for j0 in range(n):
        if dim == n:
            break
        w = reduce_vec(1 << j0)
        if w == 0:
            continue
        # Krylov chain of w in the quotient by the current invariant span.
        local: list[tuple[int, int, int]] = []  # (pivot_bit, vector, combo poly)
        chain: list[int] = []
        cur = w
        t = 0
        while True:
            x = cur
            combo = 1 << t
            for pb, vec, cmb in local:
                if (x >> pb) & 1:
                    x ^= vec
                    combo ^= cmb
            if x == 0:
                # cur = sum of earlier chain vectors: combo is the block poly.
                result = _poly_mul_int(result, combo)
                break
            local.append((x.bit_length() - 1, x, combo))
            chain.append(cur)
            t += 1
            cur = reduce_vec(mat_vec_mul(cur, a))
        # Fold the chain into the global invariant span.
        for vec in chain:
            x = reduce_vec(vec)
            if x:
                span_pivots.append(x.bit_length() - 1)
                span.append(x)
                dim += 1
    return Gf2Poly(result)


def _poly_mul_int(a: int, b: int) -> int:
    """Product of two GF(2)[x] polynomials packed as ints."""
    acc = 0
    shift = 0
    while b:
        if b & 1:
            acc ^= a << shift
        b >>= 1
        shift += 1
    return acc


def berlekamp_massey(bits: Sequence[int]) -> Gf2Poly:
    """Shortest LFSR recurrence generating a bit sequence.

    Returns the characteristic polynomial f of degree L (the linear
    complexity): sum_j f_j s_{k+j} = 0 for every window, i.e.
    s_{k+L} = sum_{j<L} f_j s_{k+j}.  For a full-period window of an
    m-sequence this recovers the generating primitive polynomial.
    """
    if not len(bits):
        raise ValueError("empty sequence")
    conn = 1  # connection polynomial C(D), bit i = c_i, c_0 = 1
    prev = 1  # B(D), connection before the last length change
    ln = 0
    gap = 1  # n - m where m is the index of the last length change
    hist = 0  # bit i = s_{n-i}: reversed history window
    for n, s in enumerate(bits):
        hist = (hist << 1) | (s & 1)
        d = (conn & hist).bit_count() & 1
        if d == 0:
            gap += 1
        elif 2 * ln > n:
            conn ^= prev << gap
            gap += 1
        else:
            conn, prev = conn ^ (prev << gap), conn
            ln = n + 1 - ln
            gap = 1
    # Reciprocal within length ln gives the characteristic form.
    f = 0
    for j in range(ln + 1):
        if (conn >> (ln - j)) & 1:
            f |= 1 << j
    return Gf2Poly(f)


def linear_complexity(bits: Sequence[int]) -> int:
    """Length of the shortest LFSR generating the sequence (Berlekamp-Massey)."""
    conn = 1
    prev = 1
    ln = 0
    gap = 1
    hist = 0
    for n, s in enumerate(bits):
        hist = (hist << 1) | (s & 1)
        if (conn & hist).bit_count() & 1 == 0:
            gap += 1
        elif 2 * ln > n:
            conn ^= prev << gap
            gap += 1
        else:
            conn, prev = conn ^ (prev << gap), conn
            ln = n + 1 - ln
            gap = 1
    return ln
