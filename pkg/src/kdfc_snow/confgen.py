"""Feedback-configuration generation with a prescribed characteristic polynomial.

The pipeline grows an m-row matrix Y one column per iteration.  Iteration i
(1-based) works at width w = m + i - 1 with a primitive polynomial p of
degree w:

1. the active row, l = i mod m (rows 0-indexed), is sent to e_1 (the
   last-coordinate unit vector) by right-multiplying Y with a matrix
   Lambda that is a polynomial in companion(p);
2. every other row is extended by one fill bit at the new last coordinate;
3. the active row becomes e_1 of the new width.

After the final iteration Y has width mb; its rows are rotated so the e_1
row comes last, a block matrix Q is stacked from Y times powers of the
degree-mb companion matrix P, and the output configuration is
C = Q * P * Q^{-1}, which is always block-companion with characteristic
polynomial equal to the prescribed degree-mb polynomial.

The split into an offline prefix (y_offline, publishable) and an online
remainder (generate_config) lets most iterations be precomputed; fill bits
are supplied explicitly, either from a seeded deterministic stream or from
cipher-derived words.

Lambda is found without Gaussian elimination: mapping row vectors to the
field F_2[x]/p by v -> XOR of floor(p / x^(i+1)) over set bits i makes the
companion action multiplication by x, so the solver reduces to one modular
inversion.  The Krylov-matrix route (solve y.K = e_1, Lambda = sum y_j A^j)
gives the same unique solution and is kept as the test oracle.
"""

from __future__ import annotations

import hashlib

from kdfc_snow.gf2.linalg import (
    BitMatrix,
    DimensionError,
    NoSolutionError,
    SingularMatrixError,
    companion_matrix,
    companion_vec_mul,
    determinant,
    mat_inverse,
    mat_mul,
    mat_vec_mul,
    rank,
)
from kdfc_snow.gf2.poly import FactorTableMissError, Gf2Poly, euler_phi_2n1, inv_mod
from kdfc_snow.gf2.primtable import PrimitiveTable, primitive_poly
from kdfc_snow.sigma_lfsr import SigmaConfig, extract_config

__all__ = [
    "YMatrix",
    "FillBits",
    "RankLossError",
    "lin_solver",
    "y_iterate",
    "y_offline",
    "build_q",
    "assemble_config",
    "generate_config",
    "count_configurations",
    "brute_force_count",
    "pipeline_poly",
]


class RankLossError(RuntimeError):
    """Y lost full row rank — indicates a pipeline bug, not bad input."""


class YMatrix:
    """m full-rank rows of growing width (m + i after i iterations)."""

    __slots__ = ("m", "width", "rows")

    def __init__(self, m: int, width: int, rows: list[int]):
        if len(rows) != m:
            raise DimensionError(f"expected {m} rows, got {len(rows)}")
        mask = (1 << width) - 1
        for r in rows:
            if r < 0 or r & ~mask:
                raise DimensionError("row exceeds stated width")
        self.m = m
        self.width = width
        self.rows = list(rows)

    @classmethod
    def from_bitmatrix(cls, mat: BitMatrix) -> "YMatrix":
        return cls(mat.nrows, mat.ncols, list(mat.rows))

    def to_bitmatrix(self) -> BitMatrix:
        return BitMatrix(list(self.rows), self.width)

    def is_full_rank(self) -> bool:
        return rank(self.to_bitmatrix()) == self.m

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, YMatrix):
            return NotImplemented
        return (self.m, self.width, self.rows) == (other.m, other.width, other.rows)

    def to_json(self) -> dict:
        return self.to_bitmatrix().to_json()

    @classmethod
    def from_json(cls, obj: dict) -> "YMatrix":
        return cls.from_bitmatrix(BitMatrix.from_json(obj))


class FillBits:
    """Per-iteration fill vectors of m-1 bits each.

    Vector bit j holds the fill for the j-th non-active row in increasing
    row order (the active row gets no fill).  from_words converts m-bit
    words into that packed form given the active-row schedule, preserving
    "bit t of the word goes to row t".
    """

    __slots__ = ("m", "vectors")

    def __init__(self, m: int, vectors: list[int]):
        if m < 1:
            raise DimensionError("need m >= 1")
        limit = 1 << max(m - 1, 0)
        for i, v in enumerate(vectors):
            if v < 0 or v >= limit:
                raise ValueError(f"fill vector {i} wider than {m - 1} bits")
        self.m = m
        self.vectors = list(vectors)

    def __len__(self) -> int:
        return len(self.vectors)

    @classmethod
    def from_seed(cls, m: int, count: int, seed: str, label: str = "fill") -> "FillBits":
        """Deterministic fill stream: SHA-256(label || seed || counter) bits."""
        need = max(m - 1, 0)
        vectors = []
        pool = 0
        pool_bits = 0
        counter = 0
        while len(vectors) < count:
            if pool_bits < need:
                block = hashlib.sha256(
                    f"{label}:{seed}:{counter}".encode()
                ).digest()
                counter += 1
                pool |= int.from_bytes(block, "little") << pool_bits
                pool_bits += 256
                continue
            vectors.append(pool & ((1 << need) - 1) if need else 0)
            pool >>= need
            pool_bits -= need
        return cls(m, vectors)

    @classmethod
    def from_words(cls, m: int, words: list[int], first_iteration: int) -> "FillBits":
        """Pack m-bit words into fill vectors for iterations starting at
        first_iteration (1-based): bit t of word -> row t, skipping the
        active row l = i mod m."""
        vectors = []
        for offset, w in enumerate(words):
            active = (first_iteration + offset) % m
            v = 0
            pos = 0
            for t in range(m):
                if t == active:
                    continue
                v |= ((w >> t) & 1) << pos
                pos += 1
            vectors.append(v)
        return cls(m, vectors)


def pipeline_poly(degree: int, table: "PrimitiveTable | None" = None) -> Gf2Poly:
    """Table polynomial for a pipeline stage (degree 1 handled inline)."""
    if degree == 1:
        return Gf2Poly(0b11)  # x + 1, the unique degree-1 primitive
    if table is not None:
        return table[degree]
    return primitive_poly(degree)


def _poly_of_companion(a: BitMatrix) -> Gf2Poly:
    """Recover p from companion(p), validating the companion structure."""
    if not a.is_square():
        raise DimensionError("companion matrix must be square")
    n = a.nrows
    coeffs = 0
    for i in range(n):
        expected = 1 << (i - 1) if i >= 1 else 0
        row = a.rows[i]
        coeffs |= ((row >> (n - 1)) & 1) << i
        if row & ((1 << (n - 1)) - 1) != expected & ((1 << (n - 1)) - 1):
            raise DimensionError(f"row {i} breaks the companion structure")
    if n == 1:
        coeffs = a.rows[0] & 1
    return Gf2Poly(coeffs | (1 << n))


def _field_embed(v: int, pc: int) -> int:
    """Row vector -> element of F_2[x]/p under the companion-equivariant map."""
    acc = 0
    while v:
        low = v & -v
        acc ^= pc >> low.bit_length()
        v ^= low
    return acc


def _lin_solve_coeffs(c: int, p: Gf2Poly) -> int:
    """Bits y_j with c * (sum y_j A^j) = e_1 for A = companion(p).

    Equals the unique solution of y.K = e_1 over the Krylov matrix of c
    whenever that system is regular (always, for irreducible p and c != 0).
    """
    if c == 0:
        raise NoSolutionError("zero row cannot reach e_1")
    pc = p.coeffs
    gamma = _field_embed(c, pc)
    try:
        y = inv_mod(Gf2Poly(gamma), p)
    except ZeroDivisionError as exc:
        raise NoSolutionError(f"row not cyclic for this modulus: {exc}") from exc
    return y.coeffs


def _row_times_poly_of_companion(row: int, ybits: int, p: Gf2Poly) -> int:
    """row * (sum_j y_j A^j) via repeated companion steps (Horner-free scan)."""
    acc = row if ybits & 1 else 0
    u = row
    y = ybits >> 1
    while y:
        u = companion_vec_mul(u, p)
        if y & 1:
            acc ^= u
        y >>= 1
    return acc


def lin_solver(c: int, a: BitMatrix) -> BitMatrix:
    """Matrix Lambda, polynomial in a, with c * Lambda = e_1.

    a must be a companion matrix; c a nonzero row vector of matching width.
    """
    p = _poly_of_companion(a)
    n = a.nrows
    ybits = _lin_solve_coeffs(c, p)
    rows = [_row_times_poly_of_companion(1 << r, ybits, p) for r in range(n)]
    lam = BitMatrix(rows, n)
    if mat_vec_mul(c, lam) != 1 << (n - 1):
        raise NoSolutionError("post-condition c * Lambda = e_1 failed")
    return lam


def y_iterate(y: YMatrix, i: int, a: BitMatrix, fill: int) -> YMatrix:
    """One pipeline iteration: active row to e_1, then widen by one bit."""
    m, w = y.m, y.width
    if a.nrows != w:
        raise DimensionError(
            f"companion size {a.nrows} does not match Y width {w}"
        )
    if m > 1 and (fill < 0 or fill >> (m - 1)):
        raise ValueError(f"fill needs exactly {m - 1} bits")
    p = _poly_of_companion(a)
    active = i % m
    ybits = _lin_solve_coeffs(y.rows[active], p)
    new_rows = [_row_times_poly_of_companion(r, ybits, p) for r in y.rows]
    if new_rows[active] != 1 << (w - 1):
        raise NoSolutionError("active row did not land on e_1")
    pos = 0
    for t in range(m):
        if t == active:
            new_rows[t] = 1 << w  # e_1 of the new width
        else:
            new_rows[t] |= ((fill >> pos) & 1) << w
            pos += 1
    out = YMatrix(m, w + 1, new_rows)
    if not out.is_full_rank():
        raise RankLossError(f"rank dropped below {m} at iteration {i}")
    return out


def y_offline(
    m: int,
    b: int,
    k: int,
    fill: FillBits,
    init: BitMatrix | None = None,
    table: PrimitiveTable | None = None,
) -> YMatrix:
    """Run the first k iterations from a full-rank m x m start (default I)."""
    if init is None:
        init = BitMatrix.identity(m)
    if init.nrows != m or init.ncols != m:
        raise DimensionError(f"init must be {m}x{m}")
    if rank(init) != m:
        raise RankLossError("initial matrix is not full rank")
    if not 0 <= k <= m * b - m:
        raise ValueError(f"k must lie in [0, {m * b - m}]")
    if fill.m != m or len(fill) < k:
        raise ValueError(f"fill must supply {k} vectors of {m - 1} bits")
    y = YMatrix.from_bitmatrix(init)
    for i in range(1, k + 1):
        a = companion_matrix(pipeline_poly(m + i - 1, table))
        y = y_iterate(y, i, a, fill.vectors[i - 1])
    return y


def build_q(y: YMatrix, p: Gf2Poly) -> BitMatrix:
    """Stack Y * P^j for j = 0..b-1 into the mb x mb change-of-basis Q."""
    m, n = y.m, y.width
    if n % m:
        raise DimensionError(f"Y width {n} is not a multiple of m={m}")
    if p.degree != n:
        raise DimensionError(f"polynomial degree {p.degree} != Y width {n}")
    b = n // m
    rows = []
    cur = list(y.rows)
    for j in range(b):
        rows.extend(cur)
        if j + 1 < b:
            cur = [companion_vec_mul(r, p) for r in cur]
    q = BitMatrix(rows, n)
    if determinant(q) == 0:
        raise SingularMatrixError("Q is singular: Y rows are not independent over P")
    return q


def assemble_config(q: BitMatrix, p: Gf2Poly, m: int) -> SigmaConfig:
    """C = Q * companion(p) * Q^{-1}, returned through the structure check."""
    n = q.nrows
    if p.degree != n:
        raise DimensionError(f"polynomial degree {p.degree} != Q size {n}")
    qp = BitMatrix([companion_vec_mul(r, p) for r in q.rows], n)
    c = mat_mul(qp, mat_inverse(q))
    return extract_config(c, m)


def generate_config(
    m: int,
    b: int,
    p: Gf2Poly,
    y_init: YMatrix,
    online_fill: FillBits,
    verify: bool = True,
    table: PrimitiveTable | None = None,
) -> SigmaConfig:
    """Finish the pipeline from a (possibly empty) offline prefix.

    y_init has width m + k after k offline iterations; online_fill supplies
    the remaining mb - m - k fill vectors.  The result is block-companion
    with characteristic polynomial p (rechecked when verify is set).
    """
    n = m * b
    if p.degree != n:
        raise DimensionError(f"target degree {p.degree} != mb = {n}")
    if y_init.m != m:
        raise DimensionError("y_init row count != m")
    k = y_init.width - m
    total = n - m
    if not 0 <= k <= total:
        raise ValueError(f"y_init width {y_init.width} outside [m, mb]")
    if online_fill.m != m or len(online_fill) < total - k:
        raise ValueError(f"online fill must supply {total - k} vectors")
    y = y_init
    for i in range(k + 1, total + 1):
        a = companion_matrix(pipeline_poly(m + i - 1, table))
        y = y_iterate(y, i, a, online_fill.vectors[i - k - 1])
    # rotate rows so the most recently active row (now e_1) is last
    last_active = total % m
    order = [(last_active + 1 + t) % m for t in range(m)]
    y = YMatrix(m, y.width, [y.rows[t] for t in order])
    q = build_q(y, p)
    cfg = assemble_config(q, p, m)
    if verify:
        from kdfc_snow.sigma_lfsr import config_char_poly

        got = config_char_poly(cfg)
        if got != p:
            raise RankLossError(
                f"characteristic polynomial mismatch: got degree {got.degree}"
            )
    return cfg


def count_configurations(m: int, b: int) -> int:
    """Number of primitive feedback configurations for (m, b).

    |GL(m, F_2)| / (2^m - 1) * phi(2^mb - 1) / (mb) * 2^(m(m-1)(b-1)).
    Needs the factor table for 2^mb - 1, hence mb <= 64.
    """
    n = m * b
    if n > 64:
        raise FactorTableMissError(f"phi(2^{n} - 1) needs factors beyond the table")
    gl = 1
    for i in range(m):
        gl *= (1 << m) - (1 << i)
    phi = euler_phi_2n1(n) if n > 1 else 1
    assert gl % ((1 << m) - 1) == 0 and phi % n == 0
    return gl // ((1 << m) - 1) * (phi // n) * (1 << (m * (m - 1) * (b - 1)))


def brute_force_count(m: int, b: int) -> int:
    """Count primitive configurations by enumerating every gain tuple.

    Walks all 2^(m*m*b) assignments of the b gain matrices, keeping those
    whose configuration matrix has a primitive characteristic polynomial.
    Exponential, so guarded to at most 2^20 candidates; cross-checks
    count_configurations at small sizes.
    """
    from kdfc_snow.gf2.poly import is_primitive
    from kdfc_snow.sigma_lfsr import config_char_poly

    nbits = m * m * b
    if nbits > 20:
        raise ValueError(
            f"enumeration over 2^{nbits} gain tuples is too large (max 2^20)"
        )
    mask = (1 << m) - 1
    count = 0
    for enc in range(1 << nbits):
        gains = []
        for j in range(b):
            base = j * m * m
            rows = [(enc >> (base + i * m)) & mask for i in range(m)]
            gains.append(BitMatrix(rows, m))
        p = config_char_poly(SigmaConfig(m, b, gains))
        if is_primitive(p):
            count += 1
    return count
