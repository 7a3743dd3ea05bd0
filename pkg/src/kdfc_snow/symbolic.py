"""Symbolic (ANF) analysis of the configuration pipeline at toy sizes.

The pipeline's change-of-basis matrix Q is rebuilt here with the free
entries of Y kept as boolean unknowns: one designated row of Y is the
unit vector e_1 and the other m-1 rows are fully symbolic.  Row blocks
of Q are [e_1*P^j, v_1*P^j, ..., v_{m-1}*P^j] for j = 0..b-1, where P is
the companion matrix of the prescribed degree-mb polynomial.  Because
det Q = 1 over GF(2), the inverse equals the adjugate, i.e. transposed
minors, so algebraic-degree claims about Q^{-1} and about the derived
configuration C = Q*P*Q^{-1} reduce to statements about minors.

Variable naming: v_{i,j} (free row i = 1..m-1, coordinate j = 1..mb)
maps to the flat 1-based index (i-1)*mb + j, printed as "x<index>".
With m = 2 this makes v_{1,j} print as xj, matching the worked 8x8
instance reproduced in the tests.

Row vectors are displayed left-to-right as columns 1..n; column c of a
displayed row corresponds to bit c-1 of the packed-integer convention
used by gf2.linalg, so e_1 = (0, ..., 0, 1) evaluates to 1 << (n-1) and
the symbolic companion action mirrors companion_vec_mul exactly:
(q_1, ..., q_n) * P = (q_2, ..., q_n, sum of q_{e+1} over exponents e
of p below n).
"""

from __future__ import annotations

from kdfc_snow.gf2.linalg import BitMatrix
from kdfc_snow.gf2.poly import Gf2Poly

__all__ = [
    "AnfPoly",
    "SymMatrix",
    "GuardError",
    "degree",
    "var_index",
    "build_symbolic_q",
    "build_symbolic_qp",
    "sym_mat_mul",
    "sym_det",
    "all_minors",
    "sym_adjugate_inverse",
    "compute_symbolic_config",
    "verify_minor_lemmas",
    "format_report",
    "theorem1_check",
]

#: degree of the zero polynomial
NEG_INF = float("-inf")


class GuardError(ValueError):
    """Requested size exceeds what the symbolic routines should attempt."""


class AnfPoly:
    """Boolean polynomial in algebraic normal form over GF(2).

    Stored as a frozenset of monomials, each monomial a frozenset of
    1-based variable indices; the empty monomial is the constant 1.
    Addition is symmetric difference; multiplication distributes with
    idempotent variables (x^2 = x) and parity cancellation.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        self.terms: frozenset[frozenset[int]] = frozenset(
            frozenset(t) for t in terms
        )

    @classmethod
    def zero(cls) -> "AnfPoly":
        return cls()

    @classmethod
    def one(cls) -> "AnfPoly":
        return cls([()])

    @classmethod
    def var(cls, i: int) -> "AnfPoly":
        if i < 1:
            raise ValueError("variable indices are 1-based")
        return cls([(i,)])

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AnfPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __add__(self, other: "AnfPoly") -> "AnfPoly":
        out = AnfPoly()
        out.terms = self.terms ^ other.terms
        return out

    def __mul__(self, other: "AnfPoly") -> "AnfPoly":
        if not self.terms or not other.terms:
            return AnfPoly()
        if self.terms == _ONE_TERMS:
            return other
        if other.terms == _ONE_TERMS:
            return self
        acc: set[frozenset[int]] = set()
        for s in self.terms:
            for t in other.terms:
                u = s | t
                if u in acc:
                    acc.discard(u)
                else:
                    acc.add(u)
        out = AnfPoly()
        out.terms = frozenset(acc)
        return out

    @property
    def degree(self):
        """Max monomial size; 0 for constant 1, -inf for the zero poly."""
        if not self.terms:
            return NEG_INF
        return max(len(t) for t in self.terms)

    def variables(self) -> set[int]:
        out: set[int] = set()
        for t in self.terms:
            out |= t
        return out

    def eval(self, bits: int) -> int:
        """Evaluate with variable x_v taken from bit v-1 of ``bits``."""
        acc = 0
        for t in self.terms:
            if all((bits >> (v - 1)) & 1 for v in t):
                acc ^= 1
        return acc

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for t in sorted(self.terms, key=lambda t: tuple(sorted(t))):
            parts.append(" ".join(f"x{v}" for v in sorted(t)) if t else "1")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"AnfPoly({self})"


_ONE_TERMS = frozenset([frozenset()])

_ZERO = AnfPoly.zero()
_ONE = AnfPoly.one()


def degree(p: AnfPoly):
    """Algebraic degree of p (module-level alias of AnfPoly.degree)."""
    return p.degree


class SymMatrix:
    """A rectangular grid of AnfPoly entries."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: list[list[AnfPoly]]):
        self.nrows = len(rows)
        self.ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != self.ncols:
                raise ValueError("ragged symbolic matrix")
        self.rows = [list(r) for r in rows]

    def __getitem__(self, ij: tuple[int, int]) -> AnfPoly:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymMatrix):
            return NotImplemented
        return self.rows == other.rows

    @classmethod
    def identity(cls, n: int) -> "SymMatrix":
        return cls(
            [[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)]
        )

    @classmethod
    def from_bitmatrix(cls, a: BitMatrix) -> "SymMatrix":
        return cls(
            [
                [_ONE if (r >> j) & 1 else _ZERO for j in range(a.ncols)]
                for r in a.rows
            ]
        )

    def eval(self, bits: int) -> BitMatrix:
        """Numeric specialization: column c maps to bit c-1 of each row."""
        out = []
        for r in self.rows:
            word = 0
            for j, entry in enumerate(r):
                word |= entry.eval(bits) << j
            out.append(word)
        return BitMatrix(out, self.ncols)

    def max_degree(self):
        """Largest entry degree (the Theta measure); -inf if all zero."""
        best = NEG_INF
        for r in self.rows:
            for entry in r:
                d = entry.degree
                if d > best:
                    best = d
        return best


def var_index(i: int, j: int, n: int) -> int:
    """Flat 1-based variable index of v_{i,j} with coordinates 1..n."""
    if not (i >= 1 and 1 <= j <= n):
        raise ValueError("v_{i,j} needs i >= 1 and 1 <= j <= n")
    return (i - 1) * n + j


def _sym_companion_row_mul(row: list[AnfPoly], p: Gf2Poly) -> list[AnfPoly]:
    """Symbolic row * companion(p): shift left, feedback in the last column."""
    n = len(row)
    fb = _ZERO
    for e in p.exponents():
        if e < n:
            fb = fb + row[e]
    return row[1:] + [fb]


def _check_guard(m: int, b: int, limit: int) -> int:
    n = m * b
    if m < 1 or b < 1:
        raise ValueError("need m >= 1 and b >= 1")
    if n > limit:
        raise GuardError(f"mb = {n} exceeds the symbolic size guard {limit}")
    return n


def build_symbolic_q(m: int, b: int, p: Gf2Poly) -> SymMatrix:
    """Symbolic Q: blocks [e_1*P^j, v_1*P^j, ..., v_{m-1}*P^j], j = 0..b-1."""
    n = _check_guard(m, b, 12)
    if p.degree != n:
        raise ValueError(f"polynomial degree {p.degree} != mb = {n}")
    e1 = [_ZERO] * (n - 1) + [_ONE]
    block = [e1] + [
        [AnfPoly.var(var_index(i, j, n)) for j in range(1, n + 1)]
        for i in range(1, m)
    ]
    rows: list[list[AnfPoly]] = []
    for j in range(b):
        rows.extend(block)
        if j + 1 < b:
            block = [_sym_companion_row_mul(r, p) for r in block]
    return SymMatrix(rows)


def build_symbolic_qp(m: int, b: int, p: Gf2Poly) -> SymMatrix:
    """Row-permuted Q: all e_1*P^j rows first, then each v_i's power rows.

    In this order the top-left b x (mb-b) block is zero, the top-right
    b x b block is anti-triangular with 1s on the anti-diagonal, and the
    bottom-left (mb-b) x (mb-b) block has unit determinant.
    """
    q = build_symbolic_q(m, b, p)
    order = [j * m for j in range(b)]
    for i in range(1, m):
        order.extend(j * m + i for j in range(b))
    return SymMatrix([q.rows[r] for r in order])


def sym_mat_mul(a: SymMatrix, b: SymMatrix) -> SymMatrix:
    if a.ncols != b.nrows:
        raise ValueError("inner dimensions differ")
    bt = list(zip(*b.rows))
    out = []
    for ar in a.rows:
        row = []
        for bc in bt:
            acc = _ZERO
            for x, y in zip(ar, bc):
                if x.terms and y.terms:
                    acc = acc + x * y
            row.append(acc)
        out.append(row)
    return SymMatrix(out)


def _det_memo(
    rows: list[list[AnfPoly]],
    rowmask: int,
    colmask: int,
    memo: dict[tuple[int, int], AnfPoly],
) -> AnfPoly:
    """Determinant of the submatrix picked by bit masks, lowest-row expansion."""
    if rowmask == 0:
        return _ONE
    key = (rowmask, colmask)
    hit = memo.get(key)
    if hit is not None:
        return hit
    r = (rowmask & -rowmask).bit_length() - 1
    sub_rows = rowmask & (rowmask - 1)
    acc = _ZERO
    cm = colmask
    while cm:
        c = (cm & -cm).bit_length() - 1
        cm &= cm - 1
        entry = rows[r][c]
        if entry.terms:
            acc = acc + entry * _det_memo(rows, sub_rows, colmask ^ (1 << c), memo)
    memo[key] = acc
    return acc


def sym_det(q: SymMatrix) -> AnfPoly:
    """Symbolic determinant (signs are trivial over GF(2))."""
    if q.nrows != q.ncols:
        raise ValueError("determinant needs a square matrix")
    full = (1 << q.nrows) - 1
    return _det_memo(q.rows, full, full, {})


def all_minors(q: SymMatrix) -> SymMatrix:
    """Matrix of minors: entry (i, j) = det of q with row i, column j removed."""
    if q.nrows != q.ncols:
        raise ValueError("minors need a square matrix")
    n = q.nrows
    full = (1 << n) - 1
    memo: dict[tuple[int, int], AnfPoly] = {}
    out = [
        [
            _det_memo(q.rows, full ^ (1 << i), full ^ (1 << j), memo)
            for j in range(n)
        ]
        for i in range(n)
    ]
    return SymMatrix(out)


def sym_adjugate_inverse(q: SymMatrix) -> SymMatrix:
    """Inverse of a unimodular boolean matrix: transposed minors."""
    minors = all_minors(q)
    return SymMatrix(
        [[minors.rows[j][i] for j in range(q.nrows)] for i in range(q.nrows)]
    )


def compute_symbolic_config(m: int, b: int, p: Gf2Poly) -> SymMatrix:
    """Symbolic C = Q * P * Q^{-1} in the block order of build_symbolic_q."""
    n = _check_guard(m, b, 10)
    q = build_symbolic_q(m, b, p)
    qp_rows = [_sym_companion_row_mul(r, p) for r in q.rows]
    return sym_mat_mul(SymMatrix(qp_rows), sym_adjugate_inverse(q))


def verify_minor_lemmas(m: int, b: int, p: Gf2Poly) -> dict:
    """Check the four minor-degree claims on the permuted symbolic Q.

    Regions use 1-indexed (i, j) over the n x n permuted matrix, n = mb:

    1. row b, columns 1..n-b: minor degree exactly n-b;
    2. rows 1..b, columns n-b+1..n: on the anti-diagonal i+j = n+1 the
       minor equals det of the bottom-left block, and below it (i+j >
       n+1) the minor is identically zero;
    3. rows b+1..n, columns 1..n-b: minor degree exactly n-b-1;
    4. rows b+1..n, columns n-b+1..n: minor identically zero.

    Returns a JSON-friendly report; use format_report for text.
    """
    n = _check_guard(m, b, 10)
    qp = build_symbolic_qp(m, b, p)
    minors = all_minors(qp)
    q3 = SymMatrix([r[: n - b] for r in qp.rows[b:]])
    det_q3 = sym_det(q3)
    lemmas = []

    def region(lemma: int, name: str, checks: list[dict]) -> None:
        bad = [c for c in checks if not c["ok"]]
        lemmas.append(
            {
                "lemma": lemma,
                "region": name,
                "checked": len(checks),
                "violations": bad,
            }
        )

    def fmt_deg(d):
        return "-inf" if d == NEG_INF else d

    checks = []
    want = n - b
    for j in range(1, n - b + 1):
        got = minors.rows[b - 1][j - 1].degree
        checks.append(
            {
                "entry": [b, j],
                "expected_degree": want,
                "computed_degree": fmt_deg(got),
                "ok": got == want,
            }
        )
    region(1, f"row {b}, columns 1..{n - b}", checks)

    checks = []
    for i in range(1, b + 1):
        j = n + 1 - i
        got = minors.rows[i - 1][j - 1]
        checks.append(
            {
                "entry": [i, j],
                "expected": "det(bottom-left block)",
                "ok": got == det_q3,
            }
        )
        for j in range(n + 2 - i, n + 1):
            got = minors.rows[i - 1][j - 1]
            checks.append(
                {
                    "entry": [i, j],
                    "expected": "0",
                    "ok": not got.terms,
                }
            )
    region(2, "anti-diagonal and below in the top-right block", checks)

    checks = []
    want = n - b - 1
    for i in range(b + 1, n + 1):
        for j in range(1, n - b + 1):
            got = minors.rows[i - 1][j - 1].degree
            checks.append(
                {
                    "entry": [i, j],
                    "expected_degree": want,
                    "computed_degree": fmt_deg(got),
                    "ok": got == want,
                }
            )
    region(3, f"rows {b + 1}..{n}, columns 1..{n - b}", checks)

    checks = []
    for i in range(b + 1, n + 1):
        for j in range(n - b + 1, n + 1):
            got = minors.rows[i - 1][j - 1]
            checks.append(
                {
                    "entry": [i, j],
                    "expected": "0",
                    "ok": not got.terms,
                }
            )
    region(4, f"rows {b + 1}..{n}, columns {n - b + 1}..{n}", checks)

    return {
        "m": m,
        "b": b,
        "n": n,
        "polynomial_exponents": p.exponents(),
        "lemmas": lemmas,
        "all_hold": all(not item["violations"] for item in lemmas),
    }


def format_report(report: dict) -> str:
    """Human-readable rendering of a verify_minor_lemmas report."""
    lines = [
        f"minor-degree report for m={report['m']} b={report['b']} "
        f"(n={report['n']})"
    ]
    for item in report["lemmas"]:
        status = "OK" if not item["violations"] else "VIOLATED"
        lines.append(
            f"  claim {item['lemma']}: {item['region']}: "
            f"{item['checked']} checks: {status}"
        )
        for bad in item["violations"]:
            lines.append(f"    entry {bad['entry']}: {bad}")
    lines.append(
        "all claims hold" if report["all_hold"] else "SOME CLAIMS VIOLATED"
    )
    return "\n".join(lines)


def theorem1_check(m: int, b: int, p: Gf2Poly) -> tuple[AnfPoly, bool]:
    """Degree witness in the derived configuration matrix.

    Returns the entry C[n-m+1, n-m+1] (1-indexed, n = mb) of the symbolic
    configuration and whether its algebraic degree equals n-b, which
    witnesses max-entry degree >= n-b.  With m = 1 there are no unknowns
    and the bound is vacuous (entry is constant, returns False).
    """
    n = _check_guard(m, b, 10)
    c = compute_symbolic_config(m, b, p)
    entry = c.rows[n - m][n - m]
    return entry, entry.degree == n - b
