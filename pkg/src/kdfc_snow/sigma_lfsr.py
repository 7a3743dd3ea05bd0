"""Word-oriented LFSR with matrix feedback gains (sigma-LFSR).

A sigma-LFSR has ``b`` delay blocks, each holding an m-bit word, and m x m
gain matrices B_0..B_{b-1} over GF(2).  One step shifts the blocks down and
feeds back

    x_{n+b} = sum_i x_{n+i} * B_i        (row vector times matrix)

The configuration matrix packs the gains in companion-like block form
(identity blocks on the block super-diagonal, gains across the last block
row); the state-update (transition) matrix is its block transpose with the
gains kept unturned, so that stacking the blocks into one mb-bit row vector
and multiplying by it reproduces one step.  Characteristic polynomials agree
between the two layouts, so either may be fed to char_poly.

Words use the package bit order: bit i of a word is its coefficient of 2^i,
and stacked state vectors place block i at bit positions [i*m, (i+1)*m).
"""

from __future__ import annotations

from kdfc_snow.gf2.linalg import BitMatrix, DimensionError, mat_vec_mul
from kdfc_snow.gf2.poly import Gf2Poly

__all__ = [
    "SigmaConfig",
    "LfsrState",
    "NotMCompanionError",
    "PeriodGuardError",
    "build_config_matrix",
    "build_transition_matrix",
    "extract_config",
    "lfsr_step",
    "state_vector_equiv",
    "period",
]

PERIOD_GUARD_BITS = 24


class NotMCompanionError(ValueError):
    """A matrix lacks the block-companion structure of a sigma-LFSR."""


class PeriodGuardError(ValueError):
    """Period search refused: state space too large or seed zero."""


class SigmaConfig:
    """Feedback configuration: word width m, block count b, gains B_0..B_{b-1}."""

    __slots__ = ("m", "b", "gains", "_byte_tables")

    def __init__(self, m: int, b: int, gains: list[BitMatrix]):
        if m < 1 or b < 1:
            raise DimensionError(f"need m, b >= 1, got m={m} b={b}")
        if len(gains) != b:
            raise DimensionError(f"expected {b} gain matrices, got {len(gains)}")
        for i, g in enumerate(gains):
            if g.nrows != m or g.ncols != m:
                raise DimensionError(
                    f"gain B_{i} is {g.nrows}x{g.ncols}, expected {m}x{m}"
                )
        self.m = m
        self.b = b
        self.gains = list(gains)
        self._byte_tables = None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SigmaConfig):
            return NotImplemented
        return self.m == other.m and self.b == other.b and self.gains == other.gains

    def __repr__(self) -> str:
        return f"SigmaConfig(m={self.m}, b={self.b})"

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "b": self.b,
            "gains": [g.to_json() for g in self.gains],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SigmaConfig":
        gains = [BitMatrix.from_json(g) for g in obj["gains"]]
        return cls(int(obj["m"]), int(obj["b"]), gains)

    def byte_tables(self) -> list[list[list[int]]]:
        """Per-gain, per-byte-lane lookup tables for the fast feedback path.

        tables[i][lane][byte] = (byte << (8*lane) as a row selector) * B_i,
        so a feedback term x*B_i is four (or m/8) table lookups.  Built once
        and cached; gains are treated as immutable after construction.
        """
        if self._byte_tables is None:
            m = self.m
            lanes = (m + 7) // 8
            all_tables = []
            for g in self.gains:
                rows = g.rows
                per_gain = []
                for lane in range(lanes):
                    base = 8 * lane
                    width = min(8, m - base)
                    table = [0] * (1 << width)
                    for v in range(1, 1 << width):
                        low = v & -v
                        table[v] = table[v ^ low] ^ rows[base + low.bit_length() - 1]
                    per_gain.append(table)
                all_tables.append(per_gain)
            self._byte_tables = all_tables
        return self._byte_tables


class LfsrState:
    """Delay-block contents x_n..x_{n+b-1}, each an m-bit word."""

    __slots__ = ("m", "blocks")

    def __init__(self, m: int, blocks: list[int]):
        if m < 1:
            raise DimensionError("need m >= 1")
        mask = (1 << m) - 1
        for i, w in enumerate(blocks):
            if w < 0 or w & ~mask:
                raise ValueError(f"block {i} not an {m}-bit word: {w:#x}")
        self.m = m
        self.blocks = list(blocks)

    @property
    def b(self) -> int:
        return len(self.blocks)

    def stacked(self) -> int:
        """All blocks as one mb-bit integer, block i at bits [i*m, (i+1)*m)."""
        acc = 0
        for i, w in enumerate(self.blocks):
            acc |= w << (i * self.m)
        return acc

    @classmethod
    def from_stacked(cls, m: int, b: int, v: int) -> "LfsrState":
        mask = (1 << m) - 1
        return cls(m, [(v >> (i * m)) & mask for i in range(b)])

    def copy(self) -> "LfsrState":
        return LfsrState(self.m, self.blocks)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LfsrState):
            return NotImplemented
        return self.m == other.m and self.blocks == other.blocks


def build_config_matrix(cfg: SigmaConfig) -> BitMatrix:
    """mb x mb block matrix: identity super-diagonal, gains in last block row."""
    m, b = cfg.m, cfg.b
    n = m * b
    if b == 1:
        return cfg.gains[0].copy()
    rows = []
    for j in range(b - 1):
        # block row j: identity at block column j+1
        shift = (j + 1) * m
        rows.extend(1 << (shift + r) for r in range(m))
    for r in range(m):
        acc = 0
        for i, g in enumerate(cfg.gains):
            acc |= g.rows[r] << (i * m)
        rows.append(acc)
    return BitMatrix(rows, n)


def build_transition_matrix(cfg: SigmaConfig) -> BitMatrix:
    """State-update matrix: stacked_next = stacked * T for one lfsr_step."""
    m, b = cfg.m, cfg.b
    n = m * b
    rows = [0] * n
    for i in range(b):
        for r in range(m):
            acc = cfg.gains[i].rows[r] << ((b - 1) * m)
            if i > 0:
                # identity on the block sub-diagonal: block i shifts to i-1
                acc ^= 1 << ((i - 1) * m + r)
            rows[i * m + r] = acc
    return BitMatrix(rows, n)


def extract_config(c: BitMatrix, m: int) -> SigmaConfig:
    """Recover gains from a configuration matrix; reject other structures."""
    if not c.is_square():
        raise NotMCompanionError("matrix is not square")
    n = c.nrows
    if m < 1 or n % m:
        raise NotMCompanionError(f"size {n} not a multiple of m={m}")
    b = n // m
    if b > 1:
        for j in range(b - 1):
            shift = (j + 1) * m
            for r in range(m):
                if c.rows[j * m + r] != 1 << (shift + r):
                    raise NotMCompanionError(
                        f"block row {j} is not a super-diagonal identity block"
                    )
    gains = []
    mask = (1 << m) - 1
    for i in range(b):
        rows = [(c.rows[(b - 1) * m + r] >> (i * m)) & mask for r in range(m)]
        gains.append(BitMatrix(rows, m))
    return SigmaConfig(m, b, gains)


def lfsr_step(cfg: SigmaConfig, s: LfsrState) -> tuple[LfsrState, int]:
    """One shift: returns (new state, output word = the oldest block x_n)."""
    if s.m != cfg.m or s.b != cfg.b:
        raise DimensionError("state and configuration dimensions differ")
    feedback = 0
    for w, g in zip(s.blocks, cfg.gains):
        if w:
            feedback ^= mat_vec_mul(w, g)
    out = s.blocks[0]
    new = LfsrState(s.m, s.blocks[1:] + [feedback])
    return new, out


def step_stacked(cfg: SigmaConfig, v: int) -> int:
    """lfsr_step on a stacked mb-bit state, via byte tables (fast path)."""
    m = cfg.m
    mask = (1 << m) - 1
    tables = cfg.byte_tables()
    feedback = 0
    for i in range(cfg.b):
        w = (v >> (i * m)) & mask
        if w:
            for lane, table in enumerate(tables[i]):
                feedback ^= table[(w >> (8 * lane)) & 0xFF]
    return (v >> m) | (feedback << ((cfg.b - 1) * m))


def state_vector_equiv(cfg: SigmaConfig, s: LfsrState) -> bool:
    """Does one lfsr_step equal stacked-vector multiplication by the transition matrix?"""
    t = build_transition_matrix(cfg)
    via_matrix = mat_vec_mul(s.stacked(), t)
    stepped, _ = lfsr_step(cfg, s)
    return via_matrix == stepped.stacked()


def period(cfg: SigmaConfig, s0: LfsrState) -> int:
    """Least t > 0 returning to the seed state; guarded to mb <= 24."""
    n = cfg.m * cfg.b
    if n > PERIOD_GUARD_BITS:
        raise PeriodGuardError(f"state space 2^{n} exceeds the 2^{PERIOD_GUARD_BITS} guard")
    start = s0.stacked()
    if start == 0:
        raise PeriodGuardError("zero seed is a fixed point; period undefined")
    v = step_stacked(cfg, start)
    t = 1
    while v != start:
        v = step_stacked(cfg, v)
        t += 1
    return t


def orbit_of(cfg: SigmaConfig, s0: LfsrState) -> list[int]:
    """Stacked states visited until the seed recurs (guarded like period)."""
    n = cfg.m * cfg.b
    if n > PERIOD_GUARD_BITS:
        raise PeriodGuardError(f"state space 2^{n} exceeds the 2^{PERIOD_GUARD_BITS} guard")
    start = s0.stacked()
    if start == 0:
        raise PeriodGuardError("zero seed is a fixed point; period undefined")
    orbit = [start]
    v = step_stacked(cfg, start)
    while v != start:
        orbit.append(v)
        v = step_stacked(cfg, v)
    return orbit


def config_char_poly(cfg: SigmaConfig) -> Gf2Poly:
    """Characteristic polynomial of the configuration matrix."""
    from kdfc_snow.gf2.linalg import char_poly

    return char_poly(build_config_matrix(cfg))
