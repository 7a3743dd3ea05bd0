"""Statistical randomness battery (SP 800-22-style subset).

Implemented tests: monobit, block-frequency, runs, longest-run-of-ones,
binary-matrix-rank, cumulative-sums (forward and reverse), serial,
approximate-entropy, and linear-complexity.  Each returns a TestResult
whose pass flag is exactly ``p_value >= 0.01``.

Bits are handled as numpy uint8 arrays of 0/1.  Keystream words map to
bits most-significant-bit first (matching the hex the CLI prints).  The
regularized upper incomplete gamma function is implemented here (series
plus continued fraction, 1e-12 relative target) so the module needs no
scientific-library dependency; erfc comes from the stdlib.

Class probabilities: the binary-matrix-rank and linear-complexity tests
use exact closed forms evaluated at run time (rank-distribution product
formula; 1/96, 1/32, 1/8, 1/2, 1/4, 1/16, 1/48).  The longest-run test
uses the standard published table for its run-length class
probabilities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from kdfc_snow.gf2.linalg import BitMatrix, berlekamp_massey, rank

__all__ = [
    "TestResult",
    "InsufficientDataError",
    "ALPHA",
    "TEST_NAMES",
    "bits_from_hex",
    "bits_from_words",
    "igamc",
    "run_test",
    "run_battery",
    "monobit",
    "block_frequency",
    "runs_test",
    "longest_run",
    "binary_matrix_rank",
    "cumulative_sums",
    "serial_test",
    "approximate_entropy",
    "linear_complexity",
]

ALPHA = 0.01

TEST_NAMES = [
    "monobit",
    "block-frequency",
    "runs",
    "longest-run-of-ones",
    "binary-matrix-rank",
    "cumulative-sums-forward",
    "cumulative-sums-reverse",
    "serial",
    "approximate-entropy",
    "linear-complexity",
]


@dataclass
class TestResult:
    """One test outcome; passed is always p_value >= ALPHA."""

    name: str
    p_value: float
    passed: bool
    stats: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p-value {self.p_value} outside [0, 1]")
        if self.passed != (self.p_value >= ALPHA):
            raise ValueError("pass flag must equal p_value >= 0.01")


def _result(name: str, p: float, stats: dict) -> TestResult:
    p = min(max(p, 0.0), 1.0)
    return TestResult(name, p, p >= ALPHA, stats)


class InsufficientDataError(ValueError):
    """The input is shorter than the test's required minimum."""

    def __init__(self, name: str, required: int, got: int):
        super().__init__(
            f"{name}: need at least {required} bits, got {got}"
        )
        self.name = name
        self.required = required
        self.got = got


# ---------------------------------------------------------------------------
# bit-array helpers

def bits_from_hex(text: str) -> np.ndarray:
    """Hex digits to bits, most significant bit of each digit first."""
    digits = "".join(text.split())
    if not digits:
        return np.zeros(0, dtype=np.uint8)
    vals = np.frombuffer(bytes.fromhex(
        digits if len(digits) % 2 == 0 else digits + "0"
    ), dtype=np.uint8)
    bits = np.unpackbits(vals)
    return bits[: 4 * len(digits)].astype(np.uint8)


def bits_from_words(words, width: int = 32) -> np.ndarray:
    """Words to bits, most significant bit first within each word."""
    out = np.zeros(len(words) * width, dtype=np.uint8)
    for i, w in enumerate(words):
        for j in range(width):
            out[i * width + j] = (w >> (width - 1 - j)) & 1
    return out


def _as_bits(bits) -> np.ndarray:
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.ndim != 1:
        raise ValueError("bits must be one-dimensional")
    if arr.size and arr.max() > 1:
        raise ValueError("bits must be 0/1")
    return arr


# ---------------------------------------------------------------------------
# special functions

def _igamc_series(a: float, x: float) -> float:
    """Regularized lower incomplete gamma by power series (x < a + 1)."""
    term = 1.0 / a
    total = term
    n = a
    for _ in range(10000):
        n += 1.0
        term *= x / n
        total += term
        if abs(term) < abs(total) * 1e-16:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _igamc_cf(a: float, x: float) -> float:
    """Regularized upper incomplete gamma by continued fraction (x >= a + 1)."""
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 10000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def igamc(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) = Gamma(a,x)/Gamma(a)."""
    if a <= 0:
        raise ValueError("need a > 0")
    if x < 0:
        raise ValueError("need x >= 0")
    if x == 0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _igamc_series(a, x)
    return _igamc_cf(a, x)


def _phi(x: float) -> float:
    """Standard normal CDF."""
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


# ---------------------------------------------------------------------------
# individual tests

def monobit(bits) -> TestResult:
    x = _as_bits(bits)
    n = x.size
    if n < 100:
        raise InsufficientDataError("monobit", 100, n)
    s = int(2 * int(x.sum()) - n)
    s_obs = abs(s) / math.sqrt(n)
    p = math.erfc(s_obs / math.sqrt(2.0))
    return _result("monobit", p, {"S_n": s, "s_obs": s_obs, "n": n})


def block_frequency(bits, block_size: int = 128) -> TestResult:
    x = _as_bits(bits)
    n = x.size
    if n < 100:
        raise InsufficientDataError("block-frequency", 100, n)
    nblocks = n // block_size
    if nblocks < 1:
        raise InsufficientDataError("block-frequency", block_size, n)
    trimmed = x[: nblocks * block_size].reshape(nblocks, block_size)
    pi = trimmed.mean(axis=1)
    chi2 = 4.0 * block_size * float(((pi - 0.5) ** 2).sum())
    p = igamc(nblocks / 2.0, chi2 / 2.0)
    return _result(
        "block-frequency",
        p,
        {"chi2": chi2, "blocks": nblocks, "block_size": block_size},
    )


def runs_test(bits) -> TestResult:
    x = _as_bits(bits)
    n = x.size
    if n < 100:
        raise InsufficientDataError("runs", 100, n)
    pi = float(x.mean())
    tau = 2.0 / math.sqrt(n)
    if abs(pi - 0.5) >= tau:
        return _result("runs", 0.0, {"pi": pi, "skipped": "monobit precondition"})
    v = int((x[1:] != x[:-1]).sum()) + 1
    num = abs(v - 2.0 * n * pi * (1.0 - pi))
    den = 2.0 * math.sqrt(2.0 * n) * pi * (1.0 - pi)
    p = math.erfc(num / den)
    return _result("runs", p, {"V_n": v, "pi": pi})


#: longest-run class tables: block size -> (min bits, class lows, class
#: highs, class probabilities) per the standard parameterization
_LONGEST_RUN_TABLES = {
    8: (128, 1, 4, [0.2148, 0.3672, 0.2305, 0.1875]),
    128: (6272, 4, 9, [0.1174, 0.2430, 0.2493, 0.1752, 0.1027, 0.1124]),
    10000: (
        750000,
        10,
        16,
        [0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727],
    ),
}


def longest_run(bits) -> TestResult:
    x = _as_bits(bits)
    n = x.size
    if n >= 750000:
        m = 10000
    elif n >= 6272:
        m = 128
    elif n >= 128:
        m = 8
    else:
        raise InsufficientDataError("longest-run-of-ones", 128, n)
    _, lo, hi, pis = _LONGEST_RUN_TABLES[m]
    nblocks = n // m
    counts = [0] * len(pis)
    blocks = x[: nblocks * m].reshape(nblocks, m)
    for row in blocks:
        # longest run of ones in the block
        best = cur = 0
        for b in row:
            cur = cur + 1 if b else 0
            if cur > best:
                best = cur
        cls = min(max(best, lo), hi) - lo
        counts[cls] += 1
    chi2 = sum(
        (counts[i] - nblocks * pis[i]) ** 2 / (nblocks * pis[i])
        for i in range(len(pis))
    )
    p = igamc((len(pis) - 1) / 2.0, chi2 / 2.0)
    return _result(
        "longest-run-of-ones",
        p,
        {"chi2": chi2, "block_size": m, "blocks": nblocks, "counts": counts},
    )


def _rank_probability(n_rows: int, n_cols: int, r: int) -> float:
    """P(rank = r) of a uniform random GF(2) matrix (exact product form)."""
    log2p = float(r * (n_rows + n_cols - r) - n_rows * n_cols)
    prod = 1.0
    for i in range(r):
        prod *= (1 - 2.0 ** (i - n_rows)) * (1 - 2.0 ** (i - n_cols))
        prod /= 1 - 2.0 ** (i - r)
    return prod * 2.0**log2p


def binary_matrix_rank(bits, size: int = 32) -> TestResult:
    x = _as_bits(bits)
    n = x.size
    need = 38 * size * size
    if n < need:
        raise InsufficientDataError("binary-matrix-rank", need, n)
    nmat = n // (size * size)
    full = _rank_probability(size, size, size)
    minus1 = _rank_probability(size, size, size - 1)
    rest = 1.0 - full - minus1
    counts = [0, 0, 0]  # rank = size, size-1, <= size-2
    flat = x[: nmat * size * size].reshape(nmat, size, size)
    weights = (1 << np.arange(size, dtype=np.uint64))
    for mat in flat:
        rows = [int((mat[i].astype(np.uint64) * weights).sum()) for i in range(size)]
        r = rank(BitMatrix(rows, size))
        if r == size:
            counts[0] += 1
        elif r == size - 1:
            counts[1] += 1
        else:
            counts[2] += 1
    expect = [nmat * full, nmat * minus1, nmat * rest]
    chi2 = sum((counts[i] - expect[i]) ** 2 / expect[i] for i in range(3))
    p = math.exp(-chi2 / 2.0)
    return _result(
        "binary-matrix-rank",
        p,
        {"chi2": chi2, "matrices": nmat, "counts": counts,
         "probabilities": [full, minus1, rest]},
    )


def cumulative_sums(bits, reverse: bool = False) -> TestResult:
    x = _as_bits(bits)
    n = x.size
    if n < 100:
        raise InsufficientDataError("cumulative-sums", 100, n)
    steps = 2 * x.astype(np.int64) - 1
    if reverse:
        steps = steps[::-1]
    z = int(np.abs(np.cumsum(steps)).max())
    sqrt_n = math.sqrt(n)
    total = 1.0
    for k in range(((-n // z) + 1) // 4, ((n // z) - 1) // 4 + 1):
        total -= _phi((4 * k + 1) * z / sqrt_n) - _phi((4 * k - 1) * z / sqrt_n)
    for k in range(((-n // z) - 3) // 4, ((n // z) - 1) // 4 + 1):
        total += _phi((4 * k + 3) * z / sqrt_n) - _phi((4 * k + 1) * z / sqrt_n)
    name = "cumulative-sums-reverse" if reverse else "cumulative-sums-forward"
    return _result(name, total, {"z": z})


def _psi_sq(x: np.ndarray, m: int) -> float:
    """psi^2_m with overlapping windows and wraparound (0 for m = 0)."""
    n = x.size
    if m == 0:
        return 0.0
    ext = np.concatenate([x, x[: m - 1]])
    idx = np.zeros(n, dtype=np.int64)
    for j in range(m):
        idx = (idx << 1) | ext[j : j + n]
    counts = np.bincount(idx, minlength=1 << m)
    return float((1 << m) / n * (counts.astype(np.float64) ** 2).sum() - n)


def serial_test(bits, m: int = 2) -> TestResult:
    x = _as_bits(bits)
    n = x.size
    if n < 100:
        raise InsufficientDataError("serial", 100, n)
    psi_m = _psi_sq(x, m)
    psi_m1 = _psi_sq(x, m - 1)
    psi_m2 = _psi_sq(x, m - 2)
    d1 = psi_m - psi_m1
    d2 = psi_m - 2 * psi_m1 + psi_m2
    p1 = igamc(2.0 ** (m - 2), d1 / 2.0)
    p2 = igamc(2.0 ** (m - 3), d2 / 2.0)
    return _result(
        "serial",
        p1,
        {"m": m, "del1": d1, "del2": d2, "p_value2": p2},
    )


def approximate_entropy(bits, m: int = 2) -> TestResult:
    x = _as_bits(bits)
    n = x.size
    if n < 100:
        raise InsufficientDataError("approximate-entropy", 100, n)

    def phi(mm: int) -> float:
        if mm == 0:
            return 0.0
        ext = np.concatenate([x, x[: mm - 1]])
        idx = np.zeros(n, dtype=np.int64)
        for j in range(mm):
            idx = (idx << 1) | ext[j : j + n]
        counts = np.bincount(idx, minlength=1 << mm).astype(np.float64)
        nz = counts[counts > 0] / n
        return float((nz * np.log(nz)).sum())

    apen = phi(m) - phi(m + 1)
    chi2 = 2.0 * n * (math.log(2.0) - apen)
    p = igamc(2.0 ** (m - 1), chi2 / 2.0)
    return _result(
        "approximate-entropy", p, {"m": m, "ApEn": apen, "chi2": chi2}
    )


#: linear-complexity class probabilities (exact): T <= -2.5, six bands, > 2.5
_LC_PI = [1 / 96, 1 / 32, 1 / 8, 1 / 2, 1 / 4, 1 / 16, 1 / 48]


def linear_complexity(bits, block_size: int = 500) -> TestResult:
    x = _as_bits(bits)
    n = x.size
    need = 200 * block_size
    if n < need:
        raise InsufficientDataError("linear-complexity", need, n)
    nblocks = n // block_size
    m = block_size
    sign = 1.0 if m % 2 == 0 else -1.0
    mu = (
        m / 2.0
        + (9.0 + (-1.0) ** (m + 1)) / 36.0
        - (m / 3.0 + 2.0 / 9.0) / 2.0**m
    )
    counts = [0] * 7
    blocks = x[: nblocks * m].reshape(nblocks, m)
    for row in blocks:
        lc = berlekamp_massey([int(b) for b in row]).degree
        t = sign * (lc - mu) + 2.0 / 9.0
        if t <= -2.5:
            cls = 0
        elif t > 2.5:
            cls = 6
        else:
            cls = int(math.floor(t + 2.5)) + 1
        counts[cls] += 1
    chi2 = sum(
        (counts[i] - nblocks * _LC_PI[i]) ** 2 / (nblocks * _LC_PI[i])
        for i in range(7)
    )
    p = igamc(3.0, chi2 / 2.0)
    return _result(
        "linear-complexity",
        p,
        {"chi2": chi2, "blocks": nblocks, "block_size": m, "counts": counts},
    )


# ---------------------------------------------------------------------------
# battery

_DISPATCH = {
    "monobit": monobit,
    "block-frequency": block_frequency,
    "runs": runs_test,
    "longest-run-of-ones": longest_run,
    "binary-matrix-rank": binary_matrix_rank,
    "cumulative-sums-forward": lambda bits: cumulative_sums(bits, False),
    "cumulative-sums-reverse": lambda bits: cumulative_sums(bits, True),
    "serial": serial_test,
    "approximate-entropy": approximate_entropy,
    "linear-complexity": linear_complexity,
}


def run_test(name: str, bits, **params) -> TestResult:
    """Run one test by battery name (params forwarded where meaningful)."""
    if name not in _DISPATCH:
        raise KeyError(f"unknown test {name!r}; choose from {TEST_NAMES}")
    if params:
        base = {
            "block-frequency": block_frequency,
            "binary-matrix-rank": binary_matrix_rank,
            "serial": serial_test,
            "approximate-entropy": approximate_entropy,
            "linear-complexity": linear_complexity,
        }.get(name)
        if base is None:
            raise ValueError(f"test {name!r} takes no parameters")
        return base(bits, **params)
    return _DISPATCH[name](bits)


def run_battery(bits) -> list[TestResult]:
    """Run every implemented test in fixed order."""
    x = _as_bits(bits)
    return [_DISPATCH[name](x) for name in TEST_NAMES]
