"""Shipped data tables: primitive polynomials and factorizations of 2^d - 1.

Both tables are versioned text files with a sha256 checksum header line.
Formats:

* factor table — ``d: p1^e1 p2 p3 ...`` (full factorization of 2^d - 1);
* polynomial table — ``degree: e1,e2,...,ek`` (exponent list, descending).

The polynomial table covers every degree in [2, 512].  Entries of degree
<= 64 are certified primitive against the factor table by the test suite;
higher-degree entries are trusted table data whose irreducibility is still
verified (lazily, on first lookup).  The committed generator scripts under
``tools/`` reproduce both files from scratch.
"""

from __future__ import annotations

import hashlib
import os
from importlib import resources
from pathlib import Path

from kdfc_snow.gf2.poly import FactorTableMissError, Gf2Poly, is_irreducible

POLY_TABLE_ENV = "KDFC_SNOW_POLY_TABLE"
_FACTOR_FILE = "factors_2_pow_d_minus_1.txt"
_POLY_FILE = "primitive_polys.txt"


class TableFormatError(ValueError):
    """A shipped data table is malformed or fails its checksum."""


def _default_data_text(filename: str) -> str:
    return (
        resources.files("kdfc_snow").joinpath("data").joinpath(filename).read_text()
    )


def parse_checksummed(text: str, what: str) -> tuple[str, list[str]]:
    """Verify the '# sha256: ...' header; return (checksum, body lines)."""
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# sha256: "):
        raise TableFormatError(f"{what}: missing checksum header")
    stated = lines[0][len("# sha256: "):].strip()
    body = [ln for ln in lines[1:]]
    digest = hashlib.sha256("\n".join(body).encode()).hexdigest()
    if digest != stated:
        raise TableFormatError(f"{what}: checksum mismatch")
    return stated, [ln for ln in body if ln and not ln.startswith("#")]


_factor_cache: dict[int, dict[int, int]] | None = None


def mersenne_factors(d: int) -> dict[int, int]:
    """Full factorization of 2^d - 1 as {prime: multiplicity}; d in [2, 64]."""
    global _factor_cache
    if _factor_cache is None:
        table: dict[int, dict[int, int]] = {}
        _, lines = parse_checksummed(_default_data_text(_FACTOR_FILE), _FACTOR_FILE)
        for line in lines:
            head, _, rest = line.partition(":")
            deg = int(head)
            factors: dict[int, int] = {}
            for term in rest.split():
                p, _, e = term.partition("^")
                factors[int(p)] = int(e) if e else 1
            table[deg] = factors
        _factor_cache = table
    if d not in _factor_cache:
        raise FactorTableMissError(
            f"no factorization of 2^{d} - 1 in the shipped table"
        )
    return _factor_cache[d]


class PrimitiveTable:
    """Degree -> primitive polynomial, for every degree in [2, 512]."""

    def __init__(self, text: str):
        self._entries: dict[int, Gf2Poly] = {}
        self._checked: set[int] = set()
        self.checksum, lines = parse_checksummed(text, "primitive polynomial table")
        for line in lines:
            head, _, rest = line.partition(":")
            degree = int(head)
            exps = [int(tok) for tok in rest.replace(",", " ").split()]
            poly = Gf2Poly.from_exponents(exps)
            if poly.degree != degree:
                raise TableFormatError(
                    f"table entry for degree {degree} has degree {poly.degree}"
                )
            self._entries[degree] = poly

    @classmethod
    def load_default(cls) -> "PrimitiveTable":
        override = os.environ.get(POLY_TABLE_ENV)
        if override:
            return cls(Path(override).read_text())
        return cls(_default_data_text(_POLY_FILE))

    def degrees(self) -> list[int]:
        return sorted(self._entries)

    def __contains__(self, degree: int) -> bool:
        return degree in self._entries

    def __getitem__(self, degree: int) -> Gf2Poly:
        if degree not in self._entries:
            raise KeyError(f"no table entry for degree {degree} (range is 2..512)")
        poly = self._entries[degree]
        if degree not in self._checked:
            if not is_irreducible(poly):
                raise TableFormatError(
                    f"table entry for degree {degree} is not irreducible"
                )
            self._checked.add(degree)
        return poly


_default_table: PrimitiveTable | None = None


def default_table() -> PrimitiveTable:
    global _default_table
    if _default_table is None:
        _default_table = PrimitiveTable.load_default()
    return _default_table


def primitive_poly(degree: int) -> Gf2Poly:
    """The shipped primitive polynomial of the given degree (2..512)."""
    if not 2 <= degree <= 512:
        raise ValueError(f"degree {degree} outside the table range 2..512")
    return default_table()[degree]
