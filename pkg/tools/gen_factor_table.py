"""Regenerate data/factors_2_pow_d_minus_1.txt (factorizations of 2^d - 1).

Uses sympy for the factorizations, re-verifies every line (product check and
primality of each factor), and writes the checksummed table. Run from the
repository root:

    python tools/gen_factor_table.py
"""

from __future__ import annotations

import hashlib
from pathlib import Path

import sympy

OUT = Path(__file__).resolve().parent.parent / "src" / "kdfc_snow" / "data" / "factors_2_pow_d_minus_1.txt"


def main() -> None:
    body = ["# full factorization of 2^d - 1, one line per d: p1^e1 p2 ..."]
    for d in range(2, 65):
        n = (1 << d) - 1
        factors = sympy.factorint(n)
        check = 1
        for p, e in factors.items():
            assert sympy.isprime(p), (d, p)
            check *= p**e
        assert check == n, d
        terms = " ".join(
            f"{p}^{e}" if e > 1 else str(p) for p, e in sorted(factors.items())
        )
        body.append(f"{d}: {terms}")
    text = "\n".join(body)
    digest = hashlib.sha256(text.encode()).hexdigest()
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(f"# sha256: {digest}\n{text}\n")
    print(f"wrote {OUT} ({len(body) - 1} entries)")


if __name__ == "__main__":
    main()
