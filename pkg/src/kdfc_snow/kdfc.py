"""Key-dependent-configuration cipher: SNOW 2.0 FSM over a derived σ-LFSR.

Initialization runs the standard SNOW 2.0 key/IV schedule and its 32
init cycles with the fixed public configuration, capturing the FSM
output word of every cycle.  The last captured words supply the fill
bits for the online tail of the configuration pipeline (confgen); the
resulting feedback configuration — block-companion with characteristic
polynomial TARGET_POLY — replaces the public one, the register contents
are kept, and a fixed number of output vectors is discarded before
keystream starts.

The offline part of the pipeline does not depend on the key and is
shipped as a data file (see tools/gen_y_init.py); its provenance fields
(seed, fill label, polynomial-table checksum) are verified on load.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from kdfc_snow.confgen import FillBits, YMatrix, generate_config
from kdfc_snow.gf2.poly import Gf2Poly
from kdfc_snow.gf2.primtable import PrimitiveTable, default_table
from kdfc_snow.sigma_lfsr import SigmaConfig
from kdfc_snow.snow2 import (
    CipherState,
    init_with_captures,
    snow2_keystream,
)

__all__ = [
    "M",
    "B",
    "ONLINE_TOTAL",
    "DEFAULT_K",
    "TARGET_POLY_EXPONENTS",
    "target_poly",
    "YInitDoc",
    "load_y_init",
    "ProvenanceError",
    "KdfcParams",
    "kdfc_init",
    "kdfc_keystream",
    "reconfigure",
]

M = 32
B = 16
#: total pipeline iterations mb - m; offline k plus the online remainder
ONLINE_TOTAL = M * B - M
#: default offline iteration count (the shipped matrix provides this k)
DEFAULT_K = 468

Y_INIT_FILE = "y_init_m32_k468.json"

#: Exponents of the canonical degree-512 target polynomial (weight 251).
#: Every derived configuration is similar to its companion matrix, hence
#: has exactly this characteristic polynomial.
TARGET_POLY_EXPONENTS: tuple[int, ...] = (
    512, 510, 504, 502, 501, 494, 493, 490, 486, 485, 483, 481, 480, 478,
    477, 471, 470, 469, 466, 462, 461, 459, 458, 452, 449, 446, 445, 444,
    441, 438, 437, 434, 433, 432, 431, 429, 427, 424, 423, 420, 419, 414,
    412, 411, 409, 405, 402, 400, 399, 398, 396, 395, 393, 392, 390, 388,
    387, 385, 375, 374, 372, 371, 366, 365, 363, 362, 359, 357, 356, 355,
    354, 353, 352, 351, 350, 347, 345, 344, 343, 341, 339, 338, 337, 336,
    333, 330, 329, 326, 324, 322, 319, 310, 307, 306, 305, 304, 303, 301,
    299, 298, 297, 296, 295, 294, 293, 292, 291, 289, 286, 285, 283, 282,
    281, 278, 276, 274, 271, 269, 264, 262, 259, 258, 257, 255, 253, 251,
    249, 248, 243, 240, 239, 238, 236, 235, 233, 232, 230, 229, 228, 227,
    226, 222, 217, 216, 215, 214, 213, 210, 208, 206, 203, 201, 199, 193,
    190, 184, 179, 178, 177, 175, 174, 173, 172, 171, 169, 165, 164, 163,
    158, 156, 155, 153, 152, 151, 149, 147, 146, 143, 141, 138, 136, 132,
    131, 129, 128, 126, 125, 124, 123, 121, 120, 119, 118, 117, 116, 115,
    113, 112, 111, 109, 105, 104, 103, 102, 98, 97, 94, 93, 89, 88, 87, 81,
    78, 76, 75, 73, 72, 70, 69, 68, 67, 66, 65, 63, 59, 58, 57, 56, 55, 53,
    51, 50, 49, 47, 46, 45, 44, 41, 39, 37, 36, 33, 30, 26, 25, 21, 20, 19,
    16, 5, 0,
)

_target: Gf2Poly | None = None


def target_poly() -> Gf2Poly:
    """The degree-512 target polynomial as a Gf2Poly (cached)."""
    global _target
    if _target is None:
        _target = Gf2Poly.from_exponents(TARGET_POLY_EXPONENTS)
    return _target


class ProvenanceError(ValueError):
    """A loaded y_init file does not match the active polynomial table."""


@dataclass(frozen=True)
class YInitDoc:
    """A shipped offline pipeline matrix plus its provenance fields."""

    m: int
    k: int
    seed: str
    fill_label: str
    poly_table_sha256: str
    y: YMatrix

    @classmethod
    def from_json(cls, obj: dict) -> "YInitDoc":
        return cls(
            m=obj["m"],
            k=obj["k"],
            seed=obj["seed"],
            fill_label=obj["fill_label"],
            poly_table_sha256=obj["poly_table_sha256"],
            y=YMatrix.from_json(obj["y"]),
        )

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "k": self.k,
            "seed": self.seed,
            "fill_label": self.fill_label,
            "poly_table_sha256": self.poly_table_sha256,
            "y": self.y.to_json(),
        }


def load_y_init(path: str | None = None) -> YInitDoc:
    """Load a y_init document (default: the shipped full-scale file)."""
    if path is None:
        text = (
            resources.files("kdfc_snow")
            .joinpath("data")
            .joinpath(Y_INIT_FILE)
            .read_text()
        )
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    doc = YInitDoc.from_json(json.loads(text))
    if doc.y.m != doc.m or doc.y.width != doc.m + doc.k:
        raise ValueError(
            f"y_init matrix is {doc.y.m}x{doc.y.width}, "
            f"expected {doc.m}x{doc.m + doc.k}"
        )
    return doc


@dataclass
class KdfcParams:
    """Everything that determines a keystream: key, IV, and pipeline inputs.

    k is the offline iteration count; the remaining ONLINE_TOTAL - k
    iterations draw their fill bits from captured FSM words, so they must
    number at most 32.  y_init defaults to the shipped offline matrix
    (whose provenance is checked against the active polynomial table),
    p512 to TARGET_POLY, and discard to 32 output vectors after the
    configuration swap.
    """

    key: list[int]
    iv: list[int]
    k: int = DEFAULT_K
    y_init: YMatrix | None = None
    table: PrimitiveTable | None = None
    p512: Gf2Poly | None = None
    discard: int = 32
    verify_config: bool = True
    _doc: YInitDoc | None = field(default=None, repr=False)

    def resolve(self) -> tuple[YMatrix, PrimitiveTable, Gf2Poly]:
        """Fill defaults and cross-check dimensions and provenance."""
        table = self.table if self.table is not None else default_table()
        p = self.p512 if self.p512 is not None else target_poly()
        if p.degree != M * B:
            raise ValueError(f"p512 must have degree {M * B}, got {p.degree}")
        y = self.y_init
        if y is None:
            doc = self._doc if self._doc is not None else load_y_init()
            self._doc = doc
            if doc.poly_table_sha256 != table.checksum:
                raise ProvenanceError(
                    "shipped y_init was built with polynomial table "
                    f"{doc.poly_table_sha256[:12]}..., but the active table "
                    f"is {table.checksum[:12]}..."
                )
            if doc.k != self.k:
                raise ValueError(
                    f"y_init file provides k={doc.k}, params ask for k={self.k}"
                )
            y = doc.y
        if y.m != M:
            raise ValueError(f"y_init must have {M} rows, got {y.m}")
        if y.width != M + self.k:
            raise ValueError(
                f"y_init width {y.width} does not match k={self.k}"
            )
        online = ONLINE_TOTAL - self.k
        if not 0 <= online <= 32:
            raise ValueError(
                f"k={self.k} leaves {online} online iterations; "
                "need between 0 and 32"
            )
        if self.discard < 0:
            raise ValueError("discard must be non-negative")
        return y, table, p


def kdfc_init(params: KdfcParams) -> CipherState:
    """Derive the key-dependent configuration and return a running state.

    Steps: (1) SNOW 2.0 key/IV load and 32 init cycles with the public
    configuration, capturing each cycle's FSM output word; (2) the last
    ONLINE_TOTAL - k words feed the online pipeline iterations, bit t of
    a word filling row t (the active row's bit is unused); (3) the
    pipeline emits a configuration with characteristic polynomial p512;
    (4) the configuration is swapped in with register contents kept;
    (5) `discard` output vectors are dropped.
    """
    y, table, p = params.resolve()
    online = ONLINE_TOTAL - params.k
    state, captures = init_with_captures(params.key, params.iv)
    words = captures[len(captures) - online:] if online else []
    fill = FillBits.from_words(M, words, first_iteration=params.k + 1)
    cfg = generate_config(
        M, B, p, y, fill, verify=params.verify_config, table=table
    )
    state = reconfigure(state, cfg)
    if params.discard:
        snow2_keystream(state, params.discard)
    return state


def kdfc_keystream(state: CipherState, n: int) -> list[int]:
    """Produce n keystream words; the FSM equations match snow2 exactly."""
    return snow2_keystream(state, n)


def reconfigure(state: CipherState, cfg: SigmaConfig) -> CipherState:
    """Swap the feedback configuration, keeping LFSR and FSM contents."""
    if cfg.m != state.cfg.m or cfg.b != state.cfg.b:
        raise ValueError(
            f"configuration is {cfg.m}x{cfg.b} blocks, state needs "
            f"{state.cfg.m}x{state.cfg.b}"
        )
    return CipherState(state.lfsr.copy(), state.fsm.copy(), cfg)
