"""Reversible gate library.

Every gate maps ``width`` bits to ``width`` bits.  Bits are ordered A, B, C, D
on the input side and P, Q, R, S on the output side, most significant first,
so row ``i`` of a truth table is the input whose big-endian value is ``i``.

The evaluation functions are written with ``&``, ``^`` and ``^ 1`` only, so
they accept plain ``int`` bits as well as numpy ``uint8`` arrays (one lane per
test vector).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

__all__ = [
    "GateKind",
    "GateSpec",
    "INPUT_PORTS",
    "OUTPUT_PORTS",
    "DEFAULT_SPECS",
    "eval_gate",
    "eval_backward",
    "eval_lanes",
    "is_reversible",
    "truth_table",
    "metadata",
    "int_to_bits",
    "bits_to_int",
]


class GateKind(str, enum.Enum):
    NOT = "NOT"
    FEYNMAN = "FEYNMAN"
    FREDKIN = "FREDKIN"
    TOFFOLI = "TOFFOLI"
    HL = "HL"
    NP = "NP"

    @property
    def width(self) -> int:
        return _WIDTHS[self]

    def __str__(self) -> str:
        return self.value


_WIDTHS = {
    GateKind.NOT: 1,
    GateKind.FEYNMAN: 2,
    GateKind.FREDKIN: 3,
    GateKind.TOFFOLI: 3,
    GateKind.HL: 4,
    GateKind.NP: 4,
}

INPUT_PORTS = ("A", "B", "C", "D")
OUTPUT_PORTS = ("P", "Q", "R", "S")


@dataclass(frozen=True)
class GateSpec:
    """Cost metadata of one gate kind.

    ``delay`` is in unit-gate delays (logical depth).  ``forward`` and
    ``backward`` are the permutation tables over big-endian row indices.
    """

    kind: GateKind
    width: int
    quantum_cost: int
    delay: int
    transistor_count: int

    @property
    def forward(self) -> tuple[int, ...]:
        return _forward_table(self.kind)

    @property
    def backward(self) -> tuple[int, ...]:
        return _backward_table(self.kind)


DEFAULT_SPECS: Mapping[GateKind, GateSpec] = {
    GateKind.NOT: GateSpec(GateKind.NOT, 1, 1, 1, 2),
    GateKind.FEYNMAN: GateSpec(GateKind.FEYNMAN, 2, 1, 1, 3),
    GateKind.FREDKIN: GateSpec(GateKind.FREDKIN, 3, 5, 5, 4),
    # Toffoli and HL delays are never published; delay = quantum cost.
    GateKind.TOFFOLI: GateSpec(GateKind.TOFFOLI, 3, 5, 5, 5),
    GateKind.HL: GateSpec(GateKind.HL, 4, 7, 7, 13),
    GateKind.NP: GateSpec(GateKind.NP, 4, 5, 5, 9),
}


def metadata(kind: GateKind | str, table: Mapping[GateKind, GateSpec] | None = None) -> GateSpec:
    """Return the cost entry for ``kind``, optionally from an override table."""
    kind = GateKind(kind)
    if table is not None and kind in table:
        return table[kind]
    return DEFAULT_SPECS[kind]


# -- boolean semantics -------------------------------------------------------

def _not(a):
    return (a ^ 1,)


def _feynman(a, b):
    return a, a ^ b


def _fredkin(a, b, c):
    na = a ^ 1
    return a, (na & b) ^ (a & c), (na & c) ^ (a & b)


def _toffoli(a, b, c):
    return a, b, (a & b) ^ c


def _hl(a, b, c, d):
    na, nb, nd = a ^ 1, b ^ 1, d ^ 1
    p = (a & nb) ^ (nb & c) ^ (b & nd)
    q = (a & b) ^ (nb & c) ^ (b & d)
    r = (na & b) ^ (nb & c) ^ (b & d)
    s = (a & nb) ^ (b & c) ^ (nb & d)
    return p, q, r, s


def _np(a, b, c, d):
    na, nc = a ^ 1, c ^ 1
    q = (na & b) ^ (a & nc)
    r = (na & c) ^ (a & b)
    return a, q, r, r ^ d


def _np_backward(p, q, r, s):
    # P = 0: B = Q, C = R.  P = 1: C = Q', B = R.  D = R xor S in both cases.
    np_ = p ^ 1
    b = (np_ & q) ^ (p & r)
    c = (np_ & r) ^ (p & (q ^ 1))
    return p, b, c, r ^ s


_FORWARD = {
    GateKind.NOT: _not,
    GateKind.FEYNMAN: _feynman,
    GateKind.FREDKIN: _fredkin,
    GateKind.TOFFOLI: _toffoli,
    GateKind.HL: _hl,
    GateKind.NP: _np,
}

_SELF_INVERSE = {GateKind.NOT, GateKind.FEYNMAN, GateKind.FREDKIN, GateKind.TOFFOLI}


def int_to_bits(value: int, width: int) -> tuple[int, ...]:
    """Big-endian bit tuple of ``value``."""
    return tuple((value >> (width - 1 - i)) & 1 for i in range(width))


def bits_to_int(bits: Sequence[int]) -> int:
    out = 0
    for b in bits:
        out = (out << 1) | int(b)
    return out


def _check(kind: GateKind, bits: Sequence[int]) -> tuple[int, ...]:
    bits = tuple(bits)
    if len(bits) != kind.width:
        raise ValueError(f"{kind} takes {kind.width} bits, got {len(bits)}")
    if any(b not in (0, 1) for b in bits):
        raise ValueError(f"bits must be 0 or 1, got {bits}")
    return tuple(int(b) for b in bits)


def eval_gate(kind: GateKind | str, inputs: Sequence[int]) -> tuple[int, ...]:
    """Forward evaluation of one gate on a bit vector."""
    kind = GateKind(kind)
    return tuple(_FORWARD[kind](*_check(kind, inputs)))


def eval_lanes(kind: GateKind, *lanes):
    """Forward evaluation on ints or equally shaped uint8 arrays, unchecked."""
    return _FORWARD[kind](*lanes)


def eval_backward(kind: GateKind | str, outputs: Sequence[int]) -> tuple[int, ...]:
    """Return the unique input vector that ``kind`` maps to ``outputs``."""
    kind = GateKind(kind)
    bits = _check(kind, outputs)
    if kind in _SELF_INVERSE:
        return tuple(_FORWARD[kind](*bits))
    if kind is GateKind.NP:
        return tuple(_np_backward(*bits))
    return int_to_bits(_backward_table(kind)[bits_to_int(bits)], kind.width)


@lru_cache(maxsize=None)
def _forward_table(kind: GateKind) -> tuple[int, ...]:
    w = kind.width
    return tuple(bits_to_int(_FORWARD[kind](*int_to_bits(i, w))) for i in range(1 << w))


@lru_cache(maxsize=None)
def _backward_table(kind: GateKind) -> tuple[int, ...]:
    fwd = _forward_table(kind)
    inv = [0] * len(fwd)
    for x, y in enumerate(fwd):
        inv[y] = x
    return tuple(inv)


def is_reversible(mapping: Sequence[Sequence[int]]) -> bool:
    """True iff ``mapping`` (indexed by input value) is a bijection on {0,1}^w."""
    n = len(mapping)
    if n == 0 or n & (n - 1):
        return False
    w = n.bit_length() - 1
    seen = set()
    for row in mapping:
        row = tuple(row)
        if len(row) != w or any(b not in (0, 1) for b in row):
            return False
        seen.add(row)
    return len(seen) == n


def truth_table(kind: GateKind | str) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All ``2**width`` rows in ascending input order."""
    kind = GateKind(kind)
    w = kind.width
    rows = []
    for i in range(1 << w):
        x = int_to_bits(i, w)
        rows.append((x, tuple(_FORWARD[kind](*x))))
    return rows
