"""Parameterized generators for decoders, D flip-flops and the 2^n x m ROM.

Every generator returns a :class:`~revrom.circuit.Netlist` whose ``meta``
block records the parameters, the published cost figures for that
configuration (``paper_claims``) and any known disagreement (``errata``).

Address inputs are named ``I1 .. In`` with ``I1`` the most significant bit.
ROM data inputs are ``R{w}D{j}`` (register ``w`` counted from 1, bit ``j``
from 0) and ROM outputs are ``Q0 .. Q{m-1}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .circuit import CostReport, GateInstance, Netlist, analyze, validate
from .gates import OUTPUT_PORTS, GateKind

__all__ = [
    "RomParams",
    "TheoremReport",
    "build_decoder",
    "build_dff",
    "build_rom",
    "thm1_transistors",
    "thm2_gates",
    "thm3_garbage",
    "thm4_transistors",
    "crosscheck",
    "theorem_report",
]

# HL(X, Y, 0, 1) = (XY', X'Y, XY, X'Y'): output port for each 2-bit address
_HL_PORT_FOR_ADDRESS = (3, 1, 0, 2)


class _Builder:
    """Accumulates wires, gates and constants for one netlist."""

    def __init__(self, name: str):
        self.name = name
        self.wires: list[str] = []
        self.gates: list[GateInstance] = []
        self.constants: dict[str, int] = {}
        self.inputs: list[str] = []
        self._nconst = 0

    def wire(self, wid: str) -> str:
        self.wires.append(wid)
        return wid

    def input(self, wid: str) -> str:
        self.inputs.append(self.wire(wid))
        return wid

    def const(self, value: int) -> str:
        wid = self.wire(f"const{self._nconst:03d}")
        self._nconst += 1
        self.constants[wid] = value
        return wid

    def gate(self, gid: str, kind: GateKind, ins: list[str], names: dict[int, str] | None = None) -> list[str]:
        names = names or {}
        outs = [self.wire(names.get(p, f"{gid}.{OUTPUT_PORTS[p]}")) for p in range(kind.width)]
        self.gates.append(GateInstance(gid, kind, ins, outs))
        return outs

    def finish(self, outputs: list[str], state_wires=(), meta=None) -> Netlist:
        # canonical ordering, so a JSON round trip compares equal
        nl = Netlist(
            name=self.name,
            wires=sorted(self.wires),
            gates=sorted(self.gates, key=lambda g: g.id),
            inputs=self.inputs,
            outputs=outputs,
            constants=dict(sorted(self.constants.items())),
            state_wires=sorted(state_wires),
            meta=meta or {},
        )
        problems = validate(nl)
        if problems:
            raise AssertionError(f"generator produced an invalid netlist: {problems[0]}")
        return nl


def _decoder(b: _Builder, prefix: str, address: list[str], names: list[str] | None = None) -> list[str]:
    """Wire an n-to-2^n decoder and return its one-hot outputs in index order.

    Each extra address bit threads through one level of Fredkin gates via the
    P passthrough; the last P of a level is that level's only garbage wire.
    ``names`` optionally renames the final one-hot wires.
    """
    n = len(address)
    hl_names = None
    if names and n == 2:
        hl_names = {port: names[i] for i, port in enumerate(_HL_PORT_FOR_ADDRESS)}
    hl = b.gate(f"{prefix}.hl", GateKind.HL, [address[0], address[1], b.const(0), b.const(1)], hl_names)
    outs = [hl[p] for p in _HL_PORT_FOR_ADDRESS]
    for level in range(3, n + 1):
        bit = address[level - 1]
        nxt: list[str] = []
        width = len(str(len(outs) - 1))
        for i, sel in enumerate(outs):
            fnames = {1: names[2 * i], 2: names[2 * i + 1]} if names and level == n else None
            p, q, r = b.gate(
                f"{prefix}.l{level}.f{i:0{width}d}", GateKind.FREDKIN, [bit, sel, b.const(0)], fnames
            )
            # Q = sel & !bit -> index 2i ; R = sel & bit -> index 2i+1
            nxt += [q, r]
            bit = p
        outs = nxt
    return outs


def build_decoder(n: int) -> Netlist:
    """n-to-2^n one-hot decoder: one HL gate plus 4 + 8 + ... + 2^(n-1) Fredkins.

    Output ``i`` is high exactly when the address ``I1..In`` (big-endian)
    equals ``i``.
    """
    if not isinstance(n, int) or not 2 <= n <= 12:
        raise ValueError(f"decoder needs 2 <= n <= 12, got {n!r}")
    b = _Builder(f"decoder{n}")
    address = [b.input(f"I{i + 1}") for i in range(n)]
    outs = _decoder(b, "dec", address, [f"Y{i}" for i in range(2**n)])
    meta = {
        "params": {"kind": "decoder", "n": n},
        "address_order": "I1 is the most significant address bit",
        "paper_claims": {"gates": 2**n - 3, "transistors": thm1_transistors(n), "garbage": n - 2},
        "errata": [],
    }
    return b.finish(outs, meta=meta)


def _dff(b: _Builder, gid: str, enable: str, data: str, q_name: str | None = None) -> tuple[str, str, str]:
    """Level-sensitive D latch on one NP gate; returns (E passthrough, garbage, Q)."""
    state = f"{gid}.R"
    p, q, r, s = b.gate(
        gid,
        GateKind.NP,
        [enable, data, state, b.const(0)],
        {3: q_name} if q_name else None,
    )
    assert r == state
    return p, q, s


def build_dff(with_complement: bool = False) -> Netlist:
    """D flip-flop of one NP gate (Q+ = E'Q xor ED), optionally with a Feynman for Q'."""
    b = _Builder("dff_qqbar" if with_complement else "dff")
    e, d = b.input("E"), b.input("D")
    if with_complement:
        _, _, s = _dff(b, "ff", e, d)
        q, qbar = b.gate("fg", GateKind.FEYNMAN, [s, b.const(1)], {0: "Q", 1: "Qbar"})
        outputs = [q, qbar]
        claims = {"gates": 2, "garbage": 1, "quantum_cost": 6, "transistors": 12, "delay": 6}
        errata = [
            "published garbage count for the Q/Q' flip-flop is 1; two NP outputs (P, Q) stay unconsumed"
        ]
    else:
        _, _, s = _dff(b, "ff", e, d, q_name="Q")
        outputs = [s]
        claims = {"gates": 1, "garbage": 2, "quantum_cost": 5, "transistors": 9, "delay": 5}
        errata = []
    meta = {
        "params": {"kind": "dff", "complement": bool(with_complement)},
        "paper_claims": claims,
        "errata": errata,
    }
    return b.finish(outputs, state_wires=["ff.R"], meta=meta)


@dataclass(frozen=True)
class RomParams:
    n: int
    m: int
    k: int

    def __post_init__(self):
        for name in ("n", "m", "k"):
            if not isinstance(getattr(self, name), int) or isinstance(getattr(self, name), bool):
                raise ValueError(f"{name} must be an integer")
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if not 2 <= self.k <= self.n:
            raise ValueError(f"k must satisfy 2 <= k <= n, got k={self.k}, n={self.n}")
        if self.n - self.k == 1:
            raise ValueError("n - k = 1 would need a 1-to-2 column decoder; use n - k >= 2 or k = n")

    @property
    def words(self) -> int:
        return 2**self.n

    @property
    def rows(self) -> int:
        return 2**self.k

    @property
    def columns(self) -> int:
        return 2 ** (self.n - self.k)

    @property
    def theorems_apply(self) -> bool:
        return self.k >= 2 and self.n - self.k >= 2


def build_rom(params: RomParams | None = None, *, n: int | None = None, m: int | None = None, k: int | None = None) -> Netlist:
    """2^n x m ROM: row/column decoders, Toffoli word-select grid, NP latches, Fredkin bus."""
    if params is None:
        params = RomParams(n, m, k)
    if params.n > 6:
        raise ValueError(f"build_rom supports n <= 6, got {params.n}")
    n, m, k = params.n, params.m, params.k
    b = _Builder(f"rom{2**n}x{m}")
    address = [b.input(f"I{i + 1}") for i in range(n)]
    data = [[b.input(f"R{w + 1}D{j}") for j in range(m)] for w in range(params.words)]

    row_sel = _decoder(b, "rowdec", address[:k])
    if k < n:
        col_sel = _decoder(b, "coldec", address[k:])
        word_sel: list[str] = [""] * params.words
        down = list(col_sel)
        ri, ci = len(str(params.rows - 1)), len(str(params.columns - 1))
        for r in range(params.rows):
            along = row_sel[r]
            for c in range(params.columns):
                along, down[c], word_sel[r * params.columns + c] = b.gate(
                    f"tof.r{r:0{ri}d}.c{c:0{ci}d}", GateKind.TOFFOLI, [along, down[c], b.const(0)]
                )
    else:
        word_sel = list(row_sel)

    wi, ji = len(str(params.words - 1)), len(str(m - 1))
    cells: list[list[str]] = []
    chain_tail: list[str] = []
    for w in range(params.words):
        enable = word_sel[w]
        qs = []
        for j in range(m):
            enable, _, q = _dff(b, f"ff.w{w:0{wi}d}.b{j:0{ji}d}", enable, data[w][j])
            qs.append(q)
        cells.append(qs)
        chain_tail.append(enable)

    bus = [b.const(0) for _ in range(m)]
    for w in range(params.words):
        ctrl = chain_tail[w]
        for j in range(m):
            names = {1: f"Q{j}"} if w == params.words - 1 else None
            ctrl, bus[j], _ = b.gate(f"buf.w{w:0{wi}d}.b{j:0{ji}d}", GateKind.FREDKIN, [ctrl, bus[j], cells[w][j]], names)
    outputs = list(bus)

    state = [g.outs[2] for g in b.gates if g.kind is GateKind.NP]
    meta = {
        "params": {"kind": "rom", "n": n, "m": m, "k": k},
        "address_order": "I1 is the most significant row-address bit; word index = address value",
        "paper_claims": {},
        "errata": [],
    }
    if params.theorems_apply:
        meta["paper_claims"] = {
            "gates": thm2_gates(n, m, k),
            "garbage": thm3_garbage(n, m, k),
            "transistors": thm4_transistors(n, m, k),
        }
    if (n, m, k) == (4, 2, 2):
        meta["paper_claims"] = {"gates": 82, "transistors": 522, "garbage": 18}
        meta["errata"] = [
            "published garbage count 18 for the 16x2 ROM disagrees with the closed form and the construction (88)"
        ]
    elif (n, m, k) == (4, 4, 2):
        meta["paper_claims"] = {"gates": 146, "transistors": 938, "garbage": 152}
    return b.finish(outputs, state_wires=state, meta=meta)


# -- closed forms --------------------------------------------------------------

def _check_int(**kw):
    for name, v in kw.items():
        if not isinstance(v, int) or isinstance(v, bool):
            raise ValueError(f"{name} must be an integer, got {v!r}")


def _check_split(n: int, m: int, k: int) -> None:
    _check_int(n=n, m=m, k=k)
    if m < 1 or k < 2 or n - k < 2:
        raise ValueError(f"closed forms need m >= 1, k >= 2 and n - k >= 2; got n={n}, m={m}, k={k}")


def thm1_transistors(n: int) -> int:
    """Transistors in an n-to-2^n decoder: 4 * 2^n - 3."""
    _check_int(n=n)
    if n < 2:
        raise ValueError(f"decoder transistor formula needs n >= 2, got {n}")
    return 4 * 2**n - 3


def thm2_gates(n: int, m: int, k: int) -> int:
    _check_split(n, m, k)
    return 2**k + 2 ** (n - k) + 2 * m * 2**n + 2**n - 6


def thm3_garbage(n: int, m: int, k: int) -> int:
    _check_split(n, m, k)
    return n + 2**k + 2 * m * 2**n + 2 ** (n - k) + 2**n - 4


def thm4_transistors(n: int, m: int, k: int) -> int:
    _check_split(n, m, k)
    return 4 * 2 ** (n - k) + 13 * m * 2**n + 5 * 2**n + 4 * 2**k - 6


@dataclass(frozen=True)
class TheoremReport:
    predicted: dict[str, int]
    measured: CostReport
    match: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.match.values())


def theorem_report(netlist: Netlist) -> TheoremReport:
    """Compare an already built decoder or ROM against its closed forms.

    Raises ``ValueError`` when no closed form applies to the netlist.
    """
    params = dict(netlist.meta.get("params", {}))
    kind = params.get("kind")
    measured = analyze(netlist)
    got = {
        "gates": measured.gate_count,
        "garbage": measured.garbage_outputs,
        "transistors": measured.transistor_count,
    }
    if kind == "rom":
        n, m, k = params["n"], params["m"], params["k"]
        if not RomParams(n, m, k).theorems_apply:
            raise ValueError(f"closed forms need k >= 2 and n - k >= 2 (got n={n}, k={k})")
        predicted = {
            "gates": thm2_gates(n, m, k),
            "garbage": thm3_garbage(n, m, k),
            "transistors": thm4_transistors(n, m, k),
        }
    elif kind == "decoder":
        n = params["n"]
        predicted = {"gates": 2**n - 3, "garbage": n - 2, "transistors": thm1_transistors(n)}
    else:
        raise ValueError(f"no closed-form cost theorem for circuit kind {kind!r}")
    return TheoremReport(predicted, measured, {f: predicted[f] == got[f] for f in predicted})


def crosscheck(params: RomParams) -> TheoremReport:
    """Build the ROM for ``params`` and compare its counts with the closed forms."""
    if not params.theorems_apply:
        raise ValueError(f"closed forms need k >= 2 and n - k >= 2, got {params}")
    return theorem_report(build_rom(params))
