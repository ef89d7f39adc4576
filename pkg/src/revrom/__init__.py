"""Reversible ROM synthesis, cost accounting and gate/switch-level simulation."""
from .gates import GateKind, GateSpec, eval_backward, eval_gate, is_reversible, metadata, truth_table
from .circuit import CostReport, GateInstance, Netlist, NetlistError, analyze, garbage_wires, longest_path, validate
from .synth import RomParams, build_decoder, build_dff, build_rom, crosscheck

__version__ = "0.1.0"
