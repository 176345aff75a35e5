"""Model persistence: a small versioned binary format.

Layout (all little-endian, no padding):

    offset 0   4 bytes   magic "TSET"
    offset 4   u16       format version (currently 1)
    offset 6   u8        container kind: 1 = single pool, 2 = multiclass
    then for multiclass: u32 pool count, followed by that many pool blocks;
    for a single pool: one pool block.

Pool block:

    u8        machine class: 0 = classic, 1 = multigranular
    u8        polarity layout: 0 = first m/2 clauses positive
    u32       n_features
    u32       n_clauses
    u32       n_states
    f64       threshold (relative)
    f64 f64   specificity range lower/upper (zeros for classic)
    f64 * m   per-clause specificity
    i32 * m * 2n  automaton states, row-major (clause-major, literal-minor)

Multiclass labels are the pool indices 0..C-1; models with any other label
assignment are not persistable.
"""

from __future__ import annotations

import struct

import numpy as np

from .core import MultiClassTsetlinMachine, TsetlinMachine
from .multigranular import MultigranularTsetlinMachine, SpecificityRange

MAGIC = b"TSET"
VERSION = 1

_KIND_POOL = 1
_KIND_MULTI = 2


def _write_pool(fh, machine: TsetlinMachine) -> None:
    is_mtm = isinstance(machine, MultigranularTsetlinMachine)
    lo, hi = (machine.specificity_range.lower, machine.specificity_range.upper) if is_mtm else (0.0, 0.0)
    fh.write(struct.pack(
        "<BBIIIddd",
        1 if is_mtm else 0, 0,
        machine.n_features, machine.n_clauses, machine.n_states,
        machine.threshold, lo, hi,
    ))
    fh.write(np.ascontiguousarray(machine.specificity, dtype="<f8").tobytes())
    fh.write(np.ascontiguousarray(machine.states, dtype="<i4").tobytes())


def _read_exact(fh, n: int, path) -> bytes:
    buf = fh.read(n)
    if len(buf) != n:
        raise ValueError(f"{path}: truncated model file")
    return buf


def _read_pool(fh, path) -> TsetlinMachine:
    header = struct.Struct("<BBIIIddd")
    machine_class, layout, n, m, n_states, threshold, lo, hi = header.unpack(
        _read_exact(fh, header.size, path)
    )
    if machine_class not in (0, 1):
        raise ValueError(f"{path}: unknown machine class {machine_class}")
    if layout != 0:
        raise ValueError(f"{path}: unknown polarity layout {layout}")
    spec = np.frombuffer(_read_exact(fh, 8 * m, path), dtype="<f8").astype(np.float64)
    states = np.frombuffer(_read_exact(fh, 4 * m * 2 * n, path), dtype="<i4")
    if machine_class == 1:
        machine = MultigranularTsetlinMachine(n, m, threshold, SpecificityRange(lo, hi), n_states)
        machine.specificity = spec
    else:
        machine = TsetlinMachine(n, m, threshold, spec, n_states)
    machine.states = states.astype(np.int32).reshape(m, 2 * n)
    return machine


def save_model(machine, path) -> None:
    """Write a TsetlinMachine, MultigranularTsetlinMachine, or MultiClassTsetlinMachine."""
    if isinstance(machine, MultiClassTsetlinMachine) and machine.labels != list(
        range(len(machine.machines))
    ):
        raise ValueError("only pool-index labels (0..C-1) can be persisted")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        if isinstance(machine, MultiClassTsetlinMachine):
            fh.write(struct.pack("<HBI", VERSION, _KIND_MULTI, len(machine.machines)))
            for pool in machine.machines:
                _write_pool(fh, pool)
        elif isinstance(machine, TsetlinMachine):
            fh.write(struct.pack("<HB", VERSION, _KIND_POOL))
            _write_pool(fh, machine)
        else:
            raise TypeError(f"cannot persist {type(machine).__name__}")


def load_model(path):
    """Read back a model written by `save_model`; the concrete class is restored."""
    with open(path, "rb") as fh:
        if _read_exact(fh, 4, path) != MAGIC:
            raise ValueError(f"{path}: not a model file")
        version, kind = struct.unpack("<HB", _read_exact(fh, 3, path))
        if version != VERSION:
            raise ValueError(f"{path}: unsupported format version {version}")
        if kind == _KIND_POOL:
            machine = _read_pool(fh, path)
        elif kind == _KIND_MULTI:
            (count,) = struct.unpack("<I", _read_exact(fh, 4, path))
            if count < 1:
                raise ValueError(f"{path}: empty multiclass container")
            machine = MultiClassTsetlinMachine([_read_pool(fh, path) for _ in range(count)])
        else:
            raise ValueError(f"{path}: unknown container kind {kind}")
        if fh.read(1):
            raise ValueError(f"{path}: trailing bytes after model payload")
        return machine
