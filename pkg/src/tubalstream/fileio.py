"""On-disk formats: TNS1 binary tensors, mask CSVs, basis checkpoints.

TNS1 layout: magic ``TNS1``; one dtype byte (0 = real float64, 1 = complex
float64 with interleaved re,im); three reserved zero bytes; three little-
endian uint64 dimensions n1, n2, n3; then the payload as little-endian
float64 with index i fastest, then j, then k (Fortran raveling of an
(n1, n2, n3) array).

Mask CSV: a header line with the values ``kind,n1,n3`` (e.g. ``entries,50,12``)
followed by one line per observed element: ``t,i,k`` for entry masks, ``t,i``
for tube masks, all zero-based.
"""

import csv
import json
import struct
from pathlib import Path

import numpy as np

from .subspace import FsmEstimate
from .synthetic import ENTRIES, TUBES, SampleMask

MAGIC = b"TNS1"
DTYPE_REAL = 0
DTYPE_COMPLEX = 1


def write_tensor(path, a):
    """Write a real or complex 3-way array as a TNS1 file."""
    a = np.asarray(a)
    if a.ndim != 3:
        raise ValueError(f"TNS1 stores 3-way tensors, got shape {a.shape}")
    if np.iscomplexobj(a):
        code, dt = DTYPE_COMPLEX, "<c16"
    else:
        code, dt = DTYPE_REAL, "<f8"
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(bytes([code, 0, 0, 0]))
        fh.write(struct.pack("<3Q", *a.shape))
        fh.write(np.asarray(a, dtype=dt).ravel(order="F").tobytes())


def read_tensor(path):
    """Read a TNS1 file back into an (n1, n2, n3) array."""
    raw = Path(path).read_bytes()
    if raw[:4] != MAGIC:
        raise ValueError(f"{path}: not a TNS1 file")
    code = raw[4]
    if code not in (DTYPE_REAL, DTYPE_COMPLEX):
        raise ValueError(f"{path}: unknown dtype code {code}")
    dims = struct.unpack("<3Q", raw[8:32])
    dt = "<f8" if code == DTYPE_REAL else "<c16"
    data = np.frombuffer(raw[32:], dtype=dt)
    if data.size != dims[0] * dims[1] * dims[2]:
        raise ValueError(f"{path}: payload size does not match dims {dims}")
    return data.reshape(dims, order="F").copy()


def write_mask_csv(path, masks):
    """Write a sequence of per-slice masks (all of one kind and shape)."""
    masks = list(masks)
    if not masks:
        raise ValueError("no masks to write")
    kind, n1, n3 = masks[0].kind, masks[0].n1, masks[0].n3
    if any((m.kind, m.n1, m.n3) != (kind, n1, n3) for m in masks):
        raise ValueError("all masks in one file must share kind and dimensions")
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow([kind, n1, n3])
        for t, m in enumerate(masks):
            if kind == ENTRIES:
                for i, k in np.argwhere(m.mask):
                    out.writerow([t, i, k])
            else:
                for i in np.flatnonzero(m.mask):
                    out.writerow([t, i])


def read_mask_csv(path):
    """Read a mask CSV back into a list of SampleMask, indexed by t."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty mask file")
    kind, n1, n3 = rows[0][0], int(rows[0][1]), int(rows[0][2])
    if kind not in (ENTRIES, TUBES):
        raise ValueError(f"{path}: unknown mask kind {kind!r}")
    count = 1 + max((int(r[0]) for r in rows[1:]), default=-1)
    shape = (n1, n3) if kind == ENTRIES else (n1,)
    flags = [np.zeros(shape, dtype=bool) for _ in range(count)]
    for r in rows[1:]:
        t = int(r[0])
        if kind == ENTRIES:
            flags[t][int(r[1]), int(r[2])] = True
        else:
            flags[t][int(r[1])] = True
    return [SampleMask(kind, n1, n3, f) for f in flags]


def save_fsm(path, fsm, step_count=0, seed=None):
    """Checkpoint a basis estimate: complex TNS1 (n1, r, n_stored) + sidecar."""
    path = Path(path)
    write_tensor(path, np.moveaxis(fsm.slices, 0, 2))
    meta = {"n3": fsm.n3, "r": fsm.r, "step_count": step_count, "seed": seed}
    path.with_suffix(".json").write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n")


def load_fsm(path):
    """Load a checkpoint; returns (FsmEstimate, metadata dict)."""
    path = Path(path)
    # contiguous, so a resumed run steps bit-identically to an uninterrupted one
    slices = np.ascontiguousarray(np.moveaxis(read_tensor(path), 2, 0))
    meta = json.loads(path.with_suffix(".json").read_text())
    return FsmEstimate(slices=slices, n3=int(meta["n3"])), meta


def write_json(path, payload):
    Path(path).write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
