"""Binary persistence and CSV emission.

Datasets and checkpoints share one container format: the magic bytes
``DOKN``, a u32 format version, a u32 record-type tag, a u64 array count,
then each array as a u64 rank, u64 dimensions, and a row-major float64
payload, everything little-endian. Record contents are positional; the
reader walks the array list with a cursor. Integers (split indices, layer
widths, flags) ride along as float64, which is exact far beyond any size
used here.
"""

from __future__ import annotations

import csv
import struct
from pathlib import Path

import numpy as np

from ..errors import FormatError, VersionError
from ..kan import KanLayer, KanNetwork, RbfGrid
from ..mlp import DenseLayer, MlpNetwork
from ..operator import MinMaxNormalizer, OperatorModel
from ..datagen.dataset import Dataset

MAGIC = b"DOKN"
FORMAT_VERSION = 1
RECORD_DATASET = 1
RECORD_CHECKPOINT = 2

_EMPTY = np.empty(0)


def write_record(path, record_type: int, arrays: list[np.ndarray]) -> None:
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<II", FORMAT_VERSION, record_type))
        fh.write(struct.pack("<Q", len(arrays)))
        for arr in arrays:
            # asarray with order="C" keeps 0-d arrays 0-d
            arr = np.asarray(arr, dtype="<f8", order="C")
            fh.write(struct.pack("<Q", arr.ndim))
            fh.write(struct.pack(f"<{arr.ndim}Q", *arr.shape))
            fh.write(arr.tobytes())


def read_record(path, expected_type: int) -> list[np.ndarray]:
    with open(path, "rb") as fh:
        raw = fh.read()
    view = memoryview(raw)
    if raw[:4] != MAGIC:
        raise FormatError(f"{path}: bad magic bytes")
    version, record_type = struct.unpack_from("<II", view, 4)
    if version != FORMAT_VERSION:
        raise VersionError(f"{path}: format version {version}, expected {FORMAT_VERSION}")
    if record_type != expected_type:
        raise FormatError(f"{path}: record type {record_type}, expected {expected_type}")
    (n_arrays,) = struct.unpack_from("<Q", view, 12)
    offset = 20
    arrays = []
    try:
        for _ in range(n_arrays):
            (ndim,) = struct.unpack_from("<Q", view, offset)
            offset += 8
            shape = struct.unpack_from(f"<{ndim}Q", view, offset)
            offset += 8 * ndim
            count = int(np.prod(shape, dtype=np.int64)) if ndim else 1
            arr = np.frombuffer(view, dtype="<f8", count=count, offset=offset)
            offset += 8 * count
            arrays.append(arr.reshape(shape).copy())
    except (struct.error, ValueError) as exc:
        raise FormatError(f"{path}: truncated or corrupt record") from exc
    if offset != len(raw):
        raise FormatError(f"{path}: {len(raw) - offset} trailing bytes")
    return arrays


def _opt(arr: np.ndarray | None) -> np.ndarray:
    return _EMPTY if arr is None else np.asarray(arr, dtype=np.float64)


def save_dataset(dataset: Dataset, path) -> None:
    flags = np.array(
        [
            dataset.coords is not None,
            dataset.train_idx is not None,
            dataset.branch_norm is not None,
            dataset.coords_norm is not None,
        ],
        dtype=np.float64,
    )
    bn, cn = dataset.branch_norm, dataset.coords_norm
    arrays = [
        flags,
        dataset.branch_inputs,
        dataset.targets,
        dataset.coords if dataset.coords is not None else np.empty((0, 0)),
        _opt(dataset.train_idx),
        _opt(dataset.test_idx),
        _opt(bn.lo if bn else None),
        _opt(bn.hi if bn else None),
        _opt(cn.lo if cn else None),
        _opt(cn.hi if cn else None),
    ]
    write_record(path, RECORD_DATASET, arrays)


def load_dataset(path) -> Dataset:
    arrays = read_record(path, RECORD_DATASET)
    if len(arrays) != 10:
        raise FormatError(f"{path}: dataset record has {len(arrays)} arrays, expected 10")
    flags = arrays[0]
    has_coords, has_split, has_bnorm, has_cnorm = (bool(f) for f in flags)
    ds = Dataset(
        branch_inputs=arrays[1],
        targets=arrays[2],
        coords=arrays[3] if has_coords else None,
    )
    if has_split:
        ds.train_idx = arrays[4].astype(np.int64)
        ds.test_idx = arrays[5].astype(np.int64)
    if has_bnorm:
        ds.branch_norm = MinMaxNormalizer(lo=arrays[6], hi=arrays[7])
    if has_cnorm:
        ds.coords_norm = MinMaxNormalizer(lo=arrays[8], hi=arrays[9])
    return ds


KIND_KAN = 0
KIND_MLP = 1
KIND_OPERATOR = 2


def _net_arrays(net: KanNetwork | MlpNetwork) -> list[np.ndarray]:
    out = [np.array(net.dims(), dtype=np.float64)]
    if isinstance(net, KanNetwork):
        out.append(np.array([1.0]))  # family: kan
        for layer in net.layers:
            out.append(layer.weights)
            out.append(layer.grid.centers)
            out.append(np.array([layer.grid.beta, float(layer.grid.learnable)]))
    else:
        out.append(np.array([0.0]))  # family: mlp
        for layer in net.layers:
            out.append(layer.weights)
            out.append(layer.bias)
    return out


def _net_from_arrays(arrays: list[np.ndarray], cursor: int) -> tuple[KanNetwork | MlpNetwork, int]:
    dims = arrays[cursor].astype(np.int64).tolist()
    is_kan = bool(arrays[cursor + 1][0])
    cursor += 2
    layers = []
    for i in range(len(dims) - 1):
        if is_kan:
            weights, centers, extra = arrays[cursor : cursor + 3]
            cursor += 3
            grid = RbfGrid(centers=centers, beta=float(extra[0]), learnable=bool(extra[1]))
            layers.append(KanLayer(dims[i], dims[i + 1], grid, weights=weights))
        else:
            weights, bias = arrays[cursor : cursor + 2]
            cursor += 2
            act = "tanh" if i < len(dims) - 2 else "identity"
            layers.append(DenseLayer(dims[i], dims[i + 1], activation=act, weights=weights, bias=bias))
    net = KanNetwork(layers) if is_kan else MlpNetwork(layers)
    return net, cursor


def save_checkpoint(model, path) -> None:
    """Persist a bare network or an operator model with its normalizers."""
    if isinstance(model, OperatorModel):
        meta = np.array(
            [
                KIND_OPERATOR,
                0.0 if model.mode == "scalar" else 1.0,
                model.bias is not None,
                model.r,
                model.time_steps or 0,
                model.branch_norm is not None,
                model.trunk_norm is not None,
            ],
            dtype=np.float64,
        )
        arrays = [
            meta,
            _opt(model.bias),
            _opt(model.branch_norm.lo if model.branch_norm else None),
            _opt(model.branch_norm.hi if model.branch_norm else None),
            _opt(model.trunk_norm.lo if model.trunk_norm else None),
            _opt(model.trunk_norm.hi if model.trunk_norm else None),
        ]
        arrays += _net_arrays(model.branch)
        arrays += _net_arrays(model.trunk)
    elif isinstance(model, (KanNetwork, MlpNetwork)):
        kind = KIND_KAN if isinstance(model, KanNetwork) else KIND_MLP
        meta = np.array([kind, 0, 0, 0, 0, 0, 0], dtype=np.float64)
        arrays = [meta] + _net_arrays(model)
    else:
        raise ValueError(f"cannot checkpoint {type(model).__name__}")
    write_record(path, RECORD_CHECKPOINT, arrays)


def load_checkpoint(path):
    arrays = read_record(path, RECORD_CHECKPOINT)
    meta = arrays[0]
    kind = int(meta[0])
    if kind in (KIND_KAN, KIND_MLP):
        net, _ = _net_from_arrays(arrays, 1)
        return net
    if kind != KIND_OPERATOR:
        raise FormatError(f"{path}: unknown checkpoint kind {kind}")
    mode = "scalar" if meta[1] == 0 else "transient"
    has_bias, r, time_steps, has_bnorm, has_tnorm = (
        bool(meta[2]),
        int(meta[3]),
        int(meta[4]),
        bool(meta[5]),
        bool(meta[6]),
    )
    branch, cursor = _net_from_arrays(arrays, 6)
    trunk, cursor = _net_from_arrays(arrays, cursor)
    if cursor != len(arrays):
        raise FormatError(f"{path}: {len(arrays) - cursor} unread arrays")
    return OperatorModel(
        branch,
        trunk,
        r=r,
        mode=mode,
        time_steps=time_steps if mode == "transient" else None,
        bias=float(arrays[1][0]) if has_bias else None,
        branch_norm=MinMaxNormalizer(lo=arrays[2], hi=arrays[3]) if has_bnorm else None,
        trunk_norm=MinMaxNormalizer(lo=arrays[4], hi=arrays[5]) if has_tnorm else None,
    )


def _fmt(x) -> str:
    return format(float(x), ".17g")


def write_csv(path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([cell if isinstance(cell, str) else _fmt(cell) for cell in row])


def emit_csv(report, out_dir, field_frames=(), include_loss=True) -> None:
    """Write the run's CSV artifacts into ``out_dir``.

    Writes loss.csv (suppressed for evaluate-only runs via include_loss);
    errors/summary/histogram follow when the report carries evaluation
    results. ``field_frames`` rows are
    (sample_id, time_idx, coords (P, 2), truth (P,), prediction (P,)) and
    become field_<sample>_<time>.csv files.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if include_loss:
        write_csv(out / "loss.csv", ["epoch", "lr", "rmsd"], report.loss_history)
    if report.sample_errors is not None:
        ids = report.sample_ids if report.sample_ids is not None else range(len(report.sample_errors))
        write_csv(out / "errors.csv", ["sample_id", "l2_error"], zip(ids, report.sample_errors))
    if report.error_summary is not None:
        write_csv(
            out / "summary.csv",
            list(report.error_summary.FIELDS),
            [report.error_summary.as_row()],
        )
    if report.histogram is not None:
        edges, counts = report.histogram
        rows = zip(edges[:-1], edges[1:], counts)
        write_csv(out / "histogram.csv", ["bin_left", "bin_right", "count"], rows)
    for sample_id, time_idx, coords, truth, pred in field_frames:
        rows = zip(coords[:, 0], coords[:, 1], truth, pred, np.abs(truth - pred))
        write_csv(
            out / f"field_{sample_id}_{time_idx}.csv",
            ["x", "y", "truth", "prediction", "abs_error"],
            rows,
        )
