#
# FRISR: Super-resolved MRI from edge annihilation
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#

import csv
import json
import math
import os

import numpy as np

from frisr._base import FormatError
from frisr._grid import KSpaceGrid, FilterSupport, FilterCoefficients
from frisr.mask import EdgeMask, NullBasis
from frisr.recon import SweepRow, SweepResult
from ._base import MAGIC_KSPACE, MAGIC_FILTER, MAGIC_IMAGE, atomic_open, write_record, read_record

SWEEP_HEADER = ["lambda", "snr_db", "objective", "iters"]


def _int_field(header: dict, key: str, path: str) -> int:
    value = header.get(key)
    if not isinstance(value, int) or value < 0:
        raise FormatError(f"{path}: header field {key!r} must be a nonnegative integer, got {value!r}")
    return value


def _window_field(header: dict, key: str, path: str) -> int:
    value = header.get(key)
    if not (isinstance(value, list) and len(value) == 2 and all(isinstance(v, int) for v in value) and value[1] >= 0 and value[0] == -value[1]):
        raise FormatError(f"{path}: header field {key!r} must be [-K, K], got {value!r}")
    return value[1]


def _check_count(data: np.ndarray, expected: int, path: str):
    if data.size != expected:
        raise FormatError(f"{path}: expected {expected} payload values, found {data.size}")


def write_kspace(path: str, ksp: KSpaceGrid):
    header = {"kx": [-ksp.kx_max, ksp.kx_max], "ky": [-ksp.ky_max, ksp.ky_max], "dtype": "c128"}
    write_record(path, MAGIC_KSPACE, header, ksp.values)


def read_kspace(path: str) -> KSpaceGrid:
    header, data = read_record(path, MAGIC_KSPACE)
    kx_max = _window_field(header, "kx", path)
    ky_max = _window_field(header, "ky", path)
    if header.get("dtype") != "c128":
        raise FormatError(f"{path}: k-space records are c128, got {header.get('dtype')!r}")
    shape = (2 * ky_max + 1, 2 * kx_max + 1)
    _check_count(data, shape[0] * shape[1], path)
    return KSpaceGrid(kx_max, ky_max, data.reshape(shape))


def write_filter(path: str, coeffs: FilterCoefficients):
    header = {"k1": coeffs.support.k1, "l1": coeffs.support.l1, "dtype": "c128"}
    write_record(path, MAGIC_FILTER, header, coeffs.coeffs)


def read_filter(path: str) -> FilterCoefficients:
    header, data = read_record(path, MAGIC_FILTER)
    support = FilterSupport(_int_field(header, "k1", path), _int_field(header, "l1", path))
    _check_count(data, support.size, path)
    return FilterCoefficients(support, data.reshape(support.shape))


def write_image(path: str, image: np.ndarray):
    """Writes a real image as IMG1 ``f64`` or a complex one as the interleaved ``c128`` variant."""
    image = np.asarray(image)
    if image.ndim != 2:
        raise ValueError(f"Images are 2-D, got shape {image.shape}")
    dtype = "c128" if np.iscomplexobj(image) else "f64"
    header = {"nx": image.shape[1], "ny": image.shape[0], "dtype": dtype}
    write_record(path, MAGIC_IMAGE, header, image)


def read_image(path: str) -> np.ndarray:
    header, data = read_record(path, MAGIC_IMAGE)
    nx, ny = _int_field(header, "nx", path), _int_field(header, "ny", path)
    _check_count(data, nx * ny, path)
    return data.reshape((ny, nx))


def write_mask(path: str, mask: EdgeMask):
    write_image(path, mask.pixels)


def read_mask(path: str) -> EdgeMask:
    pixels = read_image(path)
    if np.iscomplexobj(pixels):
        raise FormatError(f"{path}: edge masks are real f64 images")
    try:
        return EdgeMask(pixels, method="file")
    except ValueError as e:
        raise FormatError(f"{path}: {e}")


def write_null_basis(path: str, basis: NullBasis) -> list:
    """
    Persists a null basis as one FLT1 record per vector next to a JSON index at ``path``.

    Returns the list of written files, index last.
    """
    stem, _ = os.path.splitext(path)
    files = []
    for i in range(basis.P):
        record = f"{stem}.{i:04d}.flt"
        write_filter(record, basis.coefficients(i))
        files.append(record)
    index = {
        "k1": basis.support.k1,
        "l1": basis.support.l1,
        "P": basis.P,
        "delta": basis.delta,
        "fallback": basis.fallback,
        "singular_values": [float(s) for s in basis.singular_values],
        "records": [os.path.basename(f) for f in files],
    }
    with atomic_open(path, 'w') as f:
        json.dump(index, f, indent=2)
    files.append(path)
    return files


def read_null_basis(path: str) -> NullBasis:
    with open(path, 'r', encoding='utf-8') as f:
        try:
            index = json.load(f)
        except json.JSONDecodeError as e:
            raise FormatError(f"{path}: malformed null basis index: {e}")
    directory = os.path.dirname(path)
    try:
        support = FilterSupport(index["k1"], index["l1"])
        records = [read_filter(os.path.join(directory, name)) for name in index["records"]]
        if len(records) != index["P"]:
            raise FormatError(f"{path}: index lists {len(records)} records but P={index['P']}")
        for record in records:
            if record.support != support:
                raise FormatError(f"{path}: record support {record.support} differs from {support}")
        return NullBasis(support, np.stack([r.vector for r in records]),
                         np.asarray(index["singular_values"], dtype=np.float64), index["delta"], index.get("fallback", False))
    except KeyError as e:
        raise FormatError(f"{path}: missing index field {e}")


def write_singular_values(path: str, singular_values: np.ndarray):
    with atomic_open(path, 'w') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(["index", "sigma", "relative"])
        top = singular_values[0] if len(singular_values) and singular_values[0] > 0 else 1.0
        for i, s in enumerate(singular_values):
            writer.writerow([i, repr(float(s)), repr(float(s / top))])


def _format_float(value: float) -> str:
    return repr(float(value)) if math.isfinite(value) else str(value)


def write_sweep(path: str, sweep: SweepResult):
    with atomic_open(path, 'w') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(SWEEP_HEADER)
        for row in sweep.rows:
            writer.writerow([_format_float(row.lam), _format_float(row.snr_db), _format_float(row.objective), row.iters])


def read_sweep(path: str) -> SweepResult:
    with open(path, 'r', encoding='utf-8', newline='') as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != SWEEP_HEADER:
            raise FormatError(f"{path}: expected header {','.join(SWEEP_HEADER)}, got {header}")
        try:
            rows = [SweepRow(float(lam), float(s), float(obj), int(iters)) for lam, s, obj, iters in reader]
        except ValueError as e:
            raise FormatError(f"{path}: malformed sweep row: {e}")
    if not rows:
        raise FormatError(f"{path}: sweep table has no rows")
    return SweepResult(tuple(rows))
