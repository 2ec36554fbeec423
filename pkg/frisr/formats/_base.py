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
"""Magic + one-line JSON header + raw little-endian payload records, written atomically."""

from contextlib import contextmanager
import hashlib
import json
import os
import tempfile

import numpy as np

from frisr._base import FormatError

MAGIC_KSPACE = b"KSP1"
MAGIC_FILTER = b"FLT1"
MAGIC_IMAGE = b"IMG1"

DTYPES = {
    "c128": np.dtype('<c16'),
    "f64": np.dtype('<f8'),
}


@contextmanager
def atomic_open(path: str, mode: str = 'wb'):
    """Writes to a temporary file next to ``path`` and renames it into place on success."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, mode, **({} if 'b' in mode else {'encoding': 'utf-8', 'newline': ''})) as f:
            yield f
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def write_record(path: str, magic: bytes, header: dict, data: np.ndarray):
    dtype = DTYPES[header["dtype"]]
    line = json.dumps(header, separators=(',', ':')).encode('utf-8') + b"\n"
    with atomic_open(path, 'wb') as f:
        f.write(magic)
        f.write(line)
        f.write(np.ascontiguousarray(data, dtype=dtype).tobytes())


def read_record(path: str, magic: bytes) -> tuple:
    """Returns (header, flat payload array) of a record file."""
    with open(path, 'rb') as f:
        found = f.read(len(magic))
        if found != magic:
            raise FormatError(f"{path}: expected magic {magic!r}, found {found!r}")
        line = f.readline()
        payload = f.read()
    try:
        header = json.loads(line.decode('utf-8'))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise FormatError(f"{path}: malformed header: {e}")
    dtype_name = header.get("dtype", "c128")
    if dtype_name not in DTYPES:
        raise FormatError(f"{path}: unsupported dtype {dtype_name!r}")
    dtype = DTYPES[dtype_name]
    if len(payload) % dtype.itemsize:
        raise FormatError(f"{path}: payload of {len(payload)} bytes is not a whole number of {dtype_name} values")
    return header, np.frombuffer(payload, dtype=dtype).astype(dtype.newbyteorder('='))


def sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()
