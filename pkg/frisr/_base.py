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

from enum import Enum, IntEnum
import argparse
import json
import os

import dotenv


class DerivativeKind(Enum):
    NONE = 'none'
    DX = 'dx'
    DY = 'dy'
    DXX = 'dxx'
    DYY = 'dyy'
    DXY = 'dxy'
    LAPLACIAN = 'laplacian'

    @property
    def order(self) -> int:
        if self == DerivativeKind.NONE:
            return 0
        return 1 if self in (DerivativeKind.DX, DerivativeKind.DY) else 2


ZERO_ORDER = (DerivativeKind.NONE,)
FIRST_ORDER = (DerivativeKind.DX, DerivativeKind.DY)
SECOND_ORDER = (DerivativeKind.DXX, DerivativeKind.DXY, DerivativeKind.DYY)


class MaskMethod(Enum):
    LS = 'ls'
    CADZOW = 'cadzow'
    NULLAVG = 'nullavg'


class TruthMode(Enum):
    RASTER = 'raster'
    FULL_TV = 'full-tv'


class ExitCode(IntEnum):
    OK = 0
    USAGE = 2
    IO = 3
    GEOMETRY = 4
    DIVERGENCE = 5


class FrisrError(Exception):
    """Base class of errors raised by frisr."""


class GeometryError(FrisrError, ValueError):
    """Filter support, valid region or sampling window do not fit together."""


class SolverDivergenceError(FrisrError, RuntimeError):
    """The reconstruction solver objective blew up."""


class FormatError(FrisrError, ValueError):
    """A binary or JSON file does not follow its declared format."""


def parse_size(text: str) -> tuple:
    """Parses ``NxM`` (or a single ``N``) into an ``(N, M)`` tuple of ints."""
    parts = str(text).lower().split('x')
    if len(parts) == 1:
        parts = parts * 2
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"Expected a size like 256x256, got {text!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected a size like 256x256, got {text!r}")


def parse_snr(text: str) -> float:
    value = float(text)
    if value != value:
        raise argparse.ArgumentTypeError("SNR must not be NaN")
    return value


def _add_run_parser_arguments(parser: argparse.ArgumentParser):
    """
    Adds the global run arguments shared by every verb.

    Args:
        parser (argparse.ArgumentParser): The parser to which arguments will be added.
    """
    parser.add_argument("--config", type=str, default=None, help="JSON file mirroring the command-line flags. Command-line values take precedence.")
    parser.add_argument("--seed", type=int, default=0, help="Seed for noise generation. Always recorded in the manifest.")
    parser.add_argument("--threads", type=int, default=1, help="Worker threads for transforms and sweep entries.")
    parser.add_argument("--manifest-dir", type=str, default=None, help="Directory for run manifests. Defaults to the directory of the first output.")
    parser.add_argument("--results-db", type=str, default=None, help="Optional DuckDB file collecting sweep results.")
    parser.add_argument("--quiet", action='store_true', default=False, help="Only log warnings and errors.")


_ENV_DEFAULTS = {
    'FRISR_SEED': ('seed', int),
    'FRISR_THREADS': ('threads', int),
    'FRISR_MANIFEST_DIR': ('manifest_dir', str),
    'FRISR_RESULTS_DB': ('results_db', str),
}


def _load_env() -> dict:
    """
    Load run defaults from the environment, reading a .env file if it exists.
    """
    dotenv.load_dotenv()
    defaults = {}
    for name, (dest, cast) in _ENV_DEFAULTS.items():
        value = os.getenv(name)
        if value is not None and value != '':
            defaults[dest] = cast(value)
    return defaults


def _load_config(path: str) -> dict:
    """
    Reads a JSON config file whose keys are flag names (dashes or underscores).
    """
    with open(path, 'r', encoding='utf-8') as f:
        raw = json.load(f)
    if not isinstance(raw, dict):
        raise ValueError(f"Config file {path} must contain a JSON object")
    return {key.lstrip('-').replace('-', '_'): value for key, value in raw.items()}
