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

from contextlib import contextmanager
from dataclasses import dataclass, field, asdict
from enum import Enum
from importlib import metadata
import argparse
import json
import math
import os
import platform
import time

from frisr import __version__
from frisr._grid import FilterSupport
from frisr.formats import atomic_open, sha256

TRACKED_PACKAGES = ["numpy", "scipy", "tqdm", "python-dotenv", "duckdb"]


def package_versions() -> dict:
    versions = {"frisr": __version__, "python": platform.python_version()}
    for name in TRACKED_PACKAGES:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = None
    return versions


def _jsonable(value):
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, FilterSupport):
        return f"{value.k1}x{value.l1}"
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if hasattr(value, 'tolist'):
        return _jsonable(value.tolist())
    return value


def config_snapshot(args: argparse.Namespace) -> dict:
    return {key: _jsonable(value) for key, value in sorted(vars(args).items()) if not key.startswith('_')}


@dataclass
class RunManifest:
    command: str
    argv: list
    config: dict
    seed: int
    inputs: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    versions: dict = field(default_factory=package_versions)
    timings: dict = field(default_factory=dict)
    metrics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return _jsonable(asdict(self))


class RunRecorder:
    """
    Collects what one CLI invocation read, wrote and measured, and writes its manifest.

    Outputs are digested when the manifest is written, after the files are final.
    """

    def __init__(self, command: str, args: argparse.Namespace, argv: list):
        self.manifest = RunManifest(command, list(argv), config_snapshot(args), args.seed)
        self.manifest_dir = args.manifest_dir
        self._outputs = []

    def input(self, path: str):
        self.manifest.inputs[path] = sha256(path)

    def output(self, path: str):
        if path not in self._outputs:
            self._outputs.append(path)

    def metric(self, **values):
        self.manifest.metrics.update(values)

    @contextmanager
    def timed(self, stage: str):
        start = time.perf_counter()
        try:
            yield
        finally:
            self.manifest.timings[stage] = self.manifest.timings.get(stage, 0.0) + time.perf_counter() - start

    def manifest_path(self) -> str:
        anchor = self._outputs[0] if self._outputs else next(iter(self.manifest.inputs), self.manifest.command)
        directory = self.manifest_dir or os.path.dirname(os.path.abspath(anchor))
        return os.path.join(directory, f"{os.path.basename(anchor)}.{self.manifest.command}.manifest.json")

    def write(self) -> str:
        for path in self._outputs:
            if os.path.exists(path):
                self.manifest.outputs[path] = sha256(path)
        path = self.manifest_path()
        with atomic_open(path, 'w') as f:
            json.dump(self.manifest.to_dict(), f, indent=2)
        return path
