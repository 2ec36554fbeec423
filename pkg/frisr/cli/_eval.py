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

import argparse
import csv
import io
import math
import os

from frisr.formats import read_image, atomic_open
from frisr.recon import snr
from ._base import RunRecorder

DESCRIPTION = "Score a reconstruction against a reference image by SNR in dB."
REQUIRED = ("image", "reference")
CSV_HEADER = ["label", "image", "reference", "snr_db"]


def format_snr(value: float) -> str:
    return "inf" if math.isinf(value) else f"{value:.1f}"


def add_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--image", type=str, default=None, help="Reconstruction (IMG1).")
    parser.add_argument("--reference", type=str, default=None, help="Reference image (IMG1) on the same grid.")
    parser.add_argument("--csv", type=str, default=None, help="Optional CSV to which a result row is appended.")
    parser.add_argument("--label", type=str, default="", help="Label of the CSV row.")


def _append_row(path: str, row: list):
    buffer = io.StringIO()
    if os.path.exists(path):
        with open(path, 'r', encoding='utf-8', newline='') as f:
            buffer.write(f.read())
    writer = csv.writer(buffer, lineterminator='\n')
    if buffer.tell() == 0:
        writer.writerow(CSV_HEADER)
    writer.writerow(row)
    with atomic_open(path, 'w') as f:
        f.write(buffer.getvalue())


def run(args: argparse.Namespace, recorder: RunRecorder):
    if args.csv:
        recorder.output(args.csv)
    recorder.input(args.image)
    recorder.input(args.reference)
    image = read_image(args.image)
    reference = read_image(args.reference)
    if image.shape != reference.shape:
        raise ValueError(f"Grid mismatch: {args.image} is {image.shape[1]}x{image.shape[0]}, {args.reference} is {reference.shape[1]}x{reference.shape[0]}")
    value = snr(image, reference)
    print(format_snr(value))
    recorder.metric(snr_db=value)
    if args.csv:
        _append_row(args.csv, [args.label, args.image, args.reference, repr(value)])
