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
import math
import os

from frisr._base import TruthMode, parse_size, parse_snr
from frisr.formats import write_kspace, write_image
from frisr.phantom import load_phantom, ellipse_kspace, add_noise, BUILTIN_PHANTOMS
from frisr.recon import ground_truth
from ._base import RunRecorder

DESCRIPTION = "Sample the Fourier transform of a phantom on a centered window, optionally with noise."
REQUIRED = ("kx", "ky", "out")


def add_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--phantom", type=str, default="shepp-logan", help=f"Builtin phantom ({', '.join(BUILTIN_PHANTOMS)}) or path to a phantom JSON file.")
    parser.add_argument("--kx", type=int, default=None, help="Half-width Kx of the sampling window; the grid has 2Kx+1 columns.")
    parser.add_argument("--ky", type=int, default=None, help="Half-width Ky of the sampling window; the grid has 2Ky+1 rows.")
    parser.add_argument("--snr-db", type=parse_snr, default=math.inf, help="Measurement SNR in dB. 'inf' adds no noise.")
    parser.add_argument("--out", type=str, default=None, help="Path of the KSP1 file to write.")
    parser.add_argument("--truth-out", type=str, default=None, help="Optionally also write the reference image (IMG1) used for SNR scoring.")
    parser.add_argument("--truth-size", type=parse_size, default=(256, 256), help="Grid of the reference image, e.g. 256x256.")
    parser.add_argument("--truth", type=TruthMode, choices=list(TruthMode), default=TruthMode.RASTER, help="How the reference image is formed.")


def run(args: argparse.Namespace, recorder: RunRecorder):
    recorder.output(args.out)
    if args.truth_out:
        recorder.output(args.truth_out)
    if os.path.isfile(args.phantom):
        recorder.input(args.phantom)
    spec = load_phantom(args.phantom)

    with recorder.timed("acquire"):
        acquisition = add_noise(ellipse_kspace(spec, args.kx, args.ky), args.snr_db, args.seed)
    write_kspace(args.out, acquisition.ksp)
    print(f"{acquisition.ksp.shape[1]}x{acquisition.ksp.shape[0]} k-space samples of {spec.name} saved to {args.out}")
    recorder.metric(grid=[acquisition.ksp.shape[1], acquisition.ksp.shape[0]], sigma=acquisition.sigma,
                    realized_snr_db=acquisition.realized_snr_db, n_ellipses=len(spec))

    if args.truth_out:
        with recorder.timed("truth"):
            truth = ground_truth(spec, args.truth_size, args.truth)
        write_image(args.truth_out, truth)
        print(f"Reference image ({args.truth.value}) saved to {args.truth_out}")
