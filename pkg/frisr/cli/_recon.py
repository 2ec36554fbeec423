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

from frisr._base import parse_size
from frisr.formats import read_kspace, read_mask, write_image
from frisr.recon import ReconConfig, WeightMap, weights_from_mask, scale_samples, wtv_recon
from ._base import RunRecorder

DESCRIPTION = "Reconstruct an image from k-space samples by (weighted) total-variation regularization."
REQUIRED = ("input", "out")
DEFAULT_SIZE = (256, 256)


def add_solver_arguments(parser: argparse.ArgumentParser):
    """Solver flags shared by ``recon`` and ``compare``."""
    parser.add_argument("--iters", type=int, default=500, help="Maximum solver iterations.")
    parser.add_argument("--tol", type=float, default=1e-5, help="Stop when the relative iterate change falls below this value.")
    parser.add_argument("--gamma", type=float, default=1.0, help="Exponent applied to the mask to form the weights.")
    parser.add_argument("--floor", type=float, default=0.0, help="Lower bound of the weights.")


def add_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--input", type=str, default=None, help="KSP1 file of k-space samples.")
    parser.add_argument("--mask", type=str, default=None, help="Edge mask (IMG1). Without it standard TV is used.")
    parser.add_argument("--lambda", dest="lam", type=float, default=1e-3, help="Regularization weight. 0 returns the zero-filled image.")
    parser.add_argument("--size", type=parse_size, default=None, help="Reconstruction grid, e.g. 256x256. Defaults to the mask grid or 256x256.")
    add_solver_arguments(parser)
    parser.add_argument("--progress", action='store_true', default=False, help="Show a progress bar over solver iterations.")
    parser.add_argument("--out", type=str, default=None, help="Path of the reconstructed complex image (IMG1, c128).")


def run(args: argparse.Namespace, recorder: RunRecorder):
    recorder.output(args.out)
    recorder.input(args.input)
    ksp = read_kspace(args.input)
    if args.mask:
        recorder.input(args.mask)
        mask = read_mask(args.mask)
        size = args.size or mask.size
        if mask.size != tuple(size):
            raise ValueError(f"Mask grid {mask.size[0]}x{mask.size[1]} differs from the reconstruction grid {size[0]}x{size[1]}")
        weights = weights_from_mask(mask, args.gamma, args.floor)
    else:
        size = args.size or DEFAULT_SIZE
        weights = WeightMap.ones(size)

    cfg = ReconConfig(lam=args.lam, max_iters=args.iters, tol=args.tol, workers=args.threads, progress=args.progress)
    with recorder.timed("solve"):
        result = wtv_recon(scale_samples(ksp, size), weights, cfg)
    write_image(args.out, result.image)
    print(f"{'Weighted TV' if args.mask else 'TV'} reconstruction ({size[0]}x{size[1]}, lambda={args.lam:g}) saved to {args.out}")
    recorder.metric(objective=result.objective, iters=result.iters, converged=result.converged, baseline_used=result.baseline_used)
