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

import scipy.linalg

from frisr._base import MaskMethod, ZERO_ORDER, FIRST_ORDER, SECOND_ORDER, parse_size, parse_snr
from frisr._grid import FilterSupport
from frisr.formats import read_kspace, write_mask, write_filter, write_null_basis, write_singular_values
from frisr.mask import MaskParams, estimate_pipeline
from ._base import RunRecorder

DESCRIPTION = "Estimate an edge mask from k-space samples by annihilating-filter estimation."
REQUIRED = ("input", "filter", "out")
KINDS_BY_ORDER = {0: ZERO_ORDER, 1: FIRST_ORDER, 2: SECOND_ORDER}


def add_mask_arguments(parser: argparse.ArgumentParser, with_filter_default: bool = False):
    """Mask-estimation flags shared by ``mask`` and ``compare``."""
    parser.add_argument("--method", type=MaskMethod, choices=list(MaskMethod), default=MaskMethod.NULLAVG, help="Filter estimation method.")
    parser.add_argument("--filter", type=FilterSupport.parse, default=None,
                        help="Filter support K1xL1 (half-widths)." + (" Defaults to half the window." if with_filter_default else ""))
    parser.add_argument("--delta", type=float, default=None, help="Relative singular-value threshold delta * sigma_1 of the null space. Defaults to 1e-8 without noise; noisy data uses the noise floor (see --tail).")
    parser.add_argument("--tail", type=float, default=0.1, help="Without --delta on noisy data, keep singular values up to (1 + tail) * sigma_min.")
    parser.add_argument("--rank", type=int, default=None, help="Cadzow target rank. Defaults to |support| - 1.")
    parser.add_argument("--cadzow-iters", type=int, default=10, help="Cadzow denoising iterations.")
    parser.add_argument("--order", type=int, choices=sorted(KINDS_BY_ORDER), default=1,
                        help="Derivative order of the annihilation system: 1 uses dx, dy and 2 uses dxx, dxy, dyy. 0 annihilates samples of a curve measure directly.")


def mask_params(args: argparse.Namespace, size: tuple) -> MaskParams:
    return MaskParams(delta=args.delta, rank=args.rank, cadzow_iters=args.cadzow_iters, size=size,
                      kinds=KINDS_BY_ORDER[args.order], snr_db=args.snr_db, tail=args.tail)


def add_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--input", type=str, default=None, help="KSP1 file of k-space samples.")
    add_mask_arguments(parser)
    parser.add_argument("--render", type=parse_size, default=(256, 256), help="Grid of the rendered mask, e.g. 256x256.")
    parser.add_argument("--snr-db", type=parse_snr, default=math.inf, help="SNR of the input samples, used only to choose between the default delta and the noise-floor threshold.")
    parser.add_argument("--out", type=str, default=None, help="Path of the rendered mask (IMG1).")
    parser.add_argument("--coeffs-out", type=str, default=None, help="Optional path for the filter (FLT1) or, for nullavg, the null-basis JSON index.")
    parser.add_argument("--sv-out", type=str, default=None, help="Singular-value CSV. Defaults to the mask path with a .sv.csv suffix.")


def run(args: argparse.Namespace, recorder: RunRecorder):
    sv_out = args.sv_out or os.path.splitext(args.out)[0] + ".sv.csv"
    recorder.output(args.out)
    recorder.output(sv_out)
    recorder.input(args.input)
    ksp = read_kspace(args.input)

    with recorder.timed("estimate"):
        estimate = estimate_pipeline(ksp, args.method, args.filter, mask_params(args, args.render))
    write_mask(args.out, estimate.mask)
    print(f"{args.method.value} mask ({args.render[0]}x{args.render[1]}) saved to {args.out}")

    singular_values = estimate.singular_values
    if singular_values is None:
        singular_values = scipy.linalg.svdvals(estimate.system.matrix)
    write_singular_values(sv_out, singular_values)
    print(f"Singular values saved to {sv_out}")

    if args.coeffs_out:
        if estimate.basis is not None:
            for path in write_null_basis(args.coeffs_out, estimate.basis):
                recorder.output(path)
        else:
            recorder.output(args.coeffs_out)
            write_filter(args.coeffs_out, estimate.coeffs)
        print(f"Filter coefficients saved to {args.coeffs_out}")

    recorder.metric(residual=estimate.residual, system_shape=list(estimate.system.matrix.shape), **estimate.diagnostics)
    if estimate.basis is not None:
        recorder.metric(P=estimate.basis.P, delta=estimate.basis.delta)
