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
from frisr.formats import write_sweep, write_mask, write_image
from frisr.mask import estimate_pipeline
from frisr.phantom import load_phantom, ellipse_kspace, add_noise
from frisr.recon import ReconConfig, WeightMap, weights_from_mask, scale_samples, lambda_sweep, ground_truth
from ._base import RunRecorder
from ._mask import add_mask_arguments, mask_params
from ._recon import add_solver_arguments
from ._results import ResultsStore

DESCRIPTION = "Run the full pipeline and compare standard TV against mask-weighted TV over a lambda grid."
REQUIRED = ("kx", "ky", "out_dir")
DEFAULT_LAMBDAS = [1e-3, 3e-3, 1e-2, 3e-2, 1e-1, 3e-1, 1.0]


def add_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--phantom", type=str, default="shepp-logan", help="Builtin phantom name or phantom JSON file.")
    parser.add_argument("--kx", type=int, default=None, help="Half-width Kx of the sampling window.")
    parser.add_argument("--ky", type=int, default=None, help="Half-width Ky of the sampling window.")
    parser.add_argument("--snr-db", type=parse_snr, default=math.inf, help="Measurement SNR in dB. 'inf' adds no noise.")
    add_mask_arguments(parser, with_filter_default=True)
    parser.add_argument("--size", type=parse_size, default=(256, 256), help="Reconstruction and mask grid.")
    parser.add_argument("--lambdas", type=float, nargs='+', default=DEFAULT_LAMBDAS, help="Regularization weights to sweep.")
    add_solver_arguments(parser)
    parser.add_argument("--truth", type=TruthMode, choices=list(TruthMode), default=TruthMode.RASTER, help="Reference image used for SNR scoring.")
    parser.add_argument("--out-dir", type=str, default=None, help="Directory for tv.csv, wtv.csv, mask.img and truth.img.")
    parser.add_argument("--run-tag", type=str, default=None, help="Tag identifying the run in the results database.")


def run(args: argparse.Namespace, recorder: RunRecorder):
    paths = {name: os.path.join(args.out_dir, name) for name in ("tv.csv", "wtv.csv", "mask.img", "truth.img")}
    for path in paths.values():
        recorder.output(path)
    if os.path.isfile(args.phantom):
        recorder.input(args.phantom)
    spec = load_phantom(args.phantom)
    size = tuple(args.size)

    with recorder.timed("acquire"):
        acquisition = add_noise(ellipse_kspace(spec, args.kx, args.ky), args.snr_db, args.seed)
        truth = ground_truth(spec, size, args.truth)
    with recorder.timed("mask"):
        estimate = estimate_pipeline(acquisition.ksp, args.method, args.filter, mask_params(args, size))
    write_mask(paths["mask.img"], estimate.mask)
    write_image(paths["truth.img"], truth)
    print(f"{args.method.value} mask saved to {paths['mask.img']}")

    b = scale_samples(acquisition.ksp, size)
    # entries run concurrently, so each solve stays single-threaded
    cfg = ReconConfig(max_iters=args.iters, tol=args.tol, workers=1)
    sweeps = {}
    with recorder.timed("sweep"):
        sweeps["tv"] = lambda_sweep(b, WeightMap.ones(size), args.lambdas, truth, cfg, args.threads, desc="TV")
        sweeps["wtv"] = lambda_sweep(b, weights_from_mask(estimate.mask, args.gamma, args.floor), args.lambdas, truth, cfg, args.threads, desc="Weighted TV")
    write_sweep(paths["tv.csv"], sweeps["tv"])
    write_sweep(paths["wtv.csv"], sweeps["wtv"])
    print(f"Sweep tables saved to {paths['tv.csv']} and {paths['wtv.csv']}")

    for method, sweep in sweeps.items():
        best = sweep.best
        print(f"{method}: best SNR {best.snr_db:.1f} dB at lambda={best.lam:g} ({best.iters} iterations)")
        recorder.metric(**{f"{method}_best_snr_db": best.snr_db, f"{method}_best_lambda": best.lam})
    recorder.metric(mask_residual=estimate.residual, order=args.order, kinds=[k.value for k in estimate.system.kinds])

    if args.results_db:
        run_tag = args.run_tag or f"{spec.name}_{args.method.value}_{args.kx}x{args.ky}_snr{args.snr_db:g}_seed{args.seed}"
        store = ResultsStore(args.results_db)
        try:
            for method, sweep in sweeps.items():
                store.add_sweep(run_tag, method, sweep)
            print(f"{store.get_num_rows(run_tag)} rows for {run_tag} saved to {args.results_db}")
        finally:
            store.close()
