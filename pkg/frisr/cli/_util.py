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
import logging
import sys

from frisr._base import (
    ExitCode, FormatError, GeometryError, SolverDivergenceError,
    _add_run_parser_arguments, _load_env, _load_config,
)
from . import _acquire, _mask, _recon, _eval, _compare
from ._base import RunRecorder

logger = logging.getLogger(__name__)

VERBS = {
    "acquire": _acquire,
    "mask": _mask,
    "recon": _recon,
    "eval": _eval,
    "compare": _compare,
}


def build_parser() -> tuple:
    """Returns the top-level parser and a dict of the per-verb subparsers."""
    parser = argparse.ArgumentParser(prog="frisr", description="Super-resolved MRI from edge annihilation.")
    subparsers = parser.add_subparsers(dest="command", required=True)
    verbs = {}
    for name, module in VERBS.items():
        sub = subparsers.add_parser(name, help=module.DESCRIPTION, description=module.DESCRIPTION)
        _add_run_parser_arguments(sub)
        module.add_arguments(sub)
        verbs[name] = sub
    return parser, verbs


def _option_dests(parser: argparse.ArgumentParser) -> dict:
    return {option.lstrip('-').replace('-', '_'): action.dest
            for action in parser._actions for option in action.option_strings if option.startswith('--')}


def parse_args(argv: list) -> argparse.Namespace:
    """
    Parses a command line with defaults < environment / .env < config file < command line.

    Argument errors exit through ``argparse`` with status 2.
    """
    parser, verbs = build_parser()
    args = parser.parse_args(argv)
    sub = verbs[args.command]

    overrides = _load_env()
    if args.config:
        dests = _option_dests(sub)
        try:
            config = _load_config(args.config)
        except ValueError as e:
            sub.error(str(e))
        unknown = sorted(key for key in config if key not in dests or key == "config")
        if unknown:
            sub.error(f"unknown keys in {args.config}: {', '.join(unknown)}")
        overrides.update({dests[key]: value for key, value in config.items()})
    if overrides:
        sub.set_defaults(**overrides)
        args = parser.parse_args(argv)

    missing = [name for name in VERBS[args.command].REQUIRED if getattr(args, name) is None]
    if missing:
        sub.error("the following arguments are required: " + ", ".join("--" + name.replace('_', '-') for name in missing))
    return args


def main(argv: list = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else int(ExitCode.USAGE)
    except OSError as e:
        print(f"frisr: cannot read config: {e}", file=sys.stderr)
        return int(ExitCode.IO)

    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s", force=True)
    recorder = RunRecorder(args.command, args, argv)
    code = ExitCode.OK
    try:
        with recorder.timed("total"):
            VERBS[args.command].run(args, recorder)
    except GeometryError as e:
        logger.error(f"Geometry error: {e}")
        code = ExitCode.GEOMETRY
    except SolverDivergenceError as e:
        logger.error(f"Solver diverged: {e}")
        code = ExitCode.DIVERGENCE
    except (FormatError, OSError) as e:
        logger.error(f"IO error: {e}")
        code = ExitCode.IO
    except ValueError as e:
        logger.error(f"Invalid input: {e}")
        code = ExitCode.USAGE

    recorder.metric(exit_code=int(code))
    try:
        path = recorder.write()
        logger.info(f"Manifest saved to {path}")
    except OSError as e:
        logger.error(f"Could not write the manifest: {e}")
        if code == ExitCode.OK:
            code = ExitCode.IO
    return int(code)
