# Copyright 2025-2026 AstroLab Software
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Command line: build | verify | project | trace | info"""

import argparse
import logging
import sys
from itertools import combinations

import numpy as np
import pandas as pd

from braidfield import __version__
from braidfield.braid import (
    BraidWord,
    beta,
    components,
    is_strictly_homogeneous,
    parse_braid_word,
    permutation,
)
from braidfield.configuration import Config, extract_configuration
from braidfield.crossings import crossings_to_pandas
from braidfield.exceptions import BraidFieldError, InputError, VerificationFailure
from braidfield.project import (
    degree_bound,
    gauss_linking_number,
    integerize,
    inverse_stereographic,
    nodal_residual,
    reverify,
    split_real_imag,
    stereographic_project,
)
from braidfield.semiholo import assemble, construct, degree_bounds
from braidfield.serialization import load_polynomial, write_csv, write_json
from braidfield.utils import get_braidfield_logger
from braidfield.verify import (
    accepted_lambda,
    sample_nodal_set,
    transversality_check,
    verify_polynomial,
)

_LOG = logging.getLogger(__name__)

EXIT_CODES = {"input": 2, "verification": 3, "projection": 4}


def _identity(func):
    return func


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--braid", help="Braid word, e.g. '2 -1 2 1 1 1' or 'bAbaaa'")
    common.add_argument("--braid-file", help="File holding the braid word")
    common.add_argument("--strands", type=int, help="Number of strands (required for empty words)")
    common.add_argument("--out", help="Output file, stdout when omitted")
    common.add_argument("--tol", type=float, help="Relative tolerance")
    common.add_argument("--samples", type=int, help="t-samples of the verification")
    common.add_argument("--grid", type=int, help="Crossing scan density per strand")
    common.add_argument(
        "--lambda", dest="lam", type=float, help="Fixed amplitude to verify, no halving search"
    )
    common.add_argument("--repeat", type=int, help="Number of repeats of the braid")

    parser = argparse.ArgumentParser(
        prog="braidfield",
        description="Semiholomorphic polynomials whose nodal set on the 3-sphere is a closed braid",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", parents=[common], help="Braid word to polynomial")
    build.add_argument("--dump-fdata", help="CSV file for the F data points")
    build.add_argument("--dump-crossings", help="CSV file for the crossings")

    verify = sub.add_parser("verify", parents=[common], help="Certify a polynomial")
    verify.add_argument("polynomial", nargs="?", help="Polynomial JSON; --braid builds one")

    project = sub.add_parser("project", parents=[common], help="Project a polynomial to R^3")
    project.add_argument("polynomial", help="Polynomial JSON")
    project.add_argument(
        "--integerize", action="store_true", help="Round the coefficients to Gaussian integers"
    )

    trace = sub.add_parser("trace", parents=[common], help="Sample the nodal set")
    trace.add_argument("polynomial", help="Polynomial JSON")
    trace.add_argument("--space", choices=["s3", "r3"], default="s3")

    sub.add_parser("info", parents=[common], help="Braid analysis")
    return parser


def read_braid(args) -> BraidWord:
    if args.braid is not None:
        text = args.braid
    elif args.braid_file is not None:
        try:
            with open(args.braid_file) as f:
                text = f.read()
        except OSError as e:
            raise InputError(f"Cannot read {args.braid_file}: {e}") from e
    else:
        raise InputError("Give a braid with --braid or --braid-file")
    return parse_braid_word(text, args.strands)


def cmd_build(args, config: Config, wrap=_identity):
    b = read_braid(args)
    construction = wrap(construct)(b, grid=config.grid, tol=config.tol)
    fourier = construction.fourier
    if config.repeat > 1:
        fourier = fourier.repeat(config.repeat)
    f = wrap(assemble)(fourier, tol=config.tol, threads=config.threads)

    if args.dump_fdata:
        write_csv(construction.diagram.to_pandas(), args.dump_fdata)
    if args.dump_crossings:
        write_csv(crossings_to_pandas(construction.crossings), args.dump_crossings)

    write_json(f.to_json(), args.out)
    c1, c2 = degree_bounds(fourier.braid)
    summary = (
        f"strands {f.strands}, degree {f.degree} (deg <= {max(c2, f.strands)}, c1 = {c1:.4g}), "
        f"beta {beta(fourier.braid)}, harmonic {f.is_harmonic()}"
    )
    print(summary, file=sys.stderr if args.out is None else sys.stdout)
    return 0


def cmd_verify(args, config: Config, wrap=_identity):
    fourier = None
    braid = None
    if args.polynomial is not None:
        f = load_polynomial(args.polynomial)
        if args.braid is not None or args.braid_file is not None:
            braid = read_braid(args)
    else:
        braid = read_braid(args)
        construction = wrap(construct)(braid, grid=config.grid, tol=config.tol)
        fourier = construction.fourier
        if config.repeat > 1:
            fourier = fourier.repeat(config.repeat)
            braid = fourier.braid
        f = wrap(assemble)(fourier, tol=config.tol, threads=config.threads)

    try:
        report = wrap(verify_polynomial)(f, braid, fourier, config)
    except VerificationFailure as e:
        if e.report is not None:
            write_json(e.report.to_dict(), args.out)
        raise
    write_json(report.to_dict(), args.out)
    return 0


def _verified(f, config: Config, wrap=_identity):
    """Accepted amplitude and report of a stored polynomial"""
    return wrap(accepted_lambda)(f, None, config)


def cmd_project(args, config: Config, wrap=_identity):
    f = load_polynomial(args.polynomial)
    lam, _ = _verified(f, config, wrap)
    f_lam = f.rescale(lam)
    p = wrap(stereographic_project)(f_lam)

    out = {"lambda": lam, "degree": p.degree, "degree_bound": 2 * f.degree}
    if args.integerize:
        nodal = sample_nodal_set(f, lam, config.samples)
        margin = transversality_check(f_lam, nodal).margin
        xyz, _ = inverse_stereographic(nodal.points())
        q, scale = integerize(p, margin, config.integerize_bound, xyz)
        out["scale"] = scale
        out["perturbation"] = reverify(p, q, scale, xyz, margin)
        out["nodal_residual"] = nodal_residual(q, xyz)
        p = q
    F1, F2 = split_real_imag(p)
    out["F1"] = F1.to_json()
    out["F2"] = F2.to_json()
    write_json(out, args.out)
    _LOG.info(f"Projected polynomial of degree {p.degree} at lambda = {lam:g}")
    return 0


def _component_curves(nodal, perm):
    """Strands of each closure component joined in traversal order, on the 3-sphere"""
    seen = set()
    curves = []
    for start in range(len(perm)):
        if start in seen:
            continue
        order = [start]
        seen.add(start)
        while perm[order[-1]] != start:
            order.append(perm[order[-1]])
            seen.add(order[-1])
        u = np.concatenate([nodal.u[:, j] for j in order])
        v = np.concatenate([nodal.v[:, j] for j in order])
        curves.append(np.stack([u, v], axis=-1))
    return curves


def cmd_trace(args, config: Config, wrap=_identity):
    f = load_polynomial(args.polynomial)
    lam, _ = _verified(f, config, wrap)
    nodal = wrap(sample_nodal_set)(f, lam, config.samples)

    if args.space == "s3":
        table = nodal.to_pandas()
    else:
        xyz, kept = inverse_stereographic(nodal.points())
        base = nodal.to_pandas()[kept]
        table = pd.DataFrame(
            {
                "strand": base["strand"].to_numpy(),
                "t": base["t"].to_numpy(),
                "x": xyz[:, 0],
                "y": xyz[:, 1],
                "z": xyz[:, 2],
            }
        )
    write_csv(table, args.out)

    curves = [inverse_stereographic(c)[0] for c in _component_curves(nodal, nodal.permutation)]
    for (i, first), (j, second) in combinations(enumerate(curves), 2):
        _LOG.info(f"Linking number of components {i} and {j}: {gauss_linking_number(first, second):.4f}")
    return 0


def cmd_info(args, config: Config, wrap=_identity):
    b = read_braid(args)
    if config.repeat > 1:
        b = b.power(config.repeat)
    comps = components(b)
    c1, c2 = degree_bounds(b)
    write_json(
        {
            "braid": str(b),
            "strands": b.strands,
            "length": b.length,
            "permutation": list(permutation(b)),
            "components": [list(c.strands) for c in comps.cycles],
            "beta": beta(b),
            "strictly_homogeneous": is_strictly_homogeneous(b),
            "c1": c1,
            "c2": c2,
            "projection_degree_bound": degree_bound(b),
        },
        args.out,
    )
    return 0


COMMANDS = {
    "build": cmd_build,
    "verify": cmd_verify,
    "project": cmd_project,
    "trace": cmd_trace,
    "info": cmd_info,
}


def main(argv=None, configuration=None, wrap=None) -> int:
    """Run one command and return its exit code

    Parameters
    ----------
    argv: list of str, optional
        Arguments without the program name, `sys.argv[1:]` by default
    configuration: dict, optional
        Output of `extract_configuration`; built-in defaults otherwise
    wrap: callable, optional
        Decorator applied to the pipeline stages, e.g. telemetry
    """
    wrap = wrap or _identity
    args = build_parser().parse_args(argv)
    try:
        config = Config.from_mapping(
            configuration or extract_configuration(None),
            tol=args.tol,
            samples=args.samples,
            grid=args.grid,
            lam=args.lam,
            repeat=args.repeat,
        )
        get_braidfield_logger("braidfield", config.log_level)
        return COMMANDS[args.command](args, config, wrap)
    except BraidFieldError as e:
        print(f"{e.stage}: {e}", file=sys.stderr)
        return EXIT_CODES.get(e.stage, 1)
