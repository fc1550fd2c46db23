"""
Command line front-end.

Exit codes: 0 success, 2 input validation failure, 3 numerical failure.
"""
import argparse
import dataclasses
import json
import logging
import logging.config
import os
import re
import sys

import numpy as np
import pandas as pd

from entrobound import __version__
from entrobound.config import get_option, read_config
from entrobound.element_bound import bound_b_corner, bound_b_full, element_bound_report
from entrobound.errors import NumericalError, ValidationError
from entrobound.gaussian.coarse import coarse_grained_bound
from entrobound.gaussian.model import (SpatialParams, TimeParams, e3f_cv_approx_spatial, e3f_cv_approx_time,
                                       e3f_cv_exact_bound, figure_marginals, model_spatial, model_time)
from entrobound.linalg import PureState, as_density, read_density_json
from entrobound.manifest import FLOAT_FORMAT, RunManifest, dumps_json
from entrobound.npartite import conjugate_correlation_defect, cyclic_witness
from entrobound.states import ghz_werner, state_from_name, w_werner
from entrobound.sweep import Spacing, Sweep, SweepSpec, find_threshold
from entrobound.witness import (MeasurementPair, ObservableBasis, measured_witness_v, measurement_distribution,
                                omega, pauli_basis, pure_e3f, pure_min_bound, quantum_witness_v, read_counts_csv)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

UNITS = {
    "": 1.0, "m": 1.0, "mm": 1e-3, "um": 1e-6, "µm": 1e-6, "nm": 1e-9,
    "hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9, "thz": 1e12, "rad/s": 1.0,
    "s2/m": 1.0, "s^2/m": 1.0,
}
_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([a-zA-Zµ/^0-9]*)\s*$")


def parse_quantity(text):
    """
    Parses a number with an optional unit suffix into SI: "10mm" -> 0.01, "1.94GHz" -> 1.94e9

    :rtype: float
    """
    match = _QUANTITY.match(str(text))
    if match is None:
        raise ValidationError("cannot parse quantity '%s'" % text)
    unit = match.group(2).lower()
    if unit not in UNITS:
        raise ValidationError("unknown unit '%s' in '%s'" % (match.group(2), text))
    return float(match.group(1)) * UNITS[unit]


def parse_sweep(text):
    """
    Parses ``var=start:stop:points[:log]``

    :rtype: :class:`entrobound.sweep.SweepSpec`
    """
    if "=" not in text:
        raise ValidationError("sweep '%s': expected var=start:stop:points[:log]" % text)
    variable, grid = text.split("=", 1)
    fields = grid.split(":")
    if len(fields) not in (3, 4) or (len(fields) == 4 and fields[3].strip().lower() not in ("log", "linear")):
        raise ValidationError("sweep '%s': expected var=start:stop:points[:log]" % text)
    try:
        points = int(fields[2])
    except ValueError:
        raise ValidationError("sweep '%s': points must be an integer" % text)
    spacing = Spacing.LOG if len(fields) == 4 and fields[3].strip().lower() == "log" else Spacing.LINEAR
    return SweepSpec(variable.strip(), parse_quantity(fields[0]), parse_quantity(fields[1]), points, spacing)


def _dumps(document):
    return dumps_json(document) + "\n"


def _write(path, text):
    with open(path, "w", newline="\n") as fp:
        fp.write(text)


def emit(args, manifest, rows=None, summary=None, document=None):
    """
    Writes the output (CSV rows or a JSON document) to ``--out`` with its manifest, or to stdout.
    The summary of a CSV sweep goes to ``<out>.summary.json``, or to stderr when writing to stdout.
    """
    csv = rows is not None and getattr(args, "format", "json") == "csv"
    if csv:
        frame = pd.DataFrame(rows, columns=list(rows[0].keys()))
        text = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    elif rows is not None:
        text = _dumps({"rows": rows, "summary": summary})
    else:
        text = _dumps(document)

    if args.out:
        _write(args.out, text)
        manifest.write(args.out)
        if csv and summary is not None:
            _write(str(args.out) + ".summary.json", _dumps(summary))
        logger.info("Wrote %s", args.out)
    else:
        sys.stdout.write(text)
        if csv and summary is not None:
            sys.stderr.write(_dumps({"summary": summary}))
    if summary is not None:
        logger.info("Summary: %s", dumps_json(summary, indent=None))


def _pair_from_args(args):
    if getattr(args, "bases_file", None):
        with open(args.bases_file) as fp:
            try:
                data = json.load(fp)
            except json.JSONDecodeError as e:
                raise ValidationError("bases json: line %d column %d: %s" % (e.lineno, e.colno, e.msg))
        bases = []
        for key in ("q", "r"):
            if key not in data or "re" not in data[key]:
                raise ValidationError("bases json: missing field '%s.re'" % key)
            re_part = np.array(data[key]["re"], dtype=float)
            im_part = np.array(data[key].get("im", np.zeros_like(re_part)), dtype=float)
            bases.append(ObservableBasis(re_part + 1j * im_part))
        return MeasurementPair(*bases)
    names = [n.strip() for n in args.bases.split(",")]
    if len(names) != 2:
        raise ValidationError("bases '%s': expected two names, e.g. z,x" % args.bases)
    return MeasurementPair(pauli_basis(names[0]), pauli_basis(names[1]))


def _distributions(state, pair):
    return measurement_distribution(state, pair.q), measurement_distribution(state, pair.r)


def _load_state(args, manifest):
    if getattr(args, "state_file", None):
        manifest.add_input(args.state_file)
        return read_density_json(args.state_file)
    if getattr(args, "state", None):
        return state_from_name(args.state, getattr(args, "n", None))
    raise ValidationError("no input: give --state-file, --state or --counts")


def werner_row(kind, pair):
    constructor = ghz_werner if kind == "gw" else w_werner

    def row(p):
        rho = constructor(p)
        dist_q, dist_r = _distributions(rho, pair)
        return {
            "p": p,
            "v_exact": quantum_witness_v(rho).v_bound,
            "v_measured": measured_witness_v(dist_q, dist_r, pair, rho.signature).v_bound,
            "b_full": bound_b_full(rho),
            "b_corner": bound_b_corner(rho),
        }
    return row


def cmd_werner(args, cfg):
    """
    Sweeps the Werner mixing fraction p for the GHZ (gw) or W (ww) target
    """
    grid = parse_sweep(args.sweep)
    if grid.variable != "p":
        raise ValidationError("werner: the swept variable must be p, got '%s'" % grid.variable)
    if grid.start < 0.0 or grid.stop > 1.0:
        raise ValidationError("werner: p range [%r, %r] outside [0, 1]" % (grid.start, grid.stop))
    pair = _pair_from_args(args)
    row = werner_row(args.state, pair)
    rows = Sweep("werner-" + args.state, config=cfg, threads=args.threads).run(grid.values(), row)

    summary = {}
    for column in ("v_exact", "v_measured", "b_full", "b_corner"):
        summary["threshold_" + column] = find_threshold(lambda p, c=column: row(p)[c], grid.start, grid.stop,
                                                        xtol=1e-8)
    manifest = RunManifest("werner", {"state": args.state, "sweep": args.sweep, "bases": args.bases})
    emit(args, manifest, rows=rows, summary=summary)


def cmd_witness(args, cfg):
    """
    Exact and measured witness reports for a state, or the measured report for a counts file
    """
    pair = _pair_from_args(args)
    manifest = RunManifest("witness", {"bases": args.bases, "bases_file": args.bases_file})
    if args.bases_file:
        manifest.add_input(args.bases_file)
    document = {}
    if args.counts:
        manifest.add_input(args.counts)
        min_total = args.min_total if args.min_total is not None else get_option(cfg, "counts", "min_total", int)
        manifest.parameters["min_total"] = min_total
        counts = read_counts_csv(args.counts, min_total=min_total, dim=pair.dim)
        measured = measured_witness_v(counts.dist_q, counts.dist_r, pair)
        document["measured"] = measured.as_json()
        document["pure_min"] = pure_min_bound(counts.dist_q, counts.dist_r, pair).as_json()
        document["low_counts"] = counts.low_counts
        document["e3f_lower"] = measured.e3f_lower
    else:
        state = _load_state(args, manifest)
        manifest.parameters["state"] = args.state
        rho = as_density(state)
        dist_q, dist_r = _distributions(rho, pair)
        exact = quantum_witness_v(rho)
        measured = measured_witness_v(dist_q, dist_r, pair, rho.signature)
        document["exact"] = exact.as_json()
        document["measured"] = measured.as_json()
        lower = max(exact.e3f_lower, measured.e3f_lower)
        if isinstance(state, PureState):
            document["pure_e3f"] = pure_e3f(state)
            document["pure_min"] = pure_min_bound(dist_q, dist_r, pair).as_json()
        document["e3f_lower"] = lower
    emit(args, manifest, document=document)


def _cv_setup(args, kind):
    if kind == "spatial":
        params = SpatialParams(L_z=parse_quantity(args.L_z), lambda_p=parse_quantity(args.lambda_p),
                               n_p=parse_quantity(args.n_p), sigma_p=parse_quantity(args.sigma_p))
        return params, "sigma_p", model_spatial, e3f_cv_approx_spatial
    scale = 2.0 * np.pi if args.hz else 1.0
    params = TimeParams(L_z=parse_quantity(args.L_z), kappa=parse_quantity(args.kappa),
                        sigma_wp=parse_quantity(args.sigma_wp) * scale)
    return params, "sigma_wp", model_time, e3f_cv_approx_time


def cv_row(params, variable, build, approx, scale=1.0, coarse=None):
    """
    Row function of a CV sweep over ``variable`` (values are multiplied by ``scale``)
    """
    def row(value):
        point = dataclasses.replace(params, **{variable: value * scale})
        model = build(point)
        bound = approx(point)
        result = {"parameter": value * scale, "exact_bound_bits": e3f_cv_exact_bound(model),
                  "approx_bare_bits": bound.bare, "approx_caption_bits": bound.caption}
        if coarse is not None:
            report = coarse_grained_bound(model, coarse["dx"], coarse["dk"], samples=coarse["samples"],
                                          seed=coarse["seed"], nodes=coarse["nodes"])
            result["coarse_bound_bits"] = report.bound
            result["coarse_stderr_bits"] = report.stderr
        return result
    return row


def cmd_cv(args, cfg, kind):
    """
    Exact, approximate and (optionally) coarse-grained bounds of the triple-Gaussian model
    """
    params, default_variable, build, approx = _cv_setup(args, kind)
    coarse = None
    if args.coarse_dx is not None or args.coarse_dk is not None:
        if args.coarse_dx is None or args.coarse_dk is None:
            raise ValidationError("%s: --coarse-dx and --coarse-dk must be given together" % kind)
        coarse = {
            "dx": parse_quantity(args.coarse_dx),
            "dk": parse_quantity(args.coarse_dk),
            "samples": args.samples if args.samples is not None else get_option(cfg, "coarse", "samples", int),
            "seed": args.seed if args.seed is not None else get_option(cfg, "coarse", "seed", int),
            "nodes": get_option(cfg, "coarse", "nodes", int),
        }

    scale = 1.0
    if args.sweep:
        grid = parse_sweep(args.sweep)
        fields = [f.name for f in dataclasses.fields(params)]
        if grid.variable not in fields:
            raise ValidationError("%s: cannot sweep '%s', expected one of %s" % (kind, grid.variable, fields))
        variable = grid.variable
        if kind == "time" and variable == "sigma_wp" and args.hz:
            scale = 2.0 * np.pi
        values = grid.values()
    else:
        grid = None
        variable = default_variable
        values = [getattr(params, variable)]

    row = cv_row(params, variable, build, approx, scale, coarse)
    rows = Sweep("cv-" + kind, config=cfg, threads=args.threads).run(values, row)

    reference = build(params)
    summary = {"reference": {"parameters": dataclasses.asdict(params),
                             "exact_bound_bits": e3f_cv_exact_bound(reference),
                             "marginals": figure_marginals(reference)}}
    if grid is not None:
        log = grid.spacing is Spacing.LOG
        def at(v):
            return dataclasses.replace(params, **{variable: v * scale})

        def exact_at(v):
            return e3f_cv_exact_bound(build(at(v)))

        def caption_at(v):
            return approx(at(v)).caption

        summary["zero_intercept_exact"] = _scaled(find_threshold(exact_at, grid.start, grid.stop, log=log), scale)
        summary["zero_intercept_caption"] = _scaled(find_threshold(caption_at, grid.start, grid.stop, log=log), scale)
        summary["one_gebit"] = _scaled(find_threshold(lambda v: exact_at(v) - 1.0, grid.start, grid.stop, log=log),
                                       scale)

    resolved = dataclasses.asdict(params)
    resolved.update({"variable": variable, "sweep": args.sweep, "hz": bool(getattr(args, "hz", False)),
                     "coarse": coarse})
    manifest = RunManifest("cv-" + kind, resolved, seed=coarse["seed"] if coarse else None)
    emit(args, manifest, rows=rows, summary=summary)


def _scaled(value, scale):
    return None if value is None else value * scale


def cmd_npartite(args, cfg):
    """
    Cyclic N-party witness from a built-in state or a counts file
    """
    pair = _pair_from_args(args)
    manifest = RunManifest("npartite", {"bases": args.bases, "state": args.state, "n": args.n})
    low_counts = False
    if args.counts:
        manifest.add_input(args.counts)
        min_total = args.min_total if args.min_total is not None else get_option(cfg, "counts", "min_total", int)
        counts = read_counts_csv(args.counts, min_total=min_total, dim=pair.dim)
        dist_q, dist_r, low_counts = counts.dist_q, counts.dist_r, counts.low_counts
    else:
        state = _load_state(args, manifest)
        dist_q, dist_r = _distributions(state, pair)
    report = dataclasses.replace(cyclic_witness(dist_q, dist_r, pair), low_counts=low_counts)
    document = report.as_json()
    if abs(omega(pair) - pair.dim) < 1e-9:
        document["conjugate_defect"] = conjugate_correlation_defect(dist_q, dist_r, pair.dim, pair)
    emit(args, manifest, document=document)


def cmd_element_bound(args, cfg):
    """
    GHZ-adapted density-element bounds of an N-qubit state
    """
    manifest = RunManifest("element-bound", {"state": args.state})
    state = _load_state(args, manifest)
    emit(args, manifest, document=element_bound_report(as_density(state)).as_json())


def build_parser():
    parser = argparse.ArgumentParser(prog="entrobound",
                                     description="Lower bounds on multipartite entanglement of formation")
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    parser.add_argument("--config", default="entrobound.ini", help="ini file with sweep/counts/coarse/logging sections")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    def outputs(p, tabular=False):
        p.add_argument("--out", help="output path (stdout when omitted)")
        if tabular:
            p.add_argument("--format", choices=("csv", "json"), default="csv")
            p.add_argument("--threads", type=int, help="sweep threads (capped by ENTROBOUND_THREADS)")

    def bases(p):
        p.add_argument("--bases", default="z,x", help="Q,R Pauli basis names (default z,x)")
        p.add_argument("--bases-file", help="JSON file with q/r basis matrices (columns are eigenvectors)")

    p = sub.add_parser("werner", help="sweep the GHZ-Werner or W-Werner mixing fraction")
    p.add_argument("--state", choices=("gw", "ww"), default="gw")
    p.add_argument("--sweep", default="p=0:1:201", help="p=start:stop:points")
    bases(p)
    outputs(p, tabular=True)
    p.set_defaults(func=cmd_werner)

    p = sub.add_parser("witness", help="tripartite witness report of a state or counts file")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--state-file", help="density matrix JSON")
    group.add_argument("--state", help="built-in state name, e.g. ghz3, w3, insep, gw(0.9)")
    group.add_argument("--counts", help="counts CSV (setting,outcome_A,outcome_B,outcome_C,count)")
    p.add_argument("--min-total", type=int, help="count total below which estimates are flagged")
    bases(p)
    outputs(p)
    p.set_defaults(func=cmd_witness)

    for kind in ("spatial", "time"):
        p = sub.add_parser("cv-" + kind, help="triple-Gaussian %s bounds" % kind)
        p.add_argument("--L-z", dest="L_z", default="10mm", help="crystal length")
        if kind == "spatial":
            p.add_argument("--lambda-p", dest="lambda_p", default="325nm", help="pump wavelength")
            p.add_argument("--n-p", dest="n_p", default="2.247", help="refractive index at the pump wavelength")
            p.add_argument("--sigma-p", dest="sigma_p", default="1mm", help="pump width")
        else:
            p.add_argument("--kappa", default="1.01e-25", help="group velocity dispersion (s^2/m)")
            p.add_argument("--sigma-wp", dest="sigma_wp", default="1.94GHz", help="pump bandwidth (rad/s)")
            p.add_argument("--hz", action="store_true", help="bandwidths are ordinary frequencies, multiply by 2π")
        p.add_argument("--sweep", help="var=start:stop:points[:log], e.g. sigma_p=0.005mm:10mm:50:log")
        p.add_argument("--coarse-dx", help="bin width of the direct variables (adds a coarse-grained column)")
        p.add_argument("--coarse-dk", help="bin width of the conjugate variables")
        p.add_argument("--samples", type=int, help="Monte-Carlo samples of the coarse-grained bound")
        p.add_argument("--seed", type=int, help="seed of the coarse-grained bound")
        outputs(p, tabular=True)
        p.set_defaults(func=lambda a, c, k=kind: cmd_cv(a, c, k))

    p = sub.add_parser("npartite", help="cyclic N-party witness")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--state", help="built-in state name, e.g. ghz or mm (party count from --n)")
    group.add_argument("--counts", help="counts CSV with N outcome columns")
    p.add_argument("--n", type=int, default=3, help="party count of argument-less built-in states")
    p.add_argument("--min-total", type=int)
    bases(p)
    outputs(p)
    p.set_defaults(func=cmd_npartite)

    p = sub.add_parser("element-bound", help="GHZ-adapted density element bounds")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--state-file", help="density matrix JSON")
    group.add_argument("--state", help="built-in state name")
    p.add_argument("--n", type=int, default=3)
    outputs(p)
    p.set_defaults(func=cmd_element_bound)
    return parser


def configure_logging(config_file, verbose):
    if config_file and os.path.isfile(config_file):
        logging.config.fileConfig(config_file, disable_existing_loggers=False)
    else:
        logging.basicConfig(level=max(logging.WARNING - 10 * verbose, logging.DEBUG),
                            format="%(levelname)s %(name)s: %(message)s")
    if verbose:
        logging.getLogger().setLevel(max(logging.WARNING - 10 * verbose, logging.DEBUG))


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.config, args.verbose)
    cfg = read_config(args.config if os.path.isfile(args.config) else None)
    try:
        args.func(args, cfg)
    except ValidationError as e:
        sys.stderr.write("entrobound: invalid input: %s\n" % e)
        return EXIT_VALIDATION
    except NumericalError as e:
        sys.stderr.write("entrobound: numerical failure: %s\n" % e)
        return EXIT_NUMERICAL
    except OSError as e:
        sys.stderr.write("entrobound: %s\n" % e)
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
