"""Command-line experiments: convergence tables, multiplier round trips, central states, fusion, zero scans."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import jsonschema
import numpy as np

from . import __version__
from .characters import convergence_scan, first_shell_below, unit_shells, CSV_COLUMNS
from .errors import (
    BoundaryError,
    ConfigurationError,
    PrecisionError,
    RangeError,
    ResourceError,
    ZeroDenominatorError,
)
from .fusion import fuse
from .lie import angle_point, build_root_system, dominant_weights_in_ball, is_central, root_system_from_descriptor
from .multipliers import cp_gram_check, hm_decompose, measure_from_json, multiplier_from_measure
from .qcentral import (
    ZERO_GRID_COLUMNS,
    central_state_from_json,
    decompose_central_state,
    is_generic,
    relation_check,
    sl_context,
    zero_grid,
)
from .characters import dims

EXIT_OK, EXIT_ARGUMENT, EXIT_SCHEMA, EXIT_NUMERICAL = 0, 2, 3, 4

GROUP_SCHEMA = {
    "type": "object",
    "required": ["series", "rank"],
    "properties": {
        "series": {"enum": ["A", "B", "C", "D", "G"]},
        "rank": {"type": "integer", "minimum": 1},
        "form": {"enum": ["simply_connected", "adjoint"]},
    },
}

RATIONAL = {"oneOf": [{"type": "string", "pattern": r"^-?\d+(/\d+)?$"}, {"type": "number"}]}

MEASURE_SCHEMA = {
    "type": "object",
    "required": ["group", "atoms"],
    "properties": {
        "group": GROUP_SCHEMA,
        "atoms": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["point", "weight"],
                "properties": {
                    "point": {
                        "type": "object",
                        "required": ["kind", "coords_2pi"],
                        "properties": {
                            "kind": {"const": "angle"},
                            "coords_2pi": {"type": "array", "items": RATIONAL},
                        },
                    },
                    "weight": {
                        "type": "object",
                        "required": ["re"],
                        "properties": {"re": {"type": "number"}, "im": {"type": "number"}},
                    },
                },
            },
        },
    },
}

STATE_SCHEMA = {
    "type": "object",
    "required": ["N", "q", "atoms"],
    "properties": {
        "N": {"type": "integer", "minimum": 2},
        "q": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "atoms": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["nu_re", "mass"],
                "properties": {
                    "nu_re": {"type": "array", "items": {"type": "number"}},
                    "nu_im": {"type": "array", "items": {"type": "number"}},
                    "mass": {"type": "number", "exclusiveMinimum": 0},
                    "assert_positive_definite": {"type": "boolean"},
                },
            },
        },
    },
}


class SchemaViolation(Exception):
    def __init__(self, pointer, message):
        self.pointer = pointer
        super().__init__(f"{pointer}: {message}")


def _load_json(path, schema):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaViolation("", f"invalid JSON ({exc})") from None
    errors = sorted(jsonschema.Draft202012Validator(schema).iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        pointer = "/" + "/".join(str(p) for p in err.absolute_path)
        raise SchemaViolation(pointer, err.message)
    return data


def _parse_fractions(text, count=None):
    parts = [p.strip() for p in str(text).split(",") if p.strip()]
    try:
        values = [Fraction(p) for p in parts]
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"could not parse rational coordinates from {text!r}") from None
    if count is not None and len(values) != count:
        raise ValueError(f"expected {count} coordinates, got {len(values)}")
    return values


def _parse_weight(text, rank):
    values = _parse_fractions(text, rank)
    if any(v.denominator != 1 for v in values):
        raise ValueError(f"weight coordinates must be integers: {text!r}")
    return tuple(int(v) for v in values)


def _config(args):
    # threads never changes results, so it stays out of the header to keep outputs bit-identical
    skip = {"func", "out", "threads"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


class _Output:
    """Collects rows and metadata, then renders csv or json with the config header."""

    def __init__(self, args):
        self.args = args
        self.header = {"version": __version__, "config": _config(args)}

    def emit(self, text):
        if self.args.out:
            with open(self.args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)

    def table(self, columns, rows, summary):
        if self.args.format == "json":
            payload = dict(self.header, columns=list(columns), rows=[list(r) for r in rows], summary=summary)
            return self.emit(json.dumps(payload, indent=2, default=_json_default) + "\n")
        buf = io.StringIO()
        buf.write(f"# version: {__version__}\n")
        buf.write(f"# config: {json.dumps(self.header['config'], default=_json_default)}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_csv_cell(c) for c in row])
        buf.write(f"# summary: {json.dumps(summary, default=_json_default)}\n")
        return self.emit(buf.getvalue())

    def report(self, payload):
        if self.args.format == "csv":
            raise ValueError("this subcommand produces a JSON report; use --format json")
        return self.emit(json.dumps(dict(self.header, **payload), indent=2, default=_json_default) + "\n")


def _csv_cell(value):
    if isinstance(value, (tuple, list)):
        return " ".join(_csv_cell(v) for v in value)
    if isinstance(value, bool):
        return int(value)
    return repr(value) if isinstance(value, float) else str(value)


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# ---------------------------------------------------------------------------
# Subcommands


def cmd_charconv(args):
    rs = build_root_system(args.series, args.rank, args.form)
    theta = _parse_fractions(args.theta, rs.rank)
    t = angle_point(rs, theta)
    if is_central(rs, t):
        raise ValueError("the torus point is central: the normalized character has constant modulus 1 on the center")
    shells = unit_shells(args.shell_start, args.shell_start + args.shells)
    rows = convergence_scan(rs, t, shells, workers=args.threads)
    table = [
        (r.shell_lo, r.shell_hi, r.num_weights, r.max_normalized_abs, tuple(int(c) for c in r.argmax_weight_coords))
        for r in rows
    ]
    first = first_shell_below(rows, args.threshold)
    summary = {"threshold": args.threshold, "first_shell_below": first}
    _Output(args).table(CSV_COLUMNS, table, summary)
    return EXIT_OK


def _default_basis_cut(rs, max_dim, size):
    lams = dominant_weights_in_ball(rs, 50.0)
    keep = [l for l, d in zip(lams, dims(rs, np.array(lams, dtype=np.int64))) if d <= max_dim]
    return keep[:size]


def cmd_multiplier(args):
    data = _load_json(args.measure, MEASURE_SCHEMA)
    rs = root_system_from_descriptor(data["group"])
    measure = measure_from_json(rs, data)
    omega = multiplier_from_measure(rs, measure)
    dec = hm_decompose(rs, omega, args.horizon, workers=args.threads)
    basis = _default_basis_cut(rs, args.basis_max_dim, args.basis_size)
    gram = cp_gram_check(rs, omega, basis)
    payload = {
        "measure": measure.to_json(),
        "positive_measure": measure.positive,
        "decomposition": dec.to_json(),
        "gram": gram.to_json(),
    }
    _Output(args).report(payload)
    return EXIT_OK


def _relation_sample(ctx, count, seed):
    rng = np.random.default_rng(seed)
    rs = ctx.rs
    out = []
    while len(out) < count:
        nu = rng.uniform(-2, 2, rs.rank) + 1j * rng.uniform(-0.5, 0.5, rs.rank) * ctx.kappa
        if not is_generic(ctx, nu):
            continue
        lam = tuple(int(x) for x in rng.integers(0, 6, rs.rank))
        out.append((nu, lam, relation_check(ctx, nu, lam)))
    return out


def cmd_qcentral(args):
    if args.scan_zeros:
        return _scan_zeros(args)
    if args.state is None:
        raise ValueError("qcentral needs --state unless --scan-zeros is given")
    data = _load_json(args.state, STATE_SCHEMA)
    for i, a in enumerate(data["atoms"]):
        if len(a["nu_re"]) != data["N"] - 1 or len(a.get("nu_im", a["nu_re"])) != data["N"] - 1:
            raise SchemaViolation(f"/atoms/{i}", f"nu needs {data['N'] - 1} coordinates")
    state = central_state_from_json(data)
    dec = decompose_central_state(state, args.horizon)
    payload = {"decomposition": dec.to_json(), "atom_classes": list(state.classes)}
    if args.relation_check:
        sample = _relation_sample(state.ctx, args.relation_check, args.seed)
        payload["relation_check"] = {
            "count": len(sample),
            "max_residual": max(r for _, _, r in sample),
            "pass": all(r <= 1e-9 for _, _, r in sample),
        }
    _Output(args).report(payload)
    return EXIT_OK


def _scan_zeros(args):
    if args.state is not None:
        data = _load_json(args.state, STATE_SCHEMA)
        ctx = sl_context(data["N"], data["q"])
    else:
        ctx = sl_context(args.N, args.q)
    rows = zero_grid(ctx, args.points, seed=args.seed)
    table = [
        (tuple(float(z.real) for z in r.nu), tuple(float(z.imag) for z in r.nu),
         float(r.abs_phi), bool(r.predicate), float(r.distance), bool(r.in_band))
        for r in rows
    ]
    outside = [r for r in rows if not r.in_band]
    summary = {
        "kappa": ctx.kappa,
        "points": len(rows),
        "outside_band": len(outside),
        "disagreements": sum(not r.agrees for r in rows),
    }
    _Output(args).table(ZERO_GRID_COLUMNS, table, summary)
    return EXIT_OK


def cmd_fuse(args):
    rs = build_root_system(args.series, args.rank, args.form)
    lam = _parse_weight(args.lam, rs.rank)
    mu = _parse_weight(args.mu, rs.rank)
    if rs.adjoint and not (rs.in_root_lattice(lam) and rs.in_root_lattice(mu)):
        raise ValueError("adjoint form admits only weights of the root lattice")
    dec = fuse(rs, lam, mu)
    _Output(args).report(dec.to_json(rs))
    return EXIT_OK


def cmd_zeros(args):
    args.scan_zeros = True
    return _scan_zeros(args)


# ---------------------------------------------------------------------------
# Parser


def _global_options(parser, suppress):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--out", default=default(None), help="output path (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default=default(None), help="output format")
    parser.add_argument("--seed", type=int, default=default(0), help="seed for randomized sampling")
    parser.add_argument("--threads", type=int, default=default(1), help="worker threads for scans")


def _group_options(parser):
    parser.add_argument("--series", required=True, choices=("A", "B", "C", "D", "G"))
    parser.add_argument("--rank", required=True, type=int)
    parser.add_argument("--form", default="simply_connected", choices=("simply_connected", "adjoint"))


def _zero_options(parser):
    parser.add_argument("--N", type=int, default=2, help="SU_q(N) for zero scans without --state")
    parser.add_argument("--q", type=float, default=0.5)
    parser.add_argument("--points", type=int, default=1000)


def build_parser():
    parser = argparse.ArgumentParser(prog="howemoore", description=__doc__)
    parser.add_argument("--version", action="version", version=f"howemoore {__version__}")
    _global_options(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("charconv", parents=[common], help="normalized-character convergence table")
    _group_options(p)
    p.add_argument("--theta", required=True, help="angles as fractions of 2 pi in simple-coroot coordinates, e.g. 1/4,0")
    p.add_argument("--shells", type=int, default=30)
    p.add_argument("--shell-start", type=int, default=1)
    p.add_argument("--threshold", type=float, default=0.05)
    p.set_defaults(func=cmd_charconv, default_format="csv")

    p = sub.add_parser("multiplier", parents=[common], help="measure multiplier round trip and Gram check")
    p.add_argument("--measure", required=True)
    p.add_argument("--horizon", type=float, default=30.0)
    p.add_argument("--basis-max-dim", type=int, default=64)
    p.add_argument("--basis-size", type=int, default=12)
    p.set_defaults(func=cmd_multiplier, default_format="json")

    p = sub.add_parser("qcentral", parents=[common], help="central-state decomposition of SU_q(N)")
    p.add_argument("--state")
    p.add_argument("--horizon", type=float, default=30.0)
    p.add_argument("--relation-check", type=int, default=0, metavar="COUNT")
    p.add_argument("--scan-zeros", action="store_true")
    _zero_options(p)
    p.set_defaults(func=cmd_qcentral, default_format="json")

    p = sub.add_parser("fuse", parents=[common], help="tensor product decomposition")
    _group_options(p)
    p.add_argument("--lam", required=True)
    p.add_argument("--mu", required=True)
    p.set_defaults(func=cmd_fuse, default_format="json")

    p = sub.add_parser("zeros", parents=[common], help="alias for qcentral --scan-zeros")
    p.add_argument("--state")
    _zero_options(p)
    p.set_defaults(func=cmd_zeros, default_format="csv")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = "csv" if getattr(args, "scan_zeros", False) else args.default_format
    del args.default_format
    try:
        return args.func(args)
    except SchemaViolation as exc:
        print(f"error: input schema violation at {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except ZeroDenominatorError as exc:
        # the message already names the atom index
        print(f"error: zero denominator: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (PrecisionError, RangeError) as exc:
        print(f"error: numerical precondition failed: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, ConfigurationError, BoundaryError, ResourceError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGUMENT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGUMENT


if __name__ == "__main__":
    sys.exit(main())
