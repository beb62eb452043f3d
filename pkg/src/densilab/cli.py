"""Command line front end.

Subcommands: analyze, equiv, density, classify, dyadic.  Options layer as
flags > --config TOML file > DENSILAB_SEED environment variable (seed only) >
built-in defaults.  Output formats: json (default), csv, text.  Exit codes:
0 success (for ``equiv``: equivalent), 1 not equivalent (``equiv`` only),
2 error, reported as ``{"error": {"code", "message"}}`` on stderr.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

import numpy as np

from .density import (ball, complement, cube, density_sweep, ealpha,
                      exact_ealpha_ratio, fdelta, gdelta, make_region)
from .equivalence import decide_equivalence
from .errors import (BadParameter, DensilabError, NotSymmetric, ParseError,
                     WrongDeterminant)
from .lattice import (IntMatrix2, check_lattice_condition, classify_det2,
                      dyadic_class, is_expanding, minimal_root_of_identity,
                      mra_equivalence_report, negative_det_square_check,
                      scan_classification, scan_to_csv)
from .spectral import (SymMatrix, absolutize, decompose, exact_integer_spectrum,
                       is_expansive, is_positive, sym_matrix)


@dataclass
class Config:
    tolerance: float = 1e-12
    samples: int = 1_000_000
    j_min: int = 0
    j_max: int = 8
    seed: int = 0
    search_bound: int = 10
    l_max: int = 12
    format: str = "json"


_FORMATS = ("json", "csv", "text")


def _config_from_toml(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as e:
        raise ParseError(f"cannot read config file: {e}") from e
    except tomllib.TOMLDecodeError as e:
        raise ParseError(f"bad TOML in config file: {e}") from e
    known = {f.name: f.type for f in fields(Config)}
    out = {}
    for key, value in data.items():
        if key not in known:
            raise ParseError(f"unknown config key {key!r}")
        if key == "format":
            if value not in _FORMATS:
                raise ParseError(f"format must be one of {_FORMATS}")
        elif key == "tolerance":
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ParseError("tolerance must be a number")
            value = float(value)
        else:
            if isinstance(value, bool) or not isinstance(value, int):
                raise ParseError(f"{key} must be an integer")
        out[key] = value
    return out


def resolve_config(args: argparse.Namespace) -> Config:
    cfg = Config()
    env_seed = os.environ.get("DENSILAB_SEED")
    if env_seed is not None:
        try:
            cfg.seed = int(env_seed, 10)
        except ValueError as e:
            raise ParseError(f"DENSILAB_SEED must be an integer, got {env_seed!r}") from e
    if getattr(args, "config", None):
        for key, value in _config_from_toml(args.config).items():
            setattr(cfg, key, value)
    for f in fields(Config):
        flag = getattr(args, f.name, None)
        if flag is not None:
            setattr(cfg, f.name, flag)
    if cfg.samples < 1:
        raise BadParameter("samples must be positive")
    if cfg.j_min < 0 or cfg.j_max < cfg.j_min:
        raise BadParameter("need 0 <= j_min <= j_max")
    if not cfg.tolerance > 0:
        raise BadParameter("tolerance must be positive")
    return cfg


# --------------------------------------------------------------------------
# argument parsing helpers

def _num(token: str):
    token = token.strip()
    if not token:
        raise ParseError("empty number in matrix literal")
    try:
        return int(token, 10)
    except ValueError:
        pass
    try:
        return float(token)
    except ValueError as e:
        raise ParseError(f"not a number: {token!r}") from e


def parse_matrix(text: str) -> list[list]:
    """Rows from a JSON file path, ``diag(...)``, or ``a,b;c,d`` literal."""
    path = Path(text)
    if path.is_file():
        try:
            obj = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ParseError(f"cannot parse matrix file {text}: {e}") from e
        rows = obj.get("rows") if isinstance(obj, dict) else obj
        if not isinstance(rows, list):
            raise ParseError("matrix file must hold a rows list or {'dim', 'rows'}")
    elif text.startswith("diag(") and text.endswith(")"):
        vals = [_num(v) for v in text[5:-1].split(",")]
        rows = [[vals[i] if i == j else 0 for j in range(len(vals))]
                for i in range(len(vals))]
    else:
        rows = [[_num(v) for v in row.split(",")] for row in text.split(";")]
    if not rows or any(not isinstance(r, list) or len(r) != len(rows) for r in rows):
        raise ParseError("matrix must be square and nonempty")
    for r in rows:
        for v in r:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ParseError("matrix entries must be numbers")
    return rows


def _parse_unit_vector(text: str, dim: int) -> np.ndarray:
    v = np.array([_num(x) for x in text.split(",")], dtype=float)
    if v.shape[0] != dim:
        raise BadParameter(f"vector has {v.shape[0]} entries, expected {dim}")
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise BadParameter("direction vector must be nonzero")
    return (v / norm)[:, None]


def _sym_or_array(rows, tol: float):
    try:
        return sym_matrix(rows, tol=tol)
    except NotSymmetric:
        return np.array(rows, dtype=float)


def _fmt(value: float, places: str = ".17g") -> str:
    return format(float(value), places)


# --------------------------------------------------------------------------
# subcommands

def _cmd_analyze(args, cfg: Config):
    a = sym_matrix(parse_matrix(args.matrix), tol=cfg.tolerance)
    dec = decompose(a, tol=cfg.tolerance)
    expansive = is_expansive(a)
    spec = exact_integer_spectrum(a)
    payload = {
        "dim": a.dim,
        "exact": a.exact,
        "lattice": check_lattice_condition(a),
        "expansive": expansive,
        "positive": is_positive(a),
        "eigenvalues": [{"value": float(v), "multiplicity": int(m)}
                        for v, m in zip(dec.distinct, dec.multiplicities)],
        "integer_spectrum": None if spec is None else [[v, m] for v, m in spec],
        "absolutized": absolutize(a, tol=cfg.tolerance).to_json() if expansive else None,
    }
    csv_lines = ["value,multiplicity"]
    csv_lines += [f"{_fmt(e['value'])},{e['multiplicity']}" for e in payload["eigenvalues"]]
    text = [f"dim: {a.dim}", f"exact integer entries: {a.exact}",
            f"lattice condition: {payload['lattice']}",
            f"expansive: {expansive}", f"positive: {payload['positive']}",
            "eigenvalues: " + ", ".join(
                f"{e['value']:.6g} (x{e['multiplicity']})" for e in payload["eigenvalues"])]
    if spec is not None:
        text.append("integer spectrum: " + ", ".join(f"{v} (x{m})" for v, m in spec))
    if payload["absolutized"] is not None:
        text.append(f"absolutized: {payload['absolutized']['rows']}")
    return payload, "\n".join(csv_lines) + "\n", "\n".join(text) + "\n", 0


def _cmd_equiv(args, cfg: Config):
    a1 = sym_matrix(parse_matrix(args.matrix1), tol=cfg.tolerance)
    a2 = sym_matrix(parse_matrix(args.matrix2), tol=cfg.tolerance)
    verdict = decide_equivalence(a1, a2, tol=max(cfg.tolerance, 1e-9))
    report = mra_equivalence_report(a1, a2)
    payload = report.to_json()
    code = 0 if verdict.equivalent else 1
    flat = {
        "status": report.status,
        "equivalent": verdict.equivalent,
        "t": "" if verdict.exponent is None else _fmt(verdict.exponent),
        "certification": verdict.certification,
        "obstruction": "" if verdict.obstruction is None else verdict.obstruction.kind,
        "witness": "" if report.witness is None else report.witness.kind,
    }
    csv_lines = [",".join(flat.keys()), ",".join(str(v) for v in flat.values())]
    text = [f"status: {report.status}", f"equivalent: {verdict.equivalent}"]
    if verdict.exponent is not None:
        text.append(f"t: {verdict.exponent:.12g}")
    text.append(f"certification: {verdict.certification}")
    if verdict.obstruction is not None:
        ob = verdict.obstruction.to_json()
        text.append("obstruction: " + ", ".join(f"{k}={v}" for k, v in ob.items()))
    if report.witness is not None:
        wj = report.witness.to_json()
        text.append("witness: " + ", ".join(f"{k}={v}" for k, v in wj.items()))
    if report.note:
        text.append(f"note: {report.note}")
    if report.reason:
        text.append(f"reason: {report.reason}")
    return payload, "\n".join(csv_lines) + "\n", "\n".join(text) + "\n", code


def _build_density_region(args, dim: int):
    kind = args.set
    if kind == "ealpha":
        if args.alpha is None:
            raise BadParameter("--alpha is required for --set ealpha")
        i, l = args.axes
        region = ealpha(args.alpha, i=i, l=l, dim=dim)
    elif kind == "gdelta":
        if args.delta is None:
            raise BadParameter("--delta is required for --set gdelta")
        u = (_parse_unit_vector(args.u, dim) if args.u is not None
             else np.eye(dim)[:, :1])
        region = gdelta(args.delta, u, dim=dim)
    elif kind == "fdelta":
        if args.delta is None or args.u is None or args.v is None:
            raise BadParameter("--set fdelta needs --delta, --u and --v")
        region = fdelta(args.delta, _parse_unit_vector(args.u, dim),
                        _parse_unit_vector(args.v, dim), dim=dim)
    elif kind == "ball":
        region = ball(dim, args.r)
    elif kind == "cube":
        region = cube(dim, args.r)
    else:  # json
        if args.region_json is None:
            raise BadParameter("--region-json is required for --set json")
        try:
            spec = json.loads(Path(args.region_json).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ParseError(f"cannot parse region file: {e}") from e
        region = make_region(spec)
        if region.dim != dim:
            raise BadParameter("region dimension does not match the map")
    if args.complement:
        region = complement(region)
    return region


def _exact_column(args, map_, js: list[int]) -> list[float]:
    if args.set != "ealpha" or tuple(args.axes) != (0, 1):
        raise BadParameter("--exact needs --set ealpha on axes 0,1")
    if args.window != "cube":
        raise BadParameter("--exact needs a cube window")
    if not (isinstance(map_, SymMatrix) and map_.dim == 2 and map_.is_diagonal()):
        raise BadParameter("--exact needs a diagonal 2x2 map")
    lam1 = float(map_.entries[0, 0])
    lam2 = float(map_.entries[1, 1])
    if not (lam1 > 1 and lam2 > 1):
        raise BadParameter("--exact needs diagonal entries greater than 1")
    comp = [exact_ealpha_ratio(lam1, lam2, args.alpha, j, window_r=args.window_r)
            for j in js]
    return comp if args.complement else [1.0 - c for c in comp]


def _cmd_density(args, cfg: Config):
    map_ = _sym_or_array(parse_matrix(args.matrix), tol=cfg.tolerance)
    dim = map_.dim if isinstance(map_, SymMatrix) else map_.shape[0]
    region = _build_density_region(args, dim)
    window = (cube if args.window == "cube" else ball)(dim, args.window_r)
    js = list(range(cfg.j_min, cfg.j_max + 1))
    series = density_sweep(region, map_, window=window, j_range=js,
                           samples=cfg.samples, seed=cfg.seed)
    payload = series.to_json()
    exact = _exact_column(args, map_, js) if args.exact else None
    if exact is not None:
        for entry, value in zip(payload["series"], exact):
            entry["exact"] = value
    csv_text = series.to_csv()
    if exact is not None:
        lines = csv_text.strip("\n").split("\n")
        lines[0] += ",exact"
        for k, value in enumerate(exact):
            lines[k + 1] += f",{_fmt(value)}"
        csv_text = "\n".join(lines) + "\n"
    text = [f"{'j':>3} {'ratio':>12} {'stderr':>12} {'samples':>10}"
            + (f" {'exact':>12}" if exact is not None else "")]
    for k, e in enumerate(series.estimates):
        row = f"{e.j:>3} {e.ratio:>12.6g} {e.stderr:>12.3g} {e.samples:>10}"
        if exact is not None:
            row += f" {exact[k]:>12.6g}"
        text.append(row)
    text += [f"classification: {series.classification}", f"note: {series.note}"]
    return payload, csv_text, "\n".join(text) + "\n", 0


def _dyadic_payload(a: SymMatrix, tol: float) -> dict:
    is_dyadic = dyadic_class(a)
    t = None
    if is_dyadic:
        c = float(decompose(absolutize(a, tol=tol), tol=tol).distinct[0])
        t = math.log(c) / math.log(2.0)
    return {"dyadic": is_dyadic, "t": t}


def _cmd_classify(args, cfg: Config):
    if args.scan is not None:
        if args.matrix is not None:
            raise BadParameter("--scan does not take a matrix argument")
        rows = scan_classification(args.scan, search_bound=cfg.search_bound,
                                   l_max=cfg.l_max)
        payload = {"count": len(rows), "rows": rows}
        text = ["entries        det trace class conjugator       l   n"]
        for r in rows:
            text.append(f"{r['entries']:<14} {r['det']:>3} {r['trace']:>5} "
                        f"{r['class']:<5} {r['conjugator']:<16} {str(r['l']):>2} {str(r['n']):>3}")
        return payload, scan_to_csv(rows), "\n".join(text) + "\n", 0

    if args.matrix is None:
        raise BadParameter("classify needs a matrix argument (or --scan)")
    m = IntMatrix2.from_rows(parse_matrix(args.matrix))
    expanding = is_expanding(m)
    payload = {
        "matrix": m.rows(), "det": m.det, "trace": m.trace, "expanding": expanding,
        "classification": None, "root_of_identity": None,
        "negative_det_square": None, "dyadic": None,
    }
    if expanding:
        try:
            payload["classification"] = classify_det2(m, search_bound=cfg.search_bound).to_json()
        except WrongDeterminant:
            pass
        root = minimal_root_of_identity(m, l_max=cfg.l_max)
        if root is not None:
            payload["root_of_identity"] = {"l": root[0], "n": root[1]}
        if m.det < 0:
            payload["negative_det_square"] = negative_det_square_check(m)
    if m.b == m.c:
        a = sym_matrix(m.rows(), tol=cfg.tolerance)
        if is_expansive(a):
            payload["dyadic"] = _dyadic_payload(a, cfg.tolerance)
    cls = payload["classification"]
    flat = {
        "entries": f"{m.a} {m.b} {m.c} {m.d}", "det": m.det, "trace": m.trace,
        "expanding": expanding,
        "class": "" if cls is None else cls["class"],
        "l": "" if payload["root_of_identity"] is None else payload["root_of_identity"]["l"],
        "n": "" if payload["root_of_identity"] is None else payload["root_of_identity"]["n"],
    }
    csv_lines = [",".join(flat.keys()), ",".join(str(v) for v in flat.values())]
    text = [f"matrix: {m.rows()}", f"det: {m.det}  trace: {m.trace}",
            f"expanding: {expanding}"]
    if cls is not None:
        text.append(f"class: {cls['class']}  conjugator: {cls['conjugator']}")
    if payload["root_of_identity"] is not None:
        text.append(f"root of identity: l={payload['root_of_identity']['l']} "
                    f"n={payload['root_of_identity']['n']}")
    if payload["negative_det_square"] is not None:
        text.append(f"squares to |det| times identity: {payload['negative_det_square']}")
    if payload["dyadic"] is not None:
        text.append(f"dyadic: {payload['dyadic']['dyadic']}  t: {payload['dyadic']['t']}")
    return payload, "\n".join(csv_lines) + "\n", "\n".join(text) + "\n", 0


def _cmd_dyadic(args, cfg: Config):
    a = sym_matrix(parse_matrix(args.matrix), tol=cfg.tolerance)
    payload = _dyadic_payload(a, cfg.tolerance)
    t_str = "" if payload["t"] is None else _fmt(payload["t"])
    csv_text = f"dyadic,t\n{payload['dyadic']},{t_str}\n"
    text = (f"dyadic: {payload['dyadic']}"
            + (f"  t: {payload['t']:.12g}" if payload["t"] is not None else "") + "\n")
    return payload, csv_text, text, 0


# --------------------------------------------------------------------------
# wiring

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="FILE", help="TOML config file")
    common.add_argument("--format", choices=_FORMATS, default=None)
    common.add_argument("--tolerance", type=float, default=None)
    common.add_argument("--seed", type=int, default=None)

    parser = argparse.ArgumentParser(
        prog="densilab",
        description="density ratios, equivalence and integer classification "
                    "of expansive dilation maps")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common],
                       help="spectral report for a self-adjoint map")
    p.add_argument("matrix")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("equiv", parents=[common],
                       help="decide whether two maps generate the same density family")
    p.add_argument("matrix1")
    p.add_argument("matrix2")
    p.set_defaults(func=_cmd_equiv)

    p = sub.add_parser("density", parents=[common],
                       help="Monte Carlo density sweep of a witness set")
    p.add_argument("matrix")
    p.add_argument("--set", choices=("ealpha", "gdelta", "fdelta", "ball", "cube", "json"),
                   default="ealpha")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--axes", type=_parse_axes, default=(0, 1),
                   metavar="I,L", help="coordinate pair for --set ealpha")
    p.add_argument("--u", default=None, metavar="V", help="direction, e.g. 0,1")
    p.add_argument("--v", default=None, metavar="V")
    p.add_argument("--r", type=float, default=1.0, help="radius for --set ball/cube")
    p.add_argument("--region-json", default=None, metavar="FILE")
    p.add_argument("--complement", action="store_true")
    p.add_argument("--window", choices=("cube", "ball"), default="cube")
    p.add_argument("--window-r", type=float, default=1.0)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--j-min", type=int, default=None)
    p.add_argument("--j-max", type=int, default=None)
    p.add_argument("--exact", action="store_true",
                   help="append the closed-form ratio column (diagonal 2x2 maps)")
    p.set_defaults(func=_cmd_density)

    p = sub.add_parser("classify", parents=[common],
                       help="integral similarity class of an expanding integer matrix")
    p.add_argument("matrix", nargs="?", default=None)
    p.add_argument("--scan", type=int, default=None, metavar="BOUND",
                   help="classify every expanding |det|=2 matrix with entries in the box")
    p.add_argument("--search-bound", type=int, default=None)
    p.add_argument("--l-max", type=int, default=None)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("dyadic", parents=[common],
                       help="is the absolutized map a scalar dilation?")
    p.add_argument("matrix")
    p.set_defaults(func=_cmd_dyadic)
    return parser


def _parse_axes(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("axes must be two comma-separated indices")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        payload, csv_text, text, code = args.func(args, cfg)
    except DensilabError as e:
        print(json.dumps({"error": {"code": e.code, "message": str(e)}}),
              file=sys.stderr)
        return 2
    if cfg.format == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    elif cfg.format == "csv":
        sys.stdout.write(csv_text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
