"""``qshape`` command line: spectrum, verify, oracle, info.

Every command takes ``--model`` (a JSON file or inline JSON object
``{"kind": ..., "params": {...}}``) and optionally ``--config`` pointing at
a run file with the same fields as the flags; flags win over the file.

Exit codes: 0 success, 1 a numerical check failed, 2 invalid input.
"""

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import algebra, oracle, potentials, spectra
from .serialize import dumps_json, fmt

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2

#: verify reports are JSON unless asked otherwise; tables default to CSV.
DEFAULT_FORMAT = {"verify": "json"}

#: rel_diff above which ``qshape oracle`` reports failure.
ORACLE_FAIL_THRESHOLD = 1e-4


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    model: potentials.PotentialModel
    scheme: spectra.DeformationScheme = None
    n_max: int = 5
    N: int = 8
    q_list: list = field(default_factory=lambda: [0.8, 1.1, 1.5])
    levels: int = 4
    output: str = None


def _load_json_arg(value, what):
    text = value.strip()
    try:
        if text.startswith("{"):
            return json.loads(text)
        with open(value, encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read {what} {value!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{what} is not valid JSON: {exc}") from None


def _parse_q_list(text):
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"--q-list must be comma-separated numbers, got {text!r}") from None
    if not values:
        raise ConfigError("--q-list is empty")
    return values


def _int_field(value, name, minimum=0):
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ConfigError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return value


def build_config(args):
    """Merge ``--config`` file and flags into a validated :class:`RunConfig`."""
    doc = _load_json_arg(args.config, "config") if getattr(args, "config", None) else {}
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")

    model_doc = doc.get("model")
    if args.model is not None:
        model_doc = _load_json_arg(args.model, "model")
    elif isinstance(model_doc, str):
        model_doc = _load_json_arg(model_doc, "model")
    if model_doc is None:
        raise ConfigError("no model given (use --model or a config with a 'model' entry)")
    try:
        model = potentials.model_from_json(model_doc)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid model: {exc}") from None

    cfg = RunConfig(model=model)

    scheme_doc = dict(doc.get("scheme") or {})
    if not isinstance(scheme_doc, dict):
        raise ConfigError("'scheme' must be an object with 'variant' and 'q'")
    q = getattr(args, "q", None)
    variant = getattr(args, "variant", None)
    if q is not None:
        scheme_doc["q"] = q
    if variant is not None:
        scheme_doc["variant"] = variant
    if scheme_doc:
        if "q" not in scheme_doc:
            raise ConfigError("a deformation variant needs --q")
        scheme_doc.setdefault("variant", "standard")
        try:
            cfg.scheme = spectra.DeformationScheme(scheme_doc["variant"], scheme_doc["q"])
        except (ValueError, TypeError) as exc:
            raise ConfigError(str(exc)) from None

    if "n_max" in doc:
        cfg.n_max = doc["n_max"]
    if getattr(args, "n", None) is not None:
        cfg.n_max = args.n
    cfg.n_max = _int_field(cfg.n_max, "n")

    if "N" in doc:
        cfg.N = doc["N"]
    if getattr(args, "N", None) is not None:
        cfg.N = args.N
    cfg.N = _int_field(cfg.N, "N", minimum=1)

    if "levels" in doc:
        cfg.levels = doc["levels"]
    if getattr(args, "levels", None) is not None:
        cfg.levels = args.levels
    cfg.levels = _int_field(cfg.levels, "levels")

    if "q_list" in doc:
        cfg.q_list = doc["q_list"]
    if getattr(args, "q_list", None) is not None:
        cfg.q_list = _parse_q_list(args.q_list)
    elif q is not None:
        cfg.q_list = [q]
    if not isinstance(cfg.q_list, list) or not cfg.q_list:
        raise ConfigError("q_list must be a non-empty list of numbers")
    for value in cfg.q_list:
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not value > 0:
            raise ConfigError(f"every q must be a positive real, got {value!r}")

    if "output" in doc:
        cfg.output = doc["output"]
    if getattr(args, "format", None) is not None:
        cfg.output = args.format
    if cfg.output is None:
        cfg.output = DEFAULT_FORMAT.get(getattr(args, "command", None), "csv")
    if cfg.output not in ("csv", "json"):
        raise ConfigError(f"output format must be csv or json, got {cfg.output!r}")
    return cfg


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


# -- commands ----------------------------------------------------------------


def cmd_spectrum(cfg, out=None):
    count = potentials.bound_state_count(cfg.model)
    if cfg.n_max > count:
        raise ConfigError(f"n={cfg.n_max} exceeds the bound window of {cfg.model.label} (max {count})")
    table = spectra.spectrum_table(cfg.model, cfg.n_max, cfg.scheme)
    _emit(table.to_csv() if cfg.output == "csv" else table.to_json(), out)
    return EXIT_OK


def cmd_verify(cfg, out=None):
    if cfg.N < algebra.MIN_N:
        raise ConfigError(f"N too small for relation band reach (need N >= {algebra.MIN_N}, got {cfg.N})")
    try:
        reports = algebra.verify_batch(cfg.model, cfg.q_list, cfg.N)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if cfg.output == "json":
        text = algebra.reports_to_json(reports)
    else:
        lines = ["relation,model,q,N,interior,max_residual,pass"]
        for r in reports:
            rec = r.to_record()
            lines.append(",".join(fmt(rec[k]) if not isinstance(rec[k], str) else rec[k] for k in rec))
        text = "\n".join(lines) + "\n"
    _emit(text, out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_oracle(cfg, out=None):
    try:
        result = oracle.compare(cfg.model, cfg.levels)
    except oracle.GridConvergenceError as exc:
        print(f"qshape: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    _emit(result.to_csv() if cfg.output == "csv" else result.to_json(), out)
    return EXIT_FAIL if result.max_rel_diff > ORACLE_FAIL_THRESHOLD else EXIT_OK


_ANSATZ_NOTE = {
    potentials.PotentialKind.HO: "C = 1, f(a_j) = -j; R(a_j) = 1 for every j",
    potentials.PotentialKind.MORSE: "C = 1, f(a_j) = a_j^2",
    potentials.PotentialKind.SCARF: "C = 1, f(a_j) = a_j^2",
    potentials.PotentialKind.COULOMB: "C = 1, f(a_j) = 1/(a_j+1)^2, i.e. f(L) = 1/(L+1)^2",
}


def cmd_info(cfg, out=None):
    model = cfg.model
    count = potentials.bound_state_count(model)
    pairs = [
        {"j": j, "a_j": potentials.param_at(model, j), "R": potentials.remainder(model, j)}
        for j in range(min(5, count + 1))
    ]
    if cfg.output == "json":
        info = {
            "kind": model.kind.value,
            "params": dict(model.raw_params),
            "hbar_omega": model.hbar_omega,
            "bound_state_count": count,
            "ansatz": _ANSATZ_NOTE[model.kind],
            "ladder": pairs,
        }
        _emit(dumps_json(info), out)
        return EXIT_OK
    lines = [
        f"kind: {model.kind.value}",
        f"params: {', '.join(f'{k}={fmt(v)}' for k, v in model.raw_params.items())}",
        f"hbar_omega: {fmt(model.hbar_omega)}",
        f"bound_state_count: {count}",
        f"ansatz: {_ANSATZ_NOTE[model.kind]}",
        "j,a_j,R(a_j)",
    ]
    lines += [f"{p['j']},{fmt(p['a_j'])},{fmt(p['R'])}" for p in pairs]
    _emit("\n".join(lines) + "\n", out)
    return EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "info": cmd_info,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qshape",
        description="Spectra and ladder-algebra checks for q-deformed shape-invariant potentials.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--model", help="model JSON file or inline JSON object")
        p.add_argument("--config", help="run configuration JSON (flags override it)")
        p.add_argument("--format", choices=["csv", "json"], default=None)
        p.add_argument("--out", help="write output here instead of stdout")

    p = sub.add_parser("spectrum", help="undeformed and deformed energy table")
    common(p)
    p.add_argument("--q", type=float)
    p.add_argument("--variant", choices=[v.value for v in spectra.Variant])
    p.add_argument("--n", type=int, help="highest level index")

    p = sub.add_parser("verify", help="check every ladder-algebra relation")
    common(p)
    p.add_argument("--q", type=float)
    p.add_argument("--q-list", dest="q_list")
    p.add_argument("--N", type=int, help="matrix basis size")

    p = sub.add_parser("oracle", help="compare with a finite-difference eigensolver")
    common(p)
    p.add_argument("--levels", type=int)

    p = sub.add_parser("info", help="model summary")
    common(p)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        return COMMANDS[args.command](cfg, args.out)
    except ConfigError as exc:
        print(f"qshape: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
