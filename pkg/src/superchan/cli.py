"""Command-line front end.

Subcommands: validate, apply, compose, covariance, example.  Exit codes:
0 ok, 2 invalid input, 3 a check failed.  All outputs are deterministic
given the flags (and seed, where sampling is involved).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from . import jsonio
from .channels import (
    ChoiChannel,
    amplitude_damping,
    bit_flip,
    choi_channel,
    classical_channel_extract,
    compose_channels,
    holevo_werner,
    pauli_channel,
    validate_channel,
)
from .covariance import covariance_sampler_tuple, superchannel_covariance_check
from .dephasing import DephasingSuperParams, dephasing_validate, to_super_choi
from .do import do_build_choi, do_validate
from .du import (
    OracleMismatchError,
    build_choi,
    du_block_action,
    du_cp_check,
    du_compose,
    du_tp_check,
    hermiticity_violation,
)
from .jsonio import SchemaError
from .linalg import DEFAULT_TOL
from .pauli import pauli_du_check, pauli_induced_bistochastic, pauli_super_choi
from .superchannels import (
    SuperChoi,
    apply_to_channel,
    compose_superchannels,
    tp_preserving_check,
    validate_superchannel,
)

OK, INVALID_INPUT, CHECK_FAILED = 0, 2, 3
_STATUS = {OK: "ok", INVALID_INPUT: "invalid-input", CHECK_FAILED: "check-failed"}


@dataclass
class CommandResult:
    status: int
    report: dict = field(default_factory=dict)
    artifacts: list = field(default_factory=list)  # (path, json-dict) pairs


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (complex, np.complexfloating)):
        return repr(complex(value))
    return str(value)


def _emit(result: CommandResult) -> int:
    print(f"status: {_STATUS[result.status]}")
    for key, value in result.report.items():
        print(f"{key}: {_fmt(value)}")
    for path, doc in result.artifacts:
        jsonio.dump_json(doc, path)
        print(f"wrote: {path}")
    return result.status


def _load(path):
    try:
        obj = jsonio.load_json(path)
    except FileNotFoundError:
        raise SchemaError(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: parse error at line {exc.lineno}, column {exc.colno}")
    return obj


_SUPER_PARSERS = {
    "superchannel": jsonio.superchannel_from_json,
    "du": jsonio.du_params_from_json,
    "do": jsonio.do_params_from_json,
    "dephasing": jsonio.dephasing_from_json,
    "pauli": jsonio.pauli_from_json,
}


def _as_super_choi(kind: str, parsed) -> SuperChoi:
    if kind == "superchannel":
        return parsed
    if kind == "du":
        return build_choi(parsed)
    if kind == "do":
        return do_build_choi(parsed)
    if kind == "dephasing":
        return to_super_choi(parsed)
    if kind == "pauli":
        return pauli_super_choi(parsed)
    raise SchemaError(f"{kind} does not describe a superchannel")


def _load_super(path) -> tuple[str, object, SuperChoi]:
    obj = _load(path)
    kind = jsonio.detect_kind(obj)
    if kind not in _SUPER_PARSERS:
        raise SchemaError(f"{path} holds a {kind}, expected a superchannel form")
    parsed = _SUPER_PARSERS[kind](obj)
    return kind, parsed, _as_super_choi(kind, parsed)


def default_du_params():
    """The documented valid d=2 parameter set shipped with the package."""
    text = resources.files("superchan.data").joinpath("default_du_d2.json").read_text()
    return jsonio.du_params_from_json(json.loads(text))


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------


def cmd_validate(args) -> CommandResult:
    obj = _load(args.path)
    kind = jsonio.detect_kind(obj)
    if kind != args.kind:
        raise SchemaError(f"{args.path} holds a {kind} object, not {args.kind}")
    tol = args.tol
    report: dict = {"kind": kind}
    if kind == "channel":
        verdict = validate_channel(jsonio.channel_from_json(obj), tol)
        report.update(verdict.report())
        ok = verdict.ok
    elif kind == "superchannel":
        s = jsonio.superchannel_from_json(obj)
        verdict = validate_superchannel(s, tol)
        tp, _ = tp_preserving_check(s, tol)
        report.update(verdict.report())
        report.update(tp.report())
        ok = verdict.ok
    elif kind == "du":
        p = jsonio.du_params_from_json(obj)
        herm = hermiticity_violation(p)
        report["hermiticity_violation"] = herm
        if herm > tol:
            ok = False
        else:
            tp_verdict, _ = du_tp_check(p, tol)
            cp_verdict = du_cp_check(p, tol)
            report.update(tp_verdict.report())
            report.update(cp_verdict.report())
            ok = tp_verdict.ok and cp_verdict.ok
    elif kind == "do":
        verdict = do_validate(jsonio.do_params_from_json(obj), tol)
        report.update(verdict.report())
        ok = verdict.ok
    elif kind == "dephasing":
        verdict = dephasing_validate(jsonio.dephasing_from_json(obj), tol)
        report.update(verdict.report())
        ok = verdict.ok
    else:  # pauli
        p = jsonio.pauli_from_json(obj)
        verdict = validate_superchannel(pauli_super_choi(p), tol)
        du_verdict = pauli_du_check(p, tol)
        m = pauli_induced_bistochastic(p)
        report.update(verdict.report())
        report["du_covariant"] = du_verdict.ok
        report["bistochastic_deviation"] = float(
            max(np.abs(m.sum(axis=0) - 1).max(), np.abs(m.sum(axis=1) - 1).max())
        )
        ok = verdict.ok
    return CommandResult(OK if ok else CHECK_FAILED, report)


# ---------------------------------------------------------------------------
# apply
# ---------------------------------------------------------------------------


def cmd_apply(args) -> CommandResult:
    kind, _, s = _load_super(args.superchannel)
    ch = jsonio.channel_from_json(_load(args.channel))
    if (ch.d_in, ch.d_out) != (s.dA0, s.dA1):
        raise SchemaError(
            f"channel dims ({ch.d_in}, {ch.d_out}) do not match superchannel "
            f"input pair ({s.dA0}, {s.dA1})"
        )
    out = apply_to_channel(s, ch)
    report = {"superchannel_kind": kind}
    for label, c in (("input", ch), ("output", out)):
        table = classical_channel_extract(c)
        report[f"{label}_classical"] = json.dumps(table.tolist())
    artifacts = []
    if args.out:
        artifacts.append((args.out, jsonio.channel_to_json(out)))
    return CommandResult(OK, report, artifacts)


# ---------------------------------------------------------------------------
# compose
# ---------------------------------------------------------------------------


def cmd_compose(args) -> CommandResult:
    obj1, obj2 = _load(args.path1), _load(args.path2)
    kind1, kind2 = jsonio.detect_kind(obj1), jsonio.detect_kind(obj2)
    if kind1 != args.kind or kind2 != args.kind:
        raise SchemaError(
            f"compose {args.kind}: inputs are {kind1} and {kind2}"
        )
    report = {"kind": args.kind}
    if args.kind == "du":
        p1 = jsonio.du_params_from_json(obj1)
        p2 = jsonio.du_params_from_json(obj2)
        if p1.d != p2.d:
            raise SchemaError(f"dimension mismatch: {p1.d} vs {p2.d}")
        doc = jsonio.du_params_to_json(du_compose(p1, p2))
    elif args.kind == "dephasing":
        p1 = jsonio.dephasing_from_json(obj1)
        p2 = jsonio.dephasing_from_json(obj2)
        if p1.d != p2.d:
            raise SchemaError(f"dimension mismatch: {p1.d} vs {p2.d}")
        doc = jsonio.dephasing_to_json(
            DephasingSuperParams(p1.d, p1.M_big * p2.M_big)
        )
    elif args.kind == "superchannel":
        s1 = jsonio.superchannel_from_json(obj1)
        s2 = jsonio.superchannel_from_json(obj2)
        doc = jsonio.superchannel_to_json(compose_superchannels(s1, s2))
    elif args.kind == "channel":
        c1 = jsonio.channel_from_json(obj1)
        c2 = jsonio.channel_from_json(obj2)
        doc = jsonio.channel_to_json(compose_channels(c1, c2))
    else:
        raise SchemaError(f"compose does not support kind {args.kind!r}")
    artifacts = [(args.out, doc)] if args.out else []
    if not artifacts:
        report["result"] = json.dumps(doc)
    return CommandResult(OK, report, artifacts)


# ---------------------------------------------------------------------------
# covariance
# ---------------------------------------------------------------------------


def cmd_covariance(args) -> CommandResult:
    kind, _, s = _load_super(args.superchannel)
    if not (s.dA0 == s.dA1 == s.dB0 == s.dB1):
        raise SchemaError("covariance groups are defined for equal subsystem dims")
    samplers = covariance_sampler_tuple(args.group, s.dA0, args.seed)
    verdict = superchannel_covariance_check(s, samplers, n=args.samples, tol=args.tol)
    report = {"superchannel_kind": kind, "group": args.group}
    report.update(verdict.report())
    return CommandResult(OK if verdict.ok else CHECK_FAILED, report)


# ---------------------------------------------------------------------------
# example
# ---------------------------------------------------------------------------


def _example_superparams(args):
    if args.superchannel:
        return jsonio.du_params_from_json(_load(args.superchannel))
    return default_du_params()


def _report_output_channel(report: dict, out: ChoiChannel, tol: float) -> bool:
    verdict = validate_channel(out, tol)
    report["output_is_channel"] = verdict.ok
    return verdict.ok


def cmd_example(args) -> CommandResult:
    tol = args.tol
    report: dict = {"example": args.name}
    artifacts = []

    if args.name == "holevo-werner":
        d = args.d
        ch = holevo_werner(d)
        from .covariance import holevo_werner_superchannel

        s = holevo_werner_superchannel(d)
        report.update({f"channel_{k}": v for k, v in validate_channel(ch, tol).report().items()})
        report.update({f"superchannel_{k}": v for k, v in validate_superchannel(s, tol).report().items()})
        ok = validate_channel(ch, tol).ok and validate_superchannel(s, tol).ok
        if args.out:
            artifacts.append((args.out, jsonio.channel_to_json(ch)))
        return CommandResult(OK if ok else CHECK_FAILED, report, artifacts)

    params = _example_superparams(args)
    if params.d != 2:
        raise SchemaError("qubit examples need a d=2 parameter set")
    a4 = params.t4("A")
    d4 = params.t4("D")

    if args.name == "amplitude-damping":
        gamma = args.gamma
        ch = amplitude_damping(gamma)
        out4 = du_block_action(params, ch.choi).mat.reshape(2, 2, 2, 2)
        a_vals = [out4[0, 0, 0, 0].real, out4[0, 1, 0, 1].real,
                  out4[1, 0, 1, 0].real, out4[1, 1, 1, 1].real]
        for k, v in zip(("a1", "a2", "a3", "a4"), a_vals):
            report[k] = v
        report["a1_plus_a2"] = a_vals[0] + a_vals[1]
        report["a3_plus_a4"] = a_vals[2] + a_vals[3]
        root = float(np.sqrt(1 - gamma))
        report["corner"] = complex(out4[0, 0, 1, 1])
        report["corner_expected"] = complex(d4[0, 0, 1, 1] * root)
        ok = (
            abs(report["a1_plus_a2"] - 1) <= tol
            and abs(report["a3_plus_a4"] - 1) <= tol
            and abs(report["corner"] - report["corner_expected"]) <= tol
        )
    elif args.name == "bit-flip":
        p = args.p
        ch = bit_flip(p)
        out4 = du_block_action(params, ch.choi).mat.reshape(2, 2, 2, 2)
        ok = True
        for i in range(2):
            for j in range(2):
                formula = p * (a4[i, j, 0, 1] + a4[i, j, 1, 0]) + (1 - p) * (
                    a4[i, j, 0, 0] + a4[i, j, 1, 1]
                )
                actual = out4[i, j, i, j].real
                report[f"p_{i + 1}{j + 1}"] = formula
                ok = ok and abs(actual - formula) <= tol
        report["corner"] = complex(out4[0, 0, 1, 1])
        report["corner_expected"] = complex(d4[0, 0, 1, 1] * (1 - p))
        report["center"] = complex(out4[0, 1, 1, 0])
        report["center_expected"] = complex(d4[0, 1, 1, 0] * p)
        ok = (
            ok
            and abs(report["corner"] - report["corner_expected"]) <= tol
            and abs(report["center"] - report["center_expected"]) <= tol
        )
    elif args.name == "pauli":
        probs = args.p
        ch = pauli_channel(probs)
        p0, p1, p2, p3 = probs
        report["input_corner"] = p0 - p3
        report["input_center"] = p1 - p2
        out4 = du_block_action(params, ch.choi).mat.reshape(2, 2, 2, 2)
        ok = True
        for i in range(2):
            for j in range(2):
                formula = (a4[i, j, 0, 0] + a4[i, j, 1, 1]) * (p0 + p3) + (
                    a4[i, j, 0, 1] + a4[i, j, 1, 0]
                ) * (p1 + p2)
                actual = out4[i, j, i, j].real
                report[f"p_{i + 1}{j + 1}"] = formula
                ok = ok and abs(actual - formula) <= tol
        report["corner"] = complex(out4[0, 0, 1, 1])
        report["corner_expected"] = complex(d4[0, 0, 1, 1] * (p0 - p3))
        report["center"] = complex(out4[0, 1, 1, 0])
        report["center_expected"] = complex(d4[0, 1, 1, 0] * (p1 - p2))
        ok = (
            ok
            and abs(report["corner"] - report["corner_expected"]) <= tol
            and abs(report["center"] - report["center_expected"]) <= tol
        )
    else:
        raise SchemaError(f"unknown example {args.name!r}")

    out = choi_channel(du_block_action(params, ch.choi).mat, 2, 2)
    ok = _report_output_channel(report, out, tol) and ok
    artifacts = []
    if args.out:
        artifacts.append((args.out, jsonio.channel_to_json(out)))
    return CommandResult(OK if ok else CHECK_FAILED, report, artifacts)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="superchan",
        description="Validate, apply, compose and covariance-test quantum "
        "superchannels stored as JSON.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_tol(p):
        p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="tolerance")

    p = sub.add_parser("validate", help="run the validity checks for one object")
    p.add_argument("kind", choices=("channel", "superchannel", "du", "do", "dephasing", "pauli"))
    p.add_argument("path")
    add_tol(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("apply", help="apply a superchannel to a channel")
    p.add_argument("superchannel")
    p.add_argument("channel")
    p.add_argument("--out", help="write the output channel JSON here")
    add_tol(p)
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("compose", help="compose two objects of the same kind")
    p.add_argument("kind", choices=("du", "dephasing", "superchannel", "channel"))
    p.add_argument("path1")
    p.add_argument("path2")
    p.add_argument("--out", help="write the composed JSON here")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("covariance", help="sampled group-conjugation invariance test")
    p.add_argument("superchannel")
    p.add_argument("--group", required=True, choices=("du", "do", "haar", "conj-haar", "mixed"))
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    add_tol(p)
    p.set_defaults(func=cmd_covariance)

    p = sub.add_parser("example", help="reproduce a worked qubit example")
    p.add_argument("name", choices=("amplitude-damping", "bit-flip", "pauli", "holevo-werner"))
    p.add_argument("--gamma", type=float, default=0.3, help="damping parameter")
    p.add_argument("--p", type=float, nargs="+", default=[0.2],
                   help="flip probability, or four Pauli weights")
    p.add_argument("--d", type=int, default=2, help="dimension (holevo-werner)")
    p.add_argument("--super", dest="superchannel", help="du parameter JSON to apply")
    p.add_argument("--out", help="write the output channel JSON here")
    add_tol(p)
    p.set_defaults(func=cmd_example)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "example":
        if args.name == "bit-flip":
            if len(args.p) != 1:
                print("status: invalid-input")
                print("error: bit-flip takes one probability")
                return INVALID_INPUT
            args.p = args.p[0]
        elif args.name == "pauli" and len(args.p) != 4:
            print("status: invalid-input")
            print("error: pauli takes four probabilities")
            return INVALID_INPUT
    try:
        result = args.func(args)
    except (SchemaError, ValueError) as exc:
        print("status: invalid-input")
        print(f"error: {exc}")
        return INVALID_INPUT
    except OracleMismatchError as exc:
        print("status: check-failed")
        print(f"error: {exc}")
        return CHECK_FAILED
    return _emit(result)


if __name__ == "__main__":
    sys.exit(main())
