"""Batch command-line front end.

Every command prints one JSON report (a list of reports when several input
files are given).  Exit codes: 0 success, 2 unparseable input, 3 input
rejected by a precondition (non-invertible matrix, p = 2, budget...).
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import plinalg, psynth, qsim, zsynth
from .padic import AtLeast, PadicError

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION = 0, 2, 3


class ParseError(Exception):
    pass


class PreconditionError(Exception):
    pass


def _exp_json(e):
    return str(e) if isinstance(e, AtLeast) else e


def _read_json(path: str) -> tuple[dict, str]:
    try:
        raw = Path(path).read_bytes()
        return json.loads(raw), hashlib.sha256(raw).hexdigest()
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: {exc}") from None


def _padic_matrix(obj, args) -> plinalg.PadicMatrix:
    try:
        return plinalg.matrix_from_json(obj, args.p, args.k)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, PadicError):
            raise PreconditionError(str(exc)) from None
        raise ParseError(f"bad matrix file: {exc}") from None


# --- commands -------------------------------------------------------------------

def synth_report(path: str, args) -> dict:
    obj, digest = _read_json(path)
    target = args.target
    out: dict = {"command": f"synth --target {target}", "input": path, "inputs_digest": digest}
    try:
        if target == "glnz":
            try:
                g = zsynth.matrix_from_json(obj)
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"bad matrix file: {exc}") from None
            w = zsynth.decompose_glnz(g)
            back = zsynth.eval_hr(zsynth.parse_hr(zsynth.format_hr(w), len(g)))
            out["outputs"] = {"word": zsynth.format_hr(w), "length": len(w)}
            out["verification"] = {"verified": back == g, "reparsed": True}
            return out
        g = _padic_matrix(obj, args)
        if target == "gl2p":
            w = psynth.synth_gl2(g)
            text = psynth.format_word(w)
            back = psynth.eval_word(psynth.parse_word(text, g.p, g.k))
            out["outputs"] = {"word": text, "length": len(w), "p": g.p, "k": g.k}
            out["verification"] = {"verified": back == g, "length_within_budget": len(w) <= 32}
            return out
        gates = psynth.synth_gln(g)
        text = psynth.format_two_level(gates)
        back = psynth.eval_two_level(psynth.parse_two_level(text, g.p, g.k), g.p, g.k, g.n)
        out["outputs"] = {"gates": text.splitlines(), "count": len(gates), "p": g.p, "k": g.k}
        out["verification"] = {"verified": back == g}
        return out
    except (psynth.SynthesisError, zsynth.DecompositionError, PadicError) as exc:
        raise PreconditionError(str(exc)) from None


def snf_report(path: str, args) -> dict:
    obj, digest = _read_json(path)
    a = _padic_matrix(obj, args)
    s = plinalg.smith_normal_form(a)
    lar = s.left() @ a @ s.right()
    return {
        "command": "snf",
        "input": path,
        "inputs_digest": digest,
        "outputs": {
            "exponents": [_exp_json(e) for e in s.exponents],
            "L_factors": len(s.L_factors),
            "R_factors": len(s.R_factors),
        },
        "verification": {
            "LAR_is_diagonal": lar == s.diagonal(),
            "divisibility_chain": plinalg.exponents_nondecreasing(s.exponents),
            "elementary_divisor_check": plinalg.elementary_divisor_check(a, s),
        },
    }


def oracle_report(args) -> dict:
    if args.p is None or args.k is None:
        raise ParseError("oracle needs --p and --k")
    try:
        rep = psynth.bfs_oracle(args.p, args.k, args.budget)
    except (psynth.BudgetExceeded, psynth.SynthesisError, PadicError) as exc:
        raise PreconditionError(str(exc)) from None
    return {
        "command": f"oracle --p {args.p} --k {args.k}",
        "inputs_digest": hashlib.sha256(f"{args.p},{args.k},{args.budget}".encode()).hexdigest(),
        "outputs": {"reachable": rep.reachable, "group_order": rep.group_order},
        "verification": {"complete": rep.complete,
                         "order_formula": rep.group_order == psynth.gl2_order(args.p, args.k)},
    }


def sim_report(path: str, args) -> dict:
    circuit, digest = _read_json(path)
    try:
        regime = circuit["regime"]
        init, final = qsim.run_circuit(circuit)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad circuit file: {exc}") from None
    except (qsim.SimulationError, PadicError) as exc:
        raise PreconditionError(str(exc)) from None
    except ValueError as exc:
        raise ParseError(f"bad circuit file: {exc}") from None

    out: dict = {"command": "sim", "input": path, "inputs_digest": digest, "regime": regime}
    outputs: dict = {"final": qsim.state_to_json(final)}
    if regime == "complex":
        outputs["probabilities"] = qsim.probabilities(final)
        if args.samples:
            shots = qsim.sample(final, args.samples, args.seed)
            labels, counts = np.unique(shots, return_counts=True)
            outputs["histogram"] = dict(zip(labels.tolist(), counts.tolist()))
        verification = {"normalized": final.is_normalized(),
                        "norm_drift": abs(final.norm_squared() - init.norm_squared())}
    elif regime == "padic":
        outputs["valuations"] = {b: _exp_json(v) for b, v in qsim.padic_probabilities(final).items()}
        m = final.p ** final.k
        verification = {"canonical_residues": all(0 <= r < m for r in final.residues())}
    else:
        touched = set()
        for g in circuit.get("gates", []):
            touched |= {int(q) for q in g.get("locals", {})}
        untouched = init.support - touched
        same = all(ci.locals[q] == cf.locals[q]
                   for ci, cf in zip(init.coefficients, final.coefficients)
                   for q in untouched if q in ci.locals)
        outputs["support"] = sorted(final.support)
        verification = {"normalized": qsim.is_normalized_adelic(final),
                        "support_bounded": final.support <= init.support | touched,
                        "untouched_places_identical": same}
    out["outputs"] = outputs
    out["verification"] = verification
    return out


def verify_report(args) -> dict:
    obj, digest = _read_json(args.matrix)
    try:
        text = Path(args.word).read_text()
    except OSError as exc:
        raise ParseError(str(exc)) from None
    try:
        if args.target == "glnz":
            g = zsynth.matrix_from_json(obj)
            ok = zsynth.eval_hr(zsynth.parse_hr(text, len(g))) == g
        else:
            g = _padic_matrix(obj, args)
            if args.target == "gl2p":
                ok = psynth.eval_word(psynth.parse_word(text, g.p, g.k)) == g
            else:
                ok = psynth.eval_two_level(psynth.parse_two_level(text, g.p, g.k), g.p, g.k, g.n) == g
    except psynth.SynthesisError as exc:
        raise PreconditionError(str(exc)) from None
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(str(exc)) from None
    return {"command": f"verify --target {args.target}", "input": args.matrix, "inputs_digest": digest,
            "outputs": {"word": text.strip()}, "verification": {"verified": ok}}


# --- plumbing ----------------------------------------------------------------------

def _run_one(fn, path, args) -> tuple[int, dict]:
    start = time.perf_counter()
    try:
        rep = fn(path, args) if path is not None else fn(args)
        code = EXIT_OK
    except ParseError as exc:
        rep, code = {"error": str(exc), "input": path}, EXIT_PARSE
    except PreconditionError as exc:
        rep, code = {"error": str(exc), "input": path}, EXIT_PRECONDITION
    if args.timing:
        rep["wall_time"] = time.perf_counter() - start
    return code, rep


def _dispatch(args) -> tuple[int, object]:
    single = {"oracle": oracle_report, "verify": verify_report}
    if args.command in single:
        return _run_one(single[args.command], None, args)
    fn = {"synth": synth_report, "glnz": synth_report, "snf": snf_report, "sim": sim_report}[args.command]
    paths = args.files
    if args.jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_one, [fn] * len(paths), paths, [args] * len(paths)))
    else:
        results = [_run_one(fn, p, args) for p in paths]
    code = max(c for c, _ in results)
    reports = [r for _, r in results]
    return code, reports[0] if len(reports) == 1 else reports


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="padicgates", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, help="prime (fills a missing 'p' in matrix files)")
    common.add_argument("--k", type=int, help="precision exponent (fills a missing 'k')")
    common.add_argument("--jobs", type=int, default=1, help="process independent files in parallel")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--timing", action="store_true", help="add wall_time (reports stop being byte-stable)")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", parents=[common], help="compile a matrix into a gate word")
    s.add_argument("files", nargs="+")
    s.add_argument("--target", choices=("gl2p", "glnp", "glnz"), default="gl2p")

    g = sub.add_parser("glnz", parents=[common], help="shorthand for synth --target glnz")
    g.add_argument("files", nargs="+")
    g.set_defaults(target="glnz")

    sm = sub.add_parser("sim", parents=[common], help="run a circuit file")
    sm.add_argument("files", nargs="+")
    sm.add_argument("--seed", type=int, default=0)
    sm.add_argument("--samples", type=int, default=0)

    sn = sub.add_parser("snf", parents=[common], help="Smith normal form over Z_p")
    sn.add_argument("files", nargs="+")

    o = sub.add_parser("oracle", parents=[common], help="BFS generation check in GL_2(Z/p^k)")
    o.add_argument("--budget", type=int, default=10 ** 6, help="maximum elements to enumerate")

    v = sub.add_parser("verify", parents=[common], help="check a word file against a matrix file")
    v.add_argument("matrix")
    v.add_argument("word")
    v.add_argument("--target", choices=("gl2p", "glnp", "glnz"), default="gl2p")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    code, report = _dispatch(args)
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    if code != EXIT_OK:
        errors = report if isinstance(report, list) else [report]
        for r in errors:
            if "error" in r:
                print(f"error: {r['error']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
