"""Command-line front end: ``fibertool <command> --input FILE [options]``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources

from .blowup import NotEquigenerated, NotFiniteLength, tor1_dense_values
from .instance import parse_instance
from .modules import ModuleRep
from .poly import GradingError, ParseError
from .verdict import (
    DEFAULTS,
    STATEMENTS,
    Analysis,
    _superficial_json,
    full_report,
    hypotheses_json,
)

SCHEMA = "fibertool/1"
COMMANDS = ("invariants", "tor", "fiber", "reduction", "superficial", "check", "selftest")
EXIT_OK, EXIT_PARSE, EXIT_UNDECIDED, EXIT_REFUTED = 0, 2, 3, 4
SELFTEST_SEED = 42


class UsageError(Exception):
    pass


def corpus_files() -> list:
    root = resources.files("fibertool") / "corpus"
    return sorted((p for p in root.iterdir() if p.name.endswith(".alg")), key=lambda p: p.name)


# -- payloads --


def _module_summary(M: ModuleRep, D: int) -> dict:
    hd = M.hilbert(D)
    res = M.resolution()
    out = {
        "hilbert_function": hd.values,
        "dim": hd.dim,
        "finite_length": hd.is_finite_length,
        "length": hd.length if hd.is_finite_length else None,
        "depth": M.depth,
        "projdim_over_S": res.length,
        "betti": res.betti,
        "num_generators": M.num_generators(),
        "cutoff": D,
    }
    return out


def invariants_payload(an: Analysis) -> dict:
    A_mod = an.ring_module
    ring = _module_summary(A_mod, an.D)
    ring["cohen_macaulay"] = A_mod.is_cm
    mod = _module_summary(an.M, an.D)
    mod.update({"maximal_cohen_macaulay": an.M.is_mcm, "free": an.M.is_free()})
    return {"ring": ring, "module": mod, "ht_I": an.ht_I, "ht_M_I": an.ht_M_I}


def tor_payload(an: Analysis) -> dict:
    prof = an.tor
    out = prof.to_json()
    out["nmax"] = an.N
    if prof.stabilized:
        out["degree_bound"] = prof.degree is None or prof.degree <= an.l_I - 1
    return out


def fiber_payload(an: Analysis) -> dict:
    cone = {
        "relations": [str(p) for p in an.fiber_ideal],
        "hilbert_function": an.cone_hf,
        "analytic_spread": an.l_I,
        "depth": an.cone.depth,
    }
    fm = an.fmod
    fitted, exact = an.l_M_I
    module = {
        "hilbert_function": an.fmod_hf,
        "dim": exact,
        "depth": fm.depth,
        "mu": an.mu_M,
        "free_exact": fm.is_free(),
    }
    out = {"cone": cone, "module": module, "cutoff": an.D}
    out.update(an.freeness)
    return out


def reduction_payload(an: Analysis) -> dict:
    red = an.reduction
    if isinstance(red, NotEquigenerated):
        return {"status": "inapplicable", "error": str(red)}
    return {
        "status": red.status,
        "r_J": red.r,
        "J": [str(g) for g in red.gens],
        "trials": red.trials,
        "ell": red.ell,
        "mmax": an.params["mmax"],
    }


def superficial_payload(an: Analysis) -> dict:
    return _superficial_json(an.superficial)


def check_payload(an: Analysis) -> tuple[dict, int]:
    rep = full_report(an)
    out = {
        "hypotheses": hypotheses_json(an, rep["hypotheses"]),
        "tor": tor_payload(an),
        "fiber": fiber_payload(an),
        "note": f"consistent to cutoff {an.D}",
    }
    code = EXIT_OK
    for v in rep["verdicts"]:
        out[v.statement] = v.to_json(an.D)
        if v.consistent is None and code == EXIT_OK:
            code = EXIT_UNDECIDED
        elif v.consistent is False:
            code = EXIT_REFUTED
    return out, code


def tor_status(an: Analysis) -> int:
    return EXIT_OK if an.tor.stabilized else EXIT_UNDECIDED


def run_command(command: str, an: Analysis) -> tuple[dict, int]:
    if command == "invariants":
        return invariants_payload(an), EXIT_OK
    if command == "tor":
        return tor_payload(an), tor_status(an)
    if command == "fiber":
        return fiber_payload(an), EXIT_OK
    if command == "reduction":
        p = reduction_payload(an)
        return p, EXIT_OK if p["status"] in ("verified-le-1", "found") else EXIT_UNDECIDED
    if command == "superficial":
        p = superficial_payload(an)
        return p, EXIT_OK if p["found"] else EXIT_UNDECIDED
    if command == "check":
        return check_payload(an)
    raise UsageError(f"unknown command {command!r}")


def build_report(command: str, an: Analysis, payload: dict) -> dict:
    return {
        "schema": SCHEMA,
        "command": command,
        "instance": an.inst.canonical(),
        "seed": an.seed,
        "params": dict(sorted(an.params.items())),
        command: payload,
    }


# -- output --


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}{k}.")
    else:
        yield prefix[:-1], obj


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    lines = []
    for key, val in _flatten(report):
        if key == "instance":
            lines.append("instance:")
            lines.extend("  " + ln for ln in str(val).splitlines())
        else:
            lines.append(f"{key}: {json.dumps(val) if isinstance(val, (list, bool)) or val is None else val}")
    return "\n".join(lines) + "\n"


def emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- argument handling --


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fibertool", description=__doc__)
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--input", help="instance file (not used by selftest)")
    for key, val in DEFAULTS.items():
        ap.add_argument(f"--{key}", type=int, default=None, help=f"default {val}")
    ap.add_argument("--seed", type=int, default=None, help="RNG seed (falls back to FIBERTOOL_SEED)")
    ap.add_argument("--format", choices=("json", "text"), default="text")
    ap.add_argument("--out", help="write the report here instead of stdout")
    return ap


def resolve_seed(args) -> int | None:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("FIBERTOOL_SEED")
    if env is None:
        return None
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"FIBERTOOL_SEED={env!r} is not an integer") from None


def _params(args) -> dict:
    return {k: getattr(args, k) for k in DEFAULTS}


def dense_tor_agrees(an: Analysis, n: int) -> bool:
    """Tor length at ``n`` against degreewise rank counting (zero in the top degree)."""
    dense = tor1_dense_values(an.M, an.I, n, an.D)
    return dense[-1] == 0 and sum(dense) == an.tor.values[n - 1]


def selftest(args, seed) -> tuple[dict, int]:
    results = {}
    code = EXIT_OK
    for path in corpus_files():
        inst = parse_instance(path.read_text(encoding="utf-8"))
        an = Analysis(inst, seed, **_params(args))
        payload, c = check_payload(an)
        oracle = all(dense_tor_agrees(an, n) for n in range(1, 4))
        results[path.name] = {
            name: payload[name]["status"]
            for name in STATEMENTS
        }
        results[path.name]["tor_oracle"] = oracle
        if not oracle:
            c = EXIT_REFUTED
        code = max(code, c)
    return {"instances": results, "seed": seed}, code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        seed = resolve_seed(args)
        if args.command == "selftest":
            payload, code = selftest(args, SELFTEST_SEED if seed is None else seed)
            report = {"schema": SCHEMA, "command": "selftest", "selftest": payload}
            emit(render(report, args.format), args.out)
            return code
        if args.input is None:
            raise UsageError("--input is required")
        if seed is None:
            if args.command == "check":
                raise UsageError("check needs --seed or FIBERTOOL_SEED")
            seed = 0
        with open(args.input, encoding="utf-8") as fh:
            inst = parse_instance(fh.read())
        an = Analysis(inst, seed, **_params(args))
        payload, code = run_command(args.command, an)
    except (ParseError, GradingError) as exc:
        print(f"fibertool: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (UsageError, OSError) as exc:
        print(f"fibertool: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NotFiniteLength as exc:
        print(f"fibertool: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    emit(render(build_report(args.command, an, payload), args.format), args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
