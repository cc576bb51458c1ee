"""Command-line entry point: ``rrzero <command> FILE [options]``.

Every option can also be set through an environment variable named
``RRZERO_<OPTION>`` (for example ``RRZERO_GRID=256``); explicit flags win
over the environment, which wins over parameters stored in the file.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from pathlib import Path
from typing import Any, Callable

from rrzero import __version__
from rrzero.algebra import MatrixOverGroupAlgebra, beta
from rrzero.embedding import build_lift_table, phi_embed, verify_homomorphism, verify_trace_identity
from rrzero.groups.description import (
    AbelianAtom,
    DescriptionError,
    Extension,
    IncreasingUnion,
    Semidirect,
    UnsupportedDescription,
    hirsch_length,
    normalize_normal_series,
)
from rrzero.io import OPERATIONS, DescriptionFileError, ParsedDescription, matrix_from_json, parse_description
from rrzero.obstruction.analyze import AnalysisConfig, rr0_obstruction_analyze
from rrzero.oscillation import (
    ComponentCapError,
    DualDescription,
    beta_diagonal_entries,
    oscillation_exact_beta_diagonal,
    oscillation_sampled,
    write_surface_csv,
)

ENV_PREFIX = "RRZERO_"
EXIT_OK, EXIT_INTERNAL, EXIT_UNSUPPORTED = 0, 1, 2

# option name -> (type, default)
OPTIONS: dict[str, tuple[Callable[[str], Any], Any]] = {
    "grid": (int, 64),
    "refine": (int, 2),
    "components_cap": (int, 4096),
    "components": (str, "auto"),
    "tol": (float, 1e-6),
    "seed": (int, 0),
    "trials": (int, 100),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rrzero", description="Real-rank-zero obstruction certificates for group C*-algebras.")
    p.add_argument("--version", action="version", version=f"rrzero {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in OPERATIONS:
        sp = sub.add_parser(name)
        sp.add_argument("file", help="group-description file")
        sp.add_argument("--grid", type=int)
        sp.add_argument("--refine", type=int)
        sp.add_argument("--components-cap", type=int, dest="components_cap")
        sp.add_argument("--components", choices=["auto", "enumerate", "sample"])
        sp.add_argument("--tol", type=float)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--trials", type=int, help="number of random trials for audits")
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--dump-surface", dest="dump_surface", help="CSV of sampled fiber norms (oscillation only)")
        sp.add_argument("--timings", action="store_true", help="include wall-clock timings (breaks byte-identity)")
    return p


def effective_config(args: argparse.Namespace, file_params: dict, env: dict[str, str]) -> dict[str, Any]:
    cfg = {}
    for name, (typ, default) in OPTIONS.items():
        value = file_params.get(name, default)
        env_value = env.get(ENV_PREFIX + name.upper())
        if env_value is not None:
            value = typ(env_value)
        flag = getattr(args, name, None)
        if flag is not None:
            value = flag
        cfg[name] = value
    return cfg


def _analysis_config(cfg: dict) -> AnalysisConfig:
    return AnalysisConfig(
        grid=cfg["grid"],
        refine=cfg["refine"],
        components_cap=cfg["components_cap"],
        components=cfg["components"],
        tol=cfg["tol"],
        seed=cfg["seed"],
    )


def _json_number(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return x


# -- commands --------------------------------------------------------------------------


def cmd_analyze(parsed: ParsedDescription, cfg: dict, args) -> dict:
    v = rr0_obstruction_analyze(parsed.group, _analysis_config(cfg), parsed.abelianization, parsed.reduction)
    out = v.certificate()
    out["tags"] = v.tags.node_tags("root") if v.tags else {}
    return out


def cmd_hirsch(parsed: ParsedDescription, cfg: dict, args) -> dict:
    return {"hirsch_length": _json_number(hirsch_length(parsed.group))}


def _oscillation_target(parsed: ParsedDescription) -> tuple[MatrixOverGroupAlgebra, str]:
    d = parsed.group
    if parsed.matrix is not None:
        if not isinstance(d, AbelianAtom):
            raise UnsupportedDescription("an explicit matrix needs an abelian group (its dual is where fibers live)")
        return matrix_from_json(d.group, parsed.matrix), "declared matrix"
    if isinstance(d, AbelianAtom):
        if d.group.free_rank == 0:
            raise UnsupportedDescription("no matrix given and the group has no free generator")
        a = d.group.element(tuple(int(i == 0) for i in range(d.group.free_rank)))
        return MatrixOverGroupAlgebra.diagonal(d.group, [beta(d.group, a)]), f"beta({a})"
    if isinstance(d, IncreasingUnion) and d.stages and isinstance(d.stages[-1], Semidirect):
        d = d.stages[-1]
    if isinstance(d, (Semidirect, Extension)):
        lt = build_lift_table(d)
        G = lt.group
        if G.rank == 0:
            raise UnsupportedDescription("the normal lattice is trivial")
        v = tuple(int(i == 0) for i in range(G.rank))
        return phi_embed(beta(G, G.element(v, 0)), lt), f"Phi(beta({v}))"
    raise UnsupportedDescription("oscillation needs an abelian group with a matrix or a split extension of Z^r")


def cmd_oscillation(parsed: ParsedDescription, cfg: dict, args) -> dict:
    m, label = _oscillation_target(parsed)
    dual = DualDescription(m.group)
    dump = getattr(args, "dump_surface", None)
    est = oscillation_sampled(
        m,
        dual,
        cfg["grid"],
        cfg["refine"],
        cfg["components_cap"],
        cfg["components"],
        cfg["seed"],
        singular_values=not m.is_self_adjoint(),
        keep_samples=dump is not None,
    )
    out: dict[str, Any] = {"target": label, "size": m.size, "sampled": est.to_json()}
    out["bracket"] = [est.omega_lower, est.omega_upper]
    if beta_diagonal_entries(m) is not None:
        out["exact"] = oscillation_exact_beta_diagonal(m, dual).omega_lower
    if dump is not None:
        write_surface_csv(est, dump, dual.dimension)
        out["surface_csv"] = Path(dump).name
    return out


def cmd_embed_audit(parsed: ParsedDescription, cfg: dict, args) -> dict:
    d = parsed.group
    if isinstance(d, IncreasingUnion) and d.stages and isinstance(d.stages[-1], Semidirect):
        d = d.stages[-1]
    lt = build_lift_table(d)
    hom = verify_homomorphism(lt, cfg["trials"], cfg["seed"])
    tr = verify_trace_identity(lt, cfg["trials"], cfg["seed"])
    return {"index": lt.index, "audits": [hom.to_json(), tr.to_json()], "passed": hom.passed and tr.passed}


def cmd_series_normalize(parsed: ParsedDescription, cfg: dict, args) -> dict:
    if parsed.series is None:
        raise UnsupportedDescription("series-normalize needs analysis.series in the file")
    out = normalize_normal_series(parsed.series)
    return {"input": parsed.series, "normalized": out, "length": len(out)}


COMMANDS = {
    "analyze": cmd_analyze,
    "hirsch": cmd_hirsch,
    "oscillation": cmd_oscillation,
    "embed-audit": cmd_embed_audit,
    "series-normalize": cmd_series_normalize,
}


def render(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def run(argv: list[str] | None = None, env: dict[str, str] | None = None) -> tuple[int, dict]:
    """Run one command and return (exit code, report). The report is also written out."""
    args = build_parser().parse_args(argv)
    env = dict(os.environ) if env is None else env
    report: dict[str, Any] = {
        "tool": {"name": "rrzero", "version": __version__},
        "command": args.command,
        "input": {"file": Path(args.file).name},
    }
    code = EXIT_OK
    t0 = time.perf_counter()
    try:
        parsed = parse_description(args.file)
        cfg = effective_config(args, parsed.parameters, env)
        report["config"] = cfg
        report["input"]["description"] = parsed.raw
        report["result"] = COMMANDS[args.command](parsed, cfg, args)
    except (UnsupportedDescription, DescriptionFileError, DescriptionError, ComponentCapError, FileNotFoundError) as exc:
        code = EXIT_UNSUPPORTED
        report["error"] = {"kind": "unsupported-input", "message": str(exc)}
    except Exception as exc:  # noqa: BLE001 - reported as an internal error with exit code 1
        code = EXIT_INTERNAL
        report["error"] = {"kind": "internal", "message": f"{type(exc).__name__}: {exc}"}
    report["exit_code"] = code
    if args.timings:
        report["timings"] = {"total_seconds": time.perf_counter() - t0}
    text = render(report)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if code != EXIT_OK:
        print(f"rrzero: {report['error']['message']}", file=sys.stderr)
    return code, report


def main(argv: list[str] | None = None) -> int:
    return run(argv)[0]


if __name__ == "__main__":
    raise SystemExit(main())
