"""Command-line front end.

Exit codes: 0 answered, 1 solver/oracle mismatch under ``--engine both``,
2 malformed input file, 3 oracle refused the instance size.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass

from .cycles import has_long_cycle, is_solution
from .errors import CapExceeded, InvalidArgument, ParseError
from .graph import mixed_fvs_reduction
from .io import parse_graph, parse_mixed
from .oracle import DEFAULT_CAP, brute_dlchs, brute_mixed_fvs, is_mixed_fvs, verify_solution
from .pipeline import Instance, minimum_solution

EXIT_OK, EXIT_MISMATCH, EXIT_PARSE, EXIT_CAP = 0, 1, 2, 3
MIXED_ELL = 2


@dataclass(frozen=True)
class RunConfig:
    input: str
    k: int
    ell: int
    mode: str = "vertex"
    engine: str = "solver"
    seed: int = 0
    verify: bool = False
    json: bool = False
    max_oracle_n: int = DEFAULT_CAP


@dataclass(frozen=True)
class Answer:
    feasible: bool
    solution: tuple  # 0-based ids, sorted


def _solver(cfg: RunConfig, graph) -> Answer:
    if cfg.mode == "mixed-fvs":
        red = mixed_fvs_reduction(graph)
        sol = minimum_solution(Instance(red.graph, cfg.k, MIXED_ELL, "vertex", cfg.seed))
        if sol is None:
            return Answer(False, ())
        return Answer(True, tuple(sorted(red.lift(sol.vertices))))
    sol = minimum_solution(Instance(graph, cfg.k, cfg.ell, cfg.mode, cfg.seed))
    if sol is None:
        return Answer(False, ())
    return Answer(True, tuple(sorted(sol.vertices)))


def _oracle(cfg: RunConfig, graph) -> Answer:
    if cfg.mode == "mixed-fvs":
        rep = brute_mixed_fvs(graph, cfg.k, cfg.max_oracle_n)
    else:
        rep = brute_dlchs(graph, cfg.k, cfg.ell, cfg.mode, cfg.max_oracle_n)
    if not rep.feasible:
        return Answer(False, ())
    # solutions are listed in a fixed order; take the lexicographically first
    return Answer(True, tuple(min(sorted(s) for s in rep.solutions)))


def _check(cfg: RunConfig, graph, ans: Answer) -> bool:
    """Verify a claimed solution; independent brute force with --verify when small enough."""
    if not ans.feasible:
        return False
    if len(ans.solution) > cfg.k:
        return False
    if cfg.mode == "mixed-fvs":
        if cfg.verify and graph.n <= cfg.max_oracle_n:
            return is_mixed_fvs(graph, ans.solution)
        red = mixed_fvs_reduction(graph)
        return is_solution(red.graph, ans.solution, MIXED_ELL)
    if cfg.verify and graph.num_vertices() <= cfg.max_oracle_n:
        return verify_solution(graph, ans.solution, cfg.ell, cfg.mode, cfg.max_oracle_n)
    H = graph.remove_vertices(ans.solution) if cfg.mode == "vertex" else graph.remove_arcs(ans.solution)
    return has_long_cycle(H, cfg.ell) is None


def _load(cfg: RunConfig):
    with open(cfg.input, encoding="utf-8") as fh:
        text = fh.read()
    return parse_mixed(text) if cfg.mode == "mixed-fvs" else parse_graph(text)


def run(cfg: RunConfig) -> tuple[int, dict]:
    """Answer one instance; returns (exit code, report)."""
    graph = _load(cfg)
    if cfg.engine == "solver":
        ans, agreement = _solver(cfg, graph), None
    elif cfg.engine == "oracle":
        ans, agreement = _oracle(cfg, graph), None
    else:
        ans = _solver(cfg, graph)
        ref = _oracle(cfg, graph)
        agreement = ans.feasible == ref.feasible and len(ans.solution) == len(ref.solution)
    report = {
        "feasible": ans.feasible,
        "solution": [i + 1 for i in ans.solution],
        "size": len(ans.solution),
        "verified": _check(cfg, graph, ans),
        "engine": cfg.engine,
        "seed": cfg.seed,
    }
    if cfg.mode == "mixed-fvs":
        report["ell"] = MIXED_ELL
    if agreement is not None:
        report["agreement"] = agreement
    code = EXIT_MISMATCH if agreement is False else EXIT_OK
    return code, report


def render(report: dict, as_json: bool) -> str:
    if as_json:
        return json.dumps(report, sort_keys=True)
    lines = [f"{key}: {report[key]}" for key in sorted(report)]
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dlchs", description="Delete at most k vertices or arcs so that no cycle is longer than ell.")
    p.add_argument("--input", required=True, help="graph file (p dlchs n m / a u v / e u v)")
    p.add_argument("--k", type=int, required=True, help="deletion budget")
    p.add_argument("--ell", type=int, default=None, help="longest allowed cycle length (required unless --mode mixed-fvs, which uses 2)")
    p.add_argument("--mode", choices=["vertex", "arc", "mixed-fvs"], default="vertex")
    p.add_argument("--engine", choices=["solver", "oracle", "both"], default="solver")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true", help="emit a JSON report")
    p.add_argument("--verify", action="store_true", help="re-check the answer with the brute-force verifier")
    p.add_argument("--max-oracle-n", type=int, default=DEFAULT_CAP, help="largest vertex count the oracle accepts")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.ell is None:
        if args.mode != "mixed-fvs":
            parser.error("--ell is required for vertex and arc modes")
        args.ell = MIXED_ELL
    elif args.mode == "mixed-fvs" and args.ell != MIXED_ELL:
        logging.getLogger(__name__).warning("mixed-fvs mode ignores --ell=%d and uses 2", args.ell)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(name)s: %(message)s")
    cfg = RunConfig(
        args.input, args.k, args.ell, args.mode, args.engine, args.seed, args.verify, args.json, args.max_oracle_n
    )
    try:
        code, report = run(cfg)
    except ParseError as exc:
        print(f"{cfg.input}: parse error at line {exc.line}: {exc.message}", file=sys.stderr)
        return EXIT_PARSE
    except CapExceeded as exc:
        print(f"oracle refused: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InvalidArgument as exc:
        print(f"invalid argument: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"cannot read {cfg.input}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    print(render(report, cfg.json))
    if code == EXIT_MISMATCH:
        print("solver and oracle disagree", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
