"""Command line driver: run a script, print a report.

Exit codes: 0 success, 1 for usage, parse, or script-level errors, 2 when
an iteration hits its stage budget (the partial profile is still printed),
3 for internal invariant violations (including failed `check` suites).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Dict, List, Optional, Tuple

from . import __version__
from ._kernel import KERNEL_IMPL
from .checks import run_checks
from .dsl import (
    AlgDecl,
    Command,
    FuncDecl,
    Script,
    SigDecl,
    lower_expr,
    parse_script,
)
from .errors import (
    BudgetExceeded,
    DslError,
    IntegrityError,
    MuiterError,
    NonFunctorialDiagram,
)
from .finset import FiniteFn, FiniteSet
from .functors import eval_functor
from .functors import expr_arity, infer_signature
from .iteration import (
    DEFAULT_BUDGET,
    AlgebraSpec,
    catamorphism,
    deflationary_nu,
    free_algebra,
    inflationary_iterate,
    mu_initial_algebra,
)
from .signature import Signature
from .size import kappa_sigma, nat_backend, successor_tower


class UsageError(MuiterError):
    """Bad command usage at script level; maps to exit code 1."""


class _Env:
    """Declarations collected from a script, resolved and lowered."""

    def __init__(self):
        self.sigs: Dict[str, Signature] = {}
        self.functors: Dict[str, object] = {}
        self.algebras: Dict[str, AlgDecl] = {}
        self._lower_env: Dict[str, tuple] = {}

    def declare(self, stmt) -> None:
        if isinstance(stmt, SigDecl):
            sig = Signature.of(
                *(n for _, n in stmt.ops), labels=[label for label, _ in stmt.ops]
            )
            self.sigs[stmt.name] = sig
            self._lower_env[stmt.name] = ("sig", sig)
        elif isinstance(stmt, FuncDecl):
            expr = lower_expr(stmt.expr, self._lower_env)
            self.functors[stmt.name] = expr
            self._lower_env[stmt.name] = ("functor", expr)
        elif isinstance(stmt, AlgDecl):
            self.algebras[stmt.name] = stmt

    def endofunctor(self, name: str, line: int):
        expr = self.functors[name]
        if expr_arity(expr) > 1:
            raise UsageError(
                f"line {line}: {name!r} takes {expr_arity(expr)} arguments, "
                "commands need an endofunctor of one"
            )
        return expr


def _backend_for(env: _Env, expr, spec: str, line: int):
    if spec == "nat":
        return nat_backend()
    if spec == "plump":
        return kappa_sigma(infer_signature(expr))
    if spec.startswith("plump:"):
        name = spec.split(":", 1)[1]
        if name not in env.sigs:
            raise UsageError(f"line {line}: {name!r} is not a declared signature")
        return kappa_sigma(env.sigs[name])
    raise UsageError(f"line {line}: unknown size discipline {spec!r}")


class Runner:
    def __init__(self, script: Script, defaults: dict):
        self.script = script
        self.defaults = defaults
        self.env = _Env()

    def run(self) -> Tuple[int, dict]:
        reports: List[dict] = []
        payload = {
            "version": __version__,
            "kernel": KERNEL_IMPL,
            "reports": reports,
        }
        for stmt in self.script.statements:
            if not isinstance(stmt, Command):
                self.env.declare(stmt)
                continue
            try:
                reports.append(self.dispatch(stmt))
            except BudgetExceeded as e:
                reports.append(self.budget_report(stmt, e))
                return 2, payload
        for report in reports:
            if report["command"] == "check" and not all(
                c["ok"] for c in report["checks"]
            ):
                return 3, payload
        return 0, payload

    def dispatch(self, cmd: Command) -> dict:
        handler = getattr(self, "cmd_" + cmd.kind)
        return handler(cmd)

    # -- option plumbing --------------------------------------------------

    def opt_size(self, cmd: Command) -> str:
        return cmd.option("size", self.defaults.get("size", "nat"))

    def opt_budget(self, cmd: Command) -> int:
        budget = cmd.option("budget", self.defaults.get("budget", DEFAULT_BUDGET))
        if budget < 1:
            raise UsageError(f"line {cmd.line}: budget must be at least 1")
        return budget

    def base_report(self, cmd: Command, size: Optional[str], budget: Optional[int]) -> dict:
        report: dict = {"command": cmd.kind, "line": cmd.line}
        if cmd.functor is not None:
            report["functor"] = cmd.functor
        if size is not None:
            report["size"] = size
        if budget is not None:
            report["budget"] = budget
        return report

    def budget_report(self, cmd: Command, e: BudgetExceeded) -> dict:
        report = self.base_report(cmd, None, None)
        report["error"] = {"type": "budget-exceeded", "message": str(e)}
        report["stages"] = e.profile
        return report

    # -- commands ----------------------------------------------------------

    def cmd_iterate(self, cmd: Command) -> dict:
        expr = self.env.endofunctor(cmd.functor, cmd.line)
        size = self.opt_size(cmd)
        budget = self.opt_budget(cmd)
        depth = cmd.option("depth", budget)
        backend = _backend_for(self.env, expr, size, cmd.line)
        state = inflationary_iterate(
            expr, backend, successor_tower(backend, depth), budget
        )
        report = self.base_report(cmd, size, budget)
        report["stages"] = state.profile()
        return report

    def cmd_mu(self, cmd: Command) -> dict:
        expr = self.env.endofunctor(cmd.functor, cmd.line)
        size = self.opt_size(cmd)
        budget = self.opt_budget(cmd)
        backend = _backend_for(self.env, expr, size, cmd.line)
        result = mu_initial_algebra(expr, backend, budget)
        report = self.base_report(cmd, size, budget)
        report["stages"] = result.state.profile()
        report["stationaryAt"] = result.stationary_at
        report["mu"] = {"size": result.carrier.size}
        report["iota"] = result.structure.to_json()
        return report

    def cmd_free(self, cmd: Command) -> dict:
        expr = self.env.endofunctor(cmd.functor, cmd.line)
        size = self.opt_size(cmd)
        budget = self.opt_budget(cmd)
        backend = _backend_for(self.env, expr, size, cmd.line)
        result = free_algebra(expr, FiniteSet(cmd.generators), backend, budget)
        report = self.base_report(cmd, size, budget)
        report["generators"] = cmd.generators
        report["stages"] = result.mu.state.profile()
        report["stationaryAt"] = result.mu.stationary_at
        report["mu"] = {"size": result.mu.carrier.size}
        report["unit"] = result.unit.to_json()
        report["iota"] = result.structure.to_json()
        return report

    def cmd_cata(self, cmd: Command) -> dict:
        expr = self.env.endofunctor(cmd.functor, cmd.line)
        decl = self.env.algebras[cmd.algebra]
        if decl.functor != cmd.functor:
            raise UsageError(
                f"line {cmd.line}: algebra {cmd.algebra!r} is declared "
                f"for {decl.functor!r}, not {cmd.functor!r}"
            )
        size = self.opt_size(cmd)
        budget = self.opt_budget(cmd)
        backend = _backend_for(self.env, expr, size, cmd.line)
        carrier = FiniteSet(decl.carrier)
        for v in decl.table:
            if v >= decl.carrier:
                raise UsageError(
                    f"line {decl.line}: algebra table entry {v} outside "
                    f"carrier of size {decl.carrier}"
                )
        fa = eval_functor(expr, (carrier,))
        if len(decl.table) != fa.size:
            raise UsageError(
                f"line {decl.line}: algebra table has {len(decl.table)} "
                f"entries, functor applied to the carrier has {fa.size}"
            )
        alg = AlgebraSpec(carrier, FiniteFn(fa, carrier, decl.table))
        stage_opt = cmd.option("stage")
        if stage_opt is None:
            result = mu_initial_algebra(expr, backend, budget)
            state, at = result.state, result.witness_index
            stage_label = result.stationary_at
        else:
            tower = successor_tower(backend, stage_opt + 1)
            state = inflationary_iterate(expr, backend, tower, budget)
            at = tower[-1]
            stage_label = stage_opt
        fold = catamorphism(state, alg, at)
        report = self.base_report(cmd, size, budget)
        report["algebra"] = cmd.algebra
        report["stage"] = stage_label
        report["stages"] = state.profile()
        report["fold"] = fold.to_json()
        return report

    def cmd_nu(self, cmd: Command) -> dict:
        expr = self.env.endofunctor(cmd.functor, cmd.line)
        size = cmd.option("size")
        if size not in (None, "nat"):
            raise UsageError(
                f"line {cmd.line}: the dual chain runs on numeric stages only"
            )
        budget = self.opt_budget(cmd)
        result = deflationary_nu(expr, budget)
        report = self.base_report(cmd, "nat", budget)
        report["stages"] = result.profile
        report["stationaryAt"] = result.stationary_at
        report["nu"] = {"size": result.carrier.size}
        return report

    def cmd_check(self, cmd: Command) -> dict:
        size = self.opt_size(cmd)
        samples = cmd.option("samples", self.defaults.get("samples", 200))
        seed = cmd.option("seed", self.defaults.get("seed", 0))
        depth = cmd.option("depth", self.defaults.get("depth", 3))
        if size == "nat":
            backend = nat_backend()
        elif size == "plump":
            backend = kappa_sigma(Signature.of())
        elif size.startswith("plump:"):
            name = size.split(":", 1)[1]
            if name not in self.env.sigs:
                raise UsageError(
                    f"line {cmd.line}: {name!r} is not a declared signature"
                )
            backend = kappa_sigma(self.env.sigs[name])
        else:
            raise UsageError(f"line {cmd.line}: unknown size discipline {size!r}")
        results = run_checks(
            backend,
            functors=self.env.functors,
            samples=samples,
            depth=depth,
            seed=seed,
        )
        report = self.base_report(cmd, size, None)
        report["samples"] = samples
        report["seed"] = seed
        report["depth"] = depth
        report["checks"] = results
        return report


# -- rendering -------------------------------------------------------------


def render_text(payload: dict) -> str:
    lines = []
    for report in payload["reports"]:
        header = report["command"]
        for k in ("functor", "algebra"):
            if k in report:
                header += f" {report[k]}"
        if "generators" in report:
            header += f" {report['generators']}"
        opts = [
            f"{k}={report[k]}"
            for k in ("size", "budget", "stage", "samples", "seed", "depth")
            if k in report
        ]
        if opts:
            header += "  (" + ", ".join(opts) + ")"
        lines.append(header)
        if "error" in report:
            lines.append(f"  error[{report['error']['type']}]: {report['error']['message']}")
        for stage in report.get("stages", ()):
            lines.append(f"  D[{stage['index']}] size={stage['size']}")
        if "stationaryAt" in report:
            lines.append(f"  stationary at stage {report['stationaryAt']}")
        if "mu" in report:
            lines.append(f"  mu size={report['mu']['size']}")
        if "nu" in report:
            lines.append(f"  nu size={report['nu']['size']}")
        for k in ("iota", "unit", "fold"):
            if k in report:
                lines.append(f"  {k}: {list(report[k]['table'])}")
        for c in report.get("checks", ()):
            mark = "ok  " if c["ok"] else "FAIL"
            lines.append(f"  {mark} {c['name']}: {c['detail']}")
    return "\n".join(lines) + ("\n" if lines else "")


def render_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


# -- entry point -------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def build_arg_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="muiter",
        description="Iterate set functors to their fixed points, per script.",
    )
    parser.add_argument(
        "script",
        nargs="?",
        default="-",
        help="script file to run ('-' or absent reads stdin)",
    )
    parser.add_argument(
        "--size",
        default="nat",
        help="default size discipline: nat, plump, or plump:<sig>",
    )
    parser.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    parser.add_argument("--depth", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_arg_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        if args.script == "-":
            text = sys.stdin.read()
        else:
            with open(args.script, "r", encoding="utf-8") as handle:
                text = handle.read()
    except OSError as e:
        sys.stderr.write(f"error: {e}\n")
        return 1
    try:
        script = parse_script(text)
    except DslError as e:
        sys.stderr.write(f"error: {e}\n")
        return 1
    defaults = {
        "size": args.size,
        "budget": args.budget,
        "depth": args.depth,
        "seed": args.seed,
    }
    runner = Runner(script, defaults)
    try:
        code, payload = runner.run()
    except (IntegrityError, NonFunctorialDiagram) as e:
        sys.stderr.write(f"internal error: {e}\n")
        return 3
    except DslError as e:
        sys.stderr.write(f"error: {e}\n")
        return 1
    except MuiterError as e:
        sys.stderr.write(f"error: {e}\n")
        return 1
    render = render_json if args.format == "json" else render_text
    sys.stdout.write(render(payload))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
