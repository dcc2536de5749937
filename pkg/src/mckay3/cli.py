"""Command-line entry point: ``mckay3 <command> GROUP [options]``."""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .correspondence import predicted_intersection_matrix, verify_chain
from .errors import McKayError, MaxIterExceeded
from .eta import eta_table
from .group import GroupAction, format_fraction, parse_group
from .kempf_ness import SolverConfig, kempf_ness_solve, moment_map
from .mckay import cartan_matrices
from .quiver import (
    fixed_point_fingerprint,
    enumerate_fixed_points,
    invariant_subsets,
    is_generic,
    is_theta_semistable,
    is_theta_stable,
    parse_theta,
    random_constellation,
    random_theta,
    relation_residual,
)

COMMANDS = ("cartan", "eta", "verify", "intersection", "stability", "solve", "fixed-points", "chambers")
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    group: str
    theta: Optional[str] = None
    seed: Optional[int] = None
    format: str = "text"
    tol: float = 1e-10
    max_iter: int = 500
    samples: int = 100
    zero: Optional[str] = None
    history: bool = False

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in known})

    def to_argv(self) -> list[str]:
        argv = [self.command, self.group, "--format", self.format]
        if self.theta is not None:
            argv.append(f"--theta={self.theta}")
        if self.seed is not None:
            argv += ["--seed", str(self.seed)]
        if self.zero is not None:
            argv += ["--zero", self.zero]
        argv += ["--tol", repr(self.tol), "--max-iter", str(self.max_iter), "--samples", str(self.samples)]
        if self.history:
            argv.append("--history")
        return argv


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("MCKAY3_THREADS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mckay3",
        description="Exact McKay-correspondence workbench for C^3/G with G = 1/r(w1,w2,w3).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_: str, theta: bool = False) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.add_argument("group", help='group literal, e.g. "1/7(1,2,4)"')
        p.add_argument("--format", choices=("json", "csv", "text"), default="text")
        p.add_argument("--theta", required=theta, help='comma-separated rationals summing to 0, e.g. "-2,1,1"')
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--tol", type=float, default=1e-10)
        p.add_argument("--max-iter", type=int, default=500)
        p.add_argument("--samples", type=int, default=100)
        p.add_argument(
            "--zero",
            default=None,
            help='arrows to zero as "k:alpha,..." (alpha in 1..3), or a probability such as "0.2"',
        )
        p.add_argument("--history", action="store_true", help="include the solver residual history")
        return p

    add("cartan", "McKay matrices C~, C and C^-1")
    add("eta", "eta invariants by difference residue")
    add("verify", "exact check of the eta/Cartan identity chain")
    add("intersection", "predicted intersection matrix -C^-1")
    add("stability", "theta-stability of a seeded random constellation", theta=True)
    add("solve", "Kempf-Ness solve of mu = zeta_theta", theta=True)
    add("fixed-points", "torus-fixed theta-stable constellations", theta=True)
    add("chambers", "sample theta and classify by fixed-point sets")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        group=args.group,
        theta=args.theta,
        seed=args.seed,
        format=args.format,
        tol=args.tol,
        max_iter=args.max_iter,
        samples=args.samples,
        zero=args.zero,
        history=args.history,
    )


def _parse_zero(text: Optional[str]):
    """Returns (pattern, probability)."""
    if text is None:
        return None, 0.0
    text = text.strip()
    if ":" not in text:
        try:
            prob = float(text)
        except ValueError:
            raise UsageError(f"cannot parse --zero {text!r}") from None
        if not 0 <= prob < 1:
            raise UsageError("--zero probability must lie in [0, 1)")
        return None, prob
    pattern = []
    for item in text.split(","):
        try:
            k, a = item.split(":")
            k, a = int(k), int(a)
        except ValueError:
            raise UsageError(f"cannot parse arrow {item!r} in --zero") from None
        if a not in (1, 2, 3):
            raise UsageError(f"arrow flavor {a} not in 1..3")
        pattern.append((k, a))
    return pattern, 0.0


# ---------------------------------------------------------------------------
# Commands. Each returns (payload, csv_rows, text, exit_code).


def _matrix_rows(name: str, matrix, row_labels, col_labels) -> list[list]:
    return [[name, i, j, v] for i, row in zip(row_labels, matrix) for j, v in zip(col_labels, row)]


def _fmt_matrix(matrix, labels) -> str:
    cells = [[str(x) for x in row] for row in matrix]
    width = max([len(c) for row in cells for c in row] + [len(str(l)) for l in labels] + [1])
    head = " " * (width + 2) + " ".join(str(l).rjust(width) for l in labels)
    body = [str(l).rjust(width) + "  " + " ".join(c.rjust(width) for c in row) for l, row in zip(labels, cells)]
    return "\n".join([head] + body)


def cmd_cartan(G: GroupAction, cfg: RunConfig):
    mm = cartan_matrices(G)
    payload = mm.to_json()
    inv = [[format_fraction(x) for x in row] for row in mm.inverse]
    rows = (
        _matrix_rows("full", mm.full, mm.labels, mm.labels)
        + _matrix_rows("reduced", mm.reduced, mm.reduced_labels, mm.reduced_labels)
        + _matrix_rows("inverse", inv, mm.reduced_labels, mm.reduced_labels)
    )
    text = "\n\n".join(
        [
            f"group {G.label}",
            "C~ (all irreps):\n" + _fmt_matrix(mm.full, mm.labels),
            "C (nontrivial irreps):\n" + _fmt_matrix(mm.reduced, mm.reduced_labels),
            "C^-1:\n" + _fmt_matrix([[str(x) for x in row] for row in mm.inverse], mm.reduced_labels),
            f"det C = {mm.determinant}",
        ]
    )
    return payload, [["matrix", "row", "col", "value"]] + rows, text, EXIT_OK


def cmd_eta(G: GroupAction, cfg: RunConfig):
    table = eta_table(G)
    payload = table.to_json()
    rows = [["d", "eta"]] + [[d, format_fraction(v)] for d, v in sorted(table.by_difference.items())]
    text = f"group {G.label}\n" + "\n".join(f"eta[{d}] = {v}" for d, v in sorted(table.by_difference.items()))
    return payload, rows, text, EXIT_OK


def cmd_verify(G: GroupAction, cfg: RunConfig):
    report = verify_chain(G)
    payload = report.to_json()
    rows = [["name", "pass", "lhs", "rhs", "witness"]] + [
        [c["name"], c["pass"], json.dumps(c["lhs"]), json.dumps(c["rhs"]), json.dumps(c["witness"])]
        for c in payload["checks"]
    ]
    lines = [f"group {G.label}"]
    for c in report.checks:
        lines.append(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.statement}")
    for c in report.failures():
        lines.append(f"  witness for {c.name}: {json.dumps(c.to_json()['witness'])} lhs={c.lhs} rhs={c.rhs}")
    lines.append("overall: " + ("PASS" if report.overall else "FAIL"))
    if not report.overall:
        for c in report.failures():
            print(f"verification failed: {c.name} witness={json.dumps(c.to_json()['witness'])}", file=sys.stderr)
    return payload, rows, "\n".join(lines), EXIT_OK if report.overall else EXIT_FAIL


def cmd_intersection(G: GroupAction, cfg: RunConfig):
    pred = predicted_intersection_matrix(G)
    payload = pred.to_json()
    rows = _matrix_rows("M", payload["matrix"], pred.labels, pred.labels) + _matrix_rows(
        "triple", payload["triple_pairing"]["matrix"], pred.labels, pred.labels
    )
    text = "\n\n".join(
        [
            f"group {G.label}",
            "predicted int ch~(R_rho) ch~(R_sigma^*) = -(C^-1)[rho,sigma]:\n"
            + _fmt_matrix([[str(x) for x in row] for row in pred.matrix], pred.labels),
            "triple pairing int a.b.(a-b), a = c1(R_rho), b = c1(R_sigma):\n"
            + _fmt_matrix([[str(x) for x in row] for row in pred.triple_pairing], pred.labels),
        ]
    )
    return payload, [["matrix", "row", "col", "value"]] + rows, text, EXIT_OK


def _theta(G: GroupAction, cfg: RunConfig):
    try:
        return parse_theta(cfg.theta, G.order)
    except McKayError as exc:
        raise UsageError(str(exc)) from None


def _constellation(G: GroupAction, cfg: RunConfig):
    pattern, prob = _parse_zero(cfg.zero)
    return random_constellation(G, seed=cfg.seed or 0, zero_pattern=pattern, zero_prob=prob)


def cmd_stability(G: GroupAction, cfg: RunConfig):
    theta = _theta(G, cfg)
    B = _constellation(G, cfg)
    stable = is_theta_stable(B, theta)
    semi = is_theta_semistable(B, theta)
    gen = is_generic(theta)
    support = B.support()
    payload = {
        "group": G.label,
        "theta": theta.to_json(),
        "seed": cfg.seed or 0,
        "generic": gen.ok,
        "support": [[k, a] for k in range(G.order) for a in (1, 2, 3) if support[k, a - 1]],
        "invariant_subsets": [sorted(S) for S in invariant_subsets(B)],
        "stable": stable.ok,
        "semistable": semi.ok,
        "witness": sorted(stable.witness) if stable.witness is not None else None,
    }
    rows = [["field", "value"]] + [[k, json.dumps(v)] for k, v in payload.items()]
    text = "\n".join(
        [
            f"group {G.label}, theta = ({theta}), seed {cfg.seed or 0}",
            f"generic: {gen.ok}",
            f"relation residual: {relation_residual(B):.3e}",
            f"arrows in support: {len(payload['support'])} of {3 * G.order}",
            f"stable: {stable.ok}   semistable: {semi.ok}",
        ]
        + ([f"destabilising subset: {payload['witness']}"] if payload["witness"] is not None else [])
    )
    return payload, rows, text, EXIT_OK


def cmd_solve(G: GroupAction, cfg: RunConfig):
    theta = _theta(G, cfg)
    B = _constellation(G, cfg)
    solver = SolverConfig(tol=cfg.tol, max_iter=cfg.max_iter)
    try:
        result = kempf_ness_solve(B, theta, config=solver)
    except MaxIterExceeded as exc:
        print(f"solver failed: {exc}", file=sys.stderr)
        payload = {"group": G.label, "theta": theta.to_json(), "status": "max_iter", "residual": exc.residual}
        return payload, [["field", "value"], ["status", "max_iter"], ["residual", exc.residual]], str(exc), EXIT_FAIL
    body = result.to_json(include_history=cfg.history)
    body.pop("x", None)
    semi = is_theta_semistable(B, theta)
    payload = {"group": G.label, "theta": theta.to_json(), "seed": cfg.seed or 0, **body, "semistable": semi.ok}
    rows = [["field", "value"]] + [[k, json.dumps(v)] for k, v in payload.items()]
    if result.status == "solved":
        text = (
            f"solved in {result.iterations} Newton steps, residual {result.residual:.3e}\n"
            f"semistable: {semi.ok}"
        )
    else:
        text = (
            f"unstable after {result.iterations} steps: destabilising subset {sorted(result.certificate)} "
            f"with theta(S) = {result.theta_value}\nsemistable: {semi.ok}"
        )
    return payload, rows, f"group {G.label}, theta = ({theta})\n" + text, EXIT_OK


def cmd_fixed_points(G: GroupAction, cfg: RunConfig):
    theta = _theta(G, cfg)
    points = enumerate_fixed_points(G, theta)
    payload = {
        "group": G.label,
        "theta": theta.to_json(),
        "count": len(points),
        "order": G.order,
        "fixed_points": [p.to_json() for p in points],
    }
    rows = [["index", "k", "alpha"]] + [[i, k, a] for i, p in enumerate(points) for k, a in p.support]
    lines = [f"group {G.label}, theta = ({theta})", f"{len(points)} torus-fixed points (|G| = {G.order})"]
    for i, p in enumerate(points):
        lines.append(f"  {i}: " + " ".join(f"{k}:{a}" for k, a in p.support))
    return payload, rows, "\n".join(lines), EXIT_OK


def _fingerprint_label(points) -> str:
    blob = json.dumps([list(map(list, s)) for s in fixed_point_fingerprint(points)])
    return hashlib.sha1(blob.encode()).hexdigest()[:12]


def cmd_chambers(G: GroupAction, cfg: RunConfig):
    rng = np.random.default_rng(cfg.seed or 0)
    thetas = [random_theta(G.order, rng) for _ in range(cfg.samples)]
    generic = [t for t in thetas if is_generic(t)]
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        results = list(pool.map(lambda t: enumerate_fixed_points(G, t), generic))
    classes: dict[str, dict] = {}
    for theta, points in zip(generic, results):
        label = _fingerprint_label(points)
        entry = classes.setdefault(label, {"fingerprint": label, "count": 0, "fixed_points": len(points), "example_theta": theta.to_json()})
        entry["count"] += 1
    rate = Fraction(len(generic), len(thetas)) if thetas else Fraction(0)
    payload = {
        "group": G.label,
        "samples": len(thetas),
        "generic": len(generic),
        "genericity_rate": format_fraction(rate),
        "classes": sorted(classes.values(), key=lambda c: (-c["count"], c["fingerprint"])),
    }
    rows = [["fingerprint", "count", "fixed_points", "example_theta"]] + [
        [c["fingerprint"], c["count"], c["fixed_points"], ",".join(c["example_theta"])] for c in payload["classes"]
    ]
    lines = [
        f"group {G.label}: {len(generic)}/{len(thetas)} sampled theta generic",
        f"{len(classes)} fixed-point classes",
    ]
    for c in payload["classes"]:
        example = ",".join(str(Fraction(v)) for v in c["example_theta"])
        lines.append(f"  {c['fingerprint']}  x{c['count']}  ({c['fixed_points']} points)  e.g. theta = {example}")
    return payload, rows, "\n".join(lines), EXIT_OK


HANDLERS = {
    "cartan": cmd_cartan,
    "eta": cmd_eta,
    "verify": cmd_verify,
    "intersection": cmd_intersection,
    "stability": cmd_stability,
    "solve": cmd_solve,
    "fixed-points": cmd_fixed_points,
    "chambers": cmd_chambers,
}


def _render(cfg: RunConfig, payload: dict, rows: list, text: str) -> str:
    if cfg.format == "json":
        return json.dumps({"command": cfg.command, **payload}, indent=2, sort_keys=False) + "\n"
    if cfg.format == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        return buf.getvalue()
    return text + "\n"


def _join_theta(argv: Sequence[str]) -> list[str]:
    # "--theta -2,1,1" would otherwise be read as an unknown option.
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok == "--theta":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"--theta={nxt}")
        else:
            out.append(tok)
    return out


def run(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    argv = _join_theta(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    cfg = _config_from_args(args)
    try:
        G = parse_group(cfg.group)
        payload, rows, text, code = HANDLERS[cfg.command](G, cfg)
    except (UsageError, McKayError) as exc:
        print(f"mckay3 {cfg.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    stdout.write(_render(cfg, payload, rows, text))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
