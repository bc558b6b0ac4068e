"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 internal
oracle disagreement. Floats are printed with 17 significant digits and
half-integers as doubled integers.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import dsu2
from .catalog import resolve_group
from .double import (FusionDisagreement, all_irreps, braid_intertwiner_defect, find_irrep,
                     fusion_multiplicities, verify_hopf)
from .finite_group import GroupError
from .su2 import random_element

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_ORACLE = 0, 1, 2, 3

COMMANDS = ("verify-hopf", "fusion", "char", "cgc", "ortho", "braid-check")

DEFAULT_TOL = {
    "verify-hopf": 1e-12,
    "fusion": 1e-9,
    "char": 1e-12,
    "cgc": 1e-12,
    "ortho": 1e-6,
    "braid-check": 1e-12,
    "braid-check-su2": 1e-8,
}


class InputError(ValueError):
    """Malformed command-line input."""


@dataclass
class RunConfig:
    command: str
    group: str = "S3"
    labels: List[str] = field(default_factory=list)
    out: Optional[str] = None
    fmt: str = "csv"
    order: int = 64
    tol: Dict[str, float] = field(default_factory=dict)
    twojmax: int = 3
    twon3: Optional[int] = None
    points: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if self.fmt not in ("csv", "json"):
            raise InputError("format must be csv or json")
        if self.order < 8:
            raise InputError("quadrature order must be at least 8")
        if self.twojmax < 0:
            raise InputError("jmax must be non-negative")
        if self.points < 1:
            raise InputError("need at least one r3 point")
        for k, v in self.tol.items():
            if not v > 0:
                raise InputError(f"tolerance {k}={v} must be positive")

    def tolerance(self, key: Optional[str] = None) -> float:
        key = key or self.command
        return self.tol.get(key, self.tol.get("default", DEFAULT_TOL[key]))


# --------------------------------------------------------------------------
# parsing


_PI_RE = re.compile(r"^\s*([-+]?\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$")


def parse_angle(text: str) -> float:
    """``1.2``, ``pi/2``, ``2pi/3`` or ``2*pi/3``."""
    m = _PI_RE.match(text)
    if m:
        coef = m.group(1)
        coef = 1.0 if coef in ("", "+") else -1.0 if coef == "-" else float(coef)
        den = float(m.group(2)) if m.group(2) else 1.0
        return coef * np.pi / den
    try:
        return float(text)
    except ValueError:
        raise InputError(f"cannot parse angle {text!r}") from None


def parse_twice(text: str) -> int:
    """A half-integer such as ``3/2``, ``-0.5`` or ``1``, returned doubled."""
    try:
        val = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise InputError(f"cannot parse half-integer {text!r}") from None
    if (2 * val).denominator != 1:
        raise InputError(f"{text!r} is not a half-integer")
    return int(2 * val)


def parse_su2_label(text: str) -> dsu2.GenericIrrepLabel:
    parts = text.split(",")
    if len(parts) != 2:
        raise InputError(f"SU(2) label must be 'r,n', got {text!r}")
    return dsu2.GenericIrrepLabel(parse_angle(parts[0]), parse_twice(parts[1]))


def parse_tolerances(items: Sequence[str]) -> Dict[str, float]:
    out = {}
    for item in items or ():
        key, _, val = item.rpartition("=")
        try:
            out[key or "default"] = float(val)
        except ValueError:
            raise InputError(f"bad tolerance {item!r}") from None
    return out


def fmt_float(x: float) -> str:
    return "%.17g" % x


# --------------------------------------------------------------------------
# output


@dataclass
class Table:
    columns: List[str]
    rows: List[list] = field(default_factory=list)
    meta: Dict[str, object] = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([fmt_float(v) if isinstance(v, float) else v for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        body = dict(self.meta)
        body["columns"] = self.columns
        body["rows"] = [dict(zip(self.columns, r)) for r in self.rows]
        return json.dumps(body, indent=2) + "\n"


def read_csv(text: str) -> Table:
    """Inverse of :meth:`Table.to_csv`; integers and floats are restored."""
    reader = csv.reader(io.StringIO(text))
    cols = next(reader)
    rows = []
    for raw in reader:
        row = []
        for v in raw:
            try:
                row.append(int(v))
            except ValueError:
                try:
                    row.append(float(v))
                except ValueError:
                    row.append(v)
        rows.append(row)
    return Table(cols, rows)


def emit(table: Table, cfg: RunConfig, stdout) -> None:
    text = table.to_csv() if cfg.fmt == "csv" else table.to_json()
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)


# --------------------------------------------------------------------------
# commands


def _is_su2(cfg: RunConfig) -> bool:
    return cfg.group.upper() in ("SU2", "SU(2)")


def _finite_pairs(cfg: RunConfig, G):
    reps = all_irreps(G)
    if not cfg.labels:
        return [(a, b) for a in reps for b in reps]
    if len(cfg.labels) != 2:
        raise InputError("give exactly two irrep labels, or none for all pairs")
    return [(find_irrep(G, cfg.labels[0]), find_irrep(G, cfg.labels[1]))]


def cmd_verify_hopf(cfg: RunConfig) -> Tuple[int, Table]:
    G = resolve_group(cfg.group)
    rep = verify_hopf(G)
    tol = cfg.tolerance()
    table = Table(["axiom", "defect", "ok"],
                  [[k, float(v), int(v < tol)] for k, v in rep.defects.items()],
                  {"group": G.name, "tolerance": tol})
    return (EXIT_OK if rep.ok(tol) else EXIT_FAIL), table


def _split(label: str) -> Tuple[str, str]:
    cls, _, alpha = label.partition(":")
    return cls, alpha


def cmd_fusion(cfg: RunConfig) -> Tuple[int, Table]:
    G = resolve_group(cfg.group)
    reps = all_irreps(G)
    lookup = {(r.cls.index, r.alpha_index): r for r in reps}
    table = Table(["A", "alpha", "B", "beta", "C", "gamma", "N"], meta={"group": G.name})
    for ra, rb in _finite_pairs(cfg, G):
        N = fusion_multiplicities(ra, rb)
        for key in sorted(N):
            table.rows.append([*_split(ra.label), *_split(rb.label),
                               *_split(lookup[key].label), int(N[key])])
    return EXIT_OK, table


def cmd_char(cfg: RunConfig) -> Tuple[int, Table]:
    G = resolve_group(cfg.group)
    reps = all_irreps(G) if not cfg.labels else [find_irrep(G, s) for s in cfg.labels]
    table = Table(["A", "alpha", "g", "x", "re", "im"], meta={"group": G.name})
    for r in reps:
        chi = r.character_table()
        for g, x in zip(*np.nonzero(np.abs(chi) > cfg.tolerance())):
            table.rows.append([*_split(r.label), G.element_names[g], G.element_names[x],
                               float(chi[g, x].real), float(chi[g, x].imag)])
    return EXIT_OK, table


def _su2_pair(cfg: RunConfig):
    if len(cfg.labels) != 2:
        raise InputError("give two SU(2) labels 'r,n', e.g. --labels pi/2,1/2 2pi/3,1/2")
    return parse_su2_label(cfg.labels[0]), parse_su2_label(cfg.labels[1])


def r3_grid(r1: float, r2: float, points: int) -> np.ndarray:
    """Interior points of the fusion interval."""
    lo, hi = dsu2.fusion_interval(r1, r2)
    return lo + (hi - lo) * (np.arange(points) + 0.5) / points


CGC_COLUMNS = ["2j1", "2m1", "2n1", "r1", "2j2", "2m2", "2n2", "r2",
               "2j", "2m", "2n3", "r3", "re", "im"]


def cmd_cgc(cfg: RunConfig) -> Tuple[int, Table]:
    a, b = _su2_pair(cfg)
    twon3 = a.twon + b.twon if cfg.twon3 is None else cfg.twon3
    table = Table(list(CGC_COLUMNS), meta={"twojmax": cfg.twojmax})
    try:
        dsu2.check_selection(a, b, twon3)
    except dsu2.SelectionRuleError as exc:
        warnings.warn(str(exc))
        table.meta["warning"] = str(exc)
        return EXIT_OK, table
    for r3 in r3_grid(a.r, b.r, cfg.points):
        for tj1 in range(abs(a.twon), cfg.twojmax + 1, 2):
            for tj2 in range(abs(b.twon), cfg.twojmax + 1, 2):
                for tm1 in range(-tj1, tj1 + 1, 2):
                    for tm2 in range(-tj2, tj2 + 1, 2):
                        for tj, tm, c in dsu2.rho_apply(a, b, twon3, float(r3), tj1, tm1, tj2, tm2):
                            table.rows.append([tj1, tm1, a.twon, float(a.r), tj2, tm2, b.twon,
                                               float(b.r), tj, tm, twon3, float(r3),
                                               float(c.real), float(c.imag)])
    return EXIT_OK, table


def cmd_ortho(cfg: RunConfig) -> Tuple[int, Table]:
    a, b = _su2_pair(cfg)
    rep = dsu2.orthogonality_gram(a, b, cfg.twojmax, cfg.order)
    tol = cfg.tolerance()
    table = Table(["2j1", "2m1", "2j2", "2m2", "gram", "expected"],
                  meta={"max_defect": rep.max_defect, "refinement": rep.refinement,
                        "order": cfg.order, "tolerance": tol})
    for (tj1, tm1, tj2, tm2), val in sorted(rep.diagonal().items()):
        table.rows.append([tj1, tm1, tj2, tm2, float(val), 1.0 / ((tj1 + 1) * (tj2 + 1))])
    ok = rep.max_defect < tol
    return (EXIT_OK if ok else EXIT_FAIL), table


def _braid_su2(cfg: RunConfig) -> Tuple[int, Table]:
    a, b = _su2_pair(cfg)
    rng = np.random.default_rng(cfg.seed)
    pts = [(random_element(rng).matrix, random_element(rng).matrix) for _ in range(cfg.points)]
    tol = cfg.tolerance("braid-check-su2")
    order = min(cfg.order, 32)
    table = Table(["state", "2j1", "2m1", "2j2", "2m2", "defect"],
                  meta={"order": order, "tolerance": tol, "F": "random band-limited, a,b <= 1"})
    F = dsu2.random_band_limited(2, rng)
    worst = 0.0
    k = 0
    for tj1 in range(abs(a.twon), 4, 2):
        for tj2 in range(abs(b.twon), 4, 2):
            for tm1, tm2 in ((tj1, -tj2), (-tj1, tj2)):
                Phi = dsu2.wigner_state(tj1, tm1, a.twon, tj2, tm2, b.twon)
                d = dsu2.braid_intertwiner_defect(a, b, F, Phi, pts, order)
                worst = max(worst, d)
                table.rows.append([k, tj1, tm1, tj2, tm2, float(d)])
                k += 1
    table.meta["max_defect"] = worst
    return (EXIT_OK if worst < tol else EXIT_FAIL), table


def cmd_braid_check(cfg: RunConfig) -> Tuple[int, Table]:
    if _is_su2(cfg):
        return _braid_su2(cfg)
    G = resolve_group(cfg.group)
    tol = cfg.tolerance()
    table = Table(["A", "alpha", "B", "beta", "defect"], meta={"group": G.name, "tolerance": tol})
    worst = 0.0
    for ra, rb in _finite_pairs(cfg, G):
        d = braid_intertwiner_defect(ra, rb)
        worst = max(worst, d)
        table.rows.append([*_split(ra.label), *_split(rb.label), float(d)])
    table.meta["max_defect"] = worst
    return (EXIT_OK if worst < tol else EXIT_FAIL), table


HANDLERS = {
    "verify-hopf": cmd_verify_hopf,
    "fusion": cmd_fusion,
    "char": cmd_char,
    "cgc": cmd_cgc,
    "ortho": cmd_ortho,
    "braid-check": cmd_braid_check,
}


# --------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qdouble", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    helps = {
        "verify-hopf": "check the Hopf and quasi-triangular axioms of D(G)",
        "fusion": "fusion table of D(G) from two independent methods",
        "char": "characters of the irreps of D(G)",
        "cgc": "generalized Clebsch-Gordan coefficients of D(SU(2))",
        "ortho": "orthogonality Gram defect of the D(SU(2)) coefficients",
        "braid-check": "braid intertwiner defect (finite G or --group SU2)",
    }
    for name in COMMANDS:
        s = sub.add_parser(name, help=helps[name])
        s.add_argument("--group", default="S3",
                       help="builtin (Z1..Z12, S3, D4, Q8, SU2), file:path or path.json")
        s.add_argument("--labels", nargs="*", default=[],
                       help="irrep labels: 'C1:chi0' for finite G, 'r,n' such as 'pi/2,1/2' for SU(2)")
        s.add_argument("--jmax", default="3/2", help="largest j (half-integer)")
        s.add_argument("--n3", default=None, help="n3 of the fused irrep (default n1+n2)")
        s.add_argument("--points", type=int, default=5, help="number of r3 points or sample points")
        s.add_argument("--order", type=int, default=64, help="quadrature order (>= 8)")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--out", default=None, help="write output here instead of stdout")
        s.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
        s.add_argument("--tol", action="append", default=[],
                       help="tolerance, either a number or key=value; repeatable")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=ns.command, group=ns.group, labels=list(ns.labels), out=ns.out, fmt=ns.fmt,
        order=ns.order, tol=parse_tolerances(ns.tol), twojmax=parse_twice(ns.jmax),
        twon3=None if ns.n3 is None else parse_twice(ns.n3), points=ns.points, seed=ns.seed)


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            code, table = HANDLERS[cfg.command](cfg)
        for w in caught:
            print(f"warning: {w.message}", file=stderr)
    except FusionDisagreement as exc:
        print(f"error: oracle disagreement: {exc}", file=stderr)
        return EXIT_ORACLE
    except (GroupError, InputError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    emit(table, cfg, stdout)
    if code == EXIT_FAIL:
        print("verification failed", file=stderr)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
