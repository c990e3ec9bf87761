"""CPLEX-LP style export of a CoverModel and import of external solutions."""
from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .model import CoverModel

_WRAP = 8


class LPFormatError(ValueError):
    pass


def _terms(coefs, idx) -> list[str]:
    out = []
    for c, i in zip(coefs, idx):
        if c == 1.0:
            out.append(f"x{i}")
        else:
            out.append(f"{c!r} x{i}")
    return out


def _emit_row(lines: list[str], name: str, terms: list[str], sense: str, rhs) -> None:
    if not terms:
        terms = ["0 x0"]
    head = f" {name}: "
    for start in range(0, len(terms), _WRAP):
        chunk = " + ".join(terms[start:start + _WRAP])
        if start == 0:
            line = head + chunk
        else:
            line = "   + " + chunk
        lines.append(line)
    lines[-1] += f" {sense} {rhs}"


def write_lp(model: CoverModel) -> str:
    """Deterministic LP text: variables ``x0..x{k-1}``, rows ``cov*``, ``card``, ``sep*``."""
    lines = ["\\ disk multi-cover model", f"\\ variables {model.n_vars}, points {model.n_points}, m {model.m}"]
    if model.heuristic_note:
        lines.append("\\ start solution (x y r):")
        for d in model.heuristic_note:
            lines.append(f"\\   {d.center.x!r} {d.center.y!r} {d.radius!r}")
    lines.append("Minimize")
    nz = np.nonzero(model.costs)[0]
    _emit_row(lines, "obj", _terms([float(model.costs[i]) for i in nz], nz), "", "")
    lines[-1] = lines[-1].rstrip()
    lines.append("Subject To")
    A = model.cover_matrix.tocsr()
    for j in range(model.n_points):
        idx = sorted(A.indices[A.indptr[j]:A.indptr[j + 1]])
        _emit_row(lines, f"cov{j}", [f"x{i}" for i in idx], ">=", int(model.kappa[j]))
    _emit_row(lines, "card", [f"x{i}" for i in range(model.n_vars)], "<=", model.m)
    for r, (_, idx) in enumerate(model.sep_rows):
        _emit_row(lines, f"sep{r}", [f"x{i}" for i in idx], "<=", 1)
    lines.append("Bounds")
    for i in range(model.n_vars):
        lines.append(f" 0 <= x{i} <= {model.upper}")
    lines.append("Binary" if model.binary else "General")
    names = [f"x{i}" for i in range(model.n_vars)]
    for start in range(0, len(names), _WRAP):
        lines.append(" " + " ".join(names[start:start + _WRAP]))
    lines.append("End")
    return "\n".join(lines) + "\n"


def export_lp(model: CoverModel, path) -> None:
    Path(path).write_text(write_lp(model), encoding="utf-8")


_LINE = re.compile(r"^\s*(x\d+)\s*(?:=|\s)\s*([-+0-9.eE]+)\s*$")


def parse_solution(text: str, model: CoverModel) -> dict[int, int]:
    """Parse ``name=value`` lines (``#`` comments allowed) into candidate counts."""
    counts: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        mt = _LINE.match(line)
        if not mt:
            raise LPFormatError(f"line {lineno}: expected 'xN = value', got {raw.strip()!r}")
        name, val = mt.groups()
        i = int(name[1:])
        if i >= model.n_vars:
            raise LPFormatError(f"line {lineno}: unknown variable {name}")
        try:
            v = float(val)
        except ValueError:
            raise LPFormatError(f"line {lineno}: bad value {val!r}") from None
        iv = int(round(v))
        if abs(v - iv) > 1e-6:
            raise LPFormatError(f"line {lineno}: {name} = {val} is not integral")
        if i in counts:
            raise LPFormatError(f"line {lineno}: duplicate variable {name}")
        if iv:
            counts[i] = iv
    bad = model.violated_rows(counts)
    if bad:
        raise LPFormatError(f"assignment violates row {bad[0]}" + (f" (+{len(bad) - 1} more)" if len(bad) > 1 else ""))
    return counts


def import_solution(path, model: CoverModel) -> dict[int, int]:
    return parse_solution(Path(path).read_text(encoding="utf-8"), model)
