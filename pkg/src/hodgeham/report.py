"""Report objects shared by every command: cells, checks, JSON/CSV, diff."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

CELL_KEYS = ("n", "i", "degree", "dim_chain", "dim_cycle", "dim_boundary", "dim_homology")


@dataclass
class Check:
    name: str
    passed: bool
    witness: str | None = None
    detail: str | None = None  # printed by the CLI, not serialized

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def as_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "witness": self.witness}


def check_from_witness(name: str, witness: str | None, detail: str | None = None) -> Check:
    """A check that passes exactly when no witness was found."""
    return Check(name, witness is None, witness, detail)


@dataclass
class HodgeReport:
    k: int
    module: str
    cells: list = field(default_factory=list)  # dicts with CELL_KEYS
    checks: list = field(default_factory=list)  # Check

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def sorted_cells(self) -> list:
        return sorted(self.cells, key=lambda c: (c["n"], c["i"], c["degree"]))

    def as_dict(self) -> dict:
        return {
            "algebra": {"k": self.k, "module": self.module},
            "cells": [{key: c[key] for key in CELL_KEYS} for c in self.sorted_cells()],
            "checks": [c.as_dict() for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CELL_KEYS)
        for c in self.sorted_cells():
            row = [c[key] for key in CELL_KEYS]
            row[2] = " ".join(map(str, c["degree"]))
            w.writerow(row)
        return buf.getvalue()

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        raise ValueError(f"unknown format {fmt!r}")


class SchemaError(ValueError):
    pass


def _require(cond, msg):
    if not cond:
        raise SchemaError(msg)


def validate_report(data) -> None:
    """Raise :class:`SchemaError` unless ``data`` is a report dictionary."""
    _require(isinstance(data, dict), "report is not a JSON object")
    _require(set(data) == {"algebra", "cells", "checks"}, "top-level keys differ from the report schema")
    alg = data["algebra"]
    _require(isinstance(alg, dict) and set(alg) == {"k", "module"}, "bad algebra entry")
    _require(isinstance(data["cells"], list), "cells must be a list")
    for c in data["cells"]:
        _require(isinstance(c, dict) and set(c) == set(CELL_KEYS), "bad cell entry")
        _require(isinstance(c["degree"], list), "cell degree must be a list")
    _require(isinstance(data["checks"], list), "checks must be a list")
    for c in data["checks"]:
        _require(isinstance(c, dict) and set(c) == {"name", "status", "witness"}, "bad check entry")
        _require(c["status"] in ("pass", "fail"), "check status must be pass or fail")


def load_report(path: str) -> dict:
    """Read and validate a JSON report.  Raises OSError, ValueError or SchemaError."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    validate_report(data)
    return data


def _cell_id(c: dict) -> str:
    return f"n={c['n']},i={c['i']},N={c['degree']}"


def diff_reports(a: dict, b: dict) -> list[str]:
    """Human-readable differences between two validated reports (empty if equal)."""
    out = []
    if a["algebra"] != b["algebra"]:
        out.append(f"algebra differs: {a['algebra']} vs {b['algebra']}")
    cells_a = {_cell_id(c): c for c in a["cells"]}
    cells_b = {_cell_id(c): c for c in b["cells"]}
    for cid in sorted(set(cells_a) | set(cells_b)):
        ca, cb = cells_a.get(cid), cells_b.get(cid)
        if ca is None or cb is None:
            out.append(f"cell {cid} only in {'second' if ca is None else 'first'} report")
        elif ca != cb:
            fields = [k for k in CELL_KEYS if ca[k] != cb[k]]
            out.append(f"cell {cid} differs in {', '.join(fields)}")
    checks_a = {c["name"]: c for c in a["checks"]}
    checks_b = {c["name"]: c for c in b["checks"]}
    for name in sorted(set(checks_a) | set(checks_b)):
        if checks_a.get(name) != checks_b.get(name):
            out.append(f"check {name} differs")
    return out
