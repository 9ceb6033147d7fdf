"""Versioned CSV formats for profiles, shoreline records and traces.

A file starts with ``#`` comment lines holding ``key: value`` metadata,
followed by one header row of column names and then numeric rows::

    # schema: runup-record/1
    # units: t=dimensionless, x0=dimensionless, v0=dimensionless
    t,x0,v0
    0.0,0.0,0.0
    ...

The ``schema`` line is optional on input (the header row decides the
format) but is always written.
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import SchemaError

SCHEMAS = {
    "profile": ("runup-profile/1", ("x", "eta0"), ()),
    "record": ("runup-record/1", ("t", "x0"), ("v0",)),
    "trace": ("runup-trace/1", ("tau", "Psi"), ("V",)),
    "field": ("runup-field/1", ("sigma", "tau", "psi", "phi"), ()),
}

DIMENSIONLESS = "dimensionless"


@dataclass
class Table:
    kind: str
    columns: dict[str, np.ndarray]
    meta: dict[str, str] = field(default_factory=dict)

    def __getitem__(self, name):
        return self.columns[name]

    def get(self, name, default=None):
        return self.columns.get(name, default)

    @property
    def units(self) -> dict[str, str]:
        return parse_units(self.meta.get("units", ""))

    @property
    def dimensional(self) -> bool:
        return any(u != DIMENSIONLESS for u in self.units.values())


def parse_units(text: str) -> dict[str, str]:
    out = {}
    for part in text.split(","):
        if "=" in part:
            k, v = part.split("=", 1)
            out[k.strip()] = v.strip()
    return out


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def read_table(path, kind: str) -> Table:
    """Parse and validate a CSV file of the given ``kind``.

    Raises
    ------
    SchemaError
        With the offending line number for any structural or numeric problem.
    """
    schema, required, optional = SCHEMAS[kind]
    path = Path(path)
    meta: dict[str, str] = {}
    header = None
    rows: list[list[float]] = []
    linenos: list[int] = []
    with open(path, newline="") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped:
                continue
            if stripped.startswith("#"):
                body = stripped.lstrip("#").strip()
                if ":" in body:
                    k, v = body.split(":", 1)
                    meta[k.strip().lower()] = v.strip()
                continue
            cells = next(csv.reader([stripped]))
            cells = [c.strip() for c in cells]
            if header is None:
                if "schema" in meta and meta["schema"] != schema:
                    raise SchemaError(
                        f"expected schema {schema}, file declares {meta['schema']}", path, lineno
                    )
                missing = [c for c in required if c not in cells]
                unknown = [c for c in cells if c not in required + optional]
                if missing or unknown:
                    raise SchemaError(
                        f"header {cells} does not match {kind} columns "
                        f"{list(required)} (+ optional {list(optional)})", path, lineno,
                    )
                if len(set(cells)) != len(cells):
                    raise SchemaError("duplicate column names", path, lineno)
                header = cells
                continue
            if len(cells) != len(header):
                raise SchemaError(
                    f"expected {len(header)} fields, found {len(cells)}", path, lineno
                )
            try:
                vals = [float(c) for c in cells]
            except ValueError:
                raise SchemaError(f"non-numeric field in {cells}", path, lineno) from None
            if not all(np.isfinite(vals)):
                raise SchemaError("non-finite value", path, lineno)
            rows.append(vals)
            linenos.append(lineno)
    if header is None:
        raise SchemaError("no header row found", path)
    if len(rows) < 2:
        raise SchemaError("need at least two data rows", path)
    data = np.array(rows)
    cols = {name: data[:, i] for i, name in enumerate(header)}
    axis = required[0]
    if kind != "field":
        bad = np.flatnonzero(np.diff(cols[axis]) <= 0)
        if bad.size:
            raise SchemaError(f"{axis} must be strictly increasing", path, linenos[bad[0] + 1])
    return Table(kind, cols, meta)


def write_table(path, kind: str, columns: dict, units: dict | None = None, extra_meta=None):
    """Write columns (in the canonical order of ``kind``) with schema and units."""
    schema, required, optional = SCHEMAS[kind]
    names = [c for c in required + optional if c in columns and columns[c] is not None]
    units = units or {}
    unit_line = ", ".join(f"{n}={units.get(n, DIMENSIONLESS)}" for n in names)
    arrays = [np.asarray(columns[n], dtype=float) for n in names]
    with open(path, "w", newline="") as fh:
        fh.write(f"# schema: {schema}\n# units: {unit_line}\n")
        for k, v in (extra_meta or {}).items():
            fh.write(f"# {k}: {v}\n")
        w = csv.writer(fh)
        w.writerow(names)
        for row in zip(*arrays):
            w.writerow([repr(float(v)) for v in row])
