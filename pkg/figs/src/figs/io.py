"""Readers for the sweep CSV and norm-detail JSON formats.

Every input starts with `# key=value` comment lines carrying the producer's
effective settings; the first of them must pin schema=1.  Rendering trusts
the file contents completely and never recomputes model quantities, so a
missing column or an empty table is a hard error rather than a guess.
"""

import json
from dataclasses import dataclass

SCHEMA = "1"


class FigsError(Exception):
    """Unusable input: wrong schema, missing columns, or no data."""


@dataclass(frozen=True)
class Table:
    meta: dict
    columns: list
    rows: list

    def column(self, name: str) -> list[str]:
        try:
            k = self.columns.index(name)
        except ValueError:
            raise FigsError(f"missing column '{name}' (have {self.columns})") from None
        return [r[k] for r in self.rows]

    def floats(self, name: str) -> list[float]:
        return [float(v) for v in self.column(name)]


def read_table(path) -> Table:
    meta = {}
    columns = None
    rows = []
    try:
        fh = open(path)
    except OSError as exc:
        raise FigsError(f"cannot read {path}: {exc.strerror}")
    with fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line.lstrip("# ").partition("=")
                meta[key] = value
                continue
            if columns is None:
                columns = line.split(",")
            else:
                rows.append(line.split(","))
    if meta.get("schema") != SCHEMA:
        raise FigsError(f"{path}: unsupported schema {meta.get('schema')!r}")
    if columns is None or not rows:
        raise FigsError(f"{path}: no data rows")
    short = [r for r in rows if len(r) != len(columns)]
    if short:
        raise FigsError(f"{path}: malformed row {short[0]}")
    return Table(meta, columns, rows)


def read_detail(path) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise FigsError(f"cannot read {path}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise FigsError(f"{path}: not valid JSON ({exc})")
    if not isinstance(doc, dict) or doc.get("schema") != 1:
        raise FigsError(f"{path}: unsupported schema")
    for key in ("label", "rho", "phi", "params"):
        if key not in doc:
            raise FigsError(f"{path}: missing field '{key}'")
    if "z" not in doc["params"]:
        raise FigsError(f"{path}: missing field 'params.z'")
    return doc
