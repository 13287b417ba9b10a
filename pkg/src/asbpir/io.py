"""Matrix files: a line-oriented text format and a JSON mirror.

Text format::

    # optional comments; "# name: <label>" sets the name
    q p e k n
    row 1 (n integers)
    ...
    row k

Entries are element encodings in ``[0, q)``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from .field import make_field
from .linalg import GeneratorMatrix


class MatrixFileError(ValueError):
    pass


@dataclass(frozen=True)
class MatrixFile:
    p: int
    e: int
    k: int
    n: int
    entries: tuple[int, ...]  # row-major
    name: str = ""

    @property
    def q(self) -> int:
        return self.p**self.e

    @classmethod
    def from_matrix(cls, g: GeneratorMatrix, name: str = "") -> MatrixFile:
        return cls(g.field.p, g.field.e, g.rows, g.cols, tuple(int(x) for x in g.entries.ravel()), name)

    def matrix(self) -> GeneratorMatrix:
        """Validate and build the generator matrix (rank ``k`` is checked)."""
        if len(self.entries) != self.k * self.n:
            raise MatrixFileError(f"expected {self.k * self.n} entries, found {len(self.entries)}")
        if any(not 0 <= x < self.q for x in self.entries):
            raise MatrixFileError(f"entries must lie in [0, {self.q})")
        rows = [list(self.entries[i * self.n : (i + 1) * self.n]) for i in range(self.k)]
        try:
            return GeneratorMatrix(rows, make_field(self.p, self.e))
        except ValueError as exc:
            raise MatrixFileError(str(exc)) from exc

    def to_text(self) -> str:
        lines = []
        if self.name:
            lines.append(f"# name: {self.name}")
        lines.append(f"{self.q} {self.p} {self.e} {self.k} {self.n}")
        for i in range(self.k):
            lines.append(" ".join(str(x) for x in self.entries[i * self.n : (i + 1) * self.n]))
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "field": {"p": self.p, "e": self.e},
            "k": self.k,
            "n": self.n,
            "entries": list(self.entries),
            "name": self.name,
        }

    @classmethod
    def from_json(cls, d: dict) -> MatrixFile:
        try:
            return cls(
                int(d["field"]["p"]),
                int(d["field"]["e"]),
                int(d["k"]),
                int(d["n"]),
                tuple(int(x) for x in d["entries"]),
                str(d.get("name", "")),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise MatrixFileError(f"malformed JSON matrix: {exc}") from exc

    @classmethod
    def from_text(cls, text: str) -> MatrixFile:
        name = ""
        rows = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("name:"):
                    name = body[5:].strip()
                continue
            try:
                rows.append([int(x) for x in line.split()])
            except ValueError as exc:
                raise MatrixFileError(f"non-integer token in line {raw!r}") from exc
        if not rows or len(rows[0]) != 5:
            raise MatrixFileError("missing header 'q p e k n'")
        q, p, e, k, n = rows[0]
        if p**e != q:
            raise MatrixFileError(f"header q = {q} differs from p^e = {p**e}")
        body = rows[1:]
        if len(body) != k or any(len(r) != n for r in body):
            raise MatrixFileError(f"expected {k} rows of {n} entries")
        return cls(p, e, k, n, tuple(x for r in body for x in r), name)


def read_matrix_file(path: str | os.PathLike) -> MatrixFile:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json" or text.lstrip().startswith("{"):
        try:
            return MatrixFile.from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise MatrixFileError(f"invalid JSON: {exc}") from exc
    return MatrixFile.from_text(text)


def read_matrix(path: str | os.PathLike) -> GeneratorMatrix:
    return read_matrix_file(path).matrix()


def write_matrix(path: str | os.PathLike, g: GeneratorMatrix, name: str = "", fmt: str | None = None) -> None:
    """Write ``g``; the format follows ``fmt`` or the file suffix (``.json`` selects JSON)."""
    path = Path(path)
    mf = MatrixFile.from_matrix(g, name)
    fmt = fmt or ("json" if path.suffix == ".json" else "text")
    if fmt == "json":
        path.write_text(json.dumps(mf.to_json(), indent=1) + "\n")
    else:
        path.write_text(mf.to_text())
