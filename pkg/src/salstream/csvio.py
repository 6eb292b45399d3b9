"""CSV ingest and feature-row output.

Input files must start with the frozen header (tuple columns, optionally
plus Label). Malformed lines are counted and skipped; if they ever exceed
1% of the lines seen, the run aborts rather than silently training on a
broken file.
"""

from __future__ import annotations

from .tuples import FIELD_NAMES, LABEL, Block, check_header, parse_line


class InputFormatError(Exception):
    pass


MALFORMED_LIMIT = 0.01


class CsvSource:
    """Streams a netflow CSV as Blocks of at most `batch` rows."""

    def __init__(self, path: str, batch: int = 1000):
        self.path = path
        self.batch = batch
        self.malformed = 0
        self.total = 0
        try:
            self._fh = open(path, "r", encoding="utf-8", newline="")
        except OSError as e:
            raise InputFormatError(f"cannot open {path}: {e.strerror}")
        header = self._fh.readline()
        if not header:
            raise InputFormatError(f"{path}: empty file (missing header)")
        labeled = check_header(header.rstrip("\r\n").split(","))
        if labeled is None:
            raise InputFormatError(
                f"{path}: header does not match the expected column order "
                f"({','.join(FIELD_NAMES)}[,{LABEL}])"
            )
        self.labeled = labeled

    def _check_threshold(self):
        if self.total and self.malformed / self.total > MALFORMED_LIMIT:
            raise InputFormatError(
                f"{self.path}: {self.malformed} of {self.total} lines malformed "
                f"(> {MALFORMED_LIMIT:.0%}); aborting"
            )

    def blocks(self):
        rows = []
        with self._fh as fh:
            for line in fh:
                if not line.strip():
                    continue
                self.total += 1
                row = parse_line(line, self.labeled)
                if row is None:
                    self.malformed += 1
                    continue
                rows.append(row)
                if len(rows) >= self.batch:
                    self._check_threshold()
                    yield Block.from_rows(rows, self.labeled)
                    rows = []
            self._check_threshold()
            if rows:
                yield Block.from_rows(rows, self.labeled)


def write_csv(path: str, blocks) -> int:
    """Write blocks back out as a netflow CSV (used by cmd_split)."""
    n = 0
    first = None
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for b in blocks:
            if first is None:
                first = b
                cols = list(FIELD_NAMES) + ([LABEL] if b.labeled else [])
                fh.write(",".join(cols) + "\n")
            for line in b.lines():
                fh.write(line + "\n")
                n += 1
    return n


class FeatureWriter:
    """Feature-vector CSV: tuple columns, then feature columns (not-ready
    as empty cells), then Label when emitting training rows."""

    def __init__(self, path: str, feature_names: list[str], with_label: bool):
        self.path = path
        self.with_label = with_label
        self._fh = open(path, "w", encoding="utf-8", newline="")
        cols = list(FIELD_NAMES) + feature_names + ([LABEL] if with_label else [])
        self._fh.write(",".join(cols) + "\n")
        self.rows = 0

    def write_row(self, base_cells: list[str], feature_cells: list[str], label: str | None):
        cells = base_cells + feature_cells
        if self.with_label:
            cells.append(label or "unknown")
        self._fh.write(",".join(cells) + "\n")
        self.rows += 1

    def close(self):
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
