"""Counts-file reading/writing and the run configuration.

A counts file is JSON::

    {"schema": "counts/1", "device": "sim", "test": "c",
     "records": [{"pair": [49, 50, 51, 52, 66], "job": 0, "setting": [0, 1],
                  "counts": [n++, n+-, n-+, n--], "shots": 20000,
                  "repetitions": 25}, ...]}

``counts`` must sum to ``shots * repetitions`` (repetitions defaults to 1)
and every (pair, job) must carry all four settings exactly once.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import rng
from .counts import SETTINGS, CountsError, CountsTable

COUNTS_SCHEMA = "counts/1"


class ValidationError(ValueError):
    pass


@dataclass
class CountsFile:
    device: str
    test: str
    tables: list[CountsTable] = field(default_factory=list)

    def to_dict(self) -> dict:
        records = []
        for t in self.tables:
            shots = t.meta.get("shots")
            reps = int(t.meta.get("repetitions", 1))
            for a, b in SETTINGS:
                row = t.counts[a, b]
                rec = {
                    "pair": list(t.pair),
                    "job": t.job,
                    "setting": [a, b],
                    "counts": [int(x) for x in row],
                    "shots": int(shots) if shots is not None else int(row.sum()),
                }
                if shots is not None and reps != 1:
                    rec["repetitions"] = reps
                records.append(rec)
        return {"schema": COUNTS_SCHEMA, "device": self.device, "test": self.test, "records": records}

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n"

    def write(self, path) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def from_dict(cls, data: dict) -> "CountsFile":
        if not isinstance(data, dict):
            raise ValidationError("counts file must be a JSON object")
        if data.get("schema") != COUNTS_SCHEMA:
            raise ValidationError(f"unsupported counts schema {data.get('schema')!r}")
        test = data.get("test", "")
        if test not in ("a", "b", "c"):
            raise ValidationError(f"test must be a, b or c, got {test!r}")
        records = data.get("records")
        if not isinstance(records, list):
            raise ValidationError("'records' must be a list")
        groups: dict[tuple, dict] = {}
        for i, rec in enumerate(records):
            try:
                pair = tuple(int(q) for q in rec["pair"])
                job = rec.get("job")
                job = None if job is None else int(job)
                a, b = (int(s) for s in rec["setting"])
                counts = [int(x) for x in rec["counts"]]
                shots = int(rec["shots"])
                reps = int(rec.get("repetitions", 1))
            except (KeyError, TypeError, ValueError) as exc:
                raise ValidationError(f"record {i}: malformed ({exc})") from exc
            if (a, b) not in SETTINGS:
                raise ValidationError(f"record {i}: setting {[a, b]} not in {{0,1}}^2")
            if len(counts) != 4 or min(counts) < 0:
                raise ValidationError(f"record {i}: counts must be four non-negative integers")
            if shots < 1 or reps < 1:
                raise ValidationError(f"record {i}: shots and repetitions must be positive")
            if sum(counts) != shots * reps:
                raise ValidationError(f"record {i}: counts sum to {sum(counts)}, expected "
                                      f"shots x repetitions = {shots * reps}")
            key = (pair, job)
            g = groups.setdefault(key, {"rows": {}, "shots": shots, "reps": reps, "first": i})
            if (a, b) in g["rows"]:
                raise ValidationError(f"record {i}: duplicate (pair {list(pair)}, job {job}, "
                                      f"setting {[a, b]})")
            if (shots, reps) != (g["shots"], g["reps"]):
                g["shots"] = g["reps"] = None
            g["rows"][(a, b)] = counts
        tables = []
        for (pair, job), g in groups.items():
            missing = [s for s in SETTINGS if s not in g["rows"]]
            if missing:
                raise ValidationError(f"record {g['first']}: pair {list(pair)} job {job} lacks "
                                      f"settings {[list(s) for s in missing]}")
            arr = np.zeros((2, 2, 4), dtype=np.int64)
            for (a, b), row in g["rows"].items():
                arr[a, b] = row
            meta = {}
            if g["shots"] is not None:
                meta = {"shots": g["shots"], "repetitions": g["reps"]}
            try:
                tables.append(CountsTable(arr, pair=pair, test=test, job=job, meta=meta))
            except CountsError as exc:
                raise ValidationError(f"record {g['first']}: {exc}") from exc
        return cls(str(data.get("device", "")), test, tables)

    @classmethod
    def loads(cls, text: str) -> "CountsFile":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"not valid JSON: {exc}") from exc
        return cls.from_dict(data)

    @classmethod
    def read(cls, path) -> "CountsFile":
        return cls.loads(Path(path).read_text())


def parse_counts(path) -> list[CountsTable]:
    """Validated tables, one per (pair, job), in file order."""
    return CountsFile.read(path).tables


def tally_memory(memory, clbit_a: int, clbit_b: int) -> list[int]:
    """Turn per-shot bitstrings into [n++, n+-, n-+, n--].

    Bitstrings are little-endian (the rightmost character is classical bit
    0), as returned by common cloud SDKs; '0' reads as + and '1' as -.
    """
    out = [0, 0, 0, 0]
    for shot in memory:
        bits = shot.replace(" ", "")
        a = bits[-1 - clbit_a]
        b = bits[-1 - clbit_b]
        out[2 * (a == "1") + (b == "1")] += 1
    return out


@dataclass
class RunConfig:
    plan_path: Path
    noise_path: Path | None
    seed: int
    output: Path
    workers: int = 1

    def __post_init__(self):
        self.plan_path = Path(self.plan_path)
        self.noise_path = None if self.noise_path is None else Path(self.noise_path)
        self.output = Path(self.output)

    def validate(self) -> None:
        for p in (self.plan_path, self.noise_path):
            if p is not None and not p.is_file():
                raise ValidationError(f"{p}: no such file")
        try:
            rng.check_seed(self.seed)
        except ValueError as exc:
            raise ValidationError(str(exc)) from exc
        if self.workers < 1:
            raise ValidationError("workers must be at least 1")
        parent = self.output.parent
        if str(parent) and not parent.exists():
            raise ValidationError(f"{parent}: output directory does not exist")
        if not os.access(parent if str(parent) else ".", os.W_OK):
            raise ValidationError(f"{parent}: not writable")
