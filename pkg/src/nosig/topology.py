"""Coupling maps, qubit pairs at a given distance and disjoint pair selection."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path


class TopologyError(ValueError):
    pass


@dataclass
class CouplingGraph:
    qubits: list[int]
    edges: list[tuple[int, int]]
    freqs_mhz: dict[int, float] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        self.qubits = sorted(int(q) for q in self.qubits)
        known = set(self.qubits)
        if len(known) != len(self.qubits):
            raise TopologyError("duplicate qubit ids")
        edges = set()
        for a, b in self.edges:
            a, b = int(a), int(b)
            if a == b:
                raise TopologyError(f"self-loop on qubit {a}")
            if a not in known or b not in known:
                raise TopologyError(f"edge ({a}, {b}) references an unknown qubit")
            edges.add((min(a, b), max(a, b)))
        self.edges = sorted(edges)
        for q, f in self.freqs_mhz.items():
            if q not in known:
                raise TopologyError(f"frequency given for unknown qubit {q}")
            if not f > 0:
                raise TopologyError(f"frequency of qubit {q} must be positive")
        self._adj = {q: [] for q in self.qubits}
        for a, b in self.edges:
            self._adj[a].append(b)
            self._adj[b].append(a)
        for q in self._adj:
            self._adj[q].sort()

    def neighbors(self, q: int) -> list[int]:
        return self._adj[q]

    def distances_from(self, source: int) -> dict[int, int]:
        dist = {source: 0}
        queue = deque([source])
        while queue:
            q = queue.popleft()
            for n in self._adj[q]:
                if n not in dist:
                    dist[n] = dist[q] + 1
                    queue.append(n)
        return dist

    @classmethod
    def from_dict(cls, data: dict) -> "CouplingGraph":
        try:
            qubits, freqs = [], {}
            for entry in data["qubits"]:
                if isinstance(entry, dict):
                    qubits.append(int(entry["id"]))
                    if entry.get("f_mhz") is not None:
                        freqs[int(entry["id"])] = float(entry["f_mhz"])
                else:
                    qubits.append(int(entry))
            edges = [tuple(e) for e in data["edges"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise TopologyError(f"malformed coupling map: {exc}") from exc
        for e in edges:
            if len(e) != 2:
                raise TopologyError(f"edge {list(e)} must have two endpoints")
        return cls(qubits, edges, freqs, name=str(data.get("name", "")))

    @classmethod
    def load(cls, path) -> "CouplingGraph":
        with open(path) as fh:
            graph = cls.from_dict(json.load(fh))
        if not graph.name:
            graph.name = Path(path).stem
        return graph

    def to_dict(self) -> dict:
        qubits = []
        for q in self.qubits:
            entry = {"id": q}
            if q in self.freqs_mhz:
                entry["f_mhz"] = self.freqs_mhz[q]
            qubits.append(entry)
        out = {"qubits": qubits, "edges": [list(e) for e in self.edges]}
        if self.name:
            out["name"] = self.name
        return out


@dataclass(frozen=True)
class PairRecord:
    a: int
    b: int
    path: tuple[int, ...]
    delta_f_mhz: float | None = None

    @property
    def distance(self) -> int:
        return len(self.path) - 1

    @property
    def source(self) -> int | None:
        """Middle qubit of a distance-2 path (the entangling source)."""
        return self.path[1] if len(self.path) == 3 else None

    def label(self) -> str:
        return "-".join(str(q) for q in self.path) if self.distance == 2 else f"{self.a}-{self.b}"

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "path": list(self.path),
                "distance": self.distance, "delta_f_mhz": self.delta_f_mhz}

    @classmethod
    def from_dict(cls, d: dict) -> "PairRecord":
        rec = cls(int(d["a"]), int(d["b"]), tuple(int(q) for q in d["path"]), d.get("delta_f_mhz"))
        if rec.path[0] != rec.a or rec.path[-1] != rec.b:
            raise TopologyError(f"path {rec.path} does not join {rec.a} and {rec.b}")
        if "distance" in d and int(d["distance"]) != rec.distance:
            raise TopologyError(f"distance {d['distance']} disagrees with path {rec.path}")
        return rec


def _smallest_path(graph: CouplingGraph, a: int, b: int, dist_to_b: dict[int, int]) -> tuple[int, ...]:
    # walk towards b, always taking the smallest id that stays on a shortest path
    path = [a]
    q = a
    while q != b:
        q = min(n for n in graph.neighbors(q) if dist_to_b.get(n, -1) == dist_to_b[q] - 1)
        path.append(q)
    return tuple(path)


def pairs_at_distance(graph: CouplingGraph, d: int) -> list[PairRecord]:
    """All unordered pairs (a < b) at shortest-path distance exactly ``d``."""
    if not graph.qubits:
        raise TopologyError("empty coupling graph")
    if d < 1:
        raise TopologyError("distance must be at least 1")
    out = []
    for b in graph.qubits:
        dist_to_b = graph.distances_from(b)
        for a in graph.qubits:
            if a < b and dist_to_b.get(a) == d:
                df = None
                if a in graph.freqs_mhz and b in graph.freqs_mhz:
                    df = graph.freqs_mhz[a] - graph.freqs_mhz[b]
                out.append(PairRecord(a, b, _smallest_path(graph, a, b, dist_to_b), df))
    out.sort(key=lambda p: (p.a, p.b))
    return out


def select_disjoint(pairs, limit: int | None = None) -> list[PairRecord]:
    """Greedy qubit-disjoint subset, scanning by (path length, min id, path).

    The result is maximal by inclusion (unless ``limit`` cuts it short), not
    maximum; a matching solver can replace this without changing callers.
    """
    used: set[int] = set()
    chosen = []
    for p in sorted(pairs, key=lambda p: (len(p.path), min(p.a, p.b), p.path)):
        if limit is not None and len(chosen) >= limit:
            break
        if used.isdisjoint(p.path):
            chosen.append(p)
            used.update(p.path)
    return chosen
