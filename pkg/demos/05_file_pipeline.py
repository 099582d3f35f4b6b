"""
Plan, simulate, analyze
=======================

The same pipeline as the command line tool, driven from Python: choose
disjoint pairs on a coupling map, shuffle the circuits, sample counts,
write and re-read the counts file, and print the results table.
"""

import json
import tempfile
from pathlib import Path

from nosig.datafiles import CountsFile
from nosig.plan import make_plan
from nosig.report import build_report, render_table
from nosig.simulator import Injection, NoiseConfig, simulate_plan
from nosig.topology import CouplingGraph, pairs_at_distance, select_disjoint

here = Path(__file__).parent
graph = CouplingGraph.load(here / "data" / "strip12.json")
pairs = select_disjoint(pairs_at_distance(graph, 2))
print("pairs:", [p.label() for p in pairs])

plan = make_plan("a", repetitions=25, shots=4000, jobs=20, seed=2024, pairs=pairs, device=graph.name)
noise = NoiseConfig(depolarizing={"S": 0.03}, injections=(Injection(4e-3, target="A"),))
tables = simulate_plan(plan, noise, seed=7)

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "counts.json"
    CountsFile(graph.name, "a", tables).write(path)
    print(f"counts file: {path.stat().st_size} bytes, {len(json.loads(path.read_text())['records'])} records")
    again = CountsFile.read(path)

report = build_report(again.tables, freqs_mhz=graph.freqs_mhz, device=graph.name)
print()
print(render_table(report))
