"""Bell-CHSH and no-signaling tests on pairs of superconducting qubits.

Exact density-matrix simulation of the test circuits, seeded Monte Carlo
sampling of counts, and the statistics (CHSH, marginal deltas, sigmas,
p-values with look-elsewhere correction) applied to simulated or measured
counts alike.
"""

from .counts import CountsTable, sum_tables
from .datafiles import CountsFile, parse_counts
from .plan import Circuit, ExperimentPlan, build_circuit, make_plan
from .simulator import IDEAL, Injection, NoiseConfig, outcome_distribution, sample_counts, simulate_plan
from .stats import bonferroni, chsh, delta_p, erfc, marginals, nosig_report, p_value, per_job
from .topology import CouplingGraph, PairRecord, pairs_at_distance, select_disjoint

__version__ = "0.1.0"

__all__ = [
    "Circuit", "CountsFile", "CountsTable", "CouplingGraph", "ExperimentPlan", "IDEAL",
    "Injection", "NoiseConfig", "PairRecord", "bonferroni", "build_circuit", "chsh",
    "delta_p", "erfc", "make_plan", "marginals", "nosig_report", "outcome_distribution",
    "p_value", "pairs_at_distance", "parse_counts", "per_job", "sample_counts",
    "select_disjoint", "simulate_plan", "sum_tables",
]
