"""Test circuits (entangled Bell test and idle tests) and randomized job plans.

Three test kinds are supported:

    a  entangled Bell test between next neighbours A-S-B (distance 2)
    b  idle test (measurement pulses only) between next neighbours
    c  idle test between fourth neighbours (distance 4)

A job runs ``4 * repetitions`` circuits in a shuffled order, each circuit
``shots`` times.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from . import rng
from .counts import SETTINGS
from .topology import PairRecord
from .transpiler import Gate, GateSeq

ALPHAS = (0.0, math.pi / 2)
BETAS = (-math.pi / 4, math.pi / 4)

TEST_DISTANCE = {"a": 2, "b": 2, "c": 4}
PLAN_SCHEMA = "plan/1"


class PlanError(ValueError):
    pass


@dataclass(frozen=True)
class Circuit:
    """One test circuit on local qubit indices.

    ``roles`` maps role names ("A", "S", "B") to local indices; ``prep`` is
    the entangling block, ``measure`` the setting-dependent pulses right
    before readout of A and B.
    """

    test: str
    setting: tuple[int, int]
    roles: dict
    prep: GateSeq
    measure: GateSeq

    @property
    def nqubits(self) -> int:
        return len(self.roles)

    @property
    def measured(self) -> tuple[int, int]:
        return self.roles["A"], self.roles["B"]

    @property
    def gates(self) -> GateSeq:
        return GateSeq(self.prep.gates + self.measure.gates)

    def role_of(self, q: int) -> str:
        for name, idx in self.roles.items():
            if idx == q:
                return name
        raise KeyError(q)


def _check_test(test: str) -> str:
    if test not in TEST_DISTANCE:
        raise PlanError(f"test must be one of a, b, c; got {test!r}")
    return test


def build_circuit(test: str, setting, alphas=ALPHAS, betas=BETAS) -> Circuit:
    _check_test(test)
    a, b = (int(s) for s in setting)
    if (a, b) not in SETTINGS:
        raise PlanError(f"setting must be in {{0,1}}^2, got {setting!r}")
    if test == "a":
        A, S, B = 0, 1, 2
        roles = {"A": A, "S": S, "B": B}
        prep = GateSeq((
            Gate("S", (S,)),
            Gate("CNOT_down", (S, B)),
            # swap S onto A (A starts in |0>)
            Gate("CNOT_down", (S, A)),
            Gate("CNOT_down", (A, S)),
        ))
    else:
        A, B = 0, 1
        roles = {"A": A, "B": B}
        prep = GateSeq()
    measure = GateSeq((
        Gate("S_theta", (A,), (alphas[a],)),
        Gate("S_theta", (B,), (betas[b],)),
    ))
    return Circuit(test, (a, b), roles, prep, measure)


@dataclass
class ExperimentPlan:
    test: str
    repetitions: int
    shots: int
    jobs: int
    seed: int
    order: list[list[tuple[int, int]]]
    pairs: list[PairRecord] = field(default_factory=list)
    alphas: tuple[float, float] = ALPHAS
    betas: tuple[float, float] = BETAS
    device: str = ""

    def __post_init__(self):
        _check_test(self.test)
        for name in ("repetitions", "shots", "jobs"):
            if int(getattr(self, name)) < 1:
                raise PlanError(f"{name} must be at least 1")
        self.seed = rng.check_seed(self.seed)
        self.order = [[tuple(int(x) for x in s) for s in job] for job in self.order]
        if len(self.order) != self.jobs:
            raise PlanError(f"plan lists {len(self.order)} job orders for {self.jobs} jobs")
        for j, job in enumerate(self.order):
            if sorted(job) != sorted(SETTINGS * self.repetitions):
                raise PlanError(f"job {j}: order is not a permutation of {self.repetitions} copies "
                                "of each setting")
        self.alphas = tuple(float(x) for x in self.alphas)
        self.betas = tuple(float(x) for x in self.betas)

    @property
    def circuits_per_job(self) -> int:
        return 4 * self.repetitions

    @property
    def trials_per_setting(self) -> int:
        return self.jobs * self.repetitions * self.shots

    def circuit(self, setting) -> Circuit:
        return build_circuit(self.test, setting, self.alphas, self.betas)

    def to_dict(self) -> dict:
        return {
            "schema": PLAN_SCHEMA,
            "test": self.test,
            "device": self.device,
            "alphas": list(self.alphas),
            "betas": list(self.betas),
            "repetitions": self.repetitions,
            "shots": self.shots,
            "jobs": self.jobs,
            "seed": self.seed,
            "pairs": [p.to_dict() for p in self.pairs],
            "order": [[list(s) for s in job] for job in self.order],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentPlan":
        if d.get("schema") != PLAN_SCHEMA:
            raise PlanError(f"unsupported plan schema {d.get('schema')!r}")
        try:
            return cls(
                test=d["test"], repetitions=int(d["repetitions"]), shots=int(d["shots"]),
                jobs=int(d["jobs"]), seed=d["seed"], order=d["order"],
                pairs=[PairRecord.from_dict(p) for p in d.get("pairs", [])],
                alphas=tuple(d.get("alphas", ALPHAS)), betas=tuple(d.get("betas", BETAS)),
                device=d.get("device", ""),
            )
        except (KeyError, TypeError) as exc:
            raise PlanError(f"malformed plan: {exc}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"

    @classmethod
    def loads(cls, text: str) -> "ExperimentPlan":
        return cls.from_dict(json.loads(text))


def shuffled_order(repetitions: int, seed: int, job: int) -> list[tuple[int, int]]:
    """Fisher-Yates shuffle of ``repetitions`` copies of the four settings."""
    settings = list(SETTINGS) * repetitions
    gen = rng.stream(seed, rng.PLAN_SHUFFLE, job)
    perm = gen.permutation(len(settings))
    return [settings[i] for i in perm]


def make_plan(test: str, repetitions: int = 25, shots: int = 20000, jobs: int = 60,
              seed: int = 0, pairs=(), device: str = "") -> ExperimentPlan:
    _check_test(test)
    if repetitions < 1 or shots < 1 or jobs < 1:
        raise PlanError("repetitions, shots and jobs must all be at least 1")
    pairs = list(pairs)
    for p in pairs:
        if p.distance != TEST_DISTANCE[test]:
            raise PlanError(f"pair {p.label()} has distance {p.distance}, test {test} "
                            f"needs {TEST_DISTANCE[test]}")
    order = [shuffled_order(repetitions, seed, j) for j in range(jobs)]
    return ExperimentPlan(test, repetitions, shots, jobs, seed, order, pairs, device=device)

