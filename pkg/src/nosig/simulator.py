"""Density-matrix simulation of the test circuits and seeded count sampling.

Noise model (all parameters keyed by qubit role "A", "S", "B"):

* after every gate each touched qubit goes through a depolarizing channel
  and then amplitude damping;
* a ZZ phase exp(-i zz/2 Z_A Z_B) acts on the measured pair during the
  readout window (after the measurement pulses);
* readout confusion matrices C[true, reported] act classically on the
  exact joint Z-basis distribution;
* optional signaling injections make one party's readout (or pulse frame)
  depend on the other party's setting.

Only the final multinomial draw is random.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import gates as g
from . import rng
from .counts import SETTINGS, CountsTable
from .plan import Circuit, ExperimentPlan
from .transpiler import Gate, GateSeq, gate_matrix

ROLES = ("A", "S", "B")
STATE_TOL = 1e-12
KRAUS_TOL = 1e-10


class SimulationError(ValueError):
    pass


# ----------------------------------------------------------------------------
# states and channels

def zero_state(nqubits: int) -> np.ndarray:
    rho = np.zeros((2**nqubits, 2**nqubits), dtype=complex)
    rho[0, 0] = 1.0
    return rho


def nqubits_of(rho: np.ndarray) -> int:
    n = int(round(math.log2(rho.shape[0])))
    if rho.shape != (2**n, 2**n):
        raise SimulationError(f"density matrix has shape {rho.shape}")
    return n


def is_valid_state(rho: np.ndarray, tol: float = STATE_TOL) -> bool:
    if abs(np.trace(rho) - 1) > tol or np.max(np.abs(rho - rho.conj().T)) > tol:
        return False
    return bool(np.min(np.linalg.eigvalsh((rho + rho.conj().T) / 2)) >= -1e-10)


def apply_gate(rho: np.ndarray, u: np.ndarray, targets) -> np.ndarray:
    full = g.embed(u, targets, nqubits_of(rho))
    return full @ rho @ full.conj().T


def check_kraus(kraus, tol: float = KRAUS_TOL) -> None:
    kraus = [np.asarray(k, dtype=complex) for k in kraus]
    if not kraus:
        raise SimulationError("empty Kraus set")
    dim = kraus[0].shape[0]
    total = sum(k.conj().T @ k for k in kraus)
    if np.max(np.abs(total - np.eye(dim))) > tol:
        raise SimulationError("Kraus operators are not trace preserving (sum K^dag K != I)")


def apply_channel(rho: np.ndarray, kraus, targets) -> np.ndarray:
    check_kraus(kraus)
    n = nqubits_of(rho)
    out = np.zeros_like(rho)
    for k in kraus:
        full = g.embed(k, targets, n)
        out += full @ rho @ full.conj().T
    return out


def depolarizing(p: float) -> list[np.ndarray]:
    """rho -> (1 - p) rho + p I/2."""
    if not 0 <= p <= 1:
        raise SimulationError(f"depolarizing probability {p} outside [0, 1]")
    ops = [math.sqrt(1 - 3 * p / 4) * g.pauli("I")]
    ops += [math.sqrt(p / 4) * g.pauli(k) for k in "XYZ"]
    return ops


def amplitude_damping(gamma: float) -> list[np.ndarray]:
    if not 0 <= gamma <= 1:
        raise SimulationError(f"damping {gamma} outside [0, 1]")
    k0 = np.array([[1, 0], [0, math.sqrt(1 - gamma)]], dtype=complex)
    k1 = np.array([[0, math.sqrt(gamma)], [0, 0]], dtype=complex)
    return [k0, k1]


def zz_phase(angle: float) -> np.ndarray:
    """exp(-i angle Z Z / 2) on two qubits."""
    return g.rot(np.kron(g.pauli("Z"), g.pauli("Z")), angle)


# ----------------------------------------------------------------------------
# noise configuration

@dataclass(frozen=True)
class Injection:
    """Deliberate setting dependence of one party's measurement.

    ``mode='readout'``: the ``target`` party's confusion matrix becomes
    ``(1 - |eps|) C + |eps| R`` where every row of R reports "+" when the
    other party's setting is 0 (and "-" when it is 1) for ``eps > 0``, the
    reverse for ``eps < 0``.  With no other signaling this shifts the
    target's delta (e.g. dP_*b for target "B") by exactly ``eps``.

    ``mode='phase'``: the target's measurement pulse frame is rotated by
    ``eps * (other_setting - 1/2)`` radians.

    ``only_setting`` restricts the injection to circuits where the target's
    own setting has that value.
    """

    epsilon: float
    target: str = "B"
    mode: str = "readout"
    only_setting: int | None = None

    def __post_init__(self):
        if self.target not in ("A", "B"):
            raise SimulationError(f"injection target must be A or B, got {self.target!r}")
        if self.mode not in ("readout", "phase"):
            raise SimulationError(f"injection mode must be readout or phase, got {self.mode!r}")
        if self.mode == "readout" and not -1 <= self.epsilon <= 1:
            raise SimulationError(f"readout injection epsilon {self.epsilon} outside [-1, 1]")
        if not math.isfinite(self.epsilon):
            raise SimulationError("injection epsilon must be finite")
        if self.only_setting not in (None, 0, 1):
            raise SimulationError("only_setting must be None, 0 or 1")

    def active(self, setting) -> bool:
        own = setting[1] if self.target == "B" else setting[0]
        return self.only_setting is None or own == self.only_setting

    def other_setting(self, setting) -> int:
        return setting[0] if self.target == "B" else setting[1]


@dataclass(frozen=True)
class NoiseConfig:
    depolarizing: dict = field(default_factory=dict)
    damping: dict = field(default_factory=dict)
    readout: dict = field(default_factory=dict)
    zz_phase: float = 0.0
    injections: tuple = ()

    def __post_init__(self):
        for name in ("depolarizing", "damping"):
            for role, p in getattr(self, name).items():
                if role not in ROLES:
                    raise SimulationError(f"unknown role {role!r} in {name}")
                if not 0 <= p <= 1:
                    raise SimulationError(f"{name}[{role}] = {p} outside [0, 1]")
        conf = {}
        for role, m in self.readout.items():
            if role not in ("A", "B"):
                raise SimulationError(f"readout confusion only applies to A and B, got {role!r}")
            m = np.asarray(m, dtype=float)
            if m.shape != (2, 2) or np.any(m < 0) or np.any(m > 1):
                raise SimulationError(f"readout[{role}] must be a 2x2 matrix of probabilities")
            if np.max(np.abs(m.sum(axis=1) - 1)) > 1e-12:
                raise SimulationError(f"readout[{role}] rows must sum to 1")
            conf[role] = m
        object.__setattr__(self, "readout", conf)
        if not math.isfinite(self.zz_phase):
            raise SimulationError("zz_phase must be finite")
        injections = tuple(i if isinstance(i, Injection) else Injection(**i) for i in self.injections)
        object.__setattr__(self, "injections", injections)

    @property
    def signaling_free(self) -> bool:
        return not any(i.epsilon for i in self.injections)

    def confusion(self, role: str) -> np.ndarray:
        return self.readout.get(role, np.eye(2))

    def to_dict(self) -> dict:
        return {
            "schema": "noise/1",
            "depolarizing": dict(self.depolarizing),
            "damping": dict(self.damping),
            "readout": {r: m.tolist() for r, m in self.readout.items()},
            "zz_phase": self.zz_phase,
            "injections": [
                {"epsilon": i.epsilon, "target": i.target, "mode": i.mode,
                 "only_setting": i.only_setting}
                for i in self.injections
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NoiseConfig":
        if d.get("schema", "noise/1") != "noise/1":
            raise SimulationError(f"unsupported noise schema {d.get('schema')!r}")
        unknown = set(d) - {"schema", "depolarizing", "damping", "readout", "zz_phase", "injections"}
        if unknown:
            raise SimulationError(f"unknown noise fields {sorted(unknown)}")
        return cls(
            depolarizing={k: float(v) for k, v in d.get("depolarizing", {}).items()},
            damping={k: float(v) for k, v in d.get("damping", {}).items()},
            readout=d.get("readout", {}),
            zz_phase=float(d.get("zz_phase", 0.0)),
            injections=tuple(Injection(**i) for i in d.get("injections", [])),
        )


IDEAL = NoiseConfig()


# ----------------------------------------------------------------------------
# distributions

@dataclass(frozen=True)
class OutcomeDistribution:
    setting: tuple[int, int]
    probs: np.ndarray  # P(++), P(+-), P(-+), P(--)

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.shape != (4,) or np.any(p < -1e-12) or abs(p.sum() - 1) > 1e-12:
            raise SimulationError(f"invalid outcome distribution {p}")
        object.__setattr__(self, "probs", p)

    @property
    def correlator(self) -> float:
        return float(self.probs[0] - self.probs[1] - self.probs[2] + self.probs[3])

    @property
    def p_a_plus(self) -> float:
        return float(self.probs[0] + self.probs[1])

    @property
    def p_b_plus(self) -> float:
        return float(self.probs[0] + self.probs[2])


def _pulse_with_phase(circuit: Circuit, injections, setting) -> GateSeq:
    measure = list(circuit.measure.gates)
    for inj in injections:
        if inj.mode != "phase" or not inj.epsilon or not inj.active(setting):
            continue
        q = circuit.roles[inj.target]
        shift = inj.epsilon * (inj.other_setting(setting) - 0.5)
        for i in range(len(measure) - 1, -1, -1):
            gate = measure[i]
            if gate.qubits == (q,) and gate.name in ("S", "S_theta"):
                theta = (gate.params[0] if gate.params else 0.0) + shift
                measure[i] = Gate("S_theta", (q,), (theta,))
                break
        else:
            raise SimulationError(f"no measurement pulse on {inj.target} to shift")
    return GateSeq(tuple(measure))


def evolve(circuit: Circuit, noise: NoiseConfig = IDEAL, setting=None) -> np.ndarray:
    """Final density matrix of ``circuit`` (before readout)."""
    setting = tuple(circuit.setting if setting is None else setting)
    n = circuit.nqubits
    rho = zero_state(n)
    roles = {idx: name for name, idx in circuit.roles.items()}
    seq = circuit.prep.gates + _pulse_with_phase(circuit, noise.injections, setting).gates
    for gate in seq:
        rho = apply_gate(rho, gate_matrix(gate), gate.qubits)
        for q in gate.qubits:
            p = noise.depolarizing.get(roles[q], 0.0)
            if p:
                rho = apply_channel(rho, depolarizing(p), (q,))
            gamma = noise.damping.get(roles[q], 0.0)
            if gamma:
                rho = apply_channel(rho, amplitude_damping(gamma), (q,))
    if noise.zz_phase:
        rho = apply_gate(rho, zz_phase(noise.zz_phase), circuit.measured)
    return rho


def z_basis_joint(rho: np.ndarray, qa: int, qb: int) -> np.ndarray:
    """Exact 2x2 joint distribution P[A, B] of two qubits in the Z basis."""
    n = nqubits_of(rho)
    diag = np.clip(np.real(np.diag(rho)), 0.0, None).reshape([2] * n)
    keep = (qa, qb)
    other = tuple(q for q in range(n) if q not in keep)
    joint = diag.sum(axis=other) if other else diag
    if qa > qb:
        joint = joint.T
    return joint / joint.sum()


def injected_confusion(base: np.ndarray, inj: Injection, setting) -> np.ndarray:
    kappa = abs(inj.epsilon)
    push_plus = (inj.other_setting(setting) == 0) == (inj.epsilon > 0)
    forced = np.array([[1.0, 0.0], [1.0, 0.0]]) if push_plus else np.array([[0.0, 1.0], [0.0, 1.0]])
    return (1 - kappa) * base + kappa * forced


def outcome_distribution(circuit: Circuit, noise: NoiseConfig = IDEAL, setting=None) -> OutcomeDistribution:
    setting = tuple(circuit.setting if setting is None else setting)
    rho = evolve(circuit, noise, setting)
    joint = z_basis_joint(rho, *circuit.measured)
    conf = {"A": noise.confusion("A"), "B": noise.confusion("B")}
    for inj in noise.injections:
        if inj.mode == "readout" and inj.epsilon and inj.active(setting):
            conf[inj.target] = injected_confusion(conf[inj.target], inj, setting)
    reported = conf["A"].T @ joint @ conf["B"]
    reported = np.clip(reported, 0.0, None)
    return OutcomeDistribution(setting, (reported / reported.sum()).reshape(4))


def setting_distributions(test: str, noise: NoiseConfig = IDEAL, alphas=None, betas=None):
    """Outcome distributions for all four settings of a test kind."""
    from .plan import ALPHAS, BETAS, build_circuit

    alphas = ALPHAS if alphas is None else alphas
    betas = BETAS if betas is None else betas
    return {s: outcome_distribution(build_circuit(test, s, alphas, betas), noise) for s in SETTINGS}


# ----------------------------------------------------------------------------
# sampling

def _multinomial(gen: np.random.Generator, n: int, probs: np.ndarray) -> np.ndarray:
    return gen.multinomial(n, probs)


def sample_counts(dist, n: int, seed: int, stream_ids=(0, 0, 0)) -> np.ndarray:
    """One multinomial draw of ``n`` trials from a 4-outcome distribution."""
    if n < 1:
        raise SimulationError("number of trials must be at least 1")
    probs = dist.probs if isinstance(dist, OutcomeDistribution) else np.asarray(dist, dtype=float)
    domain, a, b = stream_ids
    gen = rng.stream(seed, (int(domain) << 8) | rng.SAMPLING, int(a), int(b))
    return _multinomial(gen, int(n), probs)


def _simulate_job(args) -> tuple[int, int, np.ndarray]:
    pair_index, job, order, shots, seed, probs = args
    counts = np.zeros((2, 2, 4), dtype=np.int64)
    domain = (pair_index << 8) | rng.SAMPLING
    for i, (a, b) in enumerate(order):
        gen = rng.stream(seed, domain, job, i)
        counts[a, b] += _multinomial(gen, shots, probs[a][b])
    return pair_index, job, counts


def simulate_plan(plan: ExperimentPlan, noise: NoiseConfig = IDEAL, seed: int = 0,
                  workers: int = 1) -> list[CountsTable]:
    """Sample every circuit of every job; one CountsTable per (pair, job).

    Each circuit draws from its own (seed, pair, job, circuit) stream, so the
    result does not depend on ``workers``.
    """
    seed = rng.check_seed(seed)
    dists = setting_distributions(plan.test, noise, plan.alphas, plan.betas)
    probs = [[dists[(a, b)].probs for b in (0, 1)] for a in (0, 1)]
    pairs = plan.pairs or [None]
    tasks = [(pi, j, plan.order[j], plan.shots, seed, probs)
             for pi in range(len(pairs)) for j in range(plan.jobs)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_simulate_job, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        results = [_simulate_job(t) for t in tasks]
    out = []
    for pi, job, counts in results:
        pair = pairs[pi].path if pairs[pi] is not None else ()
        out.append(CountsTable(counts, pair=pair, test=plan.test, job=job,
                               meta={"shots": plan.shots, "repetitions": plan.repetitions}))
    return out
