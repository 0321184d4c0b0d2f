"""Simulated force-thresholding grasp trials.

The plant is deliberately small: a voltage-commanded pressure regulator with
first-order dynamics, a load cell with additive Gaussian noise, and a
multiplicative perturbation of the friction capacity.  The protocol
pressurises the pockets, closes the jaws until the measured force reaches
the setpoint, holds, lifts and transports.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .contact import DEFAULT_BULGES, contact_from_bulge
from .errors import DomainError
from .grasp import GraspQuery
from .membrane import EXACT, resolve_bulge

V_MAX = 5.0
EPS_FLOOR = -0.9


class State(str, enum.Enum):
    IDLE = "Idle"
    PRESSURIZE = "Pressurize"
    CLOSE = "Close"
    HOLD = "Hold"
    LIFT = "Lift"
    TRANSPORT = "Transport"
    RELEASE = "Release"
    DROPPED = "Dropped"

    def __str__(self):
        return self.value


class Outcome(str, enum.Enum):
    SUCCESS = "success"
    SLIP = "slip"
    FAILURE = "failure"

    def __str__(self):
        return self.value


TRANSITIONS = {
    State.IDLE: {State.IDLE, State.PRESSURIZE},
    State.PRESSURIZE: {State.PRESSURIZE, State.CLOSE},
    State.CLOSE: {State.CLOSE, State.HOLD},
    State.HOLD: {State.HOLD, State.LIFT},
    State.LIFT: {State.LIFT, State.TRANSPORT, State.DROPPED},
    State.TRANSPORT: {State.TRANSPORT, State.RELEASE, State.DROPPED},
    State.RELEASE: set(),
    State.DROPPED: set(),
}


@dataclass(frozen=True)
class PlantConfig:
    """Simulated hardware.  Only the regulator map comes from real hardware
    (0-5 V in, 0-500 kPa out); timing and noise figures are placeholders."""

    volts_to_pascals: float = 1.0e5
    pressure_tau: float = 0.1
    loadcell_sigma: float = 0.02
    mu_sigma: float = 0.05
    timestep: float = 0.01
    seed: int = 0
    close_rate: float = 5.0
    hold_time: float = 0.2
    lift_time: float = 0.2
    transport_time: float = 0.5
    transport_factor: float = 1.0
    max_close_time: float = 30.0

    def __post_init__(self):
        if not self.volts_to_pascals > 0:
            raise DomainError("volts_to_pascals must be > 0", field="volts_to_pascals")
        for name in ("pressure_tau", "loadcell_sigma", "mu_sigma", "hold_time",
                     "lift_time", "transport_time"):
            value = getattr(self, name)
            if not (value >= 0 and math.isfinite(value)):
                raise DomainError(f"{name} must be finite and >= 0, got {value!r}", field=name)
        for name in ("timestep", "close_rate", "max_close_time"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f"{name} must be finite and > 0, got {value!r}", field=name)
        if not self.transport_factor >= 1.0:
            raise DomainError("transport_factor must be >= 1", field="transport_factor")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise DomainError("seed must be an integer in [0, 2**64)", field="seed")
        object.__setattr__(self, "seed", int(self.seed))

    @property
    def noiseless(self):
        return self.loadcell_sigma == 0.0 and self.mu_sigma == 0.0


@dataclass(frozen=True)
class Step:
    time: float
    state: State
    pressure: float
    force: float

    def line(self):
        return f"{self.time!r} {self.state.value} {self.pressure!r} {self.force!r}"


@dataclass
class GraspTranscript:
    states: list[Step] = field(default_factory=list)
    outcome: Outcome | None = None

    def to_text(self):
        lines = [s.line() for s in self.states]
        lines.append(f"outcome: {self.outcome.value}")
        return "\n".join(lines) + "\n"


def voltage_to_pressure(v, cfg):
    """Regulator output pressure for a command voltage in [0, 5] V."""
    if not 0.0 <= v <= V_MAX:
        raise DomainError(f"command voltage must lie in [0, {V_MAX}] V, got {v!r}")
    return cfg.volts_to_pascals * v


def pressure_to_voltage(p, cfg):
    v = p / cfg.volts_to_pascals
    if not 0.0 <= v <= V_MAX:
        raise DomainError(
            f"pressure {p!r} Pa is outside the regulator range "
            f"[0, {V_MAX * cfg.volts_to_pascals!r}] Pa"
        )
    return v


def trial_rng(seed, trial):
    """Generator for one trial, keyed by (seed, trial index) only."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(trial,)))


def _steps(duration, dt):
    return max(1, math.ceil(duration / dt - 1e-9))


class _Recorder:
    def __init__(self, dt):
        self.dt = dt
        self.k = 0
        self.transcript = GraspTranscript()

    def add(self, state, pressure, force):
        steps = self.transcript.states
        if steps and state not in TRANSITIONS[steps[-1].state]:
            raise RuntimeError(f"illegal transition {steps[-1].state} -> {state}")
        steps.append(Step(self.k * self.dt, state, float(pressure), float(force)))
        self.k += 1


def _simulate(q, spec, cfg, rng, per_bulge, mode, bulge=None):
    dt = cfg.timestep
    rec = _Recorder(dt)
    sigma_f = cfg.loadcell_sigma

    def reading(force):
        return force + (rng.normal(0.0, sigma_f) if sigma_f > 0 else 0.0)

    rec.add(State.IDLE, 0.0, reading(0.0))

    # (i) regulate the pockets to the target pressure
    setpoint = voltage_to_pressure(pressure_to_voltage(q.p, cfg), cfg)
    p = 0.0
    decay = math.exp(-dt / cfg.pressure_tau) if cfg.pressure_tau > 0 else 0.0
    for _ in range(_steps(5.0 * cfg.pressure_tau, dt)):
        p = setpoint + (p - setpoint) * decay
        rec.add(State.PRESSURIZE, p, reading(0.0))
    # the closed-loop regulator holds its setpoint once settled
    p = setpoint

    # (ii) close until the load cell reports the target force
    force = 0.0
    increment = cfg.close_rate * dt
    max_close = _steps(cfg.max_close_time, dt)
    for i in range(max_close):
        measured = reading(force)
        rec.add(State.CLOSE, p, measured)
        if measured >= q.n:
            break
        force = min(force + increment, q.n) if force < q.n else force + increment

    # (iii) hold position, lift, transport
    for _ in range(_steps(cfg.hold_time, dt)):
        rec.add(State.HOLD, p, reading(force))

    if bulge is None or bulge.p != p:
        bulge = resolve_bulge(p, spec, mode)
    capacity = q.contacts * contact_from_bulge(force, bulge, spec, per_bulge).friction_force

    phases = (
        (State.LIFT, cfg.lift_time, q.demand, Outcome.FAILURE),
        (State.TRANSPORT, cfg.transport_time, q.demand * cfg.transport_factor, Outcome.SLIP),
    )
    for state, duration, demand, dropped in phases:
        n_steps = _steps(duration, dt)
        if cfg.mu_sigma > 0:
            eps = np.maximum(rng.normal(0.0, cfg.mu_sigma, n_steps), EPS_FLOOR)
        else:
            eps = np.zeros(n_steps)
        for e in eps:
            rec.add(state, p, reading(force))
            if capacity * (1.0 + e) < demand:
                rec.add(State.DROPPED, p, reading(0.0))
                rec.transcript.outcome = dropped
                return rec.transcript

    rec.add(State.RELEASE, p, reading(force))
    rec.transcript.outcome = Outcome.SUCCESS
    return rec.transcript


def run_grasp_protocol(q: GraspQuery, spec, cfg: PlantConfig, *, trial=0,
                       per_bulge=DEFAULT_BULGES, mode=EXACT):
    """Simulate one grasp trial and return its transcript.

    The random stream depends only on ``cfg.seed`` and ``trial``, so a trial
    can be replayed in isolation.
    """
    return _simulate(q, spec, cfg, trial_rng(cfg.seed, trial), per_bulge, mode)


def run_trials(q, spec, cfg, trials, *, per_bulge=DEFAULT_BULGES, mode=EXACT):
    """Transcripts of ``trials`` independent trials numbered from zero."""
    if int(trials) != trials or trials < 1:
        raise DomainError(f"trials must be a positive integer, got {trials!r}")
    setpoint = voltage_to_pressure(pressure_to_voltage(q.p, cfg), cfg)
    bulge = resolve_bulge(setpoint, spec, mode)
    return [
        _simulate(q, spec, cfg, trial_rng(cfg.seed, i), per_bulge, mode, bulge)
        for i in range(int(trials))
    ]


def monte_carlo_success(q, spec, cfg, trials, *, per_bulge=DEFAULT_BULGES, mode=EXACT):
    """Fraction of simulated trials that end in :attr:`Outcome.SUCCESS`."""
    transcripts = run_trials(q, spec, cfg, trials, per_bulge=per_bulge, mode=mode)
    wins = sum(t.outcome is Outcome.SUCCESS for t in transcripts)
    return wins / len(transcripts)
