"""Ensemble simulation: populations of belief-state agents evolve under
per-period news, sample a price-expectation observable, and their aggregate
up/down fractions drive a multiplicative price path.

Determinism contract: every random draw is a pure function of
``(scenario seed, agent index, period)``. Agent ``i``'s stream for period
``t`` is the ``i``-th block of a Philox stream keyed by ``(seed, t)``, so
results are bit-identical regardless of how work is split across threads.
The ``QEXPECT_THREADS`` environment variable caps worker threads.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.random import Generator, Philox, SeedSequence

from .classical import classical_agent_step
from .hilbert import Hamiltonian, Observable, StateVector, evolve, inner_product, projector_for
from .measurement import (
    JointTable,
    OutcomeDistribution,
    born_distribution,
    collapse,
)

_MAX_SEED = 2**64
_PARALLEL_CUTOFF = 2048  # below this many agents, threading is pure overhead


class SimulationHalt(RuntimeError):
    """Price left the representable positive range; carries the partial path."""

    def __init__(self, message: str, partial_path: "PricePath"):
        super().__init__(message)
        self.partial_path = partial_path


@dataclass(frozen=True)
class AgentPopulation:
    """A homogeneous group of agents sharing one initial belief state."""

    count: int
    initial_state: StateVector
    kind: str = "quantum"

    def __post_init__(self) -> None:
        if int(self.count) != self.count or self.count < 1:
            raise ValueError(f"population count must be a positive integer, got {self.count}")
        object.__setattr__(self, "count", int(self.count))
        if self.kind not in ("quantum", "classical"):
            raise ValueError(f"population kind must be 'quantum' or 'classical', got {self.kind!r}")


@dataclass(frozen=True)
class NewsEvent:
    """One period's information environment: a Hamiltonian acting for
    ``duration``, plus an optional measurement-basis override."""

    hamiltonian: Hamiltonian
    duration: float
    observable: Observable | None = None

    def __post_init__(self) -> None:
        if self.duration < 0:
            raise ValueError(f"news duration must be >= 0, got {self.duration}")


@dataclass(frozen=True)
class NewsSchedule:
    """Per-period news events; shorter schedules cycle, an empty schedule
    means no evolution between measurements."""

    events: tuple[NewsEvent, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "events", tuple(self.events))

    def event_for(self, period: int) -> NewsEvent | None:
        if not self.events:
            return None
        return self.events[period % len(self.events)]

    def __len__(self) -> int:
        return len(self.events)


@dataclass(frozen=True)
class PeriodRecord:
    price: float
    up_fraction: float
    down_fraction: float

    def __post_init__(self) -> None:
        if abs(self.up_fraction + self.down_fraction - 1.0) > 1e-12:
            raise ValueError("up and down fractions must sum to 1")
        if not (self.price > 0 and math.isfinite(self.price)):
            raise ValueError(f"price must be positive and finite, got {self.price}")


@dataclass(frozen=True)
class PricePath:
    """Price series produced by a market run; ``periods[t]`` holds the price
    after period ``t+1``'s update together with that period's fractions."""

    initial_price: float
    periods: tuple[PeriodRecord, ...]

    def prices(self) -> list[float]:
        return [self.initial_price] + [p.price for p in self.periods]


@dataclass(frozen=True)
class Scenario:
    """Complete, seedable market-run configuration."""

    seed: int
    populations: tuple[AgentPopulation, ...]
    news: NewsSchedule
    price_observable: Observable
    impact: float
    initial_price: float
    periods: int

    def __post_init__(self) -> None:
        if int(self.seed) != self.seed or not 0 <= self.seed < _MAX_SEED:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "populations", tuple(self.populations))
        if not self.populations:
            raise ValueError("scenario needs at least one population")
        if self.impact < 0:
            raise ValueError(f"impact coefficient must be >= 0, got {self.impact}")
        if not self.initial_price > 0:
            raise ValueError(f"initial price must be > 0, got {self.initial_price}")
        if int(self.periods) != self.periods or self.periods < 1:
            raise ValueError(f"period count must be a positive integer, got {self.periods}")
        object.__setattr__(self, "periods", int(self.periods))
        d = self.price_observable.dim
        for pop in self.populations:
            if pop.initial_state.dim != d:
                raise ValueError(
                    f"population state dimension {pop.initial_state.dim} does not match "
                    f"price observable dimension {d}"
                )
        for obs in self._all_observables():
            if set(obs.outcomes) - {1.0, -1.0}:
                raise ValueError(
                    "price observables must use outcomes +1 (up) and -1 (down), "
                    f"got {obs.outcomes}"
                )
            if obs.dim != d:
                raise ValueError("observable override dimension does not match scenario")

    def _all_observables(self) -> list[Observable]:
        seen = [self.price_observable]
        seen.extend(e.observable for e in self.news.events if e.observable is not None)
        return seen

    @property
    def total_agents(self) -> int:
        return sum(p.count for p in self.populations)


# ---------------------------------------------------------------------------
# Seeded stream derivation


def _period_key(seed: int, period: int) -> np.ndarray:
    return SeedSequence([int(seed), int(period)]).generate_state(2, np.uint64)


def agent_stream(seed: int, agent_index: int, period: int) -> Generator:
    """The derived random stream of one agent in one period.

    Its first variate equals element ``agent_index`` of
    :func:`_agent_uniforms` for the same ``(seed, period)``.
    """
    bits = Philox(key=_period_key(seed, period))
    bits.advance(int(agent_index))
    return Generator(bits)


def _agent_uniforms(seed: int, period: int, count: int) -> np.ndarray:
    """Uniform variate for every agent index at once; agent ``i`` gets the
    first draw of its own Philox block (one block = 4 raw words)."""
    raw = Philox(key=_period_key(seed, period)).random_raw(4 * count)
    return (raw[0::4] >> np.uint64(11)) * (1.0 / (1 << 53))


def _inverse_cdf(cumulative: np.ndarray, uniforms: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(cumulative, uniforms, side="right")
    return np.minimum(idx, len(cumulative) - 1)


def _cumulative(dist: OutcomeDistribution) -> np.ndarray:
    return np.cumsum([p for _, p in dist.entries])


# ---------------------------------------------------------------------------
# Measurement sampling


def sample_measurement(
    psi: StateVector, obs: Observable, rng: Generator
) -> tuple[float, StateVector]:
    """Draw one outcome by inverse CDF over outcomes in descending eigenvalue
    order, and collapse the state onto it.

    Outcomes of zero probability are never drawn.
    """
    dist = born_distribution(psi, obs)
    k = int(_inverse_cdf(_cumulative(dist), np.asarray(rng.random())))
    outcome = dist.outcomes[k]
    return outcome, collapse(psi, projector_for(obs, outcome))


def run_ensemble(population: AgentPopulation, obs: Observable, seed: int) -> OutcomeDistribution:
    """Empirical outcome frequencies over independent agents, each with its
    own derived stream; converges to the Born distribution as the population
    grows."""
    if population.kind != "quantum":
        raise ValueError(
            "run_ensemble expects a quantum population; classical agents use "
            "the classical_agent_step pipeline"
        )
    dist = born_distribution(population.initial_state, obs)
    idx = _inverse_cdf(_cumulative(dist), _agent_uniforms(seed, 0, population.count))
    counts = np.bincount(idx, minlength=len(dist.entries))
    entries = tuple(
        (outcome, count / population.count)
        for (outcome, _), count in zip(dist.entries, counts)
    )
    return OutcomeDistribution(entries)


def run_sequential_ensemble(
    population: AgentPopulation,
    obs_i: Observable,
    obs_j: Observable,
    order: str = "ij",
    seed: int = 0,
) -> JointTable:
    """Empirical joint table: every agent measures one observable, collapses,
    then measures the other; ``order`` picks which comes first ("ij" or "ji").

    Converges to :func:`qexpect.measurement.sequential_joint` of the first
    and second observables.
    """
    if population.kind != "quantum":
        raise ValueError("run_sequential_ensemble expects a quantum population")
    if order not in ("ij", "ji"):
        raise ValueError(f"order must be 'ij' or 'ji', got {order!r}")
    first, second = (obs_i, obs_j) if order == "ij" else (obs_j, obs_i)
    psi = population.initial_state
    n = population.count

    first_dist = born_distribution(psi, first)
    first_outcomes = first_dist.outcomes
    second_outcomes = second.outcomes
    idx1 = _inverse_cdf(_cumulative(first_dist), _agent_uniforms(seed, 0, n))
    u2 = _agent_uniforms(seed, 1, n)

    counts = np.zeros((len(first_outcomes), len(second_outcomes)), dtype=np.int64)
    for g, alpha in enumerate(first_outcomes):
        mask = idx1 == g
        if not mask.any():
            continue
        conditioned = collapse(psi, projector_for(first, alpha))
        cond_cum = _cumulative(born_distribution(conditioned, second))
        idx2 = _inverse_cdf(cond_cum, u2[mask])
        counts[g] += np.bincount(idx2, minlength=len(second_outcomes))
    rows = tuple(
        (alpha, beta, counts[g, h] / n)
        for g, alpha in enumerate(first_outcomes)
        for h, beta in enumerate(second_outcomes)
    )
    return JointTable("first", "second", rows)


# ---------------------------------------------------------------------------
# Market loop


def _thread_budget() -> int:
    raw = os.environ.get("QEXPECT_THREADS")
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value < 1:
        raise ValueError(f"QEXPECT_THREADS must be a positive integer, got {raw!r}")
    return value


def _assign_outcomes(
    uniforms: np.ndarray, membership: np.ndarray, cumulatives: np.ndarray, threads: int
) -> np.ndarray:
    """Outcome index per agent given its group's cumulative distribution.

    Chunked across ``threads`` workers; chunk results depend only on their
    slice, so the assembled array is identical for any thread count.
    """

    def chunk(lo: int, hi: int) -> np.ndarray:
        rows = cumulatives[membership[lo:hi]]
        idx = (uniforms[lo:hi, None] >= rows).sum(axis=1)
        return np.minimum(idx, cumulatives.shape[1] - 1)

    n = len(uniforms)
    if threads <= 1 or n < _PARALLEL_CUTOFF:
        return chunk(0, n)
    bounds = np.linspace(0, n, threads + 1, dtype=int)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        pieces = list(pool.map(lambda se: chunk(*se), zip(bounds[:-1], bounds[1:])))
    return np.concatenate(pieces)


class _QuantumCohort:
    """Tracks one quantum population as groups of agents sharing a state."""

    def __init__(self, population: AgentPopulation, offset: int):
        self.count = population.count
        self.offset = offset
        self.states: list[StateVector] = [population.initial_state]
        self.membership = np.zeros(population.count, dtype=np.intp)

    def step(self, event: NewsEvent | None, obs: Observable, uniforms: np.ndarray, threads: int) -> np.ndarray:
        """Evolve, sample, and collapse every agent; returns sampled outcomes."""
        if event is not None:
            self.states = [evolve(s, event.hamiltonian, event.duration) for s in self.states]
        outcome_values = np.asarray(obs.outcomes)
        cumulatives = np.vstack([_cumulative(born_distribution(s, obs)) for s in self.states])
        idx = _assign_outcomes(uniforms[self.offset : self.offset + self.count], self.membership, cumulatives, threads)

        branch = self.membership * len(outcome_values) + idx
        labels, self.membership = np.unique(branch, return_inverse=True)
        self.states = [
            collapse(self.states[label // len(outcome_values)], projector_for(obs, float(outcome_values[label % len(outcome_values)])))
            for label in labels
        ]
        return outcome_values[idx]


class _ClassicalCohort:
    """Tracks one classical population; all agents share one belief, updated
    deterministically from the period's news."""

    def __init__(self, population: AgentPopulation, price_obs: Observable, offset: int):
        self.count = population.count
        self.offset = offset
        dist = born_distribution(population.initial_state, price_obs)
        self.outcomes = np.asarray(dist.outcomes)
        self.belief = np.asarray([p for _, p in dist.entries])

    def step(self, event: NewsEvent | None, obs: Observable, uniforms: np.ndarray, threads: int) -> np.ndarray:
        if event is not None:
            likelihoods = _news_likelihoods(event, obs)
            self.belief, _ = classical_agent_step(self.belief, likelihoods, self.outcomes)
        cum = np.cumsum(self.belief)
        idx = _inverse_cdf(cum, uniforms[self.offset : self.offset + self.count])
        return self.outcomes[idx]


def _news_likelihoods(event: NewsEvent, obs: Observable) -> np.ndarray:
    """Classical signal strength per outcome: the stay probability
    ``|<e| exp(-iHt) |e>|^2`` of that outcome's eigenvectors, averaged over
    degenerate directions."""
    stay: dict[float, list[float]] = {}
    for vec, lam in zip(obs.eigenvectors, obs.eigenvalues):
        evolved = evolve(vec, event.hamiltonian, event.duration)
        stay.setdefault(lam, []).append(abs(inner_product(vec, evolved)) ** 2)
    return np.asarray([float(np.mean(stay[o])) for o in obs.outcomes])


def run_market(scenario: Scenario) -> PricePath:
    """Run the full ensemble market loop.

    Each period: quantum agents evolve under the period's news and sample the
    price observable (collapsing onto their outcome); classical agents
    Bayes-update on news-derived likelihoods and sample from their belief.
    The up/down fractions over all agents move the price multiplicatively:
    ``price *= 1 + impact * (f_up - f_down)``.

    Bit-identical output for a fixed scenario regardless of thread count.
    Raises SimulationHalt (carrying the partial path) if the price leaves the
    positive representable range, which cannot happen while ``impact < 1``.
    """
    threads = _thread_budget()
    cohorts: list[_QuantumCohort | _ClassicalCohort] = []
    offset = 0
    for pop in scenario.populations:
        if pop.kind == "quantum":
            cohorts.append(_QuantumCohort(pop, offset))
        else:
            cohorts.append(_ClassicalCohort(pop, scenario.price_observable, offset))
        offset += pop.count
    total = scenario.total_agents

    price = float(scenario.initial_price)
    records: list[PeriodRecord] = []
    for period in range(scenario.periods):
        event = scenario.news.event_for(period)
        obs = scenario.price_observable
        if event is not None and event.observable is not None:
            obs = event.observable
        uniforms = _agent_uniforms(scenario.seed, period, total)
        ups = 0
        for cohort in cohorts:
            outcomes = cohort.step(event, obs, uniforms, threads)
            ups += int((outcomes > 0).sum())
        f_up = ups / total
        f_down = 1.0 - f_up
        price = price * (1.0 + scenario.impact * (f_up - f_down))
        if not (math.isfinite(price) and price > 0):
            raise SimulationHalt(
                f"price became {price} in period {period + 1}",
                PricePath(scenario.initial_price, tuple(records)),
            )
        records.append(PeriodRecord(price, f_up, f_down))
    return PricePath(scenario.initial_price, tuple(records))
