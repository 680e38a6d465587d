"""Moore bound, candidate groups, and seeded random generator-set search.

Randomness: every trial ``t`` of a search with seed ``s`` draws from its own
PCG64 stream, ``Generator(PCG64(SeedSequence(s, spawn_key=(t,))))``.  A trial's
outcome therefore depends only on ``(s, t)`` and the config, never on how trials
are scheduled across workers.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np

from .cayley import CayleyStats, GeneratorSet, bfs_stats, close_under_inverses
from .errors import BadParameter, InfeasibleDegree, MooreInfeasible, RetryBudgetExhausted
from .groups import CyclicGroup, GroupSpec, multiplicative_order

log = logging.getLogger(__name__)

INT64_MAX = 2**63 - 1
SEED_MASK = 2**64 - 1
DRAWS_PER_SLOT = 64
INVOLUTION_SCAN_LIMIT = 200_000


def moore_bound(delta: int, diameter: int) -> int:
    """Largest possible order of a graph with max degree ``delta`` and diameter ``diameter``.

    Exact (Python integers never overflow); use ``exceeds_int64`` when the value
    has to be stored in a machine word.
    """
    if delta < 2 or diameter < 1:
        raise BadParameter(f"need delta >= 2 and diameter >= 1, got ({delta}, {diameter})")
    if delta == 2:
        return 2 * diameter + 1
    return (delta * (delta - 1) ** diameter - 2) // (delta - 2)


def exceeds_int64(value: int) -> bool:
    return value > INT64_MAX


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed) & SEED_MASK, spawn_key=(int(trial),))
    return np.random.Generator(np.random.PCG64(ss))


class _SlotExhausted(Exception):
    pass


def _draw(group, rng, budget, accept):
    e = group.identity
    for _ in range(budget):
        g = group.random_element(rng)
        if g != e and accept(g):
            return g
    raise _SlotExhausted


@lru_cache(maxsize=32)
def _involutions(group: GroupSpec) -> tuple:
    return tuple(g for g in map(group.unindex, range(1, group.order)) if group.is_involution(g))


def _draw_involution(group, rng, budget, taken):
    try:
        return _draw(group, rng, budget, lambda g: g not in taken and group.is_involution(g))
    except _SlotExhausted:
        # rare involutions: pick uniformly from the full list when it is cheap to build
        if group.order > INVOLUTION_SCAN_LIMIT:
            raise
        pool = [g for g in _involutions(group) if g not in taken]
        if not pool:
            raise
        return pool[int(rng.integers(len(pool)))]


def sample_generator_set(group: GroupSpec, delta: int, rng: np.random.Generator) -> GeneratorSet:
    """Random inverse-closed set of exactly ``delta`` elements.

    The set is ``i`` involutions plus ``(delta - i) / 2`` inverse pairs; ``i`` is
    tried in a uniformly random order over the values with the parity of
    ``delta``, falling through to the next value when rejection sampling runs
    out of draws (``64 * delta`` per slot).  Involution slots in groups of
    order at most ``INVOLUTION_SCAN_LIMIT`` fall back to an exact uniform pick.
    """
    order = group.order
    if delta < 2 or delta > order - 1:
        raise InfeasibleDegree(f"delta={delta} outside [2, {order - 1}] for |G|={order}")
    if delta == order - 1:
        return close_under_inverses(group, (group.unindex(i) for i in range(1, order)))
    # involutions exist iff |G| is even
    has_involutions = order % 2 == 0
    if delta % 2 and not has_involutions:
        raise InfeasibleDegree(f"odd delta={delta} needs an involution, but |G|={order} is odd")
    choices = [i for i in range(delta % 2, delta + 1, 2) if has_involutions or i == 0]
    budget = DRAWS_PER_SLOT * delta
    found_involution = False
    for i in rng.permutation(choices):
        chosen: list = []
        taken: set = set()
        try:
            for _ in range(int(i)):
                g = _draw_involution(group, rng, budget, taken)
                found_involution = True
                chosen.append(g)
                taken.add(g)
            for _ in range((delta - int(i)) // 2):
                g = _draw(group, rng, budget, lambda g: g not in taken and not group.is_involution(g))
                gi = group.inverse(g)
                chosen += [g, gi]
                taken.update((g, gi))
        except _SlotExhausted:
            continue
        return close_under_inverses(group, chosen)
    if delta % 2 and not found_involution:
        raise InfeasibleDegree(f"no involution found in {group.name} for odd delta={delta}")
    raise RetryBudgetExhausted(f"could not assemble a degree-{delta} set in {group.name}")


@dataclass(frozen=True)
class SearchConfig:
    group: GroupSpec
    delta: int
    target_diameter: int
    trials: int
    seed: int
    max_hits: int = 10

    def __post_init__(self):
        if self.delta < 2:
            raise BadParameter("delta must be >= 2")
        if self.trials < 0:
            raise BadParameter("trials must be >= 0")
        if self.target_diameter < 1:
            raise BadParameter("target diameter must be >= 1")
        if self.delta > self.group.order - 1:
            raise BadParameter(f"delta={self.delta} exceeds |G|-1={self.group.order - 1}")
        if self.max_hits < 0:
            raise BadParameter("max_hits must be >= 0")

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "delta": self.delta,
            "target_diameter": self.target_diameter,
            "trials": self.trials,
            "seed": self.seed,
            "max_hits": self.max_hits,
        }


@dataclass
class SearchHit:
    generators: GeneratorSet
    stats: CayleyStats
    trial_index: int

    def to_json(self) -> dict:
        return {
            "trial": self.trial_index,
            "generators": self.generators.to_json(),
            "diameter": self.stats.diameter,
            "order": self.stats.order,
        }


@dataclass
class SearchResult:
    config: SearchConfig
    hits: list = field(default_factory=list)
    trials_run: int = 0
    connected: int = 0
    best_diameter: Optional[int] = None
    sampling_failures: int = 0

    def to_json(self) -> dict:
        return {
            "config": self.config.to_json(),
            "hits": [h.to_json() for h in self.hits],
            "summary": {
                "trials": self.trials_run,
                "connected": self.connected,
                "best_diameter": self.best_diameter,
                "sampling_failures": self.sampling_failures,
            },
        }


def _run_trial(config: SearchConfig, t: int):
    rng = trial_rng(config.seed, t)
    try:
        gens = sample_generator_set(config.group, config.delta, rng)
    except RetryBudgetExhausted:
        return t, None, None
    return t, gens, bfs_stats(config.group, gens)


def random_search(config: SearchConfig, threads: int = 1) -> SearchResult:
    group = config.group
    bound = moore_bound(config.delta, config.target_diameter)
    if group.order > bound:
        raise MooreInfeasible(
            f"|G|={group.order} exceeds the Moore bound {bound} for "
            f"(delta={config.delta}, D={config.target_diameter})"
        )
    if group.is_abelian:
        log.warning("%s is abelian; it cannot compete for degree/diameter records", group.name)
    # surfaces InfeasibleDegree once instead of in every trial
    if config.trials:
        try:
            sample_generator_set(group, config.delta, trial_rng(config.seed, 0))
        except RetryBudgetExhausted:
            pass

    result = SearchResult(config)
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            outcomes = list(pool.map(lambda t: _run_trial(config, t), range(config.trials)))
    else:
        outcomes = [_run_trial(config, t) for t in range(config.trials)]

    for t, gens, stats in outcomes:
        result.trials_run += 1
        if gens is None:
            result.sampling_failures += 1
            continue
        if not stats.connected:
            continue
        result.connected += 1
        if result.best_diameter is None or stats.diameter < result.best_diameter:
            result.best_diameter = stats.diameter
        if (
            stats.degree == config.delta
            and stats.diameter <= config.target_diameter
            and len(result.hits) < config.max_hits
        ):
            result.hits.append(SearchHit(gens, stats, t))
    return result


@lru_cache(maxsize=4096)
def _unit_orders(n: int) -> tuple:
    """``(a, ord(a))`` for every unit ``a`` of ``Z_n``."""
    return tuple((a, multiplicative_order(a, n)) for a in range(1, n) if math.gcd(a, n) == 1)


def iter_cyclic_specs(
    delta: int, diameter: int, min_order: int = 1, exhaustive: bool = False
) -> Iterator[CyclicGroup]:
    """Valid ``m x_a n`` with ``min_order <= m*n <= moore_bound(delta, diameter)``.

    Ordered by descending ``m*n``, then ascending ``m``, then ascending ``a``.
    Only the units of largest order dividing ``m`` are produced unless
    ``exhaustive`` is set.
    """
    if min_order < 1:
        raise BadParameter("min_order must be >= 1")
    top = moore_bound(delta, diameter)
    for total in range(top, max(min_order, 2) - 1, -1):
        for m in range(1, total // 2 + 1):
            if total % m:
                continue
            n = total // m
            units = [(a, k) for a, k in _unit_orders(n) if m % k == 0]
            if not exhaustive:
                best = max(k for _, k in units)
                units = [(a, k) for a, k in units if k == best]
            for a, _ in units:
                yield CyclicGroup(m, n, a)


def enumerate_cyclic_specs(
    delta: int, diameter: int, min_order: int = 1, limit: Optional[int] = None, exhaustive: bool = False
) -> list:
    out = []
    if limit is not None and limit <= 0:
        return out
    for g in iter_cyclic_specs(delta, diameter, min_order, exhaustive):
        out.append(g)
        if limit is not None and len(out) >= limit:
            break
    return out

