"""Island-model genetic algorithm over query-set genomes.

Fitness is the number of documents matched by exactly one query in the
decoded set (uniqueHits); in discovered-k mode it is discounted by
(1 - k_penalty * k). Four islands evolve independently under tournament
selection, single-point crossover, per-gene mutation and elitism, trading
their best individuals around a ring at a fixed interval. Every random
draw comes from a per-island stream derived from (seed, island), so runs
are reproducible regardless of evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .clusters import ASSIGNED_BY_QUERY, UNASSIGNED, ClusterAssignment
from .index import InvertedIndex
from .querygen import Chromosome, DecodeConfig, DecodeContext, QuerySet
from .wordlist import WordList


@dataclass(frozen=True)
class GAConfig:
    subpopulations: int = 4
    population_total: int = 512
    generations: int = 100
    crossover_prob: float = 0.8
    mutation_prob: float = 0.1
    elitism: int = 2
    tournament_size: int = 2
    migration_interval: int = 30
    migrants_per_exchange: int = 3
    k_penalty: float = 0.02
    seed: int = 0
    decode: DecodeConfig = field(default_factory=DecodeConfig)

    def __post_init__(self):
        if self.population_total % self.subpopulations != 0:
            raise ValueError("population_total must be divisible by subpopulations")
        for name in ("crossover_prob", "mutation_prob"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")

    @property
    def island_size(self) -> int:
        return self.population_total // self.subpopulations


@dataclass(frozen=True)
class Individual:
    chromosome: Chromosome
    fitness: float


@dataclass
class EvolutionResult:
    best_chromosome: Chromosome
    best_query_set: QuerySet
    best_fitness: float
    fitness_history: list[list[float]]  # [generation][island] -> best fitness


# -- fitness ---------------------------------------------------------------


def unique_hits(index: InvertedIndex, query_set: QuerySet) -> int:
    """Documents matched by exactly one non-empty query of the set."""
    masks = [index.match_any_mask(q.words) for q in query_set.queries if q is not None]
    return _exactly_once(masks).bit_count()


def _exactly_once(masks: list[int]) -> int:
    once = 0
    more = 0
    for m in masks:
        more |= once & m
        once |= m
    return once & ~more


def fitness(index: InvertedIndex, query_set: QuerySet, config: GAConfig) -> float:
    """uniqueHits, discounted by (1 - k_penalty * declared_k) when k is discovered."""
    hits = unique_hits(index, query_set)
    if config.decode.k_mode == "discovered":
        return hits * (1.0 - config.k_penalty * query_set.declared_k)
    return float(hits)


def seed_clusters(index: InvertedIndex, query_set: QuerySet) -> ClusterAssignment:
    """Partial assignment: cluster j = documents matched only by the j-th
    non-empty query. Zero-hit and multi-hit documents stay unassigned."""
    masks = [index.match_any_mask(q.words) for q in query_set.queries if q is not None]
    once = _exactly_once(masks)
    assignment = np.full(index.doc_count, UNASSIGNED, dtype=np.int32)
    for j, m in enumerate(masks):
        mine = m & once
        while mine:
            low = mine & -mine
            assignment[low.bit_length() - 1] = j
            mine ^= low
    by = np.zeros(index.doc_count, dtype=np.uint8)
    by[assignment >= 0] = ASSIGNED_BY_QUERY
    return ClusterAssignment(assignment=assignment, cluster_count=len(masks), assigned_by=by)


# -- evolution engine ------------------------------------------------------


class _Evaluator:
    """Decode + fitness with memoization (both are pure per genome)."""

    def __init__(self, ctx: DecodeContext, config: GAConfig):
        self.ctx = ctx
        self.config = config
        self.decode_cfg = config.decode
        self.discovered = config.decode.k_mode == "discovered"
        self.k_penalty = config.k_penalty
        self.cache: dict[bytes, float] = {}

    def __call__(self, genome: np.ndarray) -> float:
        key = genome.tobytes()
        got = self.cache.get(key)
        if got is not None:
            return got
        word_indices = self.ctx.decode_word_indices(genome, self.decode_cfg)
        hits = _exactly_once(self.ctx.query_masks(word_indices)).bit_count()
        if self.discovered:
            value = hits * (1.0 - self.k_penalty * len(word_indices))
        else:
            value = float(hits)
        self.cache[key] = value
        return value


def _random_population(rng: np.random.Generator, n: int, config: GAConfig, wordlist_size: int) -> np.ndarray:
    dc = config.decode
    genomes = rng.integers(0, wordlist_size, size=(n, dc.genome_length()), dtype=np.int16)
    if dc.has_k_gene:
        genomes[:, 0] = rng.integers(dc.k_min, dc.k_max + 1, size=n, dtype=np.int16)
    return genomes


def evolve_run(index: InvertedIndex, wordlist: WordList, config: GAConfig) -> EvolutionResult:
    """Run the full island GA and return the best individual found."""
    if len(wordlist) == 0:
        raise ValueError("word list is empty")
    ctx = DecodeContext(index, wordlist)
    evaluate = _Evaluator(ctx, config)
    dc = config.decode
    L = len(wordlist)
    n_islands = config.subpopulations
    island_size = config.island_size
    genome_len = dc.genome_length()

    rngs = [np.random.default_rng([config.seed, i]) for i in range(n_islands)]
    islands = [_random_population(rngs[i], island_size, config, L) for i in range(n_islands)]
    fits = [np.array([evaluate(g) for g in pop]) for pop in islands]

    history: list[list[float]] = []
    for gen in range(1, config.generations + 1):
        for i in range(n_islands):
            islands[i], fits[i] = _next_generation(islands[i], fits[i], rngs[i], config, L, evaluate)
        if config.migration_interval > 0 and gen % config.migration_interval == 0:
            _migrate(islands, fits, config)
        history.append([float(f.max()) for f in fits])

    # Global best at the final generation; ties favor the lowest island,
    # then the lowest individual index.
    best_island, best_idx = max(
        ((i, int(np.argmax(fits[i]))) for i in range(n_islands)),
        key=lambda t: (fits[t[0]][t[1]], -t[0], -t[1]),
    )
    best_genome = islands[best_island][best_idx]
    best_chromosome = Chromosome.from_genome(best_genome, dc)
    best_query_set = ctx.to_query_set(ctx.decode_word_indices(best_genome, dc))
    return EvolutionResult(
        best_chromosome=best_chromosome,
        best_query_set=best_query_set,
        best_fitness=float(fits[best_island][best_idx]),
        fitness_history=history,
    )


def _next_generation(
    pop: np.ndarray,
    fit: np.ndarray,
    rng: np.random.Generator,
    config: GAConfig,
    wordlist_size: int,
    evaluate,
) -> tuple[np.ndarray, np.ndarray]:
    n, genome_len = pop.shape
    dc = config.decode
    order = np.lexsort((np.arange(n), -fit))  # stable: ties keep lower index first
    elites = pop[order[: config.elitism]].copy()

    n_children = n - len(elites)
    n_pairs = (n_children + 1) // 2

    # Bulk draws keep the RNG stream schedule-independent and cheap.
    tournament_draws = rng.integers(0, n, size=(n_pairs, 2, config.tournament_size))
    do_cross = rng.random(n_pairs) < config.crossover_prob
    cut_points = rng.integers(1, genome_len, size=n_pairs) if genome_len > 1 else np.ones(n_pairs, dtype=np.int64)
    mutate_mask = rng.random((n_children, genome_len)) < config.mutation_prob
    word_resample = rng.integers(0, wordlist_size, size=(n_children, genome_len), dtype=np.int16)
    if dc.has_k_gene:
        word_resample[:, 0] = rng.integers(dc.k_min, dc.k_max + 1, size=n_children, dtype=np.int16)

    children = np.empty((n_children, genome_len), dtype=pop.dtype)
    row = 0
    for p in range(n_pairs):
        parents = []
        for side in (0, 1):
            cand = tournament_draws[p, side]
            parents.append(pop[cand[np.argmax(fit[cand])]])
        a, b = parents
        if do_cross[p]:
            cut = int(cut_points[p])
            c1 = np.concatenate([a[:cut], b[cut:]])
            c2 = np.concatenate([b[:cut], a[cut:]])
        else:
            c1, c2 = a.copy(), b.copy()
        children[row] = c1
        row += 1
        if row < n_children:
            children[row] = c2
            row += 1

    children[mutate_mask] = word_resample[mutate_mask]

    new_pop = np.vstack([elites, children])
    new_fit = np.empty(n)
    new_fit[: len(elites)] = fit[order[: config.elitism]]
    for i in range(len(elites), n):
        new_fit[i] = evaluate(new_pop[i])
    return new_pop, new_fit


def _migrate(islands: list[np.ndarray], fits: list[np.ndarray], config: GAConfig) -> None:
    """Ring migration: copies of each island's best replace the next island's worst."""
    n_islands = len(islands)
    m = config.migrants_per_exchange
    snapshots = []
    for i in range(n_islands):
        order = np.lexsort((np.arange(len(fits[i])), -fits[i]))
        snapshots.append((islands[i][order[:m]].copy(), fits[i][order[:m]].copy()))
    for i in range(n_islands):
        dest = (i + 1) % n_islands
        order = np.lexsort((np.arange(len(fits[dest])), -fits[dest]))
        worst = order[-m:]
        mig_pop, mig_fit = snapshots[i]
        islands[dest][worst] = mig_pop
        fits[dest][worst] = mig_fit
