"""Large Cayley graphs of semidirect products of cyclic groups for the degree/diameter problem."""

from .cayley import (
    CayleyStats,
    GeneratorSet,
    all_pairs_diameter_oracle,
    bfs_stats,
    close_under_inverses,
    export_graph,
    neighbors,
)
from .groups import CyclicGroup, DoubledGroup, SquareGroup, validate
from .records import load_records, verify_all, verify_record
from .search import SearchConfig, enumerate_cyclic_specs, moore_bound, random_search, sample_generator_set

__version__ = "0.1.0"
