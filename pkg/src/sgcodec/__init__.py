"""sgcodec: lossless universal compression for sparse graphs.

A degree-threshold split sends low-degree edges through a neighborhood-type
enumerative coder and the rest through a block-structured coder driven by a
least-squares fit, with exact big-integer subset ranking underneath.  The
package also ships the generation, estimation, and entropy tooling needed to
measure the codec's second-order rate behavior.
"""

from .analysis import (
    EXPERIMENTS,
    TrendSeries,
    binary_entropy,
    count_typical,
    er_entropy_gap,
    h_exact_tiny,
    run_trend,
    s_of_d,
)
from .bitcode import (
    BitReader,
    CodeStream,
    rank_subset,
    read_subset,
    unrank_subset,
    write_subset,
)
from .codec import (
    DeltaPolicy,
    EncodeReport,
    choose_delta,
    decode,
    encode,
    normalized_rate_graphon,
    normalized_rate_lwc,
    parse_policy,
)
from .errors import (
    BudgetExceededError,
    CapacityError,
    ConfigError,
    MalformedStreamError,
    SgcError,
)
from .graph import (
    Graph,
    SplitResult,
    degree_histogram,
    density,
    matrix_lp_norm,
    read_edgelist,
    split,
    union,
    write_edgelist,
)
from .graphon import (
    BlockGraphon,
    GridGraphon,
    LatentStream,
    PowerLawGraphon,
    conditional_expected_edges,
    delta2_identity,
    delta2_upper,
    ent,
    graphon_norm,
    load_graphon,
    nominal_edges,
    sample_w_random,
)
from .heavy import (
    HeavyEncoding,
    Schedule,
    fitted_graphons,
    heavy_decode,
    heavy_encode,
    lemma51_budget,
    phi,
    schedule,
)
from .lsfit import LsFit, block_average, ls_exact, ls_heuristic
from .lwc import (
    LwcEncoding,
    TypeTable,
    build_type_table,
    enumerate_typical,
    lemma210_budget,
    lwc_decode,
    lwc_encode,
    lwc_params,
)
from .rooted import (
    LocalDist,
    RootedClass,
    RootedGraph,
    dist_degree,
    empirical_local_dist,
    lp_distance,
    lp_distance_exact,
    neighborhood_class,
    rooted_ball,
    rooted_distance,
)

__version__ = "0.1.0"
