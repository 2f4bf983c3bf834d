"""Interactive games: the agent/environment core, six environments,
probabilistic reference agents, exact analytics, and brute-force search
for deterministic agents at tiny scale."""

from .core import (  # noqa: F401
    HALT,
    LOSE,
    TIMEOUT,
    WIN,
    Continue,
    Environment,
    Halt,
    Lose,
    Transcript,
    Win,
    play,
    replay,
    search_deterministic_agent,
    table_agent,
    uniform_bit_agent,
    uniform_choice_agent,
)
from .even_odds import (  # noqa: F401
    NAMED_ADVERSARIES,
    BruteForceResult,
    EvenOddsEnv,
    adversary_constant,
    adversary_copy_last,
    adversary_parity,
    brute_force_agent,
    even_odds_env,
    even_odds_win_fraction,
    score_threshold,
)
from .karger import (  # noqa: F401
    KargerEnv,
    exact_min_cut,
    karger_cut_value,
    karger_env,
    karger_win_trial,
)
from .penalty import (  # noqa: F401
    PenaltyTest,
    PenaltyTestsEnv,
    estimate_penalty,
    greedy_min_agent,
    penalty_tests_env,
    play_penalty,
    sampling_agent,
)
from .walks import (  # noqa: F401
    CoverTimeEnv,
    GraphNavigationEnv,
    VertexTransitiveEnv,
    cover_time_env,
    estimate_cover_time,
    exact_cover_time,
    exact_walk_distribution,
    graph_navigation_env,
    is_bipartite,
    is_connected,
    mixing_time,
    return_probability,
    stationary_distribution,
    transition_matrix,
    vertex_transitive_env,
)
