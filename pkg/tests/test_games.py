import math
from fractions import Fraction

import pytest

from probound import games
from probound.games import (
    Continue,
    PenaltyTest,
    Win,
    adversary_constant,
    adversary_copy_last,
    adversary_parity,
    brute_force_agent,
    even_odds_env,
    even_odds_win_fraction,
    exact_cover_time,
    exact_min_cut,
    exact_walk_distribution,
    greedy_min_agent,
    karger_env,
    karger_win_trial,
    mixing_time,
    penalty_tests_env,
    play,
    replay,
    return_probability,
    sampling_agent,
    score_threshold,
    search_deterministic_agent,
    stationary_distribution,
    table_agent,
    uniform_bit_agent,
    uniform_choice_agent,
    vertex_transitive_env,
)
from probound.games.core import Environment, Halt, Lose
from probound.games.walks import cover_time_env, estimate_cover_time, graph_navigation_env
from probound.instances import Graph, gen_vertex_transitive
from probound.rngcore import REFUTED, RngStream, run_trials, verdict_against_bound

TRIANGLE = gen_vertex_transitive("cycle", 3)
C4 = gen_vertex_transitive("cycle", 4)
C5 = gen_vertex_transitive("cycle", 5)
C6 = gen_vertex_transitive("cycle", 6)
K4 = gen_vertex_transitive("complete", 4)
Q3 = gen_vertex_transitive("hypercube", 3)


# --- core ---------------------------------------------------------------------


class _InstantWinEnv(Environment):
    def first_obs(self):
        return None

    def actions(self, obs):
        return (0, 1)

    def step(self, history, action):
        return Win()


class _ForeverEnv(Environment):
    def first_obs(self):
        return None

    def actions(self, obs):
        return (0,)

    def step(self, history, action):
        return Continue(None)


def test_play_immediate_win():
    t = play(table_agent([0]), _InstantWinEnv(), max_rounds=5)
    assert t.outcome == "win" and t.rounds == 1


def test_play_timeout_distinct_from_lose():
    t = play(table_agent([0] * 10), _ForeverEnv(), max_rounds=10)
    assert t.outcome == "timeout" and t.rounds == 10


def test_zero_penalty_game():
    tests = [PenaltyTest((1,), (1.0,), (0.0,))] * 3
    env = penalty_tests_env(tests)
    t = play(table_agent([1, 1, 1]), env, max_rounds=4)
    assert t.outcome == "halt" and t.penalty == 0.0


# --- even-odds ------------------------------------------------------------------


def test_score_threshold_integerization():
    assert score_threshold(1) == 1
    assert score_threshold(4) == 2
    assert score_threshold(9) == 3
    assert score_threshold(10) == 4  # ceil(sqrt(10))
    assert score_threshold(16) == 4


def test_win_fraction_exact_values():
    assert even_odds_win_fraction(1) == Fraction(1, 2)
    assert even_odds_win_fraction(4) == Fraction(5, 16)
    assert even_odds_win_fraction(16) == Fraction(14893, 65536)
    assert float(even_odds_win_fraction(16)) == pytest.approx(0.2272, abs=1e-4)


def test_even_odds_hand_trace_single_round():
    # N=1 vs agent playing 0: outcome decided by the adversary's bit
    env0 = even_odds_env(1, adversary_constant(0))
    assert play(table_agent([0]), env0, 2).outcome == "lose"
    env1 = even_odds_env(1, adversary_constant(1))
    assert play(table_agent([0]), env1, 2).outcome == "win"


def test_constant_adversary_all_ones_wins():
    env = even_odds_env(4, adversary_constant(0))
    assert play(table_agent([1, 1, 1, 1]), env, 5).outcome == "win"


def test_brute_force_constant0_lex_first():
    env = even_odds_env(4, adversary_constant(0))
    res = brute_force_agent(env, 4)
    assert res.win_fraction == Fraction(5, 16)
    assert res.winner == (0, 1, 1, 1)  # lexicographically first with 3 points


def test_brute_force_fraction_is_environment_independent():
    adversaries = [
        adversary_constant(0),
        adversary_constant(1),
        adversary_copy_last,
        adversary_parity,
        lambda acts: (len(acts) * 7 + sum(acts)) % 2,
        lambda acts: acts[0] if acts else 1,
        lambda acts: (sum(acts) * len(acts)) % 2,
        lambda acts: 1 if len(acts) % 3 == 0 else (acts[-1] ^ 1),
        lambda acts: (acts[-1] & acts[0]) if acts else 0,
        lambda acts: int(sum(acts) > len(acts) // 2),
    ]
    for n in (4, 6, 9):
        expected = even_odds_win_fraction(n)
        for adv in adversaries:
            res = brute_force_agent(even_odds_env(n, adv), n)
            assert res.win_fraction == expected


def test_brute_force_winner_verifies():
    for adv in (adversary_constant(0), adversary_copy_last, adversary_parity):
        env = even_odds_env(9, adv)
        res = brute_force_agent(env, 9)
        assert res.winner is not None
        assert play(table_agent(res.winner), env, 10).outcome == "win"


def test_brute_force_adaptive_adversary():
    env = even_odds_env(10, adversary_copy_last)
    res = brute_force_agent(env, 10)
    assert res.winner is not None
    assert res.win_fraction == even_odds_win_fraction(10)


def test_brute_force_refuses_large_n():
    with pytest.raises(ValueError):
        brute_force_agent(even_odds_env(30, adversary_constant(0)), 30)


def test_even_odds_monte_carlo_matches_tail():
    env = even_odds_env(16, adversary_parity)
    est = run_trials(
        lambda g: play(uniform_bit_agent, env, 17, g).outcome == "win", 20000, 321
    )
    assert est.p_hat == pytest.approx(float(even_odds_win_fraction(16)), abs=0.01)


# --- walk analytics ---------------------------------------------------------------


def test_stationary_distribution():
    pi = stationary_distribution(C6)
    assert pi == [Fraction(1, 6)] * 6
    assert sum(pi) == 1


def test_walk_distribution_sums_to_one():
    for g in (TRIANGLE, C6, Q3, K4):
        for t in (0, 1, 3, 7):
            dist = exact_walk_distribution(g, 0, t)
            assert sum(dist) == 1


def test_triangle_distribution_converges_to_uniform():
    dist = exact_walk_distribution(TRIANGLE, 0, 40)
    for p in dist:
        assert abs(p - Fraction(1, 3)) < Fraction(1, 10**9)


def test_return_probabilities_exact():
    assert return_probability(C4, 0, 2) == Fraction(1, 2)
    assert return_probability(Q3, 0, 2) == Fraction(1, 3)


def test_return_probability_dominates_everywhere():
    # P^{2k}(u,u) >= P^{2k}(u,v) and >= 1/n, exactly as rationals
    for g in (C4, C6, Q3):
        for k in (1, 2, 3):
            dist = exact_walk_distribution(g, 0, 2 * k)
            assert dist[0] == max(dist)
            assert dist[0] >= Fraction(1, g.n)


def test_mixing_time_triangle():
    assert mixing_time(TRIANGLE) == 2


def test_mixing_time_rejects_bipartite():
    with pytest.raises(ValueError):
        mixing_time(C4)
    with pytest.raises(ValueError):
        graph_navigation_env(Graph(2, ((0, 1),)), 0, 1)


# --- graph navigation ---------------------------------------------------------------


def test_navigation_uniform_agent_win_rate():
    env = graph_navigation_env(TRIANGLE, 0, 1, relabel_seed=3)
    est = run_trials(
        lambda g: play(uniform_choice_agent, env, env.rounds + 1, g).outcome == "win",
        4000,
        55,
    )
    # exact win probability is P^2(0,1) = 1/4; threshold is 1/(2|E|) = 1/6
    assert est.p_hat == pytest.approx(0.25, abs=0.03)
    assert verdict_against_bound(est, 1 / (2 * TRIANGLE.m)).status != REFUTED


def test_navigation_deterministic_search_finds_winner():
    env = graph_navigation_env(C5, 0, 2, relabel_seed=1)
    actions = search_deterministic_agent(env, env.rounds)
    assert actions is not None
    assert play(table_agent(actions), env, env.rounds + 1).outcome == "win"


# --- cover time ------------------------------------------------------------------------


def test_cover_time_oracles():
    assert exact_cover_time(Graph(1, ()), 0) == 0.0
    assert exact_cover_time(Graph(2, ((0, 1),)), 0) == pytest.approx(1.0)
    assert exact_cover_time(C6, 0) == pytest.approx(15.0)  # n(n-1)/2
    assert exact_cover_time(K4, 0) == pytest.approx(5.5)  # 3 * (1 + 1/2 + 1/3)


def test_cover_time_monte_carlo_matches_oracle():
    mean, lo, hi = estimate_cover_time(C6, 0, 20000, seed=13)
    assert lo <= 15.0 <= hi
    mean, lo, hi = estimate_cover_time(K4, 0, 20000, seed=13)
    assert lo <= 5.5 <= hi


def test_cover_time_env_matches_direct_walk_stats():
    env = cover_time_env(K4, 0, relabel_seed=2)
    vals = []
    for i in range(300):
        t = play(uniform_choice_agent, env, 10000, RngStream(99, i).generator())
        assert t.outcome == "halt"
        vals.append(t.penalty)
    assert sum(vals) / len(vals) == pytest.approx(5.5, abs=0.8)


def test_cover_time_single_vertex():
    env = cover_time_env(Graph(1, ()), 0)
    t = play(table_agent([1]), env, 2)
    assert t.outcome == "halt" and t.penalty == 0.0


# --- karger ---------------------------------------------------------------------------


def test_exact_min_cut_values():
    assert exact_min_cut(TRIANGLE) == 2
    assert exact_min_cut(C4) == 2
    assert exact_min_cut(K4) == 3
    assert exact_min_cut(Q3) == 3
    bridge = Graph(6, ((0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)))
    assert exact_min_cut(bridge) == 1


def test_karger_triangle_always_wins():
    env = karger_env(TRIANGLE, relabel_seed=4)
    for i in range(20):
        t = play(uniform_choice_agent, env, 10, RngStream(7, i).generator())
        assert t.outcome == "win"


def test_karger_env_two_vertex_multigraph_bookkeeping():
    # contracting C4 once gives a triangle; finishing always yields the
    # 2-edge multigraph, which equals the min cut
    env = karger_env(C4, relabel_seed=0)
    t = play(uniform_choice_agent, env, 10, RngStream(8, 0).generator())
    assert t.outcome == "win"
    assert t.pairs[0][0] == 4  # first observation: edge count
    assert t.pairs[1][0] == 3  # after one contraction: triangle


def test_karger_k4_win_fraction():
    # direct uniform-contraction trial; exact win probability is 4/5
    est = run_trials(karger_win_trial(K4, exact_min_cut(K4)), 8000, 91)
    assert est.p_hat == pytest.approx(0.8, abs=0.02)
    assert verdict_against_bound(est, 2 / (4 * 3)).status != REFUTED


def test_karger_env_agrees_with_direct_trial_distribution():
    env = karger_env(K4, relabel_seed=6)
    est_env = run_trials(
        lambda g: play(uniform_choice_agent, env, 10, g).outcome == "win", 4000, 17
    )
    assert est_env.p_hat == pytest.approx(0.8, abs=0.03)


# --- vertex transitive -------------------------------------------------------------------


def test_vertex_transitive_env_requires_certification():
    with pytest.raises(ValueError):
        vertex_transitive_env(Graph(3, ((0, 1), (1, 2))), 0, 1)


def test_vertex_transitive_uniform_agent_win_rate():
    env = vertex_transitive_env(C4, 0, 1, relabel_seed=5)
    est = run_trials(
        lambda g: play(uniform_choice_agent, env, 3, g).outcome == "win", 3000, 23
    )
    assert est.p_hat == pytest.approx(0.5, abs=0.04)  # P^2(u,u) = 1/2
    assert verdict_against_bound(est, 1 / C4.n).status != REFUTED


# --- penalty tests -------------------------------------------------------------------------


def example_tests(n):
    return [PenaltyTest((1, 2), (0.5, 0.5), (0.0, 1.9))] * n


def test_penalty_expectation_gate():
    with pytest.raises(ValueError):
        penalty_tests_env([PenaltyTest((1, 2), (0.5, 0.5), (0.5, 1.5))])
    # per-round expectation 0.95 < 1 passes
    env = penalty_tests_env(example_tests(3))
    assert env.rounds == 3


def test_penalty_sampling_agent_mean():
    env = penalty_tests_env(example_tests(50))
    mean, lo, hi = games.estimate_penalty(env, sampling_agent, 1500, seed=3)
    assert mean < 50
    assert lo <= 47.5 <= hi


def test_penalty_greedy_agent_zero():
    env = penalty_tests_env(example_tests(50))
    agent = greedy_min_agent(env.tests)
    assert games.play_penalty(env, agent) == 0.0


def test_penalty_greedy_below_twice_rounds_generally():
    tests = [
        PenaltyTest((1, 2, 3), (0.2, 0.5, 0.3), (0.9, 0.8, 0.99)),
        PenaltyTest((5, 6), (0.4, 0.6), (0.7, 0.95)),
    ] * 10
    env = penalty_tests_env(tests)
    agent = greedy_min_agent(env.tests)
    total = games.play_penalty(env, agent)
    assert total < 2 * env.rounds
    assert total == pytest.approx(sum(min(t.charges) for t in env.tests))


def test_penalty_off_support_action_charged():
    env = penalty_tests_env(example_tests(2))
    total = games.play_penalty(env, table_agent([7, 1]))
    assert total == games.penalty.OFF_SUPPORT_CHARGE


# --- transcripts ------------------------------------------------------------------------------


def test_transcript_replay_determinism_across_games():
    gen = RngStream(1234, 0).generator()
    envs = [
        even_odds_env(6, adversary_parity),
        graph_navigation_env(C5, 0, 3, relabel_seed=11),
        cover_time_env(K4, 0, relabel_seed=11),
        karger_env(K4, relabel_seed=11),
        vertex_transitive_env(Q3, 0, 2, relabel_seed=11),
        penalty_tests_env(example_tests(6)),
    ]
    agents = [uniform_bit_agent] + [uniform_choice_agent] * 4 + [sampling_agent]
    for env, agent in zip(envs, agents):
        original = play(agent, env, 200, gen)
        again = replay(env, original, 200)
        assert again == original
