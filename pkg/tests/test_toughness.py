import math

import numpy as np
import pytest

import dgspec.toughness as toughness_mod
from dgspec import (
    INFINITE,
    PreconditionError,
    alon_toughness_bound,
    build_transition_matrix,
    chord_cycle,
    compare_bounds,
    complete_bidirected,
    exact_toughness,
    graph_from_edges,
    induced_subgraph,
    petersen,
    scc,
    spectral_profile,
    toughness_spectral_bound,
    undirected_cycle,
)

from oracles import toughness_by_combinations


def profile_of(g):
    return spectral_profile(build_transition_matrix(g))


def complete_with_loops(n):
    return graph_from_edges(n, {(i, j) for i in range(n) for j in range(n)})


class TestExactToughness:
    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_complete_graphs_never_disconnect(self, n):
        result = exact_toughness(complete_bidirected(n))
        assert result.is_infinite
        assert result.witness is None
        assert result.component_count is None

    def test_cycle5(self):
        result = exact_toughness(undirected_cycle(5))
        assert result.value == 1.0
        assert result.witness == (0, 2)  # smallest nonadjacent-pair bitmask
        assert result.component_count == 2

    def test_chord_cycle(self):
        result = exact_toughness(chord_cycle(3))
        assert result.value == 0.5
        assert result.witness == (0,)
        assert result.component_count == 2

    def test_petersen(self):
        result = exact_toughness(petersen())
        assert result.value == 4.0 / 3.0
        assert len(result.witness) == 4
        assert result.component_count == 3

    def test_witness_certificate(self, corpus):
        for g in corpus.values():
            result = exact_toughness(g)
            if result.is_infinite:
                continue
            keep = [v for v in range(g.n) if v not in result.witness]
            dec = scc(induced_subgraph(g, keep))
            assert dec.component_count == result.component_count
            assert dec.component_count >= 2
            assert result.value == len(result.witness) / result.component_count

    def test_matches_combination_oracle(self, corpus, random_corpus):
        graphs = list(corpus.values()) + [g for _, g, _ in random_corpus]
        for g in graphs:
            if g.n > 10:
                continue
            result = exact_toughness(g)
            oracle = toughness_by_combinations(g.n, g.edges)
            if oracle is None:
                assert result.is_infinite
            else:
                value, witness, components = oracle
                assert result.value == value
                assert frozenset(result.witness) == witness
                assert result.component_count == components

    def test_invariant_under_relabeling(self):
        g = chord_cycle(6, [(0, 2), (1, 4)])
        base = exact_toughness(g).value
        rng = np.random.default_rng(13)
        for _ in range(5):
            perm = list(rng.permutation(g.n))
            h = graph_from_edges(g.n, {(perm[t], perm[hd]) for t, hd in g.edges})
            assert exact_toughness(h).value == base

    def test_requires_strong_connectivity(self):
        with pytest.raises(PreconditionError, match="strongly connected"):
            exact_toughness(graph_from_edges(2, [(0, 1)]))

    def test_cap_and_override(self):
        g = undirected_cycle(5)
        with pytest.raises(PreconditionError, match="cap"):
            exact_toughness(g, cap=4)
        assert exact_toughness(g, cap=4, allow_large=True).value == 1.0

    def test_parallel_matches_sequential(self, monkeypatch):
        monkeypatch.setattr(toughness_mod, "_PARALLEL_THRESHOLD", 0)
        for g in (chord_cycle(3), undirected_cycle(5), petersen()):
            assert exact_toughness(g, threads=2) == exact_toughness(g, threads=1)


class TestSpectralBound:
    def test_cycle5_value(self):
        mu = 2 * math.cos(math.pi / 5)
        expected = (4 / (2 * mu + mu * mu) - 1) / 3
        assert toughness_spectral_bound(profile_of(undirected_cycle(5))) == \
            pytest.approx(expected, abs=1e-9)
        assert expected == pytest.approx(-0.1055728, abs=5e-8)

    def test_petersen_value(self):
        assert toughness_spectral_bound(profile_of(petersen())) == pytest.approx(
            -1.0 / 30.0, abs=1e-9)

    def test_complete4_value(self):
        assert toughness_spectral_bound(profile_of(complete_bidirected(4))) == \
            pytest.approx(5.0 / 12.0, abs=1e-9)

    def test_alon_reduction_on_regular_corpus(self, corpus, corpus_profiles):
        for name, g in corpus.items():
            if not all((h, t) in g.edges for t, h in g.edges):
                continue
            spectral = toughness_spectral_bound(corpus_profiles[name])
            alon = alon_toughness_bound(g)
            assert spectral == pytest.approx(alon, abs=1e-9)
            exact = exact_toughness(g)
            assert exact.value >= alon - 1e-9

    def test_chord_cycle_cross_check(self):
        # independent recomputation of the formula from profile inputs
        prof = profile_of(chord_cycle(3))
        lead = prof.pi_min / (prof.pi_max * prof.rho * prof.kappa)
        damp = 1 / (1 + prof.rho * prof.norm_c ** 2 * prof.pi_min
                    / (prof.kappa * prof.pi_max))
        assert toughness_spectral_bound(prof) == pytest.approx(
            (lead - damp - 1) / 3, abs=1e-12)

    def test_zero_rho_gives_infinite_marker(self):
        prof = profile_of(complete_with_loops(4))
        assert prof.rho == pytest.approx(0.0, abs=1e-12)
        assert toughness_spectral_bound(prof) == INFINITE

    def test_alon_bound_requires_regular_symmetric(self):
        with pytest.raises(PreconditionError):
            alon_toughness_bound(chord_cycle(3))

    def test_alon_bound_rank_one_adjacency(self):
        # complete with self-loops: mu is numerically zero, both routes agree
        assert alon_toughness_bound(complete_with_loops(4)) == INFINITE


class TestCompareBounds:
    def test_complete_graph_holds_trivially(self):
        cmp = compare_bounds(complete_bidirected(4))
        assert cmp.exact.is_infinite
        assert cmp.holds
        assert math.isinf(cmp.gap)

    def test_cycle5(self):
        cmp = compare_bounds(undirected_cycle(5))
        assert cmp.exact.value == 1.0
        assert cmp.spectral_bound == pytest.approx(-0.1055728, abs=5e-8)
        assert cmp.holds
        assert cmp.gap == pytest.approx(cmp.exact.value - cmp.spectral_bound,
                                        abs=1e-12)

    def test_chord_cycle_records_flag(self):
        cmp = compare_bounds(chord_cycle(3))
        assert cmp.exact.value == 0.5
        assert isinstance(cmp.holds, bool)
        assert cmp.note is None

    def test_zero_rho_note(self):
        cmp = compare_bounds(complete_with_loops(4))
        assert cmp.exact.is_infinite
        assert math.isinf(cmp.spectral_bound)
        assert cmp.holds
        assert "degenerates" in cmp.note
