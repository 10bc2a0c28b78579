import math

import numpy as np
import pytest

from dgspec import (
    DefectiveMatrixError,
    PreconditionError,
    build_transition_matrix,
    chord_cycle,
    complete_bidirected,
    de_bruijn,
    eml_symbol_check,
    graph_from_edges,
    petersen,
    spectral_profile,
    stationary_distribution,
    undirected_cycle,
)


def permute(g, perm):
    edges = {(perm[t], perm[h]) for t, h in g.edges}
    return graph_from_edges(g.n, edges)


def profile_of(g):
    return spectral_profile(build_transition_matrix(g))


class TestBuildTransitionMatrix:
    def test_complete_bidirected_3(self):
        p = build_transition_matrix(complete_bidirected(3)).p
        expected = (np.ones((3, 3)) - np.eye(3)) / 2
        assert np.array_equal(p, expected)

    def test_chord_cycle(self):
        p = build_transition_matrix(chord_cycle(3)).p
        assert np.array_equal(p, [[0, 0.5, 0.5], [0, 0, 1], [1, 0, 0]])

    def test_path_rejected(self):
        g = graph_from_edges(3, [(0, 1), (1, 2)])
        with pytest.raises(PreconditionError, match="outdegree 0"):
            build_transition_matrix(g)

    def test_rows_sum_to_one(self, corpus):
        for g in corpus.values():
            p = build_transition_matrix(g).p
            assert np.max(np.abs(p.sum(axis=1) - 1.0)) <= 1e-12
            assert np.min(p) >= 0.0


class TestStationaryDistribution:
    def test_complete_bidirected_uniform(self):
        for n in (3, 5):
            pi = stationary_distribution(build_transition_matrix(complete_bidirected(n)))
            assert np.max(np.abs(pi - 1.0 / n)) <= 1e-12

    def test_chord_cycle_values(self):
        pi = stationary_distribution(build_transition_matrix(chord_cycle(3)))
        assert np.max(np.abs(pi - np.array([0.4, 0.2, 0.4]))) <= 1e-10

    def test_cycle_uniform(self):
        pi = stationary_distribution(build_transition_matrix(undirected_cycle(5)))
        assert np.max(np.abs(pi - 0.2)) <= 1e-12

    def test_fixed_point_and_mass(self, corpus):
        for g in corpus.values():
            t = build_transition_matrix(g)
            pi = stationary_distribution(t)
            assert np.max(np.abs(pi @ t.p - pi)) <= 1e-12
            assert abs(pi.sum() - 1.0) <= 1e-12
            assert pi.min() > 0.0

    def test_periodic_rejected(self):
        g = graph_from_edges(2, [(0, 1), (1, 0)])
        with pytest.raises(PreconditionError, match="aperiodic"):
            stationary_distribution(build_transition_matrix(g))

    def test_disconnected_rejected(self):
        g = graph_from_edges(2, [(0, 0), (1, 1)])
        with pytest.raises(PreconditionError, match="strongly connected"):
            stationary_distribution(build_transition_matrix(g))


class TestSpectralProfile:
    def test_complete_bidirected_3(self):
        prof = profile_of(complete_bidirected(3))
        assert np.allclose(sorted(prof.decomposition.eigenvalues.real),
                           [-0.5, -0.5, 1.0], atol=1e-12)
        assert prof.rho == pytest.approx(0.5, abs=1e-12)
        assert prof.kappa == pytest.approx(1.0, abs=1e-8)

    def test_chord_cycle_rho(self):
        assert profile_of(chord_cycle(3)).rho == pytest.approx(
            math.sqrt(2) / 2, abs=1e-9)

    def test_cycle5_rho(self):
        assert profile_of(undirected_cycle(5)).rho == pytest.approx(
            math.cos(math.pi / 5), abs=1e-9)

    def test_leading_column_is_exact(self):
        for g in (chord_cycle(3), petersen()):
            prof = profile_of(g)
            n = g.n
            assert prof.decomposition.eigenvalues[0] == 1.0 + 0.0j
            assert np.array_equal(prof.decomposition.basis[:, 0],
                                  np.full(n, 1.0 / np.sqrt(n), dtype=complex))

    def test_rho_strictly_below_one(self, corpus_profiles):
        for prof in corpus_profiles.values():
            assert prof.rho < 1.0 - 1e-12

    def test_dual_row_identity(self, corpus_profiles):
        for prof in corpus_profiles.values():
            check = eml_symbol_check(prof)
            assert check.pi_row_deviation <= 1e-8
            assert check.perron_gap <= 1e-10

    def test_regular_graph_spectrum_is_scaled_adjacency(self):
        # circulant closed form: cycle adjacency eigenvalues 2cos(2 pi k / n)
        for n in (5, 7):
            prof = profile_of(undirected_cycle(n))
            expected = sorted(2 * math.cos(2 * math.pi * k / n) / 2
                              for k in range(n))
            got = sorted(prof.decomposition.eigenvalues.real)
            assert np.max(np.abs(np.array(got) - np.array(expected))) <= 1e-8
            assert np.max(np.abs(prof.decomposition.eigenvalues.imag)) <= 1e-10

    def test_rho_invariant_under_relabeling(self):
        rng = np.random.default_rng(101)
        g = chord_cycle(6, [(0, 2), (1, 4)])  # cycle lengths 6, 5, 4: aperiodic
        base = profile_of(g).rho
        for _ in range(5):
            perm = list(rng.permutation(g.n))
            assert profile_of(permute(g, perm)).rho == pytest.approx(base, abs=1e-9)

    def test_kappa_one_iff_symmetric_in_corpus(self, corpus, corpus_profiles):
        for name, prof in corpus_profiles.items():
            g = corpus[name]
            symmetric = all((h, t) in g.edges for t, h in g.edges)
            assert prof.kappa >= 1.0
            if symmetric:
                assert prof.kappa - 1.0 <= 1e-8

    def test_pi_extremes(self):
        prof = profile_of(chord_cycle(3))
        assert prof.pi_min == pytest.approx(0.2, abs=1e-10)
        assert prof.pi_max == pytest.approx(0.4, abs=1e-10)

    def test_periodic_rejected(self):
        with pytest.raises(PreconditionError, match="aperiodic"):
            profile_of(graph_from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]))

    def test_defective_rejected(self):
        with pytest.raises(DefectiveMatrixError):
            profile_of(de_bruijn(2, 2))

    def test_power_iteration_matches_dual_eigenvector(self, corpus_profiles):
        # two independent routes to pi: power iteration vs first row of C^-1
        for prof in corpus_profiles.values():
            row = prof.decomposition.basis_inverse[0] / np.sqrt(prof.n)
            assert np.max(np.abs(row - prof.pi)) <= 1e-8
