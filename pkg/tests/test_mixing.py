import dataclasses
import math

import numpy as np
import pytest

from dgspec import (
    NumericalError,
    PreconditionError,
    SubsetPair,
    alon_chung_bound,
    alon_chung_sweep,
    build_transition_matrix,
    chord_cycle,
    complete_bidirected,
    eml_bound,
    eml_bound_simple,
    eml_lhs,
    graph_from_edges,
    petersen,
    spectral_profile,
    undirected_cycle,
    verify_eml,
)


def profile_of(g):
    return spectral_profile(build_transition_matrix(g))


def independent_bound(p, u_idx, w_idx):
    """Recompute the full bound from scratch with numpy's own eigensolver.

    Valid for matrices with simple spectrum, where the normalized
    eigenbasis is unique up to phases and the norms are intrinsic.
    """
    n = p.shape[0]
    vals, vecs = np.linalg.eig(p)
    vecs = vecs / np.sqrt(np.sum(np.abs(vecs) ** 2, axis=0))
    svals = np.linalg.svd(vecs, compute_uv=False)
    norm_c = float(svals[0])
    norm_c_inv = float(1.0 / svals[-1])
    lead = int(np.argmin(np.abs(vals - 1.0)))
    rho = float(np.max(np.abs(np.delete(vals, lead))))
    wvals, wvecs = np.linalg.eig(p.T)
    pi = np.abs(wvecs[:, np.argmin(np.abs(wvals - 1.0))].real)
    pi = pi / pi.sum()
    pi_w = pi[w_idx].sum()
    fac_u = norm_c ** 2 * len(u_idx) - len(u_idx) ** 2 / n
    fac_w = norm_c_inv ** 2 * len(w_idx) - pi_w ** 2 * n
    return rho * math.sqrt(max(fac_u, 0.0) * max(fac_w, 0.0))


class TestSubsetPair:
    def test_round_trip(self):
        pair = SubsetPair.from_indices([0, 2, 3], [1, 4])
        assert pair.u == 0b1101
        assert pair.w == 0b10010
        assert pair.u_indices == (0, 2, 3)
        assert pair.w_indices == (1, 4)

    def test_negative_rejected(self):
        with pytest.raises(PreconditionError):
            SubsetPair(-1, 0)

    def test_out_of_range_rejected(self):
        prof = profile_of(chord_cycle(3))
        with pytest.raises(PreconditionError):
            eml_lhs(prof, SubsetPair(1 << 5, 0))


class TestPairValues:
    def test_empty_pair_is_zero(self):
        prof = profile_of(chord_cycle(3))
        pair = SubsetPair(0, 0)
        assert eml_lhs(prof, pair) == 0.0
        assert eml_bound(prof, pair) == 0.0
        assert eml_bound_simple(prof, pair) == 0.0

    def test_chord_cycle_lhs(self):
        prof = profile_of(chord_cycle(3))
        assert eml_lhs(prof, SubsetPair.from_indices([0], [1, 2])) == pytest.approx(
            0.4, abs=1e-10)

    def test_complete3_self_pair_lhs(self):
        prof = profile_of(complete_bidirected(3))
        assert eml_lhs(prof, SubsetPair.from_indices([0], [0])) == pytest.approx(
            1.0 / 3.0, abs=1e-12)

    def test_full_pair_on_regular_graph_is_tight_zero(self):
        prof = profile_of(undirected_cycle(5))
        pair = SubsetPair.from_indices(range(5), range(5))
        assert eml_lhs(prof, pair) <= 1e-12
        assert eml_bound(prof, pair) <= 1e-6

    def test_bound_matches_independent_recomputation(self):
        g = chord_cycle(3)
        prof = profile_of(g)
        for u_idx, w_idx in [([0], [1, 2]), ([0, 1], [2]), ([1], [0, 1, 2])]:
            mine = eml_bound(prof, SubsetPair.from_indices(u_idx, w_idx))
            ref = independent_bound(prof.transition.p, u_idx, w_idx)
            assert mine == pytest.approx(ref, abs=1e-9)

    def test_simple_bound_singleton_symmetric(self):
        prof = profile_of(undirected_cycle(5))
        pair = SubsetPair.from_indices([0], [3])
        assert eml_bound_simple(prof, pair) == pytest.approx(prof.rho, abs=1e-8)

    def test_radicand_guard(self):
        prof = profile_of(chord_cycle(3))
        broken = dataclasses.replace(prof, norm_c_inv=0.01)
        with pytest.raises(NumericalError, match="radicand"):
            eml_bound(broken, SubsetPair.from_indices([0], [0, 1, 2]))


class TestVerifySweep:
    @pytest.mark.parametrize("g,pairs", [
        (complete_bidirected(3), 64),
        (chord_cycle(3), 64),
        (undirected_cycle(5), 1024),
    ])
    def test_exhaustive_counts_and_validity(self, g, pairs):
        report = verify_eml(profile_of(g))
        assert report.pair_count == pairs
        assert report.policy == "exhaustive"
        assert report.max_violation <= 1e-9
        assert report.theorem_violations == 0
        assert report.simple_violations == 0
        assert report.passed
        assert 0.0 < report.tightness_ratio <= 1.0 + 1e-12

    def test_simple_bound_dominates_pairwise(self):
        for g in (chord_cycle(3), undirected_cycle(5)):
            report = verify_eml(profile_of(g))
            assert report.bound_gap_min >= -1e-9

    def test_nonempty_only_count(self):
        report = verify_eml(profile_of(chord_cycle(3)), nonempty_only=True)
        assert report.pair_count == 49
        assert report.nonempty_only

    def test_cap_enforced(self):
        prof = profile_of(chord_cycle(14, [(0, 2)]))
        with pytest.raises(PreconditionError, match="capped"):
            verify_eml(prof)

    def test_sampling_is_deterministic(self):
        prof = profile_of(chord_cycle(14, [(0, 2)]))
        a = verify_eml(prof, sample=500, seed=7)
        b = verify_eml(prof, sample=500, seed=7)
        assert a == b
        assert a.pair_count == 500
        assert a.policy == "sample"
        c = verify_eml(prof, sample=500, seed=8)
        assert c.worst_pair != a.worst_pair

    def test_sampled_pairs_also_pass(self):
        prof = profile_of(chord_cycle(14, [(0, 2)]))
        report = verify_eml(prof, sample=2000, seed=3)
        assert report.max_violation <= 1e-9

    def test_keep_rows(self):
        report = verify_eml(profile_of(chord_cycle(3)), keep_rows=True)
        assert report.rows is not None
        assert len(report.rows) == 64
        u_mask, w_mask, lhs, bound, bound_simple, slack = report.rows[-1]
        assert (u_mask, w_mask) == (63 & 0b111, 0b111)
        assert slack == pytest.approx(bound - lhs, abs=1e-15)
        assert bound_simple >= bound - 1e-12

    def test_keep_rows_capped(self):
        with pytest.raises(PreconditionError, match="rows"):
            verify_eml(profile_of(petersen()), keep_rows=True)

    def test_worst_pair_is_deterministic_minimum(self):
        report = verify_eml(profile_of(chord_cycle(3)), keep_rows=True)
        slacks = [(r[5], r[0], r[1]) for r in report.rows]
        best = min(slacks)
        assert (report.worst_pair.u, report.worst_pair.w) == (best[1], best[2])
        assert report.min_slack == best[0]

    def test_singleton_row_bookkeeping(self):
        g = chord_cycle(3)
        prof = profile_of(g)
        p = prof.transition.p
        for u_idx in ([0], [0, 2], [0, 1, 2]):
            total = 0.0
            for j in range(3):
                s = float(p[np.ix_(u_idx, [j])].sum())
                lhs = eml_lhs(prof, SubsetPair.from_indices(u_idx, [j]))
                center = len(u_idx) * prof.pi[j]
                assert min(abs(s - (center + lhs)), abs(s - (center - lhs))) <= 1e-12
                total += s
            assert total == pytest.approx(len(u_idx), abs=1e-10)

    def test_pair_multiset_invariant_under_relabeling(self):
        g = chord_cycle(4, [(0, 2)])
        perm = [2, 0, 3, 1]
        h = graph_from_edges(4, {(perm[t], perm[hd]) for t, hd in g.edges})
        base = verify_eml(profile_of(g), keep_rows=True)
        other = verify_eml(profile_of(h), keep_rows=True)
        key = lambda rows: np.sort(np.array([(r[2], r[3]) for r in rows]), axis=0)
        assert np.allclose(key(base.rows), key(other.rows), atol=1e-9)


class TestAlonChung:
    def test_full_pair_exact(self):
        g = undirected_cycle(5)
        lhs, _ = alon_chung_bound(g, SubsetPair.from_indices(range(5), range(5)))
        assert lhs == pytest.approx(0.0, abs=1e-12)

    def test_c5_singletons(self):
        g = undirected_cycle(5)
        lhs, rhs = alon_chung_bound(g, SubsetPair.from_indices([0], [1]))
        assert lhs == pytest.approx(0.6, abs=1e-12)
        assert rhs == pytest.approx(2 * math.cos(math.pi / 5) * 0.8, abs=1e-9)

    def test_petersen_mu_from_adjacency_oracle(self):
        g = petersen()
        adjacency_spectrum = np.linalg.eigvalsh(g.adjacency_matrix())
        mu_oracle = float(np.max(np.abs(adjacency_spectrum[:-1])))
        assert mu_oracle == pytest.approx(2.0, abs=1e-9)
        report = alon_chung_sweep(g)
        assert report.mu == pytest.approx(2.0, abs=1e-8)
        assert report.pair_count == 4 ** 10
        assert report.violations == 0
        assert report.passed

    def test_c5_sweep(self):
        report = alon_chung_sweep(undirected_cycle(5))
        assert report.k == 2
        assert report.violations == 0

    def test_directed_graph_rejected(self):
        with pytest.raises(PreconditionError, match="symmetric"):
            alon_chung_bound(chord_cycle(3), SubsetPair(1, 2))

    def test_irregular_graph_rejected(self):
        g = graph_from_edges(3, [(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0),
                                 (0, 0)])
        with pytest.raises(PreconditionError, match="regular"):
            alon_chung_bound(g, SubsetPair(1, 2))

    def test_scaled_walk_lhs_consistency(self):
        # k * (walk deviation) reproduces the adjacency deviation exactly
        g = undirected_cycle(5)
        prof = profile_of(g)
        for u_idx, w_idx in [([0], [1]), ([0, 2], [1, 3, 4]), ([1, 2, 3], [0])]:
            pair = SubsetPair.from_indices(u_idx, w_idx)
            lhs_adj, _ = alon_chung_bound(g, pair, mu=2 * prof.rho)
            assert 2 * eml_lhs(prof, pair) == pytest.approx(lhs_adj, abs=1e-10)
