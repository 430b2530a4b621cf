"""Evaluation-stack tests: embeddings, PCA, Gaussian backend, DCF,
spectral clustering, WER, and MOS intervals.

Expected values are frozen from independent computations: a
power-iteration-with-deflation eigen oracle for PCA, and hand-worked
fixtures for the backend log-likelihood ratios, the detection cost, and
the text metrics.
"""

import json
import math

import numpy as np
import pytest

from accentkit import acceval
from accentkit.acceval import (
    EmbeddingSet,
    GaussianBackend,
    PcaModel,
    SimilarityMatrix,
    TrialScores,
    cosine,
    dcf,
    fit_backend,
    fit_pca,
    gt_similarity,
    mean_embedding_similarity_matrix,
    mos_ci,
    normalize_text,
    parse_embeddings,
    parse_sim_matrix_csv,
    parse_trials_jsonl,
    score_llr,
    score_trials,
    sim_matrix_to_csv,
    spectral_cluster,
    trials_to_jsonl,
    wer,
)


def emb_text(rows):
    return "".join(
        json.dumps({"utt_id": u, "label": l, "vec": v}) + "\n" for u, l, v in rows
    )


def make_set(rows):
    return parse_embeddings(emb_text(rows))


class TestEmbeddingsParse:
    def test_round_trip(self):
        es = make_set([("u1", "A", [1.0, 2.0]), ("u2", "B", [3.0, 4.0])])
        assert es.utt_ids == ("u1", "u2")
        assert es.labels == ("A", "B")
        assert np.array_equal(es.vectors, np.array([[1.0, 2.0], [3.0, 4.0]]))

    def test_dim_mismatch_reports_line(self):
        text = emb_text([("u1", "A", [1.0, 2.0]), ("u2", "A", [1.0])])
        with pytest.raises(ValueError, match="line 2"):
            parse_embeddings(text)

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError, match="finite"):
            parse_embeddings('{"utt_id":"u1","label":"A","vec":[1.0,NaN]}\n')

    def test_duplicate_utt_rejected(self):
        text = emb_text([("u1", "A", [1.0]), ("u1", "B", [2.0])])
        with pytest.raises(ValueError, match="duplicate"):
            parse_embeddings(text)

    def test_empty_vec_rejected(self):
        with pytest.raises(ValueError):
            parse_embeddings('{"utt_id":"u1","label":"A","vec":[]}\n')

    def test_missing_label_rejected(self):
        with pytest.raises(ValueError, match="label"):
            parse_embeddings('{"utt_id":"u1","vec":[1.0]}\n')


class TestCosine:
    def test_orthogonal_and_parallel(self):
        assert cosine(np.array([1.0, 0.0]), np.array([0.0, 2.0])) == 0.0
        assert cosine(np.array([1.0, 1.0]), np.array([2.0, 2.0])) == pytest.approx(1.0)

    def test_clamped_to_unit_interval(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            a = rng.standard_normal(16)
            s = cosine(a, a * float(rng.uniform(0.1, 10)))
            assert -1.0 <= s <= 1.0

    def test_zero_norm_rejected(self):
        with pytest.raises(ValueError, match="zero"):
            cosine(np.zeros(3), np.ones(3))


class TestGtSimilarity:
    def test_hand_computed_grouping(self):
        ref = make_set([("r1", "A", [1.0, 0.0]), ("r2", "A", [1.0, 0.0]), ("r3", "B", [0.0, 1.0])])
        ev = make_set([("e1", "X", [1.0, 0.0]), ("e2", "X", [0.0, 1.0]), ("e3", "X", [0.0, -1.0])])
        res = gt_similarity(ev, ref, {"e1": "r1", "e2": "r2", "e3": "r3"})
        # Grouped by the reference utterance's label, not the eval label.
        assert res.per_accent["A"] == pytest.approx(0.5)
        assert res.per_accent["B"] == pytest.approx(-1.0)
        assert res.overall == pytest.approx(0.0)

    def test_dangling_pair_rejected(self):
        ref = make_set([("r1", "A", [1.0])])
        ev = make_set([("e1", "A", [1.0])])
        with pytest.raises(ValueError, match="ghost"):
            gt_similarity(ev, ref, {"e1": "ghost"})
        with pytest.raises(ValueError, match="ghost"):
            gt_similarity(ev, ref, {"ghost": "r1"})

    def test_empty_pairing_rejected(self):
        ref = make_set([("r1", "A", [1.0])])
        ev = make_set([("e1", "A", [1.0])])
        with pytest.raises(ValueError):
            gt_similarity(ev, ref, {})


class TestSimilarityMatrix:
    def test_mean_embedding_matrix_hand_case(self):
        es = make_set(
            [("u1", "A", [1.0, 0.0]), ("u2", "A", [0.0, 1.0]), ("u3", "B", [1.0, 0.0])]
        )
        sm = mean_embedding_similarity_matrix(es)
        assert sm.labels == ("A", "B")
        assert sm.values[0, 0] == 1.0 and sm.values[1, 1] == 1.0
        assert sm.values[0, 1] == pytest.approx(math.sqrt(0.5))
        assert sm.values[0, 1] == sm.values[1, 0]

    def test_labels_sorted(self):
        es = make_set([("u1", "Z", [1.0]), ("u2", "A", [1.0])])
        assert mean_embedding_similarity_matrix(es).labels == ("A", "Z")

    def test_zero_norm_mean_rejected(self):
        es = make_set([("u1", "A", [1.0, 0.0]), ("u2", "A", [-1.0, 0.0]), ("u3", "B", [1.0, 1.0])])
        with pytest.raises(ValueError, match="A"):
            mean_embedding_similarity_matrix(es)

    def test_csv_round_trip(self):
        es = make_set(
            [("u1", "A", [1.0, 0.5]), ("u2", "B", [0.3, 1.0]), ("u3", "C d", [0.9, 0.1])]
        )
        sm = mean_embedding_similarity_matrix(es)
        back = parse_sim_matrix_csv(sim_matrix_to_csv(sm))
        assert back.labels == sm.labels
        assert np.array_equal(back.values, sm.values)

    def test_csv_label_mismatch_rejected(self):
        text = ",A,B\nA,1.0,0.5\nC,0.5,1.0\n"
        with pytest.raises(ValueError, match="label"):
            parse_sim_matrix_csv(text)

    def test_asymmetric_rejected(self):
        vals = np.array([[1.0, 0.2], [0.4, 1.0]])
        with pytest.raises(ValueError, match="symmetric"):
            SimilarityMatrix(("A", "B"), vals)


def oracle_top_eigenpairs(X, d, iters=50000):
    """Power iteration with deflation on the sample covariance."""
    Xc = X - X.mean(axis=0)
    C = Xc.T @ Xc / (X.shape[0] - 1)
    A = C.copy()
    rng = np.random.default_rng(999)
    vals, vecs = [], []
    for _ in range(d):
        v = rng.standard_normal(A.shape[0])
        v /= np.linalg.norm(v)
        for _ in range(iters):
            w = A @ v
            nw = np.linalg.norm(w)
            if nw == 0.0:
                break
            w /= nw
            if np.linalg.norm(w - v) < 1e-15 or np.linalg.norm(w + v) < 1e-15:
                v = w
                break
            v = w
        lam = float(v @ A @ v)
        # Convergence guard: the oracle itself must be trustworthy.
        assert np.linalg.norm(A @ v - lam * v) < 1e-8
        vals.append(lam)
        vecs.append(v)
        A = A - lam * np.outer(v, v)
    return np.array(vals), np.array(vecs)


class TestPca:
    def test_rank_one_line(self):
        X = np.array([[-1.0, -1.0], [0.0, 0.0], [1.0, 1.0]])
        model = fit_pca(X, 1)
        assert model.eigenvalues[0] == pytest.approx(2.0, abs=1e-8)
        assert model.basis[0] == pytest.approx([math.sqrt(0.5)] * 2, abs=1e-8)
        Z = model.project(X)
        for i in range(3):
            for j in range(3):
                dz = abs(Z[i, 0] - Z[j, 0])
                dx = np.linalg.norm(X[i] - X[j])
                assert dz == pytest.approx(dx, abs=1e-8)

    def test_full_dimension_isometry(self):
        rng = np.random.default_rng(5)
        X = rng.standard_normal((20, 4))
        Z = fit_pca(X, 4).project(X)
        for i in range(20):
            for j in range(20):
                assert np.linalg.norm(Z[i] - Z[j]) == pytest.approx(
                    np.linalg.norm(X[i] - X[j]), abs=1e-8
                )

    def test_matches_power_iteration_oracle(self):
        rng = np.random.default_rng(40)
        X = rng.standard_normal((40, 10))
        model = fit_pca(X, 3)
        vals, vecs = oracle_top_eigenpairs(X, 3)
        assert np.max(np.abs(model.eigenvalues - vals)) < 1e-6
        for i in range(3):
            dot = abs(float(model.basis[i] @ vecs[i]))
            assert dot == pytest.approx(1.0, abs=1e-6)

    def test_basis_orthonormal(self):
        rng = np.random.default_rng(6)
        X = rng.standard_normal((30, 8))
        B = fit_pca(X, 5).basis
        assert np.max(np.abs(B @ B.T - np.eye(5))) < 1e-10

    def test_eigenvalues_descending_nonnegative(self):
        rng = np.random.default_rng(7)
        X = rng.standard_normal((25, 6))
        ev = fit_pca(X, 6).eigenvalues
        assert (ev >= 0).all()
        assert (np.diff(ev) <= 1e-12).all()

    def test_sign_convention_first_nonzero_positive(self):
        rng = np.random.default_rng(8)
        X = rng.standard_normal((30, 4))
        for row in fit_pca(X, 4).basis:
            nonzero = row[np.abs(row) > 1e-12 * np.abs(row).max()]
            assert nonzero[0] > 0

    def test_sign_convention_skips_zero_component(self):
        rng = np.random.default_rng(9)
        X = np.zeros((20, 3))
        X[:, 1:] = rng.standard_normal((20, 2))
        basis = fit_pca(X, 2).basis
        for row in basis:
            assert abs(row[0]) < 1e-12
            nonzero = row[np.abs(row) > 1e-12]
            assert nonzero[0] > 0

    def test_d_too_large_rejected(self):
        X = np.random.default_rng(1).standard_normal((5, 10))
        with pytest.raises(ValueError, match="d"):
            fit_pca(X, 5)  # d must be <= n-1 = 4
        fit_pca(X, 4)

    def test_degenerate_rank_zero_rejected(self):
        X = np.ones((6, 3))
        with pytest.raises(ValueError, match="rank 0"):
            fit_pca(X, 1)

    def test_too_few_points_rejected(self):
        with pytest.raises(ValueError):
            fit_pca(np.ones((1, 3)), 1)


def two_class_set():
    # Classes symmetric about their means with distinct scatter axes:
    # within-class scatter (delta1 outer + delta2 outer) = [[1,0],[0,4]].
    rows = [
        ("a1", "A", [2.0, 1.0]),
        ("a2", "A", [0.0, 1.0]),
        ("b1", "B", [5.0, 7.0]),
        ("b2", "B", [5.0, 3.0]),
    ]
    return make_set(rows)


class TestBackend:
    def test_shared_covariance_hand_computed(self):
        backend = fit_backend(two_class_set(), d=2, reg_lambda=0.0)
        B = backend.pca.basis
        expected = B @ np.array([[1.0, 0.0], [0.0, 4.0]]) @ B.T
        assert np.max(np.abs(backend.shared_cov - expected)) < 1e-9
        mu_a = B @ (np.array([1.0, 1.0]) - backend.pca.mean)
        mu_b = B @ (np.array([5.0, 5.0]) - backend.pca.mean)
        assert np.max(np.abs(backend.class_means[0] - mu_a)) < 1e-9
        assert np.max(np.abs(backend.class_means[1] - mu_b)) < 1e-9

    def test_single_class_rejected(self):
        es = make_set([("u1", "A", [1.0, 0.0]), ("u2", "A", [0.0, 1.0])])
        with pytest.raises(ValueError, match="class"):
            fit_backend(es, d=1)

    def test_tiny_class_rejected(self):
        es = make_set(
            [("u1", "A", [1.0, 0.0]), ("u2", "A", [0.0, 1.0]), ("u3", "B", [1.0, 1.0])]
        )
        with pytest.raises(ValueError, match="B"):
            fit_backend(es, d=1)

    def test_zero_within_class_scatter_rejected(self):
        es = make_set(
            [
                ("u1", "A", [0.0, 0.0]),
                ("u2", "A", [0.0, 0.0]),
                ("u3", "B", [1.0, 1.0]),
                ("u4", "B", [1.0, 1.0]),
            ]
        )
        with pytest.raises(ValueError, match="positive-definite"):
            fit_backend(es, d=1, reg_lambda=0.0)

    def test_scalar_llr_hand_case(self):
        pca = PcaModel(mean=np.zeros(1), basis=np.eye(1), eigenvalues=np.ones(1))
        backend = GaussianBackend(
            pca=pca,
            classes=("a", "b"),
            class_means=np.array([[0.0], [2.0]]),
            shared_cov=np.eye(1),
            reg_lambda=0.0,
        )
        llr = score_llr(backend, np.array([0.0]))
        assert llr["a"] == pytest.approx(2.0, abs=1e-12)
        assert llr["b"] == pytest.approx(-2.0, abs=1e-12)

    def test_llr_matches_dense_oracle(self):
        rng = np.random.default_rng(21)
        rows = []
        for c, label in enumerate("ABC"):
            for i in range(10):
                rows.append((f"{label}{i}", label, list(rng.standard_normal(5) + 3 * c)))
        es = make_set(rows)
        backend = fit_backend(es, d=4)
        x = rng.standard_normal(5)
        llr = score_llr(backend, x)

        # Independent dense computation via slogdet and explicit inverse.
        z = backend.pca.project(x[None, :])[0]
        cov = backend.shared_cov
        sign, logdet = np.linalg.slogdet(cov)
        assert sign > 0
        inv = np.linalg.inv(cov)
        logliks = []
        for mu in backend.class_means:
            diff = z - mu
            logliks.append(-0.5 * (len(z) * math.log(2 * math.pi) + logdet + diff @ inv @ diff))
        for i, a in enumerate(backend.classes):
            others = [logliks[j] for j in range(3) if j != i]
            m = max(others)
            lse = m + math.log(sum(math.exp(o - m) for o in others))
            expected = logliks[i] - (lse - math.log(2))
            assert llr[a] == pytest.approx(expected, abs=1e-9)

    def test_llr_ranking_follows_loglik(self):
        es = two_class_set()
        backend = fit_backend(es, d=2, reg_lambda=1e-3)
        llr = score_llr(backend, np.array([0.0, 1.0]))
        assert llr["A"] > llr["B"]

    def test_huge_regularization_nearest_mean(self):
        rng = np.random.default_rng(31)
        rows = []
        for c, label in enumerate("AB"):
            for i in range(20):
                rows.append((f"{label}{i}", label, list(rng.standard_normal(3) + 5 * c)))
        es = make_set(rows)
        backend = fit_backend(es, d=2, reg_lambda=1e6)
        for _ in range(50):
            x = rng.standard_normal(3) + rng.choice([0.0, 5.0])
            llr = score_llr(backend, x)
            best = max(llr, key=llr.get)
            z = backend.pca.project(x[None, :])[0]
            dists = np.linalg.norm(backend.class_means - z, axis=1)
            assert best == backend.classes[int(np.argmin(dists))]

    def test_scale_invariant_argmax(self):
        rng = np.random.default_rng(41)
        rows, tests = [], []
        for c, label in enumerate("ABC"):
            for i in range(15):
                rows.append((f"{label}{i}", label, list(rng.standard_normal(6) + 4 * c)))
            for i in range(10):
                tests.append((f"t{label}{i}", label, list(rng.standard_normal(6) + 4 * c)))
        ref, ev = make_set(rows), make_set(tests)
        scaled_ref = EmbeddingSet(ref.utt_ids, ref.labels, ref.vectors * 3.7)
        scaled_ev = EmbeddingSet(ev.utt_ids, ev.labels, ev.vectors * 3.7)
        b1 = fit_backend(ref, d=4)
        b2 = fit_backend(scaled_ref, d=4)
        t1 = score_trials(b1, ev)
        t2 = score_trials(b2, scaled_ev)
        assert np.array_equal(np.argmax(t1.llr, axis=1), np.argmax(t2.llr, axis=1))

    def test_default_regularization_trace_scaled(self):
        backend = fit_backend(two_class_set(), d=2)
        cov_noreg = fit_backend(two_class_set(), d=2, reg_lambda=0.0).shared_cov
        expected = 1e-6 * np.trace(cov_noreg) / 2
        assert backend.reg_lambda == pytest.approx(expected, rel=1e-9)


def four_trial_scores():
    # Accent a: target LLRs {+2,-1}, non-target {-3,+1}; mirrored for b.
    return TrialScores(
        classes=("a", "b"),
        utt_ids=("t1", "t2", "t3", "t4"),
        intended=("a", "a", "b", "b"),
        llr=np.array([[2.0, -3.0], [-1.0, 1.0], [-3.0, 2.0], [1.0, -1.0]]),
    )


class TestDcf:
    def test_four_trial_fixture_exactly_one(self):
        result = dcf(four_trial_scores())
        assert result.per_accent == {"a": 1.0, "b": 1.0}
        assert result.average == 1.0

    def test_operating_points_hand_values(self):
        at_half = dcf(four_trial_scores(), p_targets=(0.5,))
        assert at_half.per_accent["a"] == 1.0
        at_tenth = dcf(four_trial_scores(), p_targets=(0.1,))
        assert at_tenth.per_accent["a"] == 1.0

    def test_always_accept_is_five(self):
        trials = TrialScores(
            classes=("a", "b"),
            utt_ids=("t1", "t2", "t3", "t4"),
            intended=("a", "a", "b", "b"),
            llr=np.full((4, 2), 1e9),
        )
        result = dcf(trials)
        assert result.average == pytest.approx(5.0, abs=1e-9)

    def test_perfect_scores_are_zero(self):
        trials = TrialScores(
            classes=("a", "b"),
            utt_ids=("t1", "t2", "t3", "t4"),
            intended=("a", "a", "b", "b"),
            llr=np.array([[50.0, -50.0], [50.0, -50.0], [-50.0, 50.0], [-50.0, 50.0]]),
        )
        result = dcf(trials)
        assert result.average == 0.0

    def test_missing_target_trials_rejected(self):
        trials = TrialScores(
            classes=("a", "b", "c"),
            utt_ids=("t1", "t2"),
            intended=("a", "b"),
            llr=np.zeros((2, 3)),
        )
        with pytest.raises(ValueError, match="'c' has no target"):
            dcf(trials)

    def test_missing_non_target_trials_rejected(self):
        trials = TrialScores(
            classes=("a", "b"),
            utt_ids=("t1", "t2"),
            intended=("a", "a"),
            llr=np.zeros((2, 2)),
        )
        with pytest.raises(ValueError, match="non-target"):
            dcf(trials)

    def test_invalid_operating_point_rejected(self):
        with pytest.raises(ValueError):
            dcf(four_trial_scores(), p_targets=(0.0,))
        with pytest.raises(ValueError):
            dcf(four_trial_scores(), p_targets=(1.0,))
        with pytest.raises(ValueError):
            dcf(four_trial_scores(), p_targets=())

    def test_shuffled_labels_near_chance(self):
        rng = np.random.default_rng(77)
        rows, tests = [], []
        for c, label in enumerate("ABC"):
            for i in range(200):
                rows.append((f"{label}{i}", label, list(rng.standard_normal(8) + 30 * c)))
            for i in range(334):
                tests.append((f"t{label}{i}", label, list(rng.standard_normal(8) + 30 * c)))
        backend = fit_backend(make_set(rows), d=4)
        trials = score_trials(backend, make_set(tests))
        shuffled = list(trials.intended)
        rng.shuffle(shuffled)
        chance = dcf(
            TrialScores(trials.classes, trials.utt_ids, tuple(shuffled), trials.llr),
            p_targets=(0.5,),
        )
        assert 0.8 <= chance.average <= 1.2

    def test_trials_jsonl_round_trip(self):
        trials = four_trial_scores()
        back = parse_trials_jsonl(trials_to_jsonl(trials))
        assert back.classes == trials.classes
        assert back.intended == trials.intended
        assert np.array_equal(back.llr, trials.llr)

    def test_trials_jsonl_inconsistent_keys_rejected(self):
        text = (
            '{"utt_id":"t1","intended":"a","llr":{"a":1.0,"b":2.0}}\n'
            '{"utt_id":"t2","intended":"a","llr":{"a":1.0}}\n'
        )
        with pytest.raises(ValueError, match="line 2"):
            parse_trials_jsonl(text)


def planted_matrix(sizes, within=0.9, across=0.05):
    labels = []
    for b, n in enumerate(sizes):
        labels.extend(f"L{b}_{i}" for i in range(n))
    n = len(labels)
    vals = np.full((n, n), across)
    start = 0
    for sz in sizes:
        vals[start : start + sz, start : start + sz] = within
        start += sz
    np.fill_diagonal(vals, 1.0)
    return SimilarityMatrix(tuple(labels), vals)


def partition_of(assignment):
    groups = {}
    for label, cid in assignment.items():
        groups.setdefault(cid, set()).add(label)
    return frozenset(frozenset(g) for g in groups.values())


class TestSpectralCluster:
    def test_recovers_two_blocks(self):
        sm = planted_matrix([3, 4])
        for seed in range(5):
            got = partition_of(spectral_cluster(sm, 2, seed=seed))
            expected = frozenset(
                [
                    frozenset(f"L0_{i}" for i in range(3)),
                    frozenset(f"L1_{i}" for i in range(4)),
                ]
            )
            assert got == expected

    def test_recovers_three_blocks(self):
        sm = planted_matrix([3, 3, 4])
        expected = frozenset(
            [
                frozenset(f"L0_{i}" for i in range(3)),
                frozenset(f"L1_{i}" for i in range(3)),
                frozenset(f"L2_{i}" for i in range(4)),
            ]
        )
        for seed in range(5):
            assert partition_of(spectral_cluster(sm, 3, seed=seed)) == expected

    def test_canonical_ids_first_appearance_over_sorted_labels(self):
        sm = planted_matrix([2, 2])
        got = spectral_cluster(sm, 2, seed=0)
        # Sorted labels: L0_0, L0_1, L1_0, L1_1; first cluster seen gets id 0.
        assert got["L0_0"] == 0
        assert got["L1_0"] == 1

    def test_negative_similarities_clipped(self):
        sm = planted_matrix([3, 3], across=0.05)
        neg = SimilarityMatrix(sm.labels, np.where(sm.values == 0.05, -0.4, sm.values))
        assert partition_of(spectral_cluster(neg, 2, seed=1)) == partition_of(
            spectral_cluster(sm, 2, seed=1)
        )

    def test_deterministic_per_seed(self):
        sm = planted_matrix([4, 4, 4], within=0.6, across=0.3)
        assert spectral_cluster(sm, 3, seed=5) == spectral_cluster(sm, 3, seed=5)

    def test_relabel_invariance(self):
        sm = planted_matrix([3, 4])
        perm = np.random.default_rng(2).permutation(len(sm.labels))
        permuted = SimilarityMatrix(
            tuple(sm.labels[i] for i in perm), sm.values[np.ix_(perm, perm)]
        )
        assert partition_of(spectral_cluster(permuted, 2, seed=3)) == partition_of(
            spectral_cluster(sm, 2, seed=3)
        )

    def test_isolated_label_does_not_crash(self):
        vals = np.eye(3)
        sm = SimilarityMatrix(("A", "B", "C"), vals)
        got = spectral_cluster(sm, 2, seed=0)
        assert set(got) == {"A", "B", "C"}

    def test_every_label_its_own_cluster(self):
        sm = planted_matrix([2, 2])
        got = spectral_cluster(sm, 4, seed=0)
        assert sorted(got.values()) == [0, 1, 2, 3]

    def test_bad_cluster_count_rejected(self):
        sm = planted_matrix([2, 2])
        with pytest.raises(ValueError):
            spectral_cluster(sm, 0, seed=0)
        with pytest.raises(ValueError):
            spectral_cluster(sm, 5, seed=0)


class TestNormalizeText:
    def test_lowercase_strip_collapse(self):
        assert normalize_text("Hello,   WORLD!") == "hello world"

    def test_keeps_digits_and_apostrophes(self):
        assert normalize_text("It's 5 o'clock") == "it's 5 o'clock"

    def test_removes_punctuation_without_spacing(self):
        assert normalize_text("well-known") == "wellknown"


class TestWer:
    def test_deletion_case(self):
        r = wer("the cat sat", "the cat")
        assert (r.substitutions, r.deletions, r.insertions) == (0, 1, 0)
        assert r.wer == pytest.approx(1 / 3)
        assert r.n_ref_words == 3

    def test_normalization_equal(self):
        r = wer("Hello, WORLD!", "hello world")
        assert r.wer == 0.0
        assert (r.substitutions, r.deletions, r.insertions) == (0, 0, 0)

    def test_sub_and_insert_case(self):
        r = wer("a b c d", "a x c d e")
        assert (r.substitutions, r.deletions, r.insertions) == (1, 0, 1)
        assert r.wer == pytest.approx(0.5)

    def test_exceeds_one(self):
        r = wer("a", "b c d")
        assert r.wer == pytest.approx(3.0)
        assert (r.substitutions, r.deletions, r.insertions) == (1, 0, 2)

    def test_empty_hypothesis_all_deletions(self):
        r = wer("a b c", "")
        assert (r.substitutions, r.deletions, r.insertions) == (0, 3, 0)
        assert r.wer == pytest.approx(1.0)

    def test_empty_reference_rejected(self):
        with pytest.raises(ValueError):
            wer("!!!", "a b")

    def test_total_edit_count_symmetric(self):
        # Composition (S vs D+I split) may differ between directions because
        # the tie preference applies to both; the total count may not.
        rng = np.random.default_rng(10)
        vocab = ["a", "b", "c", "d", "e"]
        for _ in range(50):
            ref = " ".join(rng.choice(vocab, size=rng.integers(1, 8)))
            hyp = " ".join(rng.choice(vocab, size=rng.integers(1, 8)))
            f = wer(ref, hyp)
            b = wer(hyp, ref)
            assert f.substitutions + f.deletions + f.insertions == (
                b.substitutions + b.deletions + b.insertions
            )

    def test_tie_prefers_deletion_over_substitution(self):
        # "a b" vs "b": either S(a->b)+D(b) or D(a)+match(b); both cost 1.
        r = wer("a b", "b")
        assert (r.substitutions, r.deletions, r.insertions) == (0, 1, 0)


class TestMosCi:
    def test_two_point_hand_case(self):
        r = mos_ci([1.0, 5.0])
        assert r.mean == pytest.approx(3.0)
        assert r.ci95_halfwidth == pytest.approx(3.92, abs=1e-2)
        assert r.ci95_halfwidth == pytest.approx(1.96 * math.sqrt(8.0) / math.sqrt(2.0), abs=1e-12)

    def test_constant_scores_zero_width(self):
        r = mos_ci([4.0, 4.0, 4.0])
        assert r.mean == 4.0
        assert r.ci95_halfwidth == 0.0

    def test_single_score_rejected(self):
        with pytest.raises(ValueError):
            mos_ci([3.0])

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            mos_ci([0.5, 3.0])
        with pytest.raises(ValueError):
            mos_ci([3.0, 5.5])
