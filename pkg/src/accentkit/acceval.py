"""Accent and speaker evaluation: embedding similarity, a PCA + shared-
covariance Gaussian classification backend with detection-cost scoring,
spectral clustering of accent similarity, word error rate, and MOS
confidence intervals.

Conventions fixed by this module:

  * PCA is an eigendecomposition of the mean-centered sample covariance
    (n-1 denominator); basis rows are orthonormal, eigenvalues descend,
    and each basis row is sign-fixed so its first nonzero component is
    positive.
  * The Gaussian backend shares one covariance across classes: the pooled
    within-class covariance (n - K denominator) plus reg_lambda * I, with
    reg_lambda defaulting to 1e-6 * trace / d.
  * LLR for accent a is loglik_a minus the log of the mean likelihood of
    the other classes, computed with log-sum-exp stabilization.
  * The detection cost is the actual (not minimum) normalized cost at the
    Bayes threshold log((1-p)/p), averaged over operating points, with
    miss and false-alarm costs of 1.
"""

from __future__ import annotations

import csv
import io
import json
import math
import statistics
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
from sklearn.cluster import KMeans

__all__ = [
    "DcfResult",
    "EmbeddingSet",
    "GaussianBackend",
    "GtSimilarityResult",
    "MosInterval",
    "PcaModel",
    "SimilarityMatrix",
    "TrialScores",
    "WerResult",
    "cosine",
    "dcf",
    "fit_backend",
    "fit_pca",
    "gt_similarity",
    "load_embeddings",
    "mean_embedding_similarity_matrix",
    "mos_ci",
    "normalize_text",
    "parse_embeddings",
    "parse_sim_matrix_csv",
    "parse_trials_jsonl",
    "score_llr",
    "score_trials",
    "sim_matrix_to_csv",
    "spectral_cluster",
    "trials_to_jsonl",
    "wer",
]


# ---------------------------------------------------------------------------
# Embeddings


@dataclass(frozen=True, eq=False)
class EmbeddingSet:
    """Labeled utterance embeddings, one row per utterance."""

    utt_ids: tuple[str, ...]
    labels: tuple[str, ...]
    vectors: np.ndarray  # (n, D) float64

    def __post_init__(self) -> None:
        v = np.asarray(self.vectors, dtype=np.float64)
        object.__setattr__(self, "vectors", v)
        if v.ndim != 2:
            raise ValueError("vectors must be a 2-D array")
        if len(self.utt_ids) != v.shape[0] or len(self.labels) != v.shape[0]:
            raise ValueError("utt_ids, labels, and vectors must have matching lengths")
        if v.shape[0] and v.shape[1] == 0:
            raise ValueError("embedding dimension must be at least 1")
        if not np.isfinite(v).all():
            raise ValueError("embedding values must be finite")
        if len(set(self.utt_ids)) != len(self.utt_ids):
            raise ValueError("duplicate utt_id in embedding set")

    def index_of(self, utt_id: str) -> int:
        try:
            return self.utt_ids.index(utt_id)
        except ValueError:
            raise ValueError(f"unknown utt_id {utt_id!r}") from None

    def label_indices(self) -> dict[str, list[int]]:
        out: dict[str, list[int]] = {}
        for i, label in enumerate(self.labels):
            out.setdefault(label, []).append(i)
        return out


def parse_embeddings(text: str) -> EmbeddingSet:
    """Parse embeddings JSONL: {"utt_id","label","vec"} per line."""
    utt_ids: list[str] = []
    labels: list[str] = []
    rows: list[list[float]] = []
    dim: int | None = None
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as e:
            raise ValueError(f"line {lineno}: not valid JSON: {e.msg}") from None
        if not isinstance(obj, dict):
            raise ValueError(f"line {lineno}: expected a JSON object")
        utt_id = obj.get("utt_id")
        label = obj.get("label")
        vec = obj.get("vec")
        if not isinstance(utt_id, str) or not utt_id:
            raise ValueError(f"line {lineno}: utt_id must be a non-empty string")
        if not isinstance(label, str) or not label:
            raise ValueError(f"line {lineno}: label must be a non-empty string")
        if not isinstance(vec, list) or not vec:
            raise ValueError(f"line {lineno}: vec must be a non-empty list")
        if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in vec):
            raise ValueError(f"line {lineno}: vec entries must be numbers")
        values = [float(x) for x in vec]
        if not all(math.isfinite(x) for x in values):
            raise ValueError(f"line {lineno}: vec entries must be finite")
        if dim is None:
            dim = len(values)
        elif len(values) != dim:
            raise ValueError(f"line {lineno}: vec has {len(values)} dims, expected {dim}")
        if utt_id in seen:
            raise ValueError(f"line {lineno}: duplicate utt_id {utt_id!r}")
        seen.add(utt_id)
        utt_ids.append(utt_id)
        labels.append(label)
        rows.append(values)
    arr = np.array(rows, dtype=np.float64) if rows else np.zeros((0, 1))
    return EmbeddingSet(tuple(utt_ids), tuple(labels), arr)


def load_embeddings(path: str | Path) -> EmbeddingSet:
    return parse_embeddings(Path(path).read_text("utf-8"))


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity, clamped into [-1, 1]. Zero-norm input is an error."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    na = math.sqrt(float(a @ a))
    nb = math.sqrt(float(b @ b))
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine of a zero-norm vector is undefined")
    return min(1.0, max(-1.0, float(a @ b) / (na * nb)))


@dataclass(frozen=True)
class GtSimilarityResult:
    per_accent: dict[str, float]
    overall: float


def gt_similarity(
    eval_set: EmbeddingSet, ref_set: EmbeddingSet, pairing: Mapping[str, str]
) -> GtSimilarityResult:
    """Mean cosine similarity of paired (synthetic, reference) embeddings.

    Pairs are grouped by the reference utterance's label; overall is the
    unweighted mean over pairs.
    """
    if not pairing:
        raise ValueError("pairing is empty")
    per: dict[str, list[float]] = {}
    all_scores: list[float] = []
    for eval_utt, ref_utt in pairing.items():
        ei = eval_set.index_of(eval_utt)
        ri = ref_set.index_of(ref_utt)
        s = cosine(eval_set.vectors[ei], ref_set.vectors[ri])
        per.setdefault(ref_set.labels[ri], []).append(s)
        all_scores.append(s)
    per_accent = {label: sum(v) / len(v) for label, v in sorted(per.items())}
    return GtSimilarityResult(per_accent, sum(all_scores) / len(all_scores))


# ---------------------------------------------------------------------------
# Similarity matrices


@dataclass(frozen=True, eq=False)
class SimilarityMatrix:
    """Square labeled similarity matrix, symmetric within 1e-12."""

    labels: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", v)
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise ValueError("duplicate labels in similarity matrix")
        if v.shape != (n, n):
            raise ValueError(f"values must be {n}x{n}, got {v.shape}")
        if not np.isfinite(v).all():
            raise ValueError("similarity values must be finite")
        if n and np.max(np.abs(v - v.T)) > 1e-12:
            raise ValueError("similarity matrix must be symmetric")


def mean_embedding_similarity_matrix(embeddings: EmbeddingSet) -> SimilarityMatrix:
    """Cosine similarity between per-label mean embeddings, labels sorted."""
    groups = embeddings.label_indices()
    labels = tuple(sorted(groups))
    if not labels:
        raise ValueError("embedding set is empty")
    means = np.stack([embeddings.vectors[groups[l]].mean(axis=0) for l in labels])
    norms = np.sqrt((means * means).sum(axis=1))
    for label, norm in zip(labels, norms):
        if norm == 0.0:
            raise ValueError(f"label {label!r} has a zero-norm mean embedding")
    unit = means / norms[:, None]
    values = unit @ unit.T
    values = (values + values.T) / 2.0
    values = np.clip(values, -1.0, 1.0)
    np.fill_diagonal(values, 1.0)
    return SimilarityMatrix(labels, values)


def sim_matrix_to_csv(matrix: SimilarityMatrix) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([""] + list(matrix.labels))
    for label, row in zip(matrix.labels, matrix.values):
        w.writerow([label] + [repr(float(v)) for v in row])
    return buf.getvalue()


def parse_sim_matrix_csv(text: str) -> SimilarityMatrix:
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r]
    if not rows or rows[0][:1] != [""]:
        raise ValueError("similarity CSV must start with an empty header cell")
    labels = tuple(rows[0][1:])
    n = len(labels)
    if len(rows) != n + 1:
        raise ValueError(f"expected {n} data rows, got {len(rows) - 1}")
    values = np.empty((n, n), dtype=np.float64)
    for i, row in enumerate(rows[1:]):
        if len(row) != n + 1:
            raise ValueError(f"row {i + 1}: expected {n + 1} cells, got {len(row)}")
        if row[0] != labels[i]:
            raise ValueError(f"row {i + 1}: label {row[0]!r} does not match header {labels[i]!r}")
        try:
            values[i] = [float(x) for x in row[1:]]
        except ValueError:
            raise ValueError(f"row {i + 1}: non-numeric similarity value") from None
    return SimilarityMatrix(labels, values)


# ---------------------------------------------------------------------------
# PCA


@dataclass(frozen=True, eq=False)
class PcaModel:
    """Orthonormal top-d eigenbasis of the sample covariance."""

    mean: np.ndarray  # (D,)
    basis: np.ndarray  # (d, D), rows orthonormal
    eigenvalues: np.ndarray  # (d,), descending, >= 0

    def project(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.mean.shape[0]:
            raise ValueError(f"expected (n, {self.mean.shape[0]}) input, got {X.shape}")
        return (X - self.mean) @ self.basis.T


def fit_pca(X: np.ndarray, d: int) -> PcaModel:
    """Eigendecomposition PCA with the sign of each basis row fixed so its
    first nonzero component is positive."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("X must be 2-D")
    n, D = X.shape
    if n < 2:
        raise ValueError(f"need at least 2 points, got {n}")
    if not 1 <= d <= min(n - 1, D):
        raise ValueError(f"d={d} out of range [1, min(n-1, D)] = [1, {min(n - 1, D)}]")
    mean = X.mean(axis=0)
    Xc = X - mean
    cov = Xc.T @ Xc / (n - 1)
    if float(np.trace(cov)) <= 0.0:
        raise ValueError("covariance has rank 0: all points identical")
    vals, vecs = np.linalg.eigh(cov)  # ascending
    vals = vals[::-1][:d]
    basis = vecs[:, ::-1][:, :d].T.copy()
    vals = np.where(vals < 0.0, 0.0, vals)
    for i, row in enumerate(basis):
        scale = np.abs(row).max()
        nonzero = np.nonzero(np.abs(row) > 1e-12 * scale)[0]
        if nonzero.size and row[nonzero[0]] < 0:
            basis[i] = -row
    return PcaModel(mean=mean, basis=basis, eigenvalues=vals)


# ---------------------------------------------------------------------------
# Gaussian backend with shared covariance


@dataclass(frozen=True, eq=False)
class GaussianBackend:
    """Class means in PCA space with one shared (regularized) covariance."""

    pca: PcaModel
    classes: tuple[str, ...]
    class_means: np.ndarray  # (K, d)
    shared_cov: np.ndarray  # (d, d), already regularized
    reg_lambda: float
    chol: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if len(self.classes) < 2:
            raise ValueError("backend needs at least 2 classes")
        try:
            chol = np.linalg.cholesky(np.asarray(self.shared_cov, dtype=np.float64))
        except np.linalg.LinAlgError:
            raise ValueError(
                "shared covariance is not positive-definite after regularization"
            ) from None
        object.__setattr__(self, "chol", chol)


def fit_backend(
    reference: EmbeddingSet, d: int, reg_lambda: float | None = None
) -> GaussianBackend:
    """Fit PCA on the pooled reference vectors, then per-class means and the
    pooled within-class covariance (n - K denominator) plus reg_lambda * I.

    reg_lambda defaults to 1e-6 * trace(cov) / d.
    """
    groups = reference.label_indices()
    if len(groups) < 2:
        raise ValueError(f"need at least 2 classes, got {len(groups)}")
    for label, idx in groups.items():
        if len(idx) < 2:
            raise ValueError(f"class {label!r} has {len(idx)} vectors, need at least 2")
    pca = fit_pca(reference.vectors, d)
    Z = pca.project(reference.vectors)
    classes = tuple(sorted(groups))
    K = len(classes)
    n = Z.shape[0]
    means = np.stack([Z[groups[c]].mean(axis=0) for c in classes])
    scatter = np.zeros((d, d))
    for i, c in enumerate(classes):
        Zc = Z[groups[c]] - means[i]
        scatter += Zc.T @ Zc
    cov = scatter / (n - K)
    if reg_lambda is None:
        reg_lambda = 1e-6 * float(np.trace(cov)) / d
    cov = cov + reg_lambda * np.eye(d)
    return GaussianBackend(
        pca=pca,
        classes=classes,
        class_means=means,
        shared_cov=cov,
        reg_lambda=float(reg_lambda),
    )


def _logsumexp(values: np.ndarray) -> float:
    m = float(np.max(values))
    return m + math.log(float(np.exp(values - m).sum()))


def _logliks(backend: GaussianBackend, z: np.ndarray) -> np.ndarray:
    d = z.shape[0]
    diffs = z[None, :] - backend.class_means  # (K, d)
    ys = np.linalg.solve(backend.chol, diffs.T)  # (d, K)
    quad = (ys * ys).sum(axis=0)
    logdet = 2.0 * float(np.log(np.diag(backend.chol)).sum())
    return -0.5 * (d * math.log(2.0 * math.pi) + logdet + quad)


def _llr_vector(backend: GaussianBackend, logliks: np.ndarray) -> np.ndarray:
    K = len(backend.classes)
    out = np.empty(K)
    for i in range(K):
        others = np.delete(logliks, i)
        out[i] = logliks[i] - (_logsumexp(others) - math.log(K - 1))
    return out


def score_llr(backend: GaussianBackend, vector: np.ndarray) -> dict[str, float]:
    """Per-accent log-likelihood ratio against the mean of the other classes."""
    x = np.asarray(vector, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("vector must be 1-D")
    z = backend.pca.project(x[None, :])[0]
    llr = _llr_vector(backend, _logliks(backend, z))
    return {c: float(v) for c, v in zip(backend.classes, llr)}


@dataclass(frozen=True, eq=False)
class TrialScores:
    """LLR vectors per trial; intended accents must be backend classes."""

    classes: tuple[str, ...]
    utt_ids: tuple[str, ...]
    intended: tuple[str, ...]
    llr: np.ndarray  # (n, K)

    def __post_init__(self) -> None:
        llr = np.asarray(self.llr, dtype=np.float64)
        object.__setattr__(self, "llr", llr)
        n, k = (llr.shape if llr.ndim == 2 else (-1, -1))
        if k != len(self.classes) or n != len(self.utt_ids) or n != len(self.intended):
            raise ValueError("trial fields have inconsistent shapes")
        if not np.isfinite(llr).all():
            raise ValueError("LLR values must be finite")
        valid = set(self.classes)
        for utt, accent in zip(self.utt_ids, self.intended):
            if accent not in valid:
                raise ValueError(f"trial {utt!r}: intended accent {accent!r} is not a class")


def score_trials(backend: GaussianBackend, eval_set: EmbeddingSet) -> TrialScores:
    """Score every evaluation embedding; its label is the intended accent."""
    Z = backend.pca.project(eval_set.vectors)
    llr = np.empty((Z.shape[0], len(backend.classes)))
    for t in range(Z.shape[0]):
        llr[t] = _llr_vector(backend, _logliks(backend, Z[t]))
    return TrialScores(backend.classes, eval_set.utt_ids, eval_set.labels, llr)


def trials_to_jsonl(trials: TrialScores) -> str:
    lines = []
    for utt, intended, row in zip(trials.utt_ids, trials.intended, trials.llr):
        obj = {
            "utt_id": utt,
            "intended": intended,
            "llr": {c: float(v) for c, v in zip(trials.classes, row)},
        }
        lines.append(json.dumps(obj, separators=(",", ":")))
    return "\n".join(lines) + ("\n" if lines else "")


def parse_trials_jsonl(text: str) -> TrialScores:
    """Parse trial scores JSONL: {"utt_id","intended","llr":{accent: value}}."""
    utt_ids: list[str] = []
    intended: list[str] = []
    rows: list[list[float]] = []
    classes: tuple[str, ...] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as e:
            raise ValueError(f"line {lineno}: not valid JSON: {e.msg}") from None
        utt = obj.get("utt_id") if isinstance(obj, dict) else None
        acc = obj.get("intended") if isinstance(obj, dict) else None
        llr = obj.get("llr") if isinstance(obj, dict) else None
        if not isinstance(utt, str) or not isinstance(acc, str) or not isinstance(llr, dict):
            raise ValueError(f"line {lineno}: need utt_id, intended, and llr object")
        if classes is None:
            classes = tuple(sorted(llr))
            if not classes:
                raise ValueError(f"line {lineno}: llr object is empty")
        elif tuple(sorted(llr)) != classes:
            raise ValueError(f"line {lineno}: llr accents differ from earlier lines")
        row = []
        for c in classes:
            v = llr[c]
            if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
                raise ValueError(f"line {lineno}: llr[{c!r}] must be a finite number")
            row.append(float(v))
        utt_ids.append(utt)
        intended.append(acc)
        rows.append(row)
    if classes is None:
        raise ValueError("trial file is empty")
    return TrialScores(classes, tuple(utt_ids), tuple(intended), np.array(rows))


# ---------------------------------------------------------------------------
# Detection cost


@dataclass(frozen=True)
class DcfResult:
    per_accent: dict[str, float]
    average: float


def dcf(trials: TrialScores, p_targets: Sequence[float] = (0.1, 0.5)) -> DcfResult:
    """Actual normalized detection cost at Bayes thresholds.

    For each accent and operating point p: accept iff LLR >= log((1-p)/p);
    C_norm = (p * P_miss + (1-p) * P_fa) / min(p, 1-p). The per-accent DCF
    averages operating points; the overall average is unweighted over
    accents. Every accent needs at least one target and one non-target
    trial.
    """
    if not p_targets:
        raise ValueError("need at least one operating point")
    for p in p_targets:
        if not 0.0 < p < 1.0:
            raise ValueError(f"operating point {p} must be inside (0, 1)")
    intended = np.array(trials.intended)
    per_accent: dict[str, float] = {}
    for i, accent in enumerate(trials.classes):
        targets = intended == accent
        n_t = int(targets.sum())
        n_nt = len(intended) - n_t
        if n_t == 0:
            raise ValueError(f"accent {accent!r} has no target trials")
        if n_nt == 0:
            raise ValueError(f"accent {accent!r} has no non-target trials")
        scores = trials.llr[:, i]
        costs = []
        for p in p_targets:
            theta = math.log((1.0 - p) / p)
            p_miss = float((scores[targets] < theta).sum()) / n_t
            p_fa = float((scores[~targets] >= theta).sum()) / n_nt
            costs.append((p * p_miss + (1.0 - p) * p_fa) / min(p, 1.0 - p))
        per_accent[accent] = sum(costs) / len(costs)
    return DcfResult(per_accent, sum(per_accent.values()) / len(per_accent))


# ---------------------------------------------------------------------------
# Spectral clustering


def spectral_cluster(
    matrix: SimilarityMatrix, n_clusters: int, seed: int = 0
) -> dict[str, int]:
    """Normalized-Laplacian spectral clustering of a similarity matrix.

    Affinity is max(similarity, 0) with a zeroed diagonal. Rows of the
    n_clusters smallest eigenvectors are unit-normalized (isolated labels
    stay at zero) and clustered with k-means (k-means++ seeding from the
    given seed, 100 restarts, best inertia). Cluster ids are canonicalized
    by first appearance when scanning labels in sorted order.
    """
    n = len(matrix.labels)
    if not 1 <= n_clusters <= n:
        raise ValueError(f"n_clusters={n_clusters} out of range [1, {n}]")
    A = np.clip(matrix.values, 0.0, None)
    np.fill_diagonal(A, 0.0)
    deg = A.sum(axis=1)
    dhalf = np.where(deg > 0.0, 1.0 / np.sqrt(np.where(deg > 0.0, deg, 1.0)), 0.0)
    L = np.eye(n) - dhalf[:, None] * A * dhalf[None, :]
    L = (L + L.T) / 2.0
    _, vecs = np.linalg.eigh(L)
    U = vecs[:, :n_clusters]
    norms = np.sqrt((U * U).sum(axis=1))
    U = np.where(norms[:, None] > 0.0, U / np.where(norms[:, None] > 0.0, norms[:, None], 1.0), 0.0)
    km = KMeans(
        n_clusters=n_clusters,
        init="k-means++",
        n_init=100,
        random_state=int(seed % (2**32)),
    )
    raw = km.fit_predict(U)
    mapping: dict[int, int] = {}
    out: dict[str, int] = {}
    for i in sorted(range(n), key=lambda j: matrix.labels[j]):
        r = int(raw[i])
        if r not in mapping:
            mapping[r] = len(mapping)
        out[matrix.labels[i]] = mapping[r]
    return out


# ---------------------------------------------------------------------------
# Text metrics


_ALLOWED = set("abcdefghijklmnopqrstuvwxyz0123456789' ")


def normalize_text(text: str) -> str:
    """Lowercase, strip characters outside [a-z0-9' ], collapse whitespace."""
    kept = "".join(ch for ch in text.lower() if ch in _ALLOWED)
    return " ".join(kept.split())


@dataclass(frozen=True)
class WerResult:
    wer: float
    substitutions: int
    deletions: int
    insertions: int
    n_ref_words: int


def wer(reference: str, hypothesis: str) -> WerResult:
    """Word error rate with unit costs.

    On cost ties the backtrace prefers deletion over substitution over
    insertion. The reference must be non-empty after normalization; the
    rate is (S + D + I) / n_ref_words and may exceed 1.
    """
    ref = normalize_text(reference).split()
    hyp = normalize_text(hypothesis).split()
    if not ref:
        raise ValueError("reference is empty after normalization")
    n, m = len(ref), len(hyp)
    dp = np.zeros((n + 1, m + 1), dtype=np.int64)
    dp[:, 0] = np.arange(n + 1)
    dp[0, :] = np.arange(m + 1)
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            sub = dp[i - 1, j - 1] + (ref[i - 1] != hyp[j - 1])
            dp[i, j] = min(dp[i - 1, j] + 1, dp[i, j - 1] + 1, sub)
    subs = dels = ins = 0
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and dp[i, j] == dp[i - 1, j] + 1:
            dels += 1
            i -= 1
        elif i > 0 and j > 0 and dp[i, j] == dp[i - 1, j - 1] + (ref[i - 1] != hyp[j - 1]):
            if ref[i - 1] != hyp[j - 1]:
                subs += 1
            i -= 1
            j -= 1
        else:
            ins += 1
            j -= 1
    return WerResult((subs + dels + ins) / n, subs, dels, ins, n)


# ---------------------------------------------------------------------------
# MOS


@dataclass(frozen=True)
class MosInterval:
    mean: float
    ci95_halfwidth: float


def mos_ci(scores: Iterable[float]) -> MosInterval:
    """Mean opinion score with a normal-approximation 95% interval,
    using the sample standard deviation (n - 1 denominator)."""
    values = [float(s) for s in scores]
    if len(values) < 2:
        raise ValueError(f"need at least 2 scores, got {len(values)}")
    for s in values:
        if not 1.0 <= s <= 5.0:
            raise ValueError(f"score {s} outside [1, 5]")
    mean = statistics.fmean(values)
    return MosInterval(mean, 1.96 * statistics.stdev(values) / math.sqrt(len(values)))
