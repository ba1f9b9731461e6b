"""Hierarchical agglomerative clustering over word embeddings.

At each step the globally closest pair of active clusters merges; distances
to the merged cluster are updated with the Lance-Williams formula for the
chosen linkage. Ties break on the smallest (left id, right id), with leaf
ids 0..n-1 and merge t creating node n+t, so dendrograms are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .embedding import EmbeddingTable, cosine_similarity
from .errors import InvalidK, LinkageMetricError, UnknownWord


class Metric(str, Enum):
    COSINE = "cosine"      # 1 - cosine similarity
    EUCLIDEAN = "euclidean"


class Linkage(str, Enum):
    SINGLE = "single"
    COMPLETE = "complete"
    AVERAGE = "average"
    WARD = "ward"


@dataclass
class DistanceMatrix:
    words: list[str]
    metric: Metric
    entries: np.ndarray  # symmetric, zero diagonal

    @property
    def n(self) -> int:
        return len(self.words)


@dataclass(frozen=True)
class Merge:
    left: int
    right: int
    height: float
    new_id: int
    size: int  # leaves under the new node


@dataclass
class Dendrogram:
    leaves: list[str]
    merges: list[Merge]
    linkage: Linkage

    def root_height(self) -> float:
        return self.merges[-1].height if self.merges else 0.0

    def to_lines(self) -> list[str]:
        """Export: 'merge_index left right height size' per merge."""
        return [
            f"{t} {m.left} {m.right} {m.height:.6f} {m.size}"
            for t, m in enumerate(self.merges)
        ]


@dataclass
class FlatClustering:
    assignment: dict[str, int]
    k: int
    cut: str  # e.g. "height=0.75" or "k=6"

    def members(self) -> dict[int, list[str]]:
        out: dict[int, list[str]] = {}
        for word, cid in self.assignment.items():
            out.setdefault(cid, []).append(word)
        for cid in out:
            out[cid].sort()
        return out

    def to_lines(self) -> list[str]:
        return [f"{word} {cid}" for word, cid in sorted(self.assignment.items())]


def distance_matrix(table: EmbeddingTable, words: list[str],
                    metric: Metric = Metric.COSINE) -> DistanceMatrix:
    """Pairwise distances between the given words' vectors."""
    if len(words) < 2:
        raise ValueError("need at least 2 words")
    missing = [w for w in words if w not in table]
    if missing:
        raise UnknownWord(f"not in embedding table: {missing[:5]}")
    n = len(words)
    entries = np.zeros((n, n))
    vecs = [table.vector(w) for w in words]
    for i in range(n):
        for j in range(i + 1, n):
            if metric is Metric.COSINE:
                d = 1.0 - cosine_similarity(vecs[i], vecs[j])
            else:
                d = float(np.linalg.norm(vecs[i] - vecs[j]))
            entries[i, j] = entries[j, i] = d
    return DistanceMatrix(words=list(words), metric=metric, entries=entries)


def _lance_williams(linkage: Linkage, d_ak: float, d_bk: float, d_ab: float,
                    na: int, nb: int, nk: int) -> float:
    if linkage is Linkage.SINGLE:
        return min(d_ak, d_bk)
    if linkage is Linkage.COMPLETE:
        return max(d_ak, d_bk)
    if linkage is Linkage.AVERAGE:
        return (na * d_ak + nb * d_bk) / (na + nb)
    # Ward: recurrence on squared distances
    total = na + nb + nk
    sq = ((na + nk) * d_ak ** 2 + (nb + nk) * d_bk ** 2 - nk * d_ab ** 2) / total
    return float(np.sqrt(max(sq, 0.0)))


def agglomerate(dist: DistanceMatrix, linkage: Linkage = Linkage.AVERAGE) -> Dendrogram:
    """Merge the closest active pair n-1 times, Lance-Williams updates.

    Ward operates on squared Euclidean input and is rejected for cosine
    distances; its heights follow the sqrt(2|A||B|/(|A|+|B|)) ||cA - cB||
    convention (singleton pairs merge at their Euclidean distance).
    """
    n = dist.n
    if n < 2:
        raise ValueError("need at least 2 points")
    if linkage is Linkage.WARD and dist.metric is not Metric.EUCLIDEAN:
        raise LinkageMetricError("Ward linkage requires the Euclidean metric")

    total = 2 * n - 1
    big = np.full((total, total), np.inf)
    big[:n, :n] = dist.entries
    np.fill_diagonal(big, np.inf)
    active = np.zeros(total, dtype=bool)
    active[:n] = True
    sizes = np.ones(total, dtype=int)
    merges: list[Merge] = []

    for t in range(n - 1):
        masked = np.where(np.outer(active, active), big, np.inf)
        masked[np.tril_indices(total)] = np.inf  # keep i < j; row-major argmin => smallest (i, j)
        flat = int(np.argmin(masked))
        a, b = divmod(flat, total)
        height = float(masked[a, b])
        new = n + t
        sizes[new] = sizes[a] + sizes[b]
        for k in np.nonzero(active)[0]:
            if k == a or k == b:
                continue
            d = _lance_williams(linkage, big[a, k], big[b, k], big[a, b],
                                int(sizes[a]), int(sizes[b]), int(sizes[k]))
            big[new, k] = big[k, new] = d
        active[a] = active[b] = False
        active[new] = True
        merges.append(Merge(left=a, right=b, height=height, new_id=new, size=int(sizes[new])))

    return Dendrogram(leaves=list(dist.words), merges=merges, linkage=linkage)


def _assign(dgm: Dendrogram, kept_merges: int, cut: str) -> FlatClustering:
    n = len(dgm.leaves)
    parent = list(range(2 * n - 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for m in dgm.merges[:kept_merges]:
        parent[find(m.left)] = m.new_id
        parent[find(m.right)] = m.new_id

    groups: dict[int, list[int]] = {}
    for leaf in range(n):
        groups.setdefault(find(leaf), []).append(leaf)
    # dense ids ordered by each cluster's smallest leaf index
    ordered = sorted(groups.values(), key=lambda leaves: leaves[0])
    assignment = {dgm.leaves[leaf]: cid for cid, leaves in enumerate(ordered) for leaf in leaves}
    return FlatClustering(assignment=assignment, k=len(ordered), cut=cut)


def cut_tree(dgm: Dendrogram, height: float | None = None, k: int | None = None) -> FlatClustering:
    """Flatten the dendrogram by undoing merges above a height, or down to k clusters."""
    n = len(dgm.leaves)
    if (height is None) == (k is None):
        raise ValueError("provide exactly one of height or k")
    if k is not None:
        if not (1 <= k <= n):
            raise InvalidK(f"k={k} outside 1..{n}")
        return _assign(dgm, n - k, f"k={k}")
    kept = 0
    for m in dgm.merges:
        if m.height > height:
            break
        kept += 1
    return _assign(dgm, kept, f"height={height}")
