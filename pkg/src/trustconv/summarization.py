"""Centroid-based summarization of word clusters into ranked slot terms.

Each cluster is reduced to the (frequency-weighted) mean of its member
vectors; candidate terms are ranked by cosine similarity to that centroid
and the top term becomes the cluster's conceptual slot value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clustering import FlatClustering
from .embedding import EmbeddingTable, cosine_similarity
from .errors import EmptyCluster, UnknownWord, ZeroVector


@dataclass
class ClusterSummary:
    cluster_id: int
    centroid: np.ndarray
    ranked_terms: list[tuple[str, float]]  # similarity desc, term asc on ties
    selected_term: str


def cluster_centroid(members: list[str], table: EmbeddingTable,
                     weights: dict[str, float] | None = None) -> np.ndarray:
    """Weighted arithmetic mean of member vectors (uniform when unweighted)."""
    if not members:
        raise EmptyCluster("cluster has no members")
    missing = [w for w in members if w not in table]
    if missing:
        raise UnknownWord(f"not in embedding table: {missing[:5]}")
    total = 0.0
    acc = np.zeros(table.dim)
    for word in members:
        w = 1.0 if weights is None else float(weights.get(word, 1.0))
        acc += w * table.vector(word)
        total += w
    return acc / total


def nearest_terms(centroid: np.ndarray, candidates: list[str],
                  table: EmbeddingTable, k: int = 5) -> list[tuple[str, float]]:
    """Top-k candidates by cosine similarity to the centroid."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not candidates:
        raise ValueError("candidates must be non-empty")
    if float(np.linalg.norm(centroid)) == 0.0:
        raise ZeroVector("centroid is all-zero")
    missing = [w for w in candidates if w not in table]
    if missing:
        raise UnknownWord(f"not in embedding table: {missing[:5]}")
    scored = [(term, cosine_similarity(centroid, table.vector(term))) for term in candidates]
    scored.sort(key=lambda ts: (-ts[1], ts[0]))
    return scored[:k]


def summarize_cut(clustering: FlatClustering, table: EmbeddingTable,
                  extra_candidates: set[str] | None = None,
                  weights: dict[str, float] | None = None,
                  k: int = 5) -> list[ClusterSummary]:
    """One summary per cluster, in cluster-id order.

    Candidates are the cluster's members plus any extra (curated concept)
    terms that exist in the table, so selected terms can be readable slot
    labels; weights (corpus term frequencies) bias the centroid toward
    frequent members.
    """
    extras = sorted(t for t in (extra_candidates or set()) if t in table)
    summaries = []
    for cid, members in sorted(clustering.members().items()):
        if not members:
            raise EmptyCluster(f"cluster {cid} is empty")
        centroid = cluster_centroid(members, table, weights)
        candidates = sorted(set(members) | set(extras))
        ranked = nearest_terms(centroid, candidates, table, k=max(k, 1))
        summaries.append(ClusterSummary(
            cluster_id=cid,
            centroid=centroid,
            ranked_terms=ranked,
            selected_term=ranked[0][0],
        ))
    return summaries
