"""Second-order adjacency matrices and the sparse third-order similarity
tensor.

Third-order structure compares triangles across domains through the sines of
their interior angles, which are invariant to translation, rotation, and
uniform scaling. Building the full tensor is O((n_s n_t)^3), so only a
sampled subset of source triangles is matched against a sampled pool of
target triangles and the k nearest pairs (by feature distance) are stored.
Entries are replicated over the 6 simultaneous permutations of the three
(source, target) slots so the stored tensor is symmetric.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations

import numpy as np

from .data import pairwise_sq_dists


def sigma_heuristic(X):
    """Mean Euclidean distance over unordered row pairs."""
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    if n < 2:
        raise ValueError("bandwidth heuristic needs at least 2 points")
    d = np.sqrt(pairwise_sq_dists(X))
    sigma = d[np.triu_indices(n, k=1)].mean()
    if sigma == 0.0:
        raise ValueError("degenerate: zero bandwidth (all points coincide)")
    return float(sigma)


def adjacency_matrix(X, sigma):
    """Gaussian-kernel weights exp(-||x_i - x_j||^2 / sigma^2), zero
    diagonal."""
    if sigma <= 0.0:
        raise ValueError("sigma must be positive")
    D = np.exp(-pairwise_sq_dists(X) / sigma**2)
    np.fill_diagonal(D, 0.0)
    return D


def triangle_feature(a, b, c):
    """Sines of the interior angles at vertices a, b, c.

    Collinear triples give (0, 0, 0); coincident points are rejected. Uses
    sin(angle) = 2 * area / (product of adjacent sides), with the squared
    area from the Gram determinant so points may live in any dimension.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    ab = b - a
    ac = c - a
    bc = c - b
    lab = ab @ ab
    lac = ac @ ac
    lbc = bc @ bc
    if lab == 0.0 or lac == 0.0 or lbc == 0.0:
        raise ValueError("coincident points have no triangle feature")
    area2 = lab * lac - (ab @ ac) ** 2
    if area2 <= 0.0:
        return np.zeros(3)
    twice_area = np.sqrt(area2)
    sines = twice_area / np.sqrt([lab * lac, lab * lbc, lac * lbc])
    return np.minimum(sines, 1.0)


def gamma_heuristic(source_feats, target_feats):
    """gamma = 1 / mean squared distance between paired triangle features.

    Falls back to 1.0 when the mean is zero (identical geometry).
    """
    source_feats = np.atleast_2d(np.asarray(source_feats, dtype=float))
    target_feats = np.atleast_2d(np.asarray(target_feats, dtype=float))
    if source_feats.shape[0] == 0:
        raise ValueError("empty feature sample")
    mean_sq = float(((source_feats - target_feats) ** 2).sum(axis=1).mean())
    if mean_sq == 0.0:
        return 1.0
    return 1.0 / mean_sq


@dataclass(frozen=True)
class SparseTensor3:
    """Sparse symmetric third-order tensor over source-target pair indices.

    Modes are indexed by p = i_s * n_t + i_t. Entry slots p1, p2, p3 carry
    the value exp(-gamma * ||f_source - f_target||^2) for the underlying
    triangle pair, replicated over all 6 simultaneous slot permutations.
    """

    p1: np.ndarray
    p2: np.ndarray
    p3: np.ndarray
    values: np.ndarray
    gamma: float
    ns: int
    nt: int

    @property
    def m(self):
        return len(self.values)


def _sample_triples(rng, n, count, anchor=None):
    """Sample index triples (anchored at a fixed first vertex if given)."""
    triples = np.empty((count, 3), dtype=int)
    for row in range(count):
        if anchor is None:
            triples[row] = rng.choice(n, size=3, replace=False)
        else:
            others = rng.choice(n - 1, size=2, replace=False)
            others = np.where(others >= anchor, others + 1, others)
            triples[row] = (anchor, others[0], others[1])
    return triples


def _features_for(X, triples):
    """Triangle features for each triple; coincident-point triples are
    dropped."""
    feats = np.empty((len(triples), 3))
    keep = np.ones(len(triples), dtype=bool)
    for row, (i, j, k) in enumerate(triples):
        try:
            feats[row] = triangle_feature(X[i], X[j], X[k])
        except ValueError:
            keep[row] = False
    return triples[keep], feats[keep]


def build_sparse_tensor(
    Xs, Xt, t_per_node=50, knn=300, pool_factor=20, seed=0, exhaustive=False
):
    """Sample triangle correspondences and store their similarity values.

    For every source node, t_per_node random source triangles through that
    node are matched to their knn nearest triangles (by feature distance)
    from a shared pool of pool_factor * n_t random target triangles. gamma
    comes from the mean squared feature distance over all candidate pairs.
    The RNG is split per source node, so results do not depend on evaluation
    order. exhaustive=True enumerates every source triangle and every target
    vertex ordering instead (only sensible for tiny inputs).
    """
    Xs = np.asarray(Xs, dtype=float)
    Xt = np.asarray(Xt, dtype=float)
    ns, nt = Xs.shape[0], Xt.shape[0]
    if ns < 3 or nt < 3:
        raise ValueError("third-order term needs at least 3 points per domain")
    N = ns * nt
    if N**3 >= 2**63:
        raise ValueError("pair-index space too large for 64-bit dedup keys")

    if exhaustive:
        pool = np.array(list(permutations(range(nt), 3)), dtype=int)
    else:
        root = np.random.SeedSequence(seed)
        children = root.spawn(ns + 1)
        pool_rng = np.random.default_rng(children[ns])
        pool = _sample_triples(pool_rng, nt, pool_factor * nt)
    pool, pool_feats = _features_for(Xt, pool)
    if len(pool) == 0:
        raise ValueError("degenerate target domain: no valid triangles")

    if exhaustive:
        tri = np.array(list(combinations(range(ns), 3)), dtype=int)
        chunks = [_features_for(Xs, tri)]
        k = len(pool)
    else:
        chunks = [
            _features_for(
                Xs, _sample_triples(np.random.default_rng(children[i]), ns, t_per_node, anchor=i)
            )
            for i in range(ns)
        ]
        k = min(knn, len(pool))
    chunks = [(tri, feats) for tri, feats in chunks if len(tri)]
    if not chunks:
        raise ValueError("degenerate source domain: no valid triangles")

    # per-node chunks keep the knn distance matrices small
    pair_parts = []
    d2_parts = []
    for tri, feats in chunks:
        d2 = pairwise_sq_dists(feats, pool_feats)
        # stable ordering so nearest-triangle ties resolve by sampling order
        order = np.argsort(d2, axis=1, kind="stable")[:, :k]
        d2_parts.append(np.take_along_axis(d2, order, axis=1).ravel())
        src_rep = np.repeat(tri, k, axis=0)
        pair_parts.append(src_rep * nt + pool[order.ravel()])
    cand_d2 = np.concatenate(d2_parts)
    pairs = np.vstack(pair_parts)  # (num candidates, 3) pair indices

    mean_sq = float(cand_d2.mean())
    gamma = 1.0 if mean_sq == 0.0 else 1.0 / mean_sq
    vals = np.exp(-gamma * cand_d2)

    # dedup by sorted slot key first so every unordered triangle pair keeps a
    # single value (re-sampled orbits can differ in the last float bits),
    # then replicate over the 6 simultaneous slot permutations
    canon = np.sort(pairs, axis=1)
    keys = (canon[:, 0] * N + canon[:, 1]) * N + canon[:, 2]
    _, keep = np.unique(keys, return_index=True)
    pairs = pairs[keep]
    vals = vals[keep]

    slot_orders = list(permutations(range(3)))
    p_all = np.vstack([pairs[:, perm] for perm in slot_orders])
    v_all = np.tile(vals, len(slot_orders))
    keys = (p_all[:, 0] * N + p_all[:, 1]) * N + p_all[:, 2]
    order = np.argsort(keys, kind="stable")
    p_kept = p_all[order]
    v_all = v_all[order]

    return SparseTensor3(
        p1=p_kept[:, 0],
        p2=p_kept[:, 1],
        p3=p_kept[:, 2],
        values=v_all,
        gamma=gamma,
        ns=ns,
        nt=nt,
    )


def dump_tensor_csv(tensor, path):
    """Debug dump of tensor entries as is,it,js,jt,ks,kt,value rows."""
    nt = tensor.nt
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("is,it,js,jt,ks,kt,value\n")
        for p1, p2, p3, v in zip(tensor.p1, tensor.p2, tensor.p3, tensor.values):
            fh.write(
                f"{p1 // nt},{p1 % nt},{p2 // nt},{p2 % nt},"
                f"{p3 // nt},{p3 % nt},{v:.17g}\n"
            )
