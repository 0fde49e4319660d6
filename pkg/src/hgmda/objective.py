"""The four cost terms of the matching problem and their exact gradients.

Total cost over the matching matrix C:

    f(C) = f1 + lam2 * f2 - lam3 * f3 + lam_g * fg

with the feature alignment term f1 = ||C Xt - Xs||^2_F / (ns d), the
graph alignment term f2 = ||C Dt - r Ds C||^2_F (r = nt / ns corrects the
different domain sizes), the third-order reward f3 contracted from the
sparse triangle-similarity tensor (note the minus sign: structural matches
are encouraged), and the class-wise group lasso fg that pushes each target
column to commit to a single source class.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .graphs import SparseTensor3


@dataclass(frozen=True)
class ObjectiveWeights:
    lam2: float = 0.0
    lam3: float = 0.0
    lam_g: float = 0.0

    def __post_init__(self):
        if self.lam2 < 0 or self.lam3 < 0 or self.lam_g < 0:
            raise ValueError("weights must be non-negative")


@dataclass(frozen=True)
class ObjectiveContext:
    """Everything the cost terms need besides C itself.

    class_groups holds 0-based exemplar row indices per class (may be None
    when the group term is unused); tensor may be None when the third-order
    term is unused.
    """

    Xs: np.ndarray
    Xt: np.ndarray
    Ds: np.ndarray
    Dt: np.ndarray
    tensor: Optional[SparseTensor3] = None
    class_groups: Optional[list] = None

    def __post_init__(self):
        if self.Xs.shape[1] != self.Xt.shape[1]:
            raise ValueError("source and target feature dimensions differ")
        if self.Ds.shape != (self.ns, self.ns) or self.Dt.shape != (self.nt, self.nt):
            raise ValueError("adjacency shapes inconsistent with features")

    @property
    def ns(self):
        return self.Xs.shape[0]

    @property
    def nt(self):
        return self.Xt.shape[0]

    @property
    def d(self):
        return self.Xs.shape[1]

    @property
    def r(self):
        return self.nt / self.ns


def uniform_matching(ns, nt):
    """The maximum-entropy feasible point: every entry 1/nt."""
    return np.full((ns, nt), 1.0 / nt)


def marginals(ns, nt):
    """Row and column sum targets (a, b) of the matching polytope."""
    return np.ones(ns), np.full(nt, ns / nt)


def f1_and_grad(C, ctx):
    nsd = ctx.ns * ctx.d
    E = C @ ctx.Xt - ctx.Xs
    value = float(np.vdot(E, E)) / nsd
    grad = 2.0 * (E @ ctx.Xt.T) / nsd
    return value, grad


def f2_and_grad(C, ctx):
    r = ctx.r
    E = C @ ctx.Dt - r * (ctx.Ds @ C)
    value = float(np.vdot(E, E))
    grad = 2.0 * (E @ ctx.Dt.T - r * (ctx.Ds.T @ E))
    return value, grad


def f3_and_grad(C, ctx):
    """Triple contraction of the sparse tensor with c = vec(C), and its
    gradient assembled from the three partial contractions."""
    H = ctx.tensor
    if H is None or H.m == 0:
        return 0.0, np.zeros_like(C)
    c = C.ravel()
    n = c.size
    w1 = c[H.p1]
    w2 = c[H.p2]
    w3 = c[H.p3]
    value = float(np.dot(H.values, w1 * w2 * w3))
    grad = (
        np.bincount(H.p1, weights=H.values * w2 * w3, minlength=n)
        + np.bincount(H.p2, weights=H.values * w1 * w3, minlength=n)
        + np.bincount(H.p3, weights=H.values * w1 * w2, minlength=n)
    )
    return value, grad.reshape(C.shape)


def fg_and_grad(C, ctx):
    """Group lasso over (class, target column) blocks of C.

    Zero-norm groups get subgradient 0, the standard convention.
    """
    if ctx.class_groups is None:
        raise ValueError("group term requires class index sets")
    value = 0.0
    grad = np.zeros_like(C)
    for rows in ctx.class_groups:
        if len(rows) == 0:
            continue
        block = C[rows, :]
        norms = np.sqrt((block**2).sum(axis=0))
        value += float(norms.sum())
        nz = norms > 0.0
        grad[np.ix_(rows, nz)] = block[:, nz] / norms[nz]
    return value, grad


def total_objective(C, ctx, weights):
    """Weighted total cost and its gradient G.

    Terms with zero weight are skipped entirely, so a context may omit the
    tensor or the class groups when the corresponding weight is 0.
    """
    value, grad = f1_and_grad(C, ctx)
    if weights.lam2 > 0.0:
        v2, g2 = f2_and_grad(C, ctx)
        value += weights.lam2 * v2
        grad += weights.lam2 * g2
    if weights.lam3 > 0.0:
        v3, g3 = f3_and_grad(C, ctx)
        value -= weights.lam3 * v3
        grad -= weights.lam3 * g3
    if weights.lam_g > 0.0:
        vg, gg = fg_and_grad(C, ctx)
        value += weights.lam_g * vg
        grad += weights.lam_g * gg
    return value, grad
