"""Euclidean distance matrix algebra.

Conventions used throughout the package:

- A point set is an ``(N, K)`` array ``P`` whose rows are workspace points,
  with ``K`` in ``{2, 3}``.
- A Gram matrix is ``X = P @ P.T``, symmetric positive semidefinite.
- A distance matrix ``D`` stores SQUARED pairwise distances (meters^2), so
  ``D[u, v] == ||P[u] - P[v]||^2``. The squared convention is kept in type
  and variable names to prevent unit bugs.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateAnchors, EmbeddingDimensionExceeded


@dataclass(frozen=True)
class PartialEDM:
    """Squared-distance template with masks for known and bounded entries.

    template : (N, N) float array
        Squared distances for masked entries; zero elsewhere by convention.
    equality_mask : (N, N) bool array
        Entries whose squared distance is known exactly. Symmetric, diagonal
        set (the diagonal of any EDM is zero).
    lower_bound_mask : (N, N) bool array
        Entries whose squared distance is bounded below by the template.
        Symmetric and disjoint from ``equality_mask``.
    """

    template: np.ndarray
    equality_mask: np.ndarray
    lower_bound_mask: np.ndarray

    @property
    def n_points(self):
        return self.template.shape[0]

    def validate(self):
        t, eq, lb = self.template, self.equality_mask, self.lower_bound_mask
        n = t.shape[0]
        if t.shape != (n, n) or eq.shape != (n, n) or lb.shape != (n, n):
            raise ValueError("template and masks must be square and congruent")
        if not (np.array_equal(eq, eq.T) and np.array_equal(lb, lb.T)):
            raise ValueError("masks must be symmetric")
        if np.any(eq & lb):
            raise ValueError("equality and lower-bound masks must be disjoint")
        if not np.all(np.diag(eq)):
            raise ValueError("diagonal entries are known (zero) by definition")
        if np.any(np.diag(t) != 0.0):
            raise ValueError("template diagonal must be zero")
        if not np.allclose(t, t.T, atol=0.0, rtol=0.0):
            raise ValueError("template must be symmetric")
        if np.any(t[eq | lb] < 0.0):
            raise ValueError("masked squared distances must be nonnegative")

    def masked_pairs(self):
        """Upper-triangle index/value arrays ``(eq_u, eq_v, eq_d, lb_u, lb_v, lb_d)``.

        Each undirected masked pair appears exactly once. This is the layout
        the cost kernels consume.
        """
        eq_u, eq_v = np.nonzero(np.triu(self.equality_mask, k=1))
        lb_u, lb_v = np.nonzero(np.triu(self.lower_bound_mask, k=1))
        return (
            eq_u.astype(np.int64),
            eq_v.astype(np.int64),
            self.template[eq_u, eq_v].astype(np.float64),
            lb_u.astype(np.int64),
            lb_v.astype(np.int64),
            self.template[lb_u, lb_v].astype(np.float64),
        )


@dataclass(frozen=True)
class AnchorSet:
    """Point indices with known world positions.

    Anchors pin the rigid-motion ambiguity left by distance data: typically
    the robot base points plus the end-effector goal points.
    """

    indices: np.ndarray
    positions: np.ndarray

    def validate(self, n_points=None):
        idx = np.asarray(self.indices)
        pos = np.asarray(self.positions, dtype=float)
        if idx.ndim != 1 or len(set(idx.tolist())) != idx.size:
            raise ValueError("anchor indices must be unique")
        if n_points is not None and (idx.min() < 0 or idx.max() >= n_points):
            raise ValueError("anchor index out of range")
        if pos.shape != (idx.size, pos.shape[1]):
            raise ValueError("positions must be |indices| x K")
        k = pos.shape[1]
        if k == 2:
            if idx.size < 2:
                raise ValueError("need at least 2 anchors in the plane")
            if np.allclose(pos.max(axis=0), pos.min(axis=0)):
                raise ValueError("planar anchors must not coincide")
        elif k == 3:
            if idx.size < 3:
                raise ValueError("need at least 3 anchors in space")
            centered = pos - pos.mean(axis=0)
            s = np.linalg.svd(centered, compute_uv=False)
            if s[1] <= 1e-12 * max(s[0], 1.0):
                raise ValueError("spatial anchors must not be collinear")
        else:
            raise ValueError("anchors must live in 2 or 3 dimensions")


def gram(points):
    """Gram matrix ``P @ P.T`` of a point set."""
    p = np.asarray(points, dtype=float)
    return p @ p.T


def gram_to_edm(x):
    """Map a Gram matrix to the squared-distance matrix it generates.

    ``D[u, v] = X[u, u] + X[v, v] - 2 X[u, v]``, which equals
    ``||p_u - p_v||^2`` when ``X = P @ P.T``.
    """
    x = np.asarray(x, dtype=float)
    d = np.diag(x)
    return d[:, None] + d[None, :] - 2.0 * x


def gram_to_edm_adjoint(a):
    """Adjoint of :func:`gram_to_edm` with respect to the Frobenius inner product.

    For symmetric ``A`` returns ``2 (Diag(A 1) - A)``, so that
    ``<gram_to_edm(X), A> == <X, gram_to_edm_adjoint(A)>`` for all symmetric X.
    """
    a = np.asarray(a, dtype=float)
    row_sums = a.sum(axis=1)
    out = -2.0 * a
    out[np.diag_indices_from(out)] += 2.0 * row_sums
    return out


def points_from_edm(d, dim, eig_tol=1e-6):
    """Recover a centered point set from a complete squared-distance matrix.

    Classical multidimensional scaling: double-center ``-d/2`` to the Gram
    matrix of the centered points, eigendecompose, and keep the ``dim``
    leading nonnegative eigenpairs.

    Raises EmbeddingDimensionExceeded when the ``(dim+1)``-th eigenvalue
    exceeds ``eig_tol`` times the largest, i.e. the data needs more than
    ``dim`` dimensions.
    """
    d = np.asarray(d, dtype=float)
    n = d.shape[0]
    # Double centering: B = -1/2 J D J with J = I - (1/n) 1 1^T.
    row = d.mean(axis=1)
    b = -0.5 * (d - row[:, None] - row[None, :] + d.mean())
    evals, evecs = np.linalg.eigh(b)
    order = np.argsort(evals)[::-1]
    evals = evals[order]
    evecs = evecs[:, order]
    largest = max(evals[0], 0.0)
    if n > dim and evals[dim] > eig_tol * max(largest, 1e-30):
        raise EmbeddingDimensionExceeded(
            f"distance data needs more than {dim} dimensions "
            f"(eigenvalue {evals[dim]:.3e} vs largest {largest:.3e})"
        )
    lead = np.clip(evals[:dim], 0.0, None)
    return evecs[:, :dim] * np.sqrt(lead)[None, :]


def align_to_anchors(points, anchors, degenerate_tol=1e-9):
    """Rigidly move ``points`` so anchored rows best match anchor positions.

    Solves the orthogonal Procrustes problem over the full orthogonal group
    (reflections included); the anchors disambiguate the handedness that
    pure distance data cannot. Returns the transformed copy of ``points``.

    Raises DegenerateAnchors when the cross-covariance between solved and
    target anchor positions has rank below ``K - 1``, in which case no
    (reflection-tie aside) well-defined alignment exists.
    """
    p = np.asarray(points, dtype=float)
    idx = np.asarray(anchors.indices)
    target = np.asarray(anchors.positions, dtype=float)
    k = p.shape[1]
    src = p[idx]
    src_c = src.mean(axis=0)
    tgt_c = target.mean(axis=0)
    cross = (src - src_c).T @ (target - tgt_c)
    u, s, vt = np.linalg.svd(cross)
    if s[max(k - 2, 0)] <= degenerate_tol * max(s[0], 1.0):
        raise DegenerateAnchors(
            f"anchor cross-covariance is rank-deficient (singular values {s})"
        )
    rot = u @ vt
    return (p - src_c) @ rot + tgt_c
