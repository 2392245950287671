"""Geometry of full-rank N x K point matrices modulo right orthogonal factors.

A point set and any orthogonal transform of it generate the same Gram matrix,
so distance costs have non-isolated minima on the raw matrix space. Working
on the quotient (full-rank matrices up to ``P -> P @ Q``, ``Q`` orthogonal)
isolates them. Concretely:

- points and tangent vectors are plain ``(N, K)`` arrays;
- the metric is the flat trace inner product, which descends to the quotient;
- vertical directions (motions along the orbit) have the form ``P @ W`` with
  ``W`` skew; horizontal vectors ``Z`` satisfy ``P.T @ Z`` symmetric;
- the retraction is the additive one, with an explicit rank guard.
"""

import numpy as np

from .errors import LeftManifold, RankDeficientBase

DEFAULT_RANK_TOL = 1e-9


def inner(u, v):
    """Trace inner product ``<u, v> = trace(u.T @ v)``."""
    return float(np.tensordot(u, v))


def norm(u):
    return float(np.linalg.norm(u))


def check_full_rank(p, rank_tol=DEFAULT_RANK_TOL):
    """Raise LeftManifold when the smallest singular value of p is too small.

    Uses the eigenvalues of the tiny K x K matrix ``P.T @ P``; the singular
    value ratio is the square root of the eigenvalue ratio.
    """
    evals = np.linalg.eigvalsh(np.asarray(p).T @ np.asarray(p))
    if evals[0] <= rank_tol**2 * max(evals[-1], 1e-300):
        raise LeftManifold(
            f"point matrix lost rank (squared singular values {evals})"
        )


class HorizontalProjector:
    """Horizontal projection at a fixed base point.

    Caches the eigendecomposition of ``P.T @ P`` so repeated projections at
    one iterate (gradient plus transported directions) share the factor.
    """

    def __init__(self, base, rank_tol=DEFAULT_RANK_TOL):
        self.base = np.asarray(base, dtype=float)
        ptp = self.base.T @ self.base
        evals, evecs = np.linalg.eigh(ptp)
        if evals[0] <= rank_tol**2 * max(evals[-1], 1e-300):
            raise RankDeficientBase(
                f"base point is rank deficient (squared singular values {evals})"
            )
        self._evals = evals
        self._evecs = evecs
        # Pairwise eigenvalue sums: denominators of the Sylvester solve.
        self._denom = evals[:, None] + evals[None, :]

    def __call__(self, z):
        """Project ``z`` onto the horizontal space at the base point.

        Removes the vertical component ``P @ S`` where the skew matrix ``S``
        solves ``(P.T P) S + S (P.T P) = P.T z - z.T P``; the solve is exact
        in the eigenbasis of ``P.T P``.
        """
        z = np.asarray(z, dtype=float)
        m = self.base.T @ z
        rhs = m - m.T
        s_hat = (self._evecs.T @ rhs @ self._evecs) / self._denom
        s = self._evecs @ s_hat @ self._evecs.T
        return z - self.base @ s


def project_horizontal(base, z, rank_tol=DEFAULT_RANK_TOL):
    """Horizontal projection of an ambient vector ``z`` at ``base``."""
    return HorizontalProjector(base, rank_tol)(z)


def retract(base, step, rank_tol=DEFAULT_RANK_TOL):
    """Additive retraction ``base + step`` with a rank guard.

    Raises LeftManifold when the result is rank-deficient; the caller is
    expected to shrink the step rather than accept a repaired point.
    """
    new = np.asarray(base, dtype=float) + np.asarray(step, dtype=float)
    check_full_rank(new, rank_tol)
    return new


def transport(to_base, v, rank_tol=DEFAULT_RANK_TOL):
    """Projection-based vector transport to the horizontal space at ``to_base``."""
    return project_horizontal(to_base, v, rank_tol)


def is_horizontal(base, z, tol=1e-9):
    """True when ``base.T @ z`` is symmetric to within ``tol``."""
    m = np.asarray(base).T @ np.asarray(z)
    return bool(np.max(np.abs(m - m.T)) <= tol)


def same_class(p, q, tol=1e-9):
    """Class membership test: representatives are equal up to a right
    orthogonal factor iff their Gram matrices agree."""
    gp = np.asarray(p) @ np.asarray(p).T
    gq = np.asarray(q) @ np.asarray(q).T
    scale = max(np.max(np.abs(gp)), 1.0)
    return bool(np.max(np.abs(gp - gq)) <= tol * scale)
