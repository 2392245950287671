"""Pure numpy implementation of the masked cost/gradient kernels.

Import-time fallback used when the compiled extension is unavailable; the
compiled module in ``_core.pyx`` implements the same contract.

Entry layout: undirected masked pairs, upper triangle only. The quadratic
penalty on each pair therefore carries the weight of both symmetric mask
entries (factor 2 against the half-Frobenius form).
"""

import numpy as np


def cost_only(p, eq_u, eq_v, eq_d, lb_u, lb_v, lb_d):
    """Masked completion cost at point matrix ``p``."""
    c = 0.0
    if eq_u.size:
        diff = p[eq_u] - p[eq_v]
        r = eq_d - np.einsum("ij,ij->i", diff, diff)
        c += float(r @ r)
    if lb_u.size:
        diff = p[lb_u] - p[lb_v]
        r = lb_d - np.einsum("ij,ij->i", diff, diff)
        np.clip(r, 0.0, None, out=r)
        c += float(r @ r)
    return c


def cost_and_grad(p, eq_u, eq_v, eq_d, lb_u, lb_v, lb_d):
    """Cost and its gradient with respect to the point coordinates."""
    grad = np.zeros_like(p)
    c = 0.0
    if eq_u.size:
        diff = p[eq_u] - p[eq_v]
        r = eq_d - np.einsum("ij,ij->i", diff, diff)
        c += float(r @ r)
        # d cost / d p: each pair adds -4 r (p_u - p_v) to row u, the negative to row v.
        contrib = (-4.0 * r)[:, None] * diff
        np.add.at(grad, eq_u, contrib)
        np.add.at(grad, eq_v, -contrib)
    if lb_u.size:
        diff = p[lb_u] - p[lb_v]
        r = lb_d - np.einsum("ij,ij->i", diff, diff)
        np.clip(r, 0.0, None, out=r)
        c += float(r @ r)
        contrib = (-4.0 * r)[:, None] * diff
        np.add.at(grad, lb_u, contrib)
        np.add.at(grad, lb_v, -contrib)
    return c, grad
