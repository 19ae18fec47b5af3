"""Pure numpy/scipy implementations of the hot kernels.

Signatures match the compiled ``_kernels`` extension exactly.
"""
import numpy as np
from scipy.ndimage import minimum_filter


def grid_seeds(a, b, sa, sb, h, factor, band, same):
    """Grid cells that are local minima of |a_i x b_j| below the seed threshold.

    ``a`` (n, 3) and ``b`` (m, 3) are unit rows, ``sa``/``sb`` their projective
    speeds.  A cell is a seed when its value is a 3x3 (wrapped) local minimum
    and smaller than ``factor * h * hypot(sa_i, sb_j)``.  With ``same`` set only
    ``i < j`` at circular index distance greater than ``band`` is kept.
    Returns an (k, 2) int64 array of (i, j).
    """
    c = a @ b.T
    f = np.sqrt(np.clip(1.0 - c * c, 0.0, None))
    thr = factor * h * np.sqrt(sa[:, None] ** 2 + sb[None, :] ** 2)
    mask = (f < thr) & (f <= minimum_filter(f, size=3, mode="wrap"))
    if same:
        n = len(a)
        i = np.arange(n)
        d = np.abs(i[:, None] - i[None, :])
        d = np.minimum(d, n - d)
        mask &= (d > band) & (i[:, None] < i[None, :])
    return np.argwhere(mask).astype(np.int64)


def arc_pairs(P, Q, cand_i, cand_j):
    """Exact arc-arc crossing test for candidate segment pairs.

    Segment ``i`` of ``P`` runs P[i] -> P[i+1]; segment ``j`` of ``Q`` runs
    Q[j] -> Q[j+1].  ``Q`` segments are sign-matched to ``P`` per pair, so the
    test is projective.  Returns (mask, u, v) with u, v the fractional positions
    of the crossing along each segment.
    """
    a0 = P[cand_i]
    a1 = P[cand_i + 1]
    b0 = Q[cand_j]
    b1 = Q[cand_j + 1]
    flip = np.where(np.einsum("ij,ij->i", a0 + a1, b0 + b1) < 0, -1.0, 1.0)[:, None]
    b0 = b0 * flip
    b1 = b1 * flip
    pn = np.cross(a0, a1)
    qn = np.cross(b0, b1)
    sb0 = np.einsum("ij,ij->i", b0, pn)
    sb1 = np.einsum("ij,ij->i", b1, pn)
    sa0 = np.einsum("ij,ij->i", a0, qn)
    sa1 = np.einsum("ij,ij->i", a1, qn)
    mask = (sb0 * sb1 < 0) & (sa0 * sa1 < 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        u = sa0 / (sa0 - sa1)
        v = sb0 / (sb0 - sb1)
    return mask, u, v
