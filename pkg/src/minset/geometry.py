"""Small planar helpers on complex-valued point arrays."""

from __future__ import annotations

import numpy as np
from scipy.spatial import ConvexHull, QhullError
from scipy.spatial.distance import pdist


def winding_number(points, polygon) -> np.ndarray:
    """Winding number of the closed polygon around each query point.

    ``polygon`` is an ordered vertex array; the closing edge back to the
    first vertex is implicit. Points exactly on an edge get an arbitrary
    but finite answer, so callers handle the on-curve case separately.
    """
    p = np.atleast_1d(np.asarray(points, dtype=complex))
    v = np.asarray(polygon, dtype=complex)
    a = v
    b = np.roll(v, -1)
    px, py = p.real[:, None], p.imag[:, None]
    ax, ay = a.real[None, :], a.imag[None, :]
    bx, by = b.real[None, :], b.imag[None, :]
    is_left = (bx - ax) * (py - ay) - (px - ax) * (by - ay)
    up = (ay <= py) & (by > py) & (is_left > 0)
    down = (ay > py) & (by <= py) & (is_left < 0)
    return up.sum(axis=1) - down.sum(axis=1)


def point_in_polygon(points, polygon) -> np.ndarray:
    """Boolean mask: True where the point lies in the bounded component."""
    return winding_number(points, polygon) != 0


def signed_area(polygon) -> float:
    """Shoelace area; positive for counter-clockwise vertex order."""
    v = np.asarray(polygon, dtype=complex)
    w = np.roll(v, -1)
    return 0.5 * float(np.sum(v.real * w.imag - w.real * v.imag))


def diameter(points) -> float:
    """Largest pairwise distance of a finite point set."""
    z = np.asarray(points, dtype=complex).ravel()
    if z.size < 2:
        return 0.0
    xy = np.column_stack([z.real, z.imag])
    if z.size > 64:
        try:
            xy = xy[ConvexHull(xy).vertices]
        except QhullError:
            # collinear: the extremes along the spread direction realize the diameter
            c = xy - xy.mean(axis=0)
            _, _, vt = np.linalg.svd(c, full_matrices=False)
            s = c @ vt[0]
            xy = xy[[int(np.argmin(s)), int(np.argmax(s))]]
    return float(pdist(xy).max())
