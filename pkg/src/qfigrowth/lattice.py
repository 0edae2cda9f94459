"""Hypercubic lattice geometry.

Sites of a D-dimensional box are indexed row-major over integer
coordinates, with open boundaries.  Distances are graph (Manhattan)
distances; a Euclidean metric is available for dipolar-style couplings.
``geometry_constant`` returns the smallest gamma satisfying
``|ball(i, R)| <= 1 + gamma * (2R)**D`` for every site i and every
integer radius R >= 1; it is the ball-volume prefactor entering the
Fisher-information growth bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Lattice",
    "BallRegion",
    "build_lattice",
    "distance",
    "ball",
    "geometry_constant",
]


@dataclass(frozen=True)
class Lattice:
    """Immutable site set of a D-dimensional box.

    ``coords[s]`` holds the integer coordinate tuple of site ``s``; the
    mapping between site indices and coordinates is bijective (row-major
    order, first axis slowest).
    """

    dim: int
    extents: tuple
    n_sites: int
    coords: np.ndarray = field(compare=False, repr=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("lattice dimension must be >= 1")
        if len(self.extents) != self.dim:
            raise ValueError("extents length must equal the lattice dimension")
        if any(int(e) < 1 for e in self.extents):
            raise ValueError("every extent must be a positive integer")
        expected = 1
        for e in self.extents:
            expected *= int(e)
        if self.n_sites != expected:
            raise ValueError("n_sites inconsistent with extents")

    @property
    def diameter(self):
        """Largest graph distance between any two sites."""
        return int(sum(e - 1 for e in self.extents))


@dataclass(frozen=True)
class BallRegion:
    """Sites within graph distance ``radius`` of ``center``."""

    center: int
    radius: float
    members: frozenset

    def __post_init__(self):
        if self.center not in self.members:
            raise ValueError("ball must contain its own center")


def build_lattice(dim, extents):
    """Build a D-dimensional open-boundary box lattice.

    Raises ValueError on a dim/extents mismatch or a non-positive extent.
    """
    extents = tuple(int(e) for e in extents)
    if dim != len(extents):
        raise ValueError(f"dim={dim} but {len(extents)} extents given")
    if any(e < 1 for e in extents):
        raise ValueError("extents must be >= 1")
    n_sites = int(np.prod(extents))
    coords = np.stack(np.unravel_index(np.arange(n_sites), extents), axis=-1)
    return Lattice(dim=dim, extents=extents, n_sites=n_sites, coords=coords)


def _check_site(lat, i):
    if not (0 <= i < lat.n_sites):
        raise IndexError(f"site index {i} out of range for {lat.n_sites} sites")


def distance(lat, i, j, metric="graph"):
    """Distance between sites i and j.

    ``graph`` is the Manhattan distance on the hypercubic graph (an
    integer); ``euclidean`` is offered for dipolar couplings and is not
    used by the bound machinery.
    """
    _check_site(lat, i)
    _check_site(lat, j)
    diff = lat.coords[i] - lat.coords[j]
    if metric == "graph":
        return int(np.abs(diff).sum())
    if metric == "euclidean":
        return float(np.sqrt((diff.astype(float) ** 2).sum()))
    raise ValueError(f"unknown metric {metric!r}")


def ball(lat, i, radius):
    """Ball region around site i: all sites with graph distance <= radius."""
    _check_site(lat, i)
    if radius < 0:
        raise ValueError("ball radius must be non-negative")
    d = np.abs(lat.coords - lat.coords[i]).sum(axis=1)
    members = frozenset(int(s) for s in np.nonzero(d <= radius)[0])
    return BallRegion(center=i, radius=float(radius), members=members)


def geometry_constant(lat):
    """Smallest gamma with |ball(i, R)| <= 1 + gamma (2R)**D for all i, R >= 1.

    Computed by exhaustive enumeration of ball sizes; the supremum over R
    is attained at some R <= diameter because ball sizes saturate at
    n_sites while (2R)**D keeps growing.
    """
    D = lat.dim
    gamma = 0.0
    max_d = lat.diameter
    if max_d < 1:
        return 0.0
    for i in range(lat.n_sites):
        d = np.abs(lat.coords - lat.coords[i]).sum(axis=1)
        counts = np.bincount(d, minlength=max_d + 1)
        sizes = np.cumsum(counts)
        for R in range(1, max_d + 1):
            gamma = max(gamma, (sizes[R] - 1) / float((2 * R) ** D))
    return float(gamma)
