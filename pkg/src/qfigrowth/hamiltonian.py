"""Few-body Pauli-string Hamiltonians with bounded one-site energy.

A Hamiltonian is a list of weighted spin-1/2 Pauli strings, each acting
on a small support set.  Operator norms of such strings are exact:
``||c * prod_{i in X} S_i^a|| = |c| / 2**|X|``, so the one-site energy
(the largest total term norm any single site participates in) is
computed without building matrices.

Builders cover the power-law Ising chain

    H = (1/N_alpha) sum_{i<j} (4 / d_ij**alpha) Sz_i Sz_j

with the size rescaling N_alpha = N**(1-alpha) for alpha in [0, 1) and
N_alpha = 1 for alpha > 1, plus a dipolar XX stub.  The crossover value
at alpha == 1 is a convention choice, see ``normalize_factor``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lattice import Lattice, build_lattice, distance

__all__ = [
    "PauliTerm",
    "KLocalHamiltonian",
    "make_hamiltonian",
    "one_site_energy",
    "normalize_factor",
    "build_power_law_ising",
    "build_dipolar_xx",
    "to_json_dict",
    "from_json_dict",
]

_AXES = ("x", "y", "z")


@dataclass(frozen=True, order=True)
class PauliTerm:
    """Weighted Pauli string: ``coeff * prod_{i in support} S_i^{axes[i]}``."""

    support: tuple
    axes: tuple
    coeff: float

    def __post_init__(self):
        if len(self.support) < 1:
            raise ValueError("term support must contain at least one site")
        if len(set(self.support)) != len(self.support):
            raise ValueError("term support sites must be distinct")
        if len(self.axes) != len(self.support):
            raise ValueError("one axis label per support site required")
        if any(a not in _AXES for a in self.axes):
            raise ValueError(f"axes must be drawn from {_AXES}")
        if not np.isfinite(self.coeff):
            raise ValueError("term coefficient must be finite")

    @property
    def norm(self):
        """Exact operator norm of the term."""
        return abs(self.coeff) / 2.0 ** len(self.support)


def _canonical(support, axes, coeff):
    pairs = sorted(zip(support, axes))
    return PauliTerm(
        support=tuple(int(s) for s, _ in pairs),
        axes=tuple(a for _, a in pairs),
        coeff=float(coeff),
    )


@dataclass(frozen=True)
class KLocalHamiltonian:
    """Canonicalized list of Pauli terms, each supported on <= locality sites."""

    terms: tuple
    locality: int
    lattice: Lattice = field(compare=False)
    alpha: float | None = None

    def __post_init__(self):
        n = self.lattice.n_sites
        for t in self.terms:
            if any(not (0 <= s < n) for s in t.support):
                raise ValueError("term support outside the lattice")
            if len(t.support) > self.locality:
                raise ValueError("term support exceeds the declared locality")

    def all_z(self):
        return all(a == "z" for t in self.terms for a in t.axes)


def make_hamiltonian(terms, lattice, locality=None, alpha=None):
    """Canonicalize terms (sorted supports, merged duplicates, zeros dropped)."""
    merged = {}
    for t in terms:
        key = _canonical(t.support, t.axes, t.coeff)
        merged[(key.support, key.axes)] = merged.get((key.support, key.axes), 0.0) + key.coeff
    canon = tuple(
        PauliTerm(support=s, axes=a, coeff=c)
        for (s, a), c in sorted(merged.items())
        if c != 0.0
    )
    if locality is None:
        locality = max((len(t.support) for t in canon), default=1)
    return KLocalHamiltonian(terms=canon, locality=int(locality), lattice=lattice, alpha=alpha)


def one_site_energy(H):
    """max over sites of the summed norms of the terms touching that site."""
    per_site = np.zeros(H.lattice.n_sites)
    for t in H.terms:
        for s in t.support:
            per_site[s] += t.norm
    return float(per_site.max(initial=0.0))


def normalize_factor(N, alpha, at_alpha_one="unit"):
    """Size rescaling N_alpha of the power-law couplings.

    N**(1-alpha) for alpha in [0, 1) and 1 for alpha > 1.  Exactly at
    alpha == 1 the rule is a convention: ``unit`` (default) extends the
    alpha > 1 branch, ``harmonic`` uses the Kac-style harmonic number
    sum_{r<N} 1/r that keeps the one-site energy bounded in N.
    """
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    if N < 1:
        raise ValueError("N must be a positive integer")
    if alpha < 1:
        return float(N) ** (1.0 - alpha)
    if alpha > 1:
        return 1.0
    if at_alpha_one == "unit" or N == 1:
        return 1.0
    if at_alpha_one == "harmonic":
        return float(sum(1.0 / r for r in range(1, N)))
    raise ValueError(f"unknown alpha==1 convention {at_alpha_one!r}")


def build_power_law_ising(lat, alpha, at_alpha_one="unit"):
    """Power-law ZZ chain: coefficient 4/(N_alpha |i-j|**alpha) per pair."""
    if lat.dim != 1:
        raise ValueError("the power-law Ising builder is defined on a chain (dim 1)")
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    N = lat.n_sites
    na = normalize_factor(N, alpha, at_alpha_one)
    terms = [
        PauliTerm(support=(i, j), axes=("z", "z"), coeff=4.0 / (na * float(j - i) ** alpha))
        for i in range(N)
        for j in range(i + 1, N)
    ]
    return make_hamiltonian(terms, lat, locality=2, alpha=float(alpha))


def build_dipolar_xx(lat, metric="graph"):
    """Dipolar XX stub: -(Sx Sx + Sy Sy)/d**3 per pair.  No production use."""
    terms = []
    for i in range(lat.n_sites):
        for j in range(i + 1, lat.n_sites):
            d = distance(lat, i, j, metric=metric)
            c = -1.0 / float(d) ** 3
            terms.append(PauliTerm(support=(i, j), axes=("x", "x"), coeff=c))
            terms.append(PauliTerm(support=(i, j), axes=("y", "y"), coeff=c))
    return make_hamiltonian(terms, lat, locality=2)


def to_json_dict(H):
    doc = {
        "dim": H.lattice.dim,
        "extents": list(H.lattice.extents),
        "terms": [
            {"support": list(t.support), "axes": list(t.axes), "coeff": t.coeff}
            for t in H.terms
        ],
    }
    if H.alpha is not None:
        doc["alpha"] = H.alpha
    return doc


def from_json_dict(doc):
    lat = build_lattice(int(doc["dim"]), doc["extents"])
    terms = [
        PauliTerm(support=tuple(t["support"]), axes=tuple(t["axes"]), coeff=float(t["coeff"]))
        for t in doc["terms"]
    ]
    return make_hamiltonian(terms, lat, alpha=doc.get("alpha"))
