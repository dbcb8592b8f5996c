"""Finite hypercubic lattice geometry with free boundary conditions.

Sites carry 1-based coordinates x = (x^0, ..., x^{d-1}), each in 1..L, and
are enumerated lexicographically (x^0 slowest, x^{d-1} fastest).  A bond is
a pair (site, direction mu) with x^mu < L, pointing from x to x + e^mu.  A
plaquette is (site, mu, nu) with mu < nu and both forward steps available;
its boundary is walked x -> x+e^mu -> x+e^mu+e^nu -> x+e^nu -> x, so the
holonomy uses the bonds

    b1 = (x, mu), b2 = (x+e^mu, nu), b3 = (x+e^nu, mu), b4 = (x, nu)

with b3 and b4 traversed backwards (signs +, +, -, -).

Direction 0 plays the role of time.  The gauge-fixing tree is the enhanced
temporal one: all time bonds, plus for each spatial direction k >= 1 the
direction-k bonds in the slice where all earlier coordinates equal 1.  That
is a spanning tree (checked by union-find), so L^d - 1 bonds are fixed and
the rest are retained.
"""

from dataclasses import dataclass
from functools import cached_property
from math import comb

import numpy as np

from .errors import UsageError


@dataclass(frozen=True)
class Lattice:
    """Hypercubic lattice with d in {2,3,4}, L >= 2 sites per side, spacing a."""

    d: int
    L: int
    a: float = 1.0
    boundary: str = "free"

    def __post_init__(self):
        if self.d not in (2, 3, 4):
            raise UsageError(f"dimension must be 2, 3 or 4, got {self.d}")
        if not isinstance(self.L, (int, np.integer)) or self.L < 2:
            raise UsageError(f"side length must be an integer >= 2, got {self.L}")
        if not 0.0 < self.a <= 1.0:
            raise UsageError(f"lattice spacing must be in (0, 1], got {self.a}")
        if self.boundary != "free":
            raise UsageError(
                f"only free boundary conditions are supported, got {self.boundary!r}")

    # ---- counts (closed forms; the enumerations below must agree) ----

    @property
    def n_sites(self):
        return self.L**self.d

    @property
    def n_bonds(self):
        return self.d * self.L ** (self.d - 1) * (self.L - 1)

    @property
    def n_plaquettes(self):
        return comb(self.d, 2) * self.L ** (self.d - 2) * (self.L - 1) ** 2

    # ---- site indexing ----

    def site_index(self, coords):
        """Dense index of a 1-based coordinate tuple (lexicographic order)."""
        coords = np.asarray(coords)
        if coords.shape[-1] != self.d:
            raise ValueError(f"expected {self.d} coordinates, got {coords.shape[-1]}")
        if np.any(coords < 1) or np.any(coords > self.L):
            raise ValueError(f"coordinates must lie in 1..{self.L}")
        idx = np.zeros(coords.shape[:-1], dtype=np.int64)
        for k in range(self.d):
            idx = idx * self.L + (coords[..., k] - 1)
        return idx if idx.ndim else int(idx)

    @cached_property
    def site_coords(self):
        """Array (n_sites, d) of 1-based coordinates in enumeration order."""
        grids = np.meshgrid(*[np.arange(1, self.L + 1)] * self.d, indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=-1)

    # ---- bonds ----

    @cached_property
    def _bond_arrays(self):
        coords = self.site_coords
        sites, dirs = [], []
        for s in range(self.n_sites):
            for mu in range(self.d):
                if coords[s, mu] < self.L:
                    sites.append(s)
                    dirs.append(mu)
        site = np.array(sites, dtype=np.int64)
        direction = np.array(dirs, dtype=np.int64)
        head_coords = coords[site].copy()
        head_coords[np.arange(len(site)), direction] += 1
        head = self.site_index(head_coords)
        table = np.full((self.n_sites, self.d), -1, dtype=np.int64)
        table[site, direction] = np.arange(len(site))
        return site, direction, head, table

    @property
    def bond_tail(self):
        """Site index each bond starts at, shape (n_bonds,)."""
        return self._bond_arrays[0]

    @property
    def bond_dir(self):
        """Direction mu of each bond, shape (n_bonds,)."""
        return self._bond_arrays[1]

    @property
    def bond_head(self):
        """Site index each bond points to, shape (n_bonds,)."""
        return self._bond_arrays[2]

    def bond_index(self, coords, mu):
        """Bond id for the forward bond at 1-based coords in direction mu."""
        table = self._bond_arrays[3]
        b = int(table[self.site_index(coords), mu])
        if b < 0:
            raise ValueError(f"no forward bond in direction {mu} at {tuple(coords)}")
        return b

    # ---- plaquettes ----

    @cached_property
    def _plaq_arrays(self):
        coords = self.site_coords
        table = self._bond_arrays[3]
        site, mus, nus, bonds = [], [], [], []
        for s in range(self.n_sites):
            for mu in range(self.d):
                if coords[s, mu] >= self.L:
                    continue
                for nu in range(mu + 1, self.d):
                    if coords[s, nu] >= self.L:
                        continue
                    c = coords[s]
                    c_mu = c.copy(); c_mu[mu] += 1
                    c_nu = c.copy(); c_nu[nu] += 1
                    b1 = table[s, mu]
                    b2 = table[self.site_index(c_mu), nu]
                    b3 = table[self.site_index(c_nu), mu]
                    b4 = table[s, nu]
                    site.append(s); mus.append(mu); nus.append(nu)
                    bonds.append((b1, b2, b3, b4))
        return (np.array(site, dtype=np.int64), np.array(mus, dtype=np.int64),
                np.array(nus, dtype=np.int64), np.array(bonds, dtype=np.int64))

    @property
    def plaq_site(self):
        return self._plaq_arrays[0]

    @property
    def plaq_mu(self):
        return self._plaq_arrays[1]

    @property
    def plaq_nu(self):
        return self._plaq_arrays[2]

    @property
    def plaq_bonds(self):
        """Bond ids (b1, b2, b3, b4) per plaquette, shape (n_plaquettes, 4).

        The holonomy is g[b1] g[b2] g[b3]^{-1} g[b4]^{-1}.
        """
        return self._plaq_arrays[3]

    def horizontal_plaquettes(self):
        """Indices of plaquettes not involving direction 0 (empty for d=2)."""
        return np.nonzero(self.plaq_mu >= 1)[0]

    def bond_plaquette_incidence(self):
        """Number of plaquettes each bond borders; at most 2(d-1)."""
        counts = np.zeros(self.n_bonds, dtype=np.int64)
        np.add.at(counts, self.plaq_bonds.ravel(), 1)
        return counts


def _union_find_spanning(n_sites, tails, heads):
    """True if the given edges form a spanning tree on n_sites vertices."""
    if len(tails) != n_sites - 1:
        return False
    parent = np.arange(n_sites)

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for t, h in zip(tails, heads):
        rt, rh = find(t), find(h)
        if rt == rh:
            return False  # cycle
        parent[rt] = rh
    return True


@dataclass(frozen=True)
class GaugeFixing:
    """Enhanced temporal gauge: tree bond mask and the retained complement."""

    lattice: Lattice
    tree_mask: np.ndarray

    @classmethod
    def enhanced_temporal(cls, lattice):
        coords = lattice.site_coords
        tail = lattice.bond_tail
        mu = lattice.bond_dir
        mask = mu == 0
        for k in range(1, lattice.d):
            in_slice = np.all(coords[tail][:, :k] == 1, axis=1)
            mask = mask | ((mu == k) & in_slice)
        fixing = cls(lattice=lattice, tree_mask=mask)
        if not fixing.is_spanning_tree():
            raise AssertionError("enhanced temporal bonds do not form a spanning tree")
        return fixing

    def is_spanning_tree(self):
        lat = self.lattice
        idx = np.nonzero(self.tree_mask)[0]
        return _union_find_spanning(lat.n_sites, lat.bond_tail[idx], lat.bond_head[idx])

    @property
    def tree_bonds(self):
        return np.nonzero(self.tree_mask)[0]

    @property
    def retained_bonds(self):
        return np.nonzero(~self.tree_mask)[0]

    @property
    def n_retained(self):
        return int(np.sum(~self.tree_mask))


def n_retained_bonds(d, L):
    """Retained bond count d L^{d-1}(L-1) - (L^d - 1) without building arrays."""
    lat = Lattice(d=d, L=L)
    return lat.n_bonds - (lat.n_sites - 1)
