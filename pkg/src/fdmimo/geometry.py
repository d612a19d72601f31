"""Hexagonal cell lattice, user drops, wraparound distances, pilot coloring.

The lattice is a triangular grid of base stations with basis vectors
v1 = d*(1, 0) and v2 = d*(1/2, sqrt(3)/2); cells are pointy-top hexagons of
circumradius d/sqrt(3).  Wraparound replicates the cluster at the six
60-degree rotations of the cluster displacement vector, so the 19-cell
(two-tier) cluster tiles the plane and edge cells see the same interference
geometry as the center cell.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .kernels import min_image_sq_dists
from .params import SystemParams, db_to_linear

# Axial (i, j) coordinates per tier; BS position = i*v1 + j*v2.
_TIER_COORDS = {
    0: [(0, 0)],
    1: [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)],
    2: [(1, 1), (-1, 2), (-2, 1), (-1, -1), (1, -2), (2, -1),
        (2, 0), (0, 2), (-2, 2), (-2, 0), (0, -2), (2, -2)],
}

# Cluster displacement (i, j) whose rotations tile the plane for each
# cluster size: 1 cell (tiers=0), 7 cells (tiers=1), 19 cells (tiers=2).
_CLUSTER_SHIFT = {0: (1, 0), 1: (2, 1), 2: (3, 2)}


def _rot60(ij):
    i, j = ij
    return (-j, i + j)


def _axial_to_xy(coords, isd):
    v1 = np.array([1.0, 0.0]) * isd
    v2 = np.array([0.5, math.sqrt(3.0) / 2.0]) * isd
    return np.array([i * v1 + j * v2 for i, j in coords])


@dataclass(frozen=True)
class CellLattice:
    bs_xy: np.ndarray          # (n_cells, 2) positions in meters, cell 0 at origin
    reuse_color: np.ndarray    # (n_cells,) pilot color in {0 .. reuse_factor-1}
    wrap_shifts: np.ndarray    # (n_images, 2) incl. the zero shift
    inter_site_distance: float
    tiers: int
    reuse_factor: int
    wraparound: bool
    cell_index_of_interest: int = 0

    @property
    def n_cells(self) -> int:
        return self.bs_xy.shape[0]

    @property
    def cell_circumradius(self) -> float:
        return self.inter_site_distance / math.sqrt(3.0)


def build_lattice(inter_site_distance, wraparound=True, tiers=2, reuse_factor=3) -> CellLattice:
    """Hexagonal lattice of 1 + 6*tiers(tiers+1)/2 ... cells around the origin.

    Two tiers give the 19-site cluster.  Pilot reuse coloring uses
    (i - j) mod 3 on the axial coordinates, a proper 3-coloring of the
    triangular grid; reuse_factor=1 collapses everything to one color.
    """
    if inter_site_distance <= 0:
        raise ValueError("inter_site_distance must be > 0")
    coords = []
    for t in range(tiers + 1):
        coords.extend(_TIER_COORDS[t])
    bs_xy = _axial_to_xy(coords, inter_site_distance)
    if reuse_factor == 3:
        colors = np.array([(i - j) % 3 for i, j in coords], dtype=np.int64)
    else:
        colors = np.zeros(len(coords), dtype=np.int64)
    if wraparound:
        base = _CLUSTER_SHIFT[tiers]
        shift_ij = [base]
        for _ in range(5):
            shift_ij.append(_rot60(shift_ij[-1]))
        shifts = np.vstack([np.zeros((1, 2)), _axial_to_xy(shift_ij, inter_site_distance)])
    else:
        shifts = np.zeros((1, 2))
    return CellLattice(
        bs_xy=bs_xy,
        reuse_color=colors,
        wrap_shifts=shifts,
        inter_site_distance=float(inter_site_distance),
        tiers=tiers,
        reuse_factor=reuse_factor,
        wraparound=wraparound,
    )


def pilot_reuse_set(lattice: CellLattice) -> np.ndarray:
    """Indices of the cells (other than cell 0) sharing cell 0's pilot color."""
    color0 = lattice.reuse_color[lattice.cell_index_of_interest]
    same = np.flatnonzero(lattice.reuse_color == color0)
    return same[same != lattice.cell_index_of_interest]


def distance(lattice: CellLattice, a, b) -> float:
    """Euclidean distance, minimized over wraparound images when enabled."""
    a = np.asarray(a, dtype=float).reshape(1, 2)
    b = np.asarray(b, dtype=float).reshape(1, 2)
    return math.sqrt(float(min_image_sq_dists(a, b, lattice.wrap_shifts)[0, 0]))


def _sample_hexagon(rng, n, center, circumradius):
    """Uniform points in a pointy-top hexagon via its three-rhombus split.

    The rhombi are spanned by vertex vectors 120 degrees apart, so each far
    corner e_m + e_{m+1} is itself a hexagon vertex and the three rhombi
    tile the hexagon exactly.
    """
    e = np.array(
        [[circumradius * math.cos(math.radians(deg)),
          circumradius * math.sin(math.radians(deg))]
         for deg in (90, 210, 330)]
    )
    m = rng.integers(0, 3, size=n)
    a = rng.random(n)
    b = rng.random(n)
    return center + a[:, None] * e[m] + b[:, None] * e[(m + 1) % 3]


@dataclass(frozen=True)
class NetworkDrop:
    """One realization of user positions, shadowing, and association."""

    lattice: CellLattice
    ue_ul_xy: np.ndarray    # (n_cells, K_ul, 2)
    ue_dl_xy: np.ndarray    # (n_cells, K_dl, 2)
    shadow_ul: np.ndarray   # (n_bs, n_cells, K_ul) linear shadowing per link
    shadow_dl: np.ndarray   # (n_bs, n_cells, K_dl)
    assoc_ul: np.ndarray    # (n_cells, K_ul) BS index with the highest gain
    assoc_dl: np.ndarray    # (n_cells, K_dl)
    rng_seed: object

    @property
    def n_cells(self) -> int:
        return self.lattice.n_cells


_MAX_REDRAWS = 10**6


def _drop_positions(rng, lattice, per_cell, min_dist):
    """Per-cell uniform hexagon positions, redrawn while any BS is too close."""
    n_cells = lattice.n_cells
    r = lattice.cell_circumradius
    pts = np.empty((n_cells, per_cell, 2))
    for c in range(n_cells):
        pts[c] = _sample_hexagon(rng, per_cell, lattice.bs_xy[c], r)
    flat = pts.reshape(-1, 2)
    attempts = 0
    while True:
        d2 = min_image_sq_dists(flat, lattice.bs_xy, lattice.wrap_shifts)
        bad = d2.min(axis=1) < min_dist**2
        n_bad = int(bad.sum())
        if n_bad == 0:
            break
        attempts += n_bad
        if attempts > _MAX_REDRAWS:
            raise RuntimeError("minimum-distance redraw did not terminate; check geometry")
        cells = np.flatnonzero(bad) // per_cell
        redraw = np.empty((n_bad, 2))
        for idx, c in enumerate(cells):
            redraw[idx] = _sample_hexagon(rng, 1, lattice.bs_xy[c], r)
        flat[bad] = redraw
    return flat.reshape(n_cells, per_cell, 2)


def _shadowing(rng, lattice, per_cell, sigma_db):
    n = lattice.n_cells
    return db_to_linear(sigma_db * rng.standard_normal((n, n, per_cell)))


def _associate(lattice, xy, shadow, eta):
    """BS of highest large-scale gain per UE (pathloss intercept cancels)."""
    flat = xy.reshape(-1, 2)
    d2 = min_image_sq_dists(flat, lattice.bs_xy, lattice.wrap_shifts)  # (n_ue, n_bs)
    gains = shadow.reshape(lattice.n_cells, -1).T / d2 ** (eta / 2.0)
    return np.argmax(gains, axis=1).reshape(xy.shape[:2])


def drop_users(lattice: CellLattice, params: SystemParams, seed) -> NetworkDrop:
    """Drop K_ul + K_dl users uniformly in every hexagon.

    All uplink randomness is drawn before any downlink randomness, so runs
    that differ only in the downlink user count share identical uplink
    geometry for a given seed.
    """
    rng = np.random.default_rng(seed)
    k_ul = params.users_ul_per_cell
    k_dl = params.users_dl_per_cell
    ul_xy = _drop_positions(rng, lattice, k_ul, params.min_ue_bs_distance_m)
    shadow_ul = _shadowing(rng, lattice, k_ul, params.shadowing_sigma_db)
    dl_xy = _drop_positions(rng, lattice, k_dl, params.min_ue_bs_distance_m)
    shadow_dl = _shadowing(rng, lattice, k_dl, params.shadowing_sigma_db)
    eta = params.pathloss_exponent
    return NetworkDrop(
        lattice=lattice,
        ue_ul_xy=ul_xy,
        ue_dl_xy=dl_xy,
        shadow_ul=shadow_ul,
        shadow_dl=shadow_dl,
        assoc_ul=_associate(lattice, ul_xy, shadow_ul, eta),
        assoc_dl=_associate(lattice, dl_xy, shadow_dl, eta),
        rng_seed=seed,
    )


def export_drop_csv(drop: NetworkDrop, path) -> None:
    """Write per-UE rows (cell, ue, x, y, serving BS, serving-link shadowing dB)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["cell", "ue", "x_m", "y_m", "serving_bs", "shadow_db"])
        for tag, xy, shadow, assoc in (
            ("ul", drop.ue_ul_xy, drop.shadow_ul, drop.assoc_ul),
            ("dl", drop.ue_dl_xy, drop.shadow_dl, drop.assoc_dl),
        ):
            for c in range(drop.n_cells):
                for k in range(xy.shape[1]):
                    bs = int(assoc[c, k])
                    chi_db = 10.0 * math.log10(shadow[bs, c, k])
                    writer.writerow(
                        [c, f"{tag}{k}", repr(float(xy[c, k, 0])), repr(float(xy[c, k, 1])),
                         bs, repr(chi_db)]
                    )
