"""Zak transform over a subgroup, quasiperiodicity verification, minimum-modulus
search and the Zak-side frame criterion for critical separable lattices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gabor import FRAME_TOLERANCE_RATIO, FrameReport, Window
from .groups import (
    FiniteLcaGroup,
    GroupElement,
    GroupShapeError,
    Subgroup,
    add_index_table,
    annihilator,
    char_table,
)


@dataclass(frozen=True, eq=False)
class ZakGrid:
    """Full-plane values of a Zak transform, indexed [x_index, w_index].

    Storing the whole plane keeps quasiperiodicity a testable redundancy
    instead of an encoding assumption.
    """

    window_group: FiniteLcaGroup
    lattice: Subgroup
    values: np.ndarray

    def __post_init__(self):
        card = self.window_group.cardinality
        vals = np.ascontiguousarray(self.values, dtype=np.complex128)
        if vals.shape != (card, card):
            raise GroupShapeError(f"Zak grid must be {card} x {card}, got {vals.shape}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)


def zak_transform(f: Window, lam: Subgroup) -> ZakGrid:
    """Zf(x, w) = sum_{l in lam} f(x + l) <w, l>."""
    if lam.group != f.group:
        raise GroupShapeError("lattice subgroup outside the window's group")
    grp = f.group
    ADD = add_index_table(grp.orders)
    CHI = char_table(grp.orders)
    lam_idx = lam.index_array
    shifts = f.values[ADD[:, lam_idx]]      # [x, j] = f(x + l_j)
    chars = CHI[:, lam_idx]                 # [w, j] = <w, l_j>
    return ZakGrid(grp, lam, shifts @ chars.T)


def quasiperiodicity_residual(grid: ZakGrid) -> float:
    """max |F(x + l, w + t) - conj(<w, l>) F(x, w)| over l in lam, t in lam_perp."""
    grp = grid.window_group
    ADD = add_index_table(grp.orders)
    CHI = char_table(grp.orders)
    lam_idx = grid.lattice.index_array
    perp_idx = annihilator(grid.lattice).index_array
    F = grid.values
    residual = 0.0
    for l in lam_idx:
        row_perm = ADD[:, l]
        factor = np.conj(CHI[:, l])[None, :]  # conj(<w, l>) per column w
        for t in perp_idx:
            shifted = F[np.ix_(row_perm, ADD[:, t])]
            residual = max(residual, float(np.max(np.abs(shifted - factor * F))))
    return residual


def min_modulus(grid: ZakGrid) -> tuple[float, tuple[GroupElement, GroupElement]]:
    """Minimum of |F| over the plane and one attaining (x, w) point."""
    mods = np.abs(grid.values)
    flat = int(np.argmin(mods))
    card = grid.window_group.cardinality
    x_idx, w_idx = divmod(flat, card)
    grp = grid.window_group
    return float(mods.flat[flat]), (grp.element_by_index(x_idx),
                                    grp.dual().element_by_index(w_idx))


def plane_quadratic_mass(grid: ZakGrid) -> float:
    """Canonical plane integral of |Zf|^2 (weight 1/|G| per plane point)."""
    return float((np.abs(grid.values) ** 2).sum()) / grid.window_group.cardinality


def zak_frame_bounds(g: Window, lam: Subgroup,
                     tol_ratio: float = FRAME_TOLERANCE_RATIO) -> FrameReport:
    """Frame bounds of the system over lam x lam_perp from extreme |Zg|^2.

    Normalization (|G|/|lam|) * |Zg|^2 is frozen after calibration against the
    eigenvalue route; with it the two computations agree to roundoff.
    """
    grid = zak_transform(g, lam)
    mods2 = np.abs(grid.values) ** 2
    scale = g.group.cardinality / lam.order
    return FrameReport.from_bounds(scale * float(mods2.min()),
                                   scale * float(mods2.max()), tol_ratio)
