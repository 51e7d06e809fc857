"""Gabor frame analysis on finite LCA groups with exact p-adic and S-adelic
lattice arithmetic."""

from .groups import (
    CARDINALITY_CAP,
    CardinalityCapError,
    DualElement,
    FiniteLcaGroup,
    GroupElement,
    GroupShapeError,
    Subgroup,
    all_subgroups,
    annihilator,
    coset_transversal,
    enumerate_subgroup,
    full_subgroup,
    lattice_volume,
    pairing,
    pairing_is_one,
    parse_group_spec,
    trivial_subgroup,
)
from .gabor import (
    FrameReport,
    NotAFrameError,
    TfLattice,
    WexlerRazResult,
    Window,
    WindowNotOnbError,
    adjoint_lattice,
    canonical_dual,
    commutation_defect,
    constant_window,
    delta_window,
    density_check,
    fourier_transform,
    frame_bounds,
    frame_operator,
    indicator_window,
    inverse_fourier_transform,
    janssen_operator,
    lift_finite_index,
    push_finite_subgroup,
    random_window,
    s0_norm,
    standard_onb,
    stft,
    tensor_onb,
    tf_shift,
    tf_shift_plane,
    wexler_raz_check,
)
from .zak import (
    ZakGrid,
    min_modulus,
    plane_quadratic_mass,
    quasiperiodicity_residual,
    zak_frame_bounds,
    zak_transform,
)
from .padic import (
    NotPrimeError,
    PadicScalar,
    Place,
    RationalMatrix,
    SingularMatrixError,
    certify_prime,
    in_gl_n_zp,
    local_modular,
    padic_abs,
    valuation,
)
from .adeles import (
    AdeleAutomorphism,
    AdeleLattice,
    AdeleVector,
    BalianLowVerdict,
    ModularValue,
    PlaceSet,
    balian_low_classifier,
    deformation_margin,
    finite_transference_check,
    global_modular,
    lattice_equality,
    lattice_membership,
    parse_lca_group_spec,
)
from .adeles import lattice_volume as adele_lattice_volume
from .experiments import (
    SweepReport,
    critical_density_trend,
    density_exhaustive,
    periodized_gaussian,
    window_stability_sweep,
)

__version__ = "0.1.0"
