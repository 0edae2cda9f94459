"""Quantum Fisher information growth and precision limits on spin lattices."""

from .lattice import Lattice, BallRegion, build_lattice, distance, ball, geometry_constant
from .hamiltonian import (
    PauliTerm,
    KLocalHamiltonian,
    make_hamiltonian,
    one_site_energy,
    normalize_factor,
    build_power_law_ising,
    build_dipolar_xx,
)
from .exact_engine import (
    PureState,
    DensityMatrix,
    CollectiveOperator,
    coherent_spin_state,
    ghz_state,
    evolve,
    heisenberg_op,
    qfi_pure,
    qfi_spectral,
    skew_information_sum,
)
from .ising_analytic import (
    CollectiveMoments,
    QfiSeries,
    collective_moments,
    optimal_collective_qfi,
    qfi_time_series,
    optimal_enhancement_point,
)
from .limits import (
    LightConeModel,
    regime_for,
    light_cone_radius,
    qfi_growth_bound,
    min_preparation_time,
    enhancing_exponent,
    cramer_rao,
    delta_max,
    fit_scaling,
    k_partite_min_time,
)

__version__ = "0.1.0"
