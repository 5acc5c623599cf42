"""Dissipative mechanics toolkit.

Classical dissipative flows in canonical complex form, non-hermitian 1-D
grid quantization with complex spectra and decaying evolution, dissipative
WKB tunneling, and the nonlocal (bath-coupled) instanton solved through a
discrete Hilbert transform.
"""

__version__ = "0.1.0"

from .classical import (
    EnergySeries,
    Trajectory,
    canonical_vector_field,
    direct_vector_field,
    dissipation_residual,
    dsho_exact,
    energy_series,
    integrate,
)
from .errors import (
    BlowUpError,
    BranchTrackingError,
    ConfigError,
    ConvexityError,
    DimensionMismatchError,
    DissipaqError,
    EquilibriumSearchError,
    NoInstantonError,
    NumericalFailureError,
    OverdampedError,
)
from .fields import CubicBarrier, Polynomial, Quadratic, ScalarField
from .instanton import (
    OhmicKernel,
    PathGrid,
    PathProfile,
    bump_profile,
    compare_exponents,
    effective_action,
    hilbert_transform,
    instanton_residual,
    relax_instanton,
)
from .phase import (
    ComplexCoordinates,
    ComplexHamiltonianValue,
    ComplexStructure,
    PhaseState,
    SystemSpec,
    apply_complex_structure,
    complex_hamiltonian,
    effective_potential,
    from_complex,
    natural_omega2,
    shifted_momentum,
    to_complex,
)
from .quantum import (
    ComplexSpectrum,
    Grid,
    OperatorMatrix,
    WaveFunction,
    build_dsho_hamiltonian,
    build_general_hamiltonian,
    choose_c,
    evolve,
    momentum_operator,
    spectrum,
)
from .tables import ResultTable, read_csv, write_csv
from .wkb import (
    BarrierSpec,
    TunnelingResult,
    closed_form_exponent,
    escape_point,
    phi,
    tunneling_probability,
)

__all__ = [
    "__version__",
    # errors
    "DissipaqError",
    "DimensionMismatchError",
    "OverdampedError",
    "EquilibriumSearchError",
    "ConvexityError",
    "BranchTrackingError",
    "NumericalFailureError",
    "BlowUpError",
    "NoInstantonError",
    "ConfigError",
    # fields
    "ScalarField",
    "Quadratic",
    "CubicBarrier",
    "Polynomial",
    # phase core
    "SystemSpec",
    "PhaseState",
    "ComplexStructure",
    "ComplexCoordinates",
    "ComplexHamiltonianValue",
    "shifted_momentum",
    "effective_potential",
    "complex_hamiltonian",
    "apply_complex_structure",
    "to_complex",
    "from_complex",
    "natural_omega2",
    # classical
    "Trajectory",
    "EnergySeries",
    "direct_vector_field",
    "canonical_vector_field",
    "dsho_exact",
    "integrate",
    "energy_series",
    "dissipation_residual",
    # quantum
    "Grid",
    "OperatorMatrix",
    "ComplexSpectrum",
    "WaveFunction",
    "build_dsho_hamiltonian",
    "build_general_hamiltonian",
    "choose_c",
    "spectrum",
    "evolve",
    "momentum_operator",
    # wkb
    "BarrierSpec",
    "TunnelingResult",
    "phi",
    "escape_point",
    "closed_form_exponent",
    "tunneling_probability",
    # instanton
    "PathGrid",
    "PathProfile",
    "OhmicKernel",
    "hilbert_transform",
    "effective_action",
    "instanton_residual",
    "relax_instanton",
    "bump_profile",
    "compare_exponents",
    # io
    "ResultTable",
    "write_csv",
    "read_csv",
]
