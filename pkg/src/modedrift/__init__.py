"""modedrift: desk-scale study of energy transfer along resonance channels.

The package has five layers: spectral states and frequency tables
(:mod:`.spectral`), exact resonance combinatorics (:mod:`.resonance`,
:mod:`.diophantine`), the finite-dimensional channel models
(:mod:`.channel`), full truncated PDE evolution (:mod:`.evolve`) and the
experiment pipeline with its CLI (:mod:`.harness`, :mod:`.constants`,
:mod:`.cli`).
"""

__version__ = "0.1.0"

from .spectral import (  # noqa: F401
    Frame,
    FrequencyTable,
    ModeSet,
    PotentialSpectrum,
    SpectralState,
    ell1_norm,
    frequencies_nls,
    frequencies_wave,
    from_complex_coords,
    mass,
    momentum,
    potential_wave,
    sobolev_norm,
    to_complex_coords,
)
from .diophantine import (  # noqa: F401
    DiophantineCertificate,
    check_q_vector,
    compute_gamma_sqrt2,
    find_q_vector,
)
from .resonance import (  # noqa: F401
    EnumerationFilters,
    Monomial,
    MonomialClass,
    enumerate_monomials,
    min_divisor,
    monomial_coefficient,
    nls_hamiltonian_filters,
    normal_form_generator,
    wave_resonant_set,
)
