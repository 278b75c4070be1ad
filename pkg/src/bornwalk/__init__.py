"""Two-state classical and quantum stochastic processes with exact path counting."""

from .errors import (
    BornwalkError,
    EnsembleFalsified,
    NoEquivalentHamiltonian,
    OracleBudgetExceeded,
    UnclassifiedDynamicsError,
)
from .process import (
    DynamicsClass,
    InitialState,
    SignalVector,
    TransitionMatrix,
    born_probability,
    classical_probability,
    classify_dynamics,
    is_markov,
    markov_propagate,
    propagate_n,
    propagate_step,
    stationary_probability,
)
from .schrodinger import Hamiltonian, WaveFunction, amplitude_bounds, evolve, period, probabilities
from .paths import ChannelMatrix, PathCount, born_number, enumerate_paths, signal_from_counts
from .paths import verify_against_propagation
from .ensemble import (
    BornEnsemble,
    EventMatrix,
    build_event_matrix,
    classify_cells,
    mean_over_rotations,
    rotate,
)
from .equivalence import (
    NormalizedTransition,
    coin_probabilities,
    hamiltonian_from_transition,
    interpolating_wavefunction,
    normalize_unitary,
    normalized_from_hamiltonian,
    oscillation_condition,
    power_closed_form,
    transition_from_hamiltonian,
)

__version__ = "0.1.0"
