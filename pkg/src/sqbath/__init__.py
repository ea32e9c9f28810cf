"""Two-level and four-level atoms in broadband squeezed vacuum: Lindblad models,
Liouvillian spectra, correlation spectra, quantum trajectories and closed forms."""
from ._version import __version__
from .analytics import (BlochState, bloch_decay_rates, bloch_evolve, bloch_matrix, bloch_steady_state,
                        cross_decay_rate, mollow_linewidths, optimal_detuning_ratio,
                        partial_solid_angle_rates, second_order_cross_decay_rate)
from .correlations import (CorrelationSeries, Spectrum, absorption_spectrum, correlation_fourier,
                           fluorescence_spectrum_four_level, fluorescence_spectrum_two_level,
                           spectrum_from_resolvent, two_time_correlation)
from .errors import InvariantError, NumericalError, SqbathError, StepSizeError, UnknownLabelError
from .expm import expm
from .liouville import (EigenMode, Liouvillian, MollowTriplet, build_liouvillian, eigenmodes, evolve,
                        mollow_modes, steady_state)
from .models import (DriveParams, FourLevelParams, LindbladModel, SqueezedBathParams, SubsystemParams,
                     effective_ground_master, four_level_master, interference_subsystem_model,
                     inverse_map, map_parameters, squeezed_bath_master)
from .operators import (DensityMatrix, HilbertSpace, Operator, basis_operator, bloch_vector,
                        expectation, projector)
from .trajectories import TrajectoryConfig, TrajectoryResult, simulate
