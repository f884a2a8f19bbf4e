"""vqlab: a laboratory for vector-quantization energy functions.

Prototype training with Heaviside-based neighborhood families (hard
competitive learning, SOM, Neural-Gas, recruiting variants), estimators for
the quantization energy and its cellular restriction, perturbation-invariance
probes, and the discontinuous-density construction showing the energy is the
uniform limit of differentiable functions without being differentiable
itself.
"""

__version__ = "0.1.0"

from .counterexample import (
    CounterexampleConfig,
    SlopeBreak,
    closed_form_slopes,
    delta_analytic,
    delta_numeric,
    slope_break,
)
from .density import (
    Density,
    GaussianMixtureTruncated,
    PiecewiseUniform1D,
    UniformBox,
    UniformInterval,
    pdf_at,
    sample,
    support_bounds,
)
from .energy import (
    EnergyReport,
    MonteCarlo,
    Quadrature1D,
    Quadrature2D,
    adversarial_probe,
    analytic_gradient,
    energy_gap_scan,
    energy_report,
    estimate_energy,
    estimate_energy_cellular,
    finite_diff_gradient,
    invariance_probe,
    per_sample_energy,
    tube_mass,
)
from .geometry import (
    CellularParams,
    DistanceProfile,
    PrototypeSet,
    distance_profile,
    heaviside,
    in_cellular_manifold,
    perturbation_bound,
    tube_indicator,
    winner_gap,
)
from .neighborhoods import (
    SOM,
    KMeansAllWinners,
    KMeansWinner,
    NeighborGraph,
    NeuralGas,
    RecruitingNG,
    RecruitingSOM,
    graph_distance,
    h_sigma,
    psi,
    psi_vector,
    rank,
    voronoi_indicator,
    winner_selector,
)
from .streams import SeededStream
from .training import Constant, InverseTime, Linear, TrainRecord, adapt_step, run
