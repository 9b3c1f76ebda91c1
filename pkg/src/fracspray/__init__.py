"""fracspray: anomalous-diffusion pest simulation with coverage-controlled spraying.

A 2-D simulator for pest density governed by either a time-fractional
(Caputo, explicit L1 scheme) or a space-fractional (symmetric fractional
derivative, centered differences) diffusion equation, with a fleet of
mobile spraying actuators placed by centroidal Voronoi tessellation, plus
a manufactured-solution verification harness.
"""

from .actuation import (
    ActuatorState,
    ControlGains,
    SprayParams,
    control_accel,
    integrate_actuator,
    release_field,
)
from .coverage import (
    Partition,
    RadiusState,
    assign_voronoi,
    cvt_cost,
    lloyd_step,
    local_cell,
    mass_centroid,
    update_radius,
)
from .errors import BlowUpError, ConfigError, StabilityError
from .grid import (
    BoundaryCondition,
    Field,
    Grid2D,
    apply_boundary,
    load_field,
    make_grid,
    save_field,
    total_mass,
)
from .operators import (
    HistoryBuffer,
    caputo_memory,
    l1_weights,
    laplacian,
    riesz_apply,
    riesz_coefficient,
    riesz_weights,
)
from .runner import (
    ErrorReport,
    RunOutputs,
    convergence_study,
    run_simulation,
    run_sweep,
    run_verification,
)
from .scenario import Scenario, bundled_config, load_scenario, load_scenario_file
from .sensing import (
    Measurement,
    SensorMesh,
    aggregate_total,
    make_sensor_mesh,
    sample_measurements,
)
from .solver import (
    SPACE_FRACTIONAL,
    TIME_FRACTIONAL,
    ExpDecay,
    FractionalParams,
    PointSource,
    SolverState,
    exact_solution,
    manufactured_forcing_sfde,
    manufactured_forcing_tfde,
    new_state,
    rasterize_point_source,
    stability_guard,
    step_sfde,
    step_tfde,
)

__version__ = "0.1.0"
