"""Figure generation for simulator run outputs.

Consumes only the documented CSV/JSON file formats; no in-process coupling
to the simulator.
"""

from .io import (
    FiggenError,
    read_partition,
    read_snapshot,
    read_summary,
    read_timeseries,
    read_trajectories,
)
from .plots import plot_error_surface, plot_heatmap_grid, plot_layout, plot_timeseries

__version__ = "0.1.0"
