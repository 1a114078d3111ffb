"""Localization, sampling and reconstruction of signals on weighted undirected graphs."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .graph import GeoStation, Graph, build_from_edges, build_geo_graph, laplacian  # noqa: F401
from .localization import (  # noqa: F401
    DofCounts,
    LocalizationMatrix,
    SlepianBasis,
    dof_counts,
    localization_matrix,
    perfect_localization_exists,
    perfect_localization_vectors,
    slepian_vectors,
)
from .operators import IndexSet, Projector, band_limiter, complement, vertex_limiter  # noqa: F401
from .sampling import (  # noqa: F401
    ReconstructionReport,
    SampledSignal,
    analyze_nonbandlimited,
    nmse_sweep,
    reconstruct_direct,
    reconstruct_slepian,
    sample,
    sampling_condition,
)
from .selection import (  # noqa: F401
    SelectionResult,
    select_greedy_maxcond_G,
    select_greedy_min_bdc,
    select_random,
)
from .spectral import GFTBasis, eigendecompose, gft, igft  # noqa: F401
