"""Exact entropy of mixing for gases that differ only in an internal spin."""

from .asymptotics import (
    bec_limit_mean,
    bec_statistics,
    expansion_terms,
    first_order_sum,
    hp_asymptote,
    ignorance_gap,
    low_density_residual,
    second_order_sum,
)
from .dimensions import (
    SectorDimensionTable,
    Statistics,
    YoungDiagramTwoRow,
    dim_boson_sector,
    dim_fermion_sector,
    sector_dimension,
    weyl_dimension,
)
from .entropy import (
    MixingReport,
    MixingScenario,
    classical_delta_s,
    delta_s_identical,
    delta_s_ignorant,
    delta_s_ignorant_partial,
    delta_s_informed,
    delta_s_informed_partial,
    extractable_work,
    mixing_report,
    per_sector_delta_s,
    work_variance,
)
from .errors import (
    ConsistencyError,
    EmptySystemError,
    NonexistentSectorError,
    PauliExclusionError,
    PhysicsError,
    ResourceError,
)
from .spin import SectorDistribution, cg_squared, pj_orthogonal, pj_partial, qm_distribution

__version__ = "0.1.0"
