"""Generic free subgroups and statistical hyperbolicity on Cayley graphs.

Exact, desk-scale experiments: ball enumeration in free, free abelian,
right-angled Artin and C'(1/6) small-cancellation groups; projections and
contraction constants; barrier detection and densities of negligible sets;
a freeness certifier built on admissible paths; and the averaged pairwise
distance e(n) over balls and annuli.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BudgetExceeded,
    ConstructionFailure,
    GenfreeError,
    InputError,
    ModelMismatch,
    RangeExceeded,
    UndefinedGrowth,
)
from .words import IDENTITY, Word, format_word, free_reduce, parse_word  # noqa: E402
from .groups import (  # noqa: E402
    RAAG,
    FreeAbelianGroup,
    FreeGroup,
    GroupModel,
    SmallCancellationGroup,
    load_model,
    model_from_spec,
    parse_presentation,
    surface_relator,
)
from .enumeration import (  # noqa: E402
    AllVertices,
    BallIndex,
    CyclicSuborbit,
    FiniteSuborbit,
    Region,
    dop_partial_sums,
    enumerate_ball,
    growth_rate_estimate,
    in_O,
    load_ball,
    region,
    sample_uniform,
    save_ball,
)
from .geometry import (  # noqa: E402
    AxisNeighborhood,
    GeodesicPath,
    VertexSet,
    axis,
    contraction_constant,
    diameter,
    entry_exit,
    geodesics,
    neighborhood,
    project,
    projection_diameter,
    qi_check,
    qi_constants,
    quasi_convexity_profile,
)
from .barriers import (  # noqa: E402
    BarrierSpec,
    NegligibleParams,
    density,
    density_series,
    find_barrier,
    in_T,
    in_U,
    in_V,
    in_W,
    in_Z,
    is_barrier_free_element,
)
from .freeness import (  # noqa: E402
    FreenessCertificate,
    PathWitness,
    build_admissible_path,
    certify_tuple,
    check_admissible,
    commuting_pair_count,
    falsify_freeness,
    genericity_experiment,
    generic_membership,
)
from .stathyp import (  # noqa: E402
    SprawlSeries,
    convergence_fit,
    e_annulus,
    e_ball,
    f2_closed_form,
    sprawl_series,
)
from .config import ExperimentConfig  # noqa: E402
