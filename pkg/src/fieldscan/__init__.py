"""fieldscan: exhaustive enumeration of number fields of bounded discriminant.

The engine combines three ingredients:

* analytic lower bounds for |disc K| from the Weil explicit formula with
  Tartar's test function, sharpened by local corrections for hypothesized
  prime ideals of small norm (``explicit_bounds``);
* Hunter-Pohst bounds on the power sums of a generating integer, which cut
  the space of candidate minimal polynomials down to a finite box
  (``hp_bounds``), walked by a congruence-respecting nested enumeration
  (``enumeration``);
* exact verification of every surviving polynomial: irreducibility,
  signature, polynomial and field discriminant (``verify``).

``pipeline`` orchestrates the search (cells, workers, checkpoint/resume,
reports); ``service`` exposes it over HTTP and ``cli`` is the front end.
"""

__version__ = "0.1.0"

from .explicit_bounds import (  # noqa: F401
    SignatureSpec,
    LocalTermSpec,
    BoundEvaluation,
    tartar_f,
    l_func,
    l1_func,
    bound_rhs,
    optimize_bound,
    norm_admissible,
)
from .hp_bounds import (  # noqa: F401
    HermiteTable,
    BoundsSet,
    u2_bound,
    least_positive_root,
    um_bounds,
    coeffs_to_power_sums,
    power_sums_to_coeffs,
    negative_power_sums,
)
from .enumeration import (  # noqa: F401
    EnumCell,
    CellStats,
    run_cell,
    iter_prefixes,
    count_blocks,
)
from .verify import (  # noqa: F401
    CandidatePolynomial,
    FieldRecord,
    NotSquarefreeError,
    UnresolvedDiscriminant,
    poly_discriminant,
    signature,
    is_irreducible,
    field_discriminant,
    accept,
    verify_candidate,
    dedup,
)
from .pipeline import (  # noqa: F401
    ConfigError,
    SearchSpec,
    Checkpoint,
    RunReport,
    parse_config,
    spec_from_strings,
    plan_cells,
    bounds_table,
    run_search,
)
