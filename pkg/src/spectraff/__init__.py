"""spectraff: pseudo-random graph families over finite fields.

Exact field and form arithmetic, deterministic graph family builders,
dense spectral (n, d, lambda) certification, mixing-lemma and subgraph
counting machinery, and brute-force solvability experiments.
"""

from .config import CapExceeded, DEFAULT_SEED, MAX_FIELD_SIZE, max_vertices
from .counting import (
    colored_star_indicator,
    degree_variance,
    edge_count,
    k2t_sum,
    kst_sum,
    kt_color_coverage,
    mixing_check,
    path2_check,
    path2_count,
    pinned_set,
    star_sum,
)
from .experiments import (
    ExperimentReport,
    SystemSpec,
    coverage_experiment,
    mixing_grid,
    pinned_experiment,
    solve_count,
    sumproduct_check,
    sumproduct_experiment,
)
from .families import (
    FamilySpec,
    build_colored,
    build_graph,
    claimed_parameters,
    colored_family,
    euclidean_graph,
    noneuclidean_scheme,
    norm_graph,
    product_graph,
    sumproduct_graph,
)
from .fields import (
    ExtCtx,
    ExtElement,
    FieldCtx,
    FqElement,
    build_ext,
    build_field,
    ext_from_order,
    field_from_order,
)
from .forms import (
    BilinearForm,
    QuadraticForm,
    Sphere,
    classify_line,
    dot_form,
    make_form,
    offdiag_form,
    sphere,
)
from .graphs import (
    ColoredGraph,
    Graph,
    SpectralCert,
    certify_ndl,
    check_square_identity,
    second_eigenvalue,
    spectrum,
)

__version__ = "0.1.0"
