"""Colored-link invariants from finite multi-quandles."""

from .braids import (
    ClosableBraid,
    ColoredBraid,
    PermutationInfo,
    check_closable,
    compose,
    conjugate,
    format_braid,
    inverse,
    juxtapose,
    parse_braid,
    permutation_info,
    stabilize,
    trivial_braid,
)
from .core import (
    AxiomReport,
    MultiQuandle,
    Violation,
    alexander_multi_quandle,
    check_derived_identities,
    conjugation_diquandle,
    invert,
    load,
    parse,
    serialize,
    trivial_multi_quandle,
    validate,
)
from .diagrams import (
    ColoredDiagram,
    Component,
    Crossing,
    apply_reidemeister,
    closure_diagram,
    diagram,
    from_pd_code,
    parse_diagram,
    serialize_diagram,
)
from .errors import (
    ClosureError,
    DiagramError,
    InvalidQuandleError,
    MoveError,
    MQError,
    ParseError,
    StructureError,
)
from .invariants import (
    ColoringSet,
    Presentation,
    braid_action,
    count_colorings_braid,
    count_colorings_diagram,
    disjoint_union_check,
    extract_presentation,
)
from .search import assemble_multi_quandles, enumerate_quandles
from .toric import (
    AffineCircleQuandle,
    ToricAffineSystem,
    ToricSolution,
    encode_braid_fixed_points,
    sample_verify,
    solve_toric,
)
