"""altpoly: exact arithmetic for alternating-monomial counts of commutator
monomials, their endpoint algebra, and the polytopes their values generate."""

__version__ = "0.1.0"

from .algebra import (  # noqa: F401
    DOWN,
    Element,
    MonotoneMap,
    ScaledElement,
    UP,
    abstract_word,
    enumerate_monotone_maps,
    format_element,
    format_scaled,
    jacobi,
    parse_element,
    parse_scaled,
    scaled_jacobi,
    single,
    span,
)
from .polytope import (  # noqa: F401
    GeneratorSet,
    HullRefutation,
    HullWitness,
    critical_scale,
    clip,
    ext_hierarchy,
    ext_plus_zero,
    hull_contains,
    hull_member,
    minimal_generators,
    projection_closure,
    relabel_columns,
    top_filter,
)
