from ._qhexa import (
    ConsistencyError,
    ConstructionError,
    DomainError,
    ParseError,
    __version__,
    commutator,
    conformal_map,
    from_json,
    lift,
    literal,
    normalize,
    project,
    property_suite,
    rotate,
    run,
    suite_ids,
    to_json,
    verify_suite,
)

__all__ = [
    "ConsistencyError",
    "ConstructionError",
    "DomainError",
    "ParseError",
    "__version__",
    "commutator",
    "conformal_map",
    "from_json",
    "lift",
    "literal",
    "normalize",
    "project",
    "property_suite",
    "rotate",
    "run",
    "suite_ids",
    "to_json",
    "verify_suite",
]
