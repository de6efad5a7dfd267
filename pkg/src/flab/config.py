"""Default size caps.

All caps are plain module constants; functions that honour a cap accept an
override argument so callers (and the centrality oracle, which runs with a
larger budget) can adjust per call.
"""

ORDER_CAP = 2000
"""Largest group order `make_group` will construct."""

ELEMENT_CAP = 2000
"""Largest order for which full element enumeration is performed by default."""

ORACLE_CAP = 10000
"""Largest semidirect product the centrality oracle will build and test."""

MUL_TABLE_CAP = 900
"""Groups up to this order get a dense index multiplication table."""

LATTICE_SUBGROUP_BUDGET = 20000
"""Abort subgroup enumeration past this many subgroups."""

LATTICE_JOIN_BUDGET = 2_000_000
"""Abort subgroup enumeration past this many join operations."""

CORPUS_MAX_ORDER = 324
"""Default order bound for the builtin verification corpus."""
