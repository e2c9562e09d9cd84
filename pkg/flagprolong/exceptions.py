"""
Wyjątki silnika przedłużeń.

Every precondition failure of the algebraic machinery derives from
``FlagProlongError`` so that callers (the CLI in particular) can map the whole
family to a single exit code.
"""


class FlagProlongError(ValueError):
    """Base class for mathematical precondition failures."""

    kind = "precondition"


class NotContained(FlagProlongError):
    kind = "not_contained"


class NotFiltered(FlagProlongError):
    kind = "not_filtered"


class InvalidFiltration(FlagProlongError):
    kind = "invalid_filtration"


class InvalidSymbol(FlagProlongError):
    kind = "invalid_symbol"


class EvenDim(FlagProlongError):
    kind = "even_dim"


class NotASubalgebra(FlagProlongError):
    kind = "not_a_subalgebra"


class MixedStructure(FlagProlongError):
    kind = "mixed_structure"


class InvalidFlagSymbol(FlagProlongError):
    kind = "invalid_flag_symbol"


class DependentAtPoint(FlagProlongError):
    kind = "dependent_at_point"


class NonConstantRank(FlagProlongError):
    kind = "non_constant_rank"


class TruncatedBracket(FlagProlongError):
    """Bracket requested in a degree that a capped computation never reached."""

    kind = "truncated_bracket"


__all__ = [
    "FlagProlongError",
    "NotContained",
    "NotFiltered",
    "InvalidFiltration",
    "InvalidSymbol",
    "EvenDim",
    "NotASubalgebra",
    "MixedStructure",
    "InvalidFlagSymbol",
    "DependentAtPoint",
    "NonConstantRank",
    "TruncatedBracket",
]
