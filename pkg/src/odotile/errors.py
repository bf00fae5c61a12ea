"""Exception hierarchy shared across the package.

Every error that the CLI maps to an exit code lives here; modules raise
these rather than bare ValueError where a caller is expected to branch.
"""

from __future__ import annotations


class OdotileError(Exception):
    """Base class for all package-specific errors."""


class KindMismatchError(OdotileError):
    """Operands belong to different groups (kind or rank disagree)."""


class LevelRangeError(OdotileError):
    """A chain level outside 1..depth was requested."""


class SizeCapExceededError(OdotileError):
    """A finite-set construction or product would exceed the size cap."""


class ChainDepthInsufficientError(OdotileError):
    """No configured chain level separates the given finite set."""

    def __init__(self, pair, message=None):
        self.pair = pair
        super().__init__(message or f"no level separates the pair {pair!r}")


class FNotSeparatedError(OdotileError):
    """Two prescribed core elements share a coset at the requested level."""

    def __init__(self, pair, level):
        self.pair = pair
        self.level = level
        super().__init__(f"core elements {pair!r} collide at level {level}")


class LevelOrderError(OdotileError):
    """Tile levels passed in the wrong order for refinement."""


class ChainExhaustedError(OdotileError):
    """No chain level meets the requested defect target."""

    def __init__(self, best_defect, stage, target):
        self.best_defect = best_defect
        self.stage = stage
        self.target = target
        super().__init__(
            f"chain exhausted at stage {stage}: best defect {best_defect} "
            f"does not meet target {target}"
        )


class LevelExhaustedError(OdotileError):
    """No chain level meets the certificate defect bound."""

    def __init__(self, best_defect, bound_description):
        self.best_defect = best_defect
        self.bound_description = bound_description
        super().__init__(
            f"no level meets {bound_description}; best defect {best_defect}"
        )


class PreconditionViolatedError(OdotileError):
    """The compact set meets the subgroupoid at the selected level."""

    def __init__(self, arrow, level):
        self.arrow = arrow
        self.level = level
        super().__init__(f"compact set meets the level-{level} subgroupoid at {arrow!r}")


class NonComposableError(OdotileError):
    """Arrow pair does not satisfy the composability condition."""


class ConfigError(OdotileError):
    """Run configuration failed validation."""


# CLI exit codes; see reporting/cli.
EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_EXHAUSTED = 3
EXIT_SIZE_CAP = 4
