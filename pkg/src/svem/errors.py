"""Exception types shared across the package.

Every error raised on a user-facing path derives from :class:`SvemError`,
so the command line tool can report failures uniformly as
``error: <Name>: <detail>``.
"""


class SvemError(Exception):
    """Base class for all library errors."""

    @property
    def name(self) -> str:
        return type(self).__name__


class DegeneratePoint(SvemError):
    """Point has no well-defined closest surface point (e.g. sphere center)."""


class DegenerateFace(SvemError):
    """Face is numerically degenerate: near-zero area or self-intersecting."""


class InvalidParameter(SvemError):
    """A parameter is outside its documented range."""


class SeamMismatch(SvemError):
    """Meshes passed to paste() do not share a usable seam."""


class ToleranceAmbiguity(SvemError):
    """Vertex merging is ambiguous at the requested tolerance."""


class SingularLocalSystem(SvemError):
    """Local projector system could not be solved."""


class ConstraintMismatch(SvemError):
    """Problem constraint type does not match the mesh topology."""


class SingularSystem(SvemError):
    """Global linear system is singular or the factorization failed."""
