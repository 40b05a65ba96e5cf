"""Exception hierarchy. Each class maps to one CLI exit code."""


class KStabError(Exception):
    exit_code = 1


class DatumError(KStabError, ValueError):
    """Schema or invariant violation in a symmetric datum.

    ``where`` names the offending field path or invariant.
    """

    exit_code = 2

    def __init__(self, message: str, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


class GeometryError(KStabError, ValueError):
    exit_code = 2


class UnboundedError(GeometryError):
    pass


class InapplicableError(KStabError):
    """The input variety is not Fano, so the criterion does not apply."""

    exit_code = 3


class BoundaryError(KStabError):
    """Barycenter on the boundary of the translated cone."""

    exit_code = 5


class IndeterminateError(KStabError):
    """An enclosure was too wide to decide a sign; retry with a smaller width."""

    exit_code = 4
