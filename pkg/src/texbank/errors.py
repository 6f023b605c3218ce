"""Exception taxonomy shared across the package.

Every exception carries an ``exit_code`` used by the command-line front end:
1 = usage/configuration error, 2 = data error, 3 = I/O error.
"""


class TexbankError(Exception):
    exit_code = 1


class DomainError(TexbankError):
    """Argument outside the mathematical domain of an operation."""

    exit_code = 1


class ConfigError(TexbankError):
    """Invalid bank or run configuration."""

    exit_code = 1


class NameCollisionError(TexbankError):
    """Duplicate feature names while fusing vectors."""

    exit_code = 1


class SizeError(TexbankError):
    """Image dimensions violate an operation's requirements."""

    exit_code = 2


class SchemaError(TexbankError):
    """Malformed manifest or feature table."""

    exit_code = 2


class InsufficientDataError(TexbankError):
    """Too few samples per class to fit the classifier."""

    exit_code = 2


class SingularError(TexbankError):
    """Rank-deficient normal equations (e.g. constant image)."""

    exit_code = 2


class DegenerateError(TexbankError):
    """Not enough scales or spread for an estimate."""

    exit_code = 2


class IoError(TexbankError):
    """Missing or unreadable file."""

    exit_code = 3


class FormatError(TexbankError):
    """File exists but cannot be decoded."""

    exit_code = 3
