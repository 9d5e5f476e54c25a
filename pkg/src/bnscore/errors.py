"""Exception types raised by bnscore."""


class BnscoreError(Exception):
    """Base class for errors raised by this package."""


class FormatError(BnscoreError):
    """A file (CSV table or DAG text) is malformed."""


class MissingDataError(BnscoreError):
    """The data contain an empty cell; only complete samples are supported."""


class PriorSupportError(BnscoreError):
    """Observed counts fall outside the support of the prior weight table."""
