"""Exception types shared across the package.

Every error carries a machine-readable code (the class name) so the HTTP
layer and the CLI can map failures uniformly.
"""


class MailscopeError(Exception):
    """Base class for all domain errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


# --- ingest ---------------------------------------------------------------

class UnreadableStream(MailscopeError):
    pass


class EmptyCorpus(MailscopeError):
    pass


class MissingColumn(MailscopeError):
    pass


class InvalidAddress(MailscopeError):
    pass


class EmptyPool(MailscopeError):
    pass


class UnknownFormat(MailscopeError):
    pass


class UnknownDataset(MailscopeError):
    pass


# --- text index -----------------------------------------------------------

class DuplicateDocId(MailscopeError):
    pass


class UnknownDoc(MailscopeError):
    pass


# --- query / sessions -----------------------------------------------------

class DuplicateFilter(MailscopeError):
    pass


class UnknownFilter(MailscopeError):
    pass


class DatasetMismatch(MailscopeError):
    pass


class UnknownSession(MailscopeError):
    pass


class MalformedLog(MailscopeError):
    pass


class ReplayDivergence(MailscopeError):
    pass


# --- entities / tags ------------------------------------------------------

class EmptyResults(MailscopeError):
    pass


class EmptyLabel(MailscopeError):
    pass


# --- contact graph --------------------------------------------------------

class UnknownNode(MailscopeError):
    pass


class UnknownEdge(MailscopeError):
    pass


class EmptyUndoStack(MailscopeError):
    pass


# --- clustering -----------------------------------------------------------

class InvalidK(MailscopeError):
    pass


class IndexOutOfRange(MailscopeError):
    pass


class ClusterCapExceeded(MailscopeError):
    pass


# --- storage --------------------------------------------------------------

class StorageFailure(MailscopeError):
    pass
