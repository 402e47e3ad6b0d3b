"""Exception types shared across the toolkit."""


class MaintMinerError(Exception):
    """Base class for all toolkit errors."""


class BranchNotFound(MaintMinerError):
    """None of the preferred branches exist in the repository."""


class RepoAccessError(MaintMinerError):
    """The path is not a readable git repository."""


class CommitNotFound(MaintMinerError):
    """The requested commit id is not part of the linearized history."""


class DistillError(MaintMinerError):
    """Both sides of a file pair failed to parse."""

    def __init__(self, message, path=None):
        super().__init__(message)
        self.path = path


class SchemaError(MaintMinerError):
    """A dataset file is missing required columns or is empty."""


class RowError(MaintMinerError):
    """One or more dataset rows could not be parsed."""

    def __init__(self, message, rows=()):
        super().__init__(message)
        self.rows = list(rows)


class StratifyError(MaintMinerError):
    """Stratified splitting is impossible (empty class)."""


class EmptyCorpus(MaintMinerError):
    """A labeled corpus has no instances for some class."""


class SpecError(MaintMinerError):
    """A learner was configured or invoked outside its contract."""


class CvError(MaintMinerError):
    """Cross-validation protocol cannot be satisfied by the data."""


class ArgError(MaintMinerError):
    """Invalid argument combination."""


class ConvergenceError(MaintMinerError):
    """An iterative fit failed to converge."""

    def __init__(self, message, trace=()):
        super().__init__(message)
        self.trace = list(trace)


class SingularError(MaintMinerError):
    """The design matrix is singular."""

    def __init__(self, message, columns=()):
        super().__init__(message)
        self.columns = list(columns)
