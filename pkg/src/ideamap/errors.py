"""Exception hierarchy shared across the package."""


class IdeamapError(Exception):
    """Base class for all package errors."""


class InvalidLabelError(IdeamapError):
    """Text normalizes to an empty or unusable label."""


class InvalidConceptError(IdeamapError):
    """Text does not resolve to a concept in the graph vocabulary."""


class NotFoundError(IdeamapError):
    """Referenced node, link, or session does not exist."""


class EmptyGraphError(IdeamapError):
    """Graph build received no usable edges."""


class AssertionParseError(IdeamapError):
    """A dump line is malformed (wrong field count, bad JSON)."""


class SnapshotFormatError(IdeamapError):
    """Graph snapshot file has a bad magic, version, or payload."""


class ContractViolationError(IdeamapError):
    """Caller broke an operation precondition."""


class ExhaustedSuggestionsError(IdeamapError):
    """No eligible suggestion candidate was found within the attempt budget."""


class DuplicateConceptError(IdeamapError):
    """Concept already present on the mind map."""


class DuplicateLinkError(IdeamapError):
    """Link between the two nodes already exists."""


class SelfLinkError(IdeamapError):
    """A link must connect two distinct nodes."""


class RootRemovalError(IdeamapError):
    """The root node cannot be removed."""


class DisconnectError(IdeamapError):
    """Removing this link would disconnect the map."""


class StaleBatchError(IdeamapError):
    """Suggestion batch was already accepted or dismissed."""


class PendingBatchError(IdeamapError):
    """A suggestion batch is pending and must be resolved first."""


class MapDocumentError(IdeamapError):
    """Mind-map document fails schema or referential validation."""


class EmbeddingFormatError(IdeamapError):
    """Embedding file is structurally unreadable."""


class EmptyTableError(IdeamapError):
    """Embedding file produced no usable vectors."""


class UndefinedDistanceError(IdeamapError):
    """Cosine distance is undefined (zero vector)."""


class InsufficientDataError(IdeamapError):
    """Metric needs more resolvable concepts than were available."""


class UndefinedStatisticError(IdeamapError):
    """Test statistic is undefined for the given inputs."""
