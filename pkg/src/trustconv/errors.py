"""Exception types shared across the toolkit.

Precondition violations (bad argument values) raise plain ValueError;
the classes here mark domain failures that callers may want to catch
individually or map onto HTTP / CLI status codes.
"""


class TrustconvError(Exception):
    """Base class for all toolkit errors."""


# -- corpus ----------------------------------------------------------------

class CorpusError(TrustconvError):
    pass


class MissingScales(CorpusError):
    """Corpus file parsed but contains no scales."""


class DuplicateId(CorpusError):
    """Two scales share a scale_id (or two items share an item_id)."""


class MalformedRecord(CorpusError):
    """A scale or item record does not match the corpus schema."""

    def __init__(self, message: str, locator: str = ""):
        super().__init__(f"{message} [{locator}]" if locator else message)
        self.locator = locator


# -- ranking ---------------------------------------------------------------

class EmptyScaleText(TrustconvError):
    """A scale has no tokens left after preprocessing."""


class UnknownScaleId(TrustconvError):
    """A ranked scale id does not resolve in the corpus."""


class EmptySelection(TrustconvError):
    """A filter step selected no scales."""


# -- textprep --------------------------------------------------------------

class EmptyAfterPreprocessing(TrustconvError):
    """No tokens survive preprocessing of the prompt database."""


# -- embedding -------------------------------------------------------------

class EmptyInput(TrustconvError):
    """Token streams contain nothing to count."""


class NonPositiveCell(TrustconvError):
    """A stored co-occurrence cell is not strictly positive."""


class DivergenceDetected(TrustconvError):
    """Training cost became non-finite."""


class InconsistentDimensions(TrustconvError):
    """Vector file rows disagree on dimensionality."""


class MalformedRow(TrustconvError):
    """A vector file row could not be parsed."""


class ZeroVector(TrustconvError):
    """Cosine similarity is undefined for an all-zero vector."""


class DimensionMismatch(TrustconvError):
    """Two vectors have different lengths."""


# -- clustering / summarization ---------------------------------------------

class UnknownWord(TrustconvError):
    """A requested word is missing from the embedding table."""


class InvalidK(TrustconvError):
    """Requested cluster count is outside 1..n."""


class LinkageMetricError(TrustconvError):
    """Linkage and metric are incompatible (Ward requires Euclidean)."""


class EmptyCluster(TrustconvError):
    """A cluster has no members."""


# -- prompt generation -------------------------------------------------------

class TemplateError(TrustconvError):
    """Template pattern placeholders and declared slots disagree."""


class MissingSlot(TrustconvError):
    """Slot values do not cover the template's declared slots."""


class LintViolation(TrustconvError):
    """A prompt failed the nondirectiveness lint."""

    def __init__(self, violations):
        super().__init__("; ".join(violations))
        self.violations = list(violations)


class PromptSetError(TrustconvError):
    """A prompt set violates its structural invariants."""


# -- dialog / service --------------------------------------------------------

class SessionClosed(TrustconvError):
    """The session is in the terminal phase and accepts no input."""


class UnknownSession(TrustconvError):
    """No session with the given id."""


class UnknownPromptSet(TrustconvError):
    """No prompt set registered under the given id."""


class StageError(TrustconvError):
    """A pipeline stage failed; carries the stage name."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}': {cause}")
        self.stage = stage
        self.cause = cause


class BadConfig(TrustconvError):
    """Pipeline or service configuration is invalid."""
