"""Exception hierarchy shared by all cogsig modules.

Every error carries a stable machine-readable ``code`` so the CLI can emit
one JSON error contract for both human and programmatic callers.
"""

from __future__ import annotations


class CogsigError(Exception):
    """Base class for all toolkit errors."""

    code = "error"

    def to_json(self) -> dict:
        return {"error": self.code, "message": str(self)}


class MalformedRecord(CogsigError):
    code = "malformed_record"

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class NonMonotonicTimestamp(CogsigError):
    code = "non_monotonic_timestamp"


class EmptyLog(CogsigError):
    code = "empty_log"


class InvalidResolution(CogsigError):
    code = "invalid_resolution"


class InvalidResolutionList(CogsigError):
    code = "invalid_resolution_list"


class PrivacyModeActive(CogsigError):
    code = "privacy_mode_active"


class PositionOutOfRange(CogsigError):
    code = "position_out_of_range"


class EmptyCorpus(CogsigError):
    code = "empty_corpus"


class EmptyDocument(CogsigError):
    code = "empty_document"


class AlignmentFailure(CogsigError):
    code = "alignment_failure"


class TooFewPairs(CogsigError):
    code = "too_few_pairs"


class InvalidParameters(CogsigError):
    code = "invalid_parameters"


class EmptyHistogram(CogsigError):
    code = "empty_histogram"


class TooFewSessions(CogsigError):
    code = "too_few_sessions"


class SeriesTooShort(CogsigError):
    code = "series_too_short"


class DegenerateSeries(CogsigError):
    code = "degenerate_series"


class InvalidConfig(CogsigError):
    code = "invalid_config"


class IncompleteAnalysis(CogsigError):
    code = "incomplete_analysis"


class SerializationFailure(CogsigError):
    code = "serialization_failure"
