from enum import StrEnum


HANDLE_ENC = "e"
HANDLE_DEC = "d"

# Key subsets tried by the leaf matcher are capped at this many names.
MAX_MATCH_KEYS = 6


class Phase(StrEnum):
    CASE_STUDY = "case-study"
    APPLICATION = "application"

    @staticmethod
    def from_str(value: str) -> "Phase":
        try:
            return Phase(value.strip().lower())
        except ValueError:
            raise ValueError(f"Unknown search phase: {value}")


class SearchOutcome(StrEnum):
    FOUND = "found"
    NOT_FOUND = "not-found"
    TIMEOUT = "timeout"

    @staticmethod
    def from_str(value: str) -> "SearchOutcome":
        try:
            return SearchOutcome(value.strip().lower())
        except ValueError:
            raise ValueError(f"Unknown search outcome: {value}")
