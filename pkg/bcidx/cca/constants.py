from enum import StrEnum


HANDLE_PREFIX = "#"
KEYS_HEAD = "keys"
RENAMING_HEAD = "renaming"
CALLS_HEAD = "calls"
CCA_HEAD = "cca"


class CallKind(StrEnum):
    ENC = "enc-call"
    DEC = "dec-call"

    @staticmethod
    def from_str(value: str) -> "CallKind":
        try:
            return CallKind(value.strip().lower())
        except ValueError:
            raise ValueError(f"Unknown oracle call kind: {value}")
