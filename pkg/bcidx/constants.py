# --- Base
from enum import StrEnum, IntEnum


DEFAULT_MAX_DEPTH = 12
DEFAULT_MAX_CANDIDATES = 4096
DEFAULT_TIMEOUT = 60
DEFAULT_JOBS = 1

# --- Rewriting
REWRITE_STEP_BUDGET = 10 ** 7

# --- Reserved symbols
DUMMY_SYMBOL = "__dummy"
BLANK_SYMBOL = "__blank"
RESERVED_SYMBOLS = {DUMMY_SYMBOL: 0, BLANK_SYMBOL: 0}

# --- Files
TERM_SUFFIX = ".term"
GOAL_SUFFIX = ".goal"
PROOF_SUFFIX = ".bcp"

# --- Preamble and document heads
DECL_ADV = "decl-adv"
DECL_LEN_CONST = "decl-len-const"
DECL_LEN_EQ = "decl-len-eq"
DECL_PAD = "decl-pad"
DECL_ZEROS = "decl-zeros"
DECL_LEN_CHECK = "decl-len-check"
DEF_HEAD = "def"
GOAL_HEAD = "goal"
LEFT_HEAD = "left"
RIGHT_HEAD = "right"
SWITCH_ON = "on"
SWITCH_OFF = "off"


class ExitCode(IntEnum):
    OK = 0
    REJECTED = 1
    MALFORMED = 2


class OutputFormat(StrEnum):
    TEXT = "text"
    JSON = "json"

    @staticmethod
    def from_str(value: str) -> "OutputFormat":
        try:
            return OutputFormat(value.strip().lower())
        except ValueError:
            raise ValueError(f"Unknown output format: {value}")


class Command(StrEnum):
    NORMALIZE = "normalize"
    CHECK = "check"
    SEARCH = "search"
    RESTR_ELIM = "restr-elim"
    CANDIDATES = "candidates"
    LENGTH = "length"

    @staticmethod
    def from_str(value: str) -> "Command":
        try:
            return Command(value.strip().lower())
        except ValueError:
            raise ValueError(f"Unknown command: {value}")


class DiagnosticCategory(StrEnum):
    SYNTAX = "syntax"
    UNKNOWN_SYMBOL = "unknown-symbol"
    ARITY = "arity"
    SORT = "sort"
    SCHEMA = "schema"
    SIDE_CONDITION = "side-condition"
    GUARD = "guard"
    FRESHNESS = "freshness"
    HIDDEN_RANDOMNESS = "hidden-randomness"
    KEY_POSITION = "key-position"
    NODEC = "nodec"
    LENGTH = "length"
    STRUCTURE = "structure"
    REWRITE = "rewrite"
    FA_ZERO = "fa-zero"
    CS_CONDITIONAL = "cs-conditional"
    REFL = "refl"

    @staticmethod
    def from_str(value: str) -> "DiagnosticCategory":
        try:
            return DiagnosticCategory(value.strip().lower())
        except ValueError:
            raise ValueError(f"Unknown diagnostic category: {value}")


class Side(StrEnum):
    LEFT = "left"
    RIGHT = "right"

    @staticmethod
    def from_str(value: str) -> "Side":
        try:
            return Side(value.strip().lower())
        except ValueError:
            raise ValueError(f"Unknown side: {value}")

    @property
    def other(self) -> "Side":
        return Side.RIGHT if self is Side.LEFT else Side.LEFT
