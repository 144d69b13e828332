from enum import StrEnum
from re import compile


NAME_PREFIX = "n."
ABBREVIATION_PREFIX = "$"
IDENT_PATTERN = compile(r"[A-Za-z_][A-Za-z0-9_']*")

# --- Builtin symbols
PAIR = "pair"
FST = "fst"
SND = "snd"
PK = "pk"
SK = "sk"
ENC = "enc"
DEC = "dec"
ITE = "ite"
TRUE = "true"
FALSE = "false"
ZERO = "zero"
EQ = "eq"
ADV = "adv"

BUILTIN_ARITIES = {
    PAIR: 2, FST: 1, SND: 1, PK: 1, SK: 1, ENC: 3, DEC: 2,
    ITE: 3, TRUE: 0, FALSE: 0, ZERO: 1, EQ: 2,
}

# Default precedence: ite < true < false < zero < eq < fst < snd < pair < dec < enc < pk < sk,
# then adversarial symbols, then names (both by identifier).
BUILTIN_RANKS = {
    ITE: 0, TRUE: 1, FALSE: 2, ZERO: 3, EQ: 4, FST: 5, SND: 6,
    PAIR: 7, DEC: 8, ENC: 9, PK: 10, SK: 11,
}
ADVERSARIAL_RANK = 12
NAME_RANK = 13


class Sort(StrEnum):
    MESSAGE = "message"
    BOOL = "bool"

    @staticmethod
    def from_str(value: str) -> "Sort":
        try:
            return Sort(value.strip().lower())
        except ValueError:
            raise ValueError(f"Unknown sort: {value}")

    def accepts(self, other: "Sort") -> bool:
        """Bool is a subsort of Message."""
        return self is Sort.MESSAGE or other is Sort.BOOL
