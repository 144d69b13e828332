from enum import StrEnum


RULE_HEAD = "rule"
CONCL_HEAD = "concl"
RENAMING_HEAD = "ren"
TARGETS_HEAD = "targets"


class RuleKind(StrEnum):
    REFL = "refl"
    FA = "fa"
    DUP = "dup"
    CS = "cs"
    RW = "rw"
    PERM = "perm"
    SYM = "sym"
    RESTR = "restr"
    CCA = "cca"

    @staticmethod
    def from_str(value: str) -> "RuleKind":
        try:
            return RuleKind(value.strip().lower())
        except ValueError:
            raise ValueError(f"Unknown rule: {value}")

    @property
    def premise_count(self) -> int:
        return RULE_PREMISES[self]


RULE_PREMISES = {
    RuleKind.REFL: 0,
    RuleKind.CCA: 0,
    RuleKind.CS: 2,
    RuleKind.FA: 1,
    RuleKind.DUP: 1,
    RuleKind.RW: 1,
    RuleKind.PERM: 1,
    RuleKind.SYM: 1,
    RuleKind.RESTR: 1,
}
