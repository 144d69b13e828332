from enum import StrEnum


class RewriteRuleId(StrEnum):
    # R1
    PROJ_PAIR = "proj-pair"
    DEC_ENC = "dec-enc"
    EQ_REFL = "eq-refl"
    # R2
    LIFT_F = "lift-f"
    LIFT_COND = "lift-cond"
    # R3
    COND_COLLAPSE = "cond-collapse"
    COND_TRUE = "cond-true"
    COND_FALSE = "cond-false"
    ABSORB_THEN = "absorb-then"
    ABSORB_ELSE = "absorb-else"
    # R4, only under the conditional order side condition
    SWAP_THEN = "swap-then"
    SWAP_ELSE = "swap-else"

    @staticmethod
    def from_str(value: str) -> "RewriteRuleId":
        try:
            return RewriteRuleId(value.strip().lower())
        except ValueError:
            raise ValueError(f"Unknown rewrite rule: {value}")

    @property
    def group(self) -> str:
        return RULE_GROUPS[self]


RULE_GROUPS = {
    RewriteRuleId.PROJ_PAIR: "R1", RewriteRuleId.DEC_ENC: "R1", RewriteRuleId.EQ_REFL: "R1",
    RewriteRuleId.LIFT_F: "R2", RewriteRuleId.LIFT_COND: "R2",
    RewriteRuleId.COND_COLLAPSE: "R3", RewriteRuleId.COND_TRUE: "R3", RewriteRuleId.COND_FALSE: "R3",
    RewriteRuleId.ABSORB_THEN: "R3", RewriteRuleId.ABSORB_ELSE: "R3",
    RewriteRuleId.SWAP_THEN: "R4", RewriteRuleId.SWAP_ELSE: "R4",
}


class Strategy(StrEnum):
    INNERMOST = "innermost"
    OUTERMOST = "outermost"

    @staticmethod
    def from_str(value: str) -> "Strategy":
        try:
            return Strategy(value.strip().lower())
        except ValueError:
            raise ValueError(f"Unknown reduction strategy: {value}")
