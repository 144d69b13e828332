from typing import List, Optional
import logging
from pydantic import ValidationError

from bcidx.base import BaseReader, Source
from bcidx.cca.parser import read_cca_structure
from bcidx.constants import Side
from bcidx.exceptions import BcidxError, TermSyntaxError
from bcidx.types import ParseContext
from bcidx.terms.parser import Atom, SExpr, SList, expect_ident, expect_int, expect_name, head_of
from .constants import CONCL_HEAD, RENAMING_HEAD, RULE_HEAD, TARGETS_HEAD, RuleKind
from .types import CCA, CS, FA, Derivation, Dup, Perm, ProofDocument, Refl, Restr, Rw, RuleApp, Sym

logger = logging.getLogger(__name__)


class ProofReader(BaseReader):
    """
    Reads proof files: a declaration preamble followed by one derivation

        (rule RULE (concl (left term*) (right term*)) proof*)
    """

    def read(self, text: Source) -> ProofDocument:
        node = self._single_body(self._read_forms(text), "derivation")
        derivation = self._derivation(node)
        logger.debug(f"Read proof with {derivation.node_count} nodes")
        return ProofDocument(derivation=derivation, context=self.context)

    def _derivation(self, node: SExpr) -> Derivation:
        items = self._expect_section(node, RULE_HEAD)
        if len(items) < 2:
            raise TermSyntaxError("Expected (rule RULE (concl ...) proof*)", node.line, node.column)
        rule = self._rule(items[0])
        concl = self._expect_section(items[1], CONCL_HEAD)
        if len(concl) != 2:
            raise TermSyntaxError("Expected (concl (left ...) (right ...))", items[1].line, items[1].column)
        conclusion = self._sequent(*concl)
        premises = [self._derivation(p) for p in items[2:]]
        try:
            return Derivation(conclusion=conclusion, rule=rule, premises=premises)
        except ValidationError as e:
            logger.warning(f"Malformed proof node at {node.line}:{node.column}: {e}")
            raise TermSyntaxError(f"Malformed proof node: {e.errors()[0]['msg']}", node.line, node.column)

    def _indices(self, nodes: List[SExpr]) -> List[int]:
        return [expect_int(n, "component index") for n in nodes]

    def _rule(self, node: SExpr) -> RuleApp:
        if isinstance(node, Atom):
            kind = self._kind(node)
            if kind is RuleKind.DUP:
                return Dup()
            if kind is RuleKind.SYM:
                return Sym()
            raise TermSyntaxError(f"Rule {kind.value} needs parameters", node.line, node.column)
        kind = self._kind(node.items[0]) if node.items else None
        args = node.items[1:]
        try:
            if kind is RuleKind.REFL:
                if len(args) != 1 or head_of(args[0]) != RENAMING_HEAD:
                    raise TermSyntaxError("Expected (refl (ren (n.a n.b)...))", node.line, node.column)
                return Refl(renaming=[self._renaming_pair(p) for p in args[0].items[1:]])
            if kind is RuleKind.FA:
                if len(args) != 3:
                    raise TermSyntaxError("Expected (fa IDENT COUNT IDX)", node.line, node.column)
                return FA(symbol=expect_ident(args[0], "function symbol"),
                          arg_count=expect_int(args[1], "argument count"), index=expect_int(args[2]))
            if kind is RuleKind.CS:
                if len(args) != 1 or head_of(args[0]) != TARGETS_HEAD:
                    raise TermSyntaxError("Expected (cs (targets IDX...))", node.line, node.column)
                return CS(targets=self._indices(args[0].items[1:]))
            if kind is RuleKind.RW:
                if len(args) != 3 or not isinstance(args[0], Atom):
                    raise TermSyntaxError("Expected (rw SIDE IDX term)", node.line, node.column)
                return Rw(side=Side.from_str(args[0].value), index=expect_int(args[1]),
                          replacement=self.parser.term(args[2]))
            if kind is RuleKind.PERM:
                return Perm(permutation=self._indices(args))
            if kind is RuleKind.RESTR:
                return Restr(kept=self._indices(args))
            if kind is RuleKind.CCA:
                return CCA(structure=read_cca_structure(node, self.parser))
        except (ValidationError, ValueError) as e:
            if isinstance(e, BcidxError):
                raise
            raise TermSyntaxError(f"Invalid rule parameters: {e}", node.line, node.column)
        raise TermSyntaxError("Expected a rule", node.line, node.column)

    def _kind(self, node: SExpr) -> RuleKind:
        if not isinstance(node, Atom):
            raise TermSyntaxError("Expected a rule name", node.line, node.column)
        try:
            return RuleKind.from_str(node.value)
        except ValueError as e:
            raise TermSyntaxError(str(e), node.line, node.column)

    def _renaming_pair(self, node: SExpr):
        if not isinstance(node, SList) or len(node.items) != 2:
            raise TermSyntaxError("Renaming pairs are written (n.a n.b)", node.line, node.column)
        return expect_name(node.items[0]), expect_name(node.items[1])


def read_proof(text: Source) -> ProofDocument:
    return ProofReader().read(text)


def render_proof(d: Derivation, context: Optional[ParseContext] = None) -> str:
    """Render a derivation in the proof-file grammar, preceded by the declarations of `context`."""
    return ProofDocument(derivation=d, context=context or ParseContext()).render()
