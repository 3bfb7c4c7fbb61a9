"""Terms and filter formulae: the syntactic values a workflow computes.

A term is an input variable or the k-th projection of an operation applied to
argument terms, so it records the complete history of a cell. Atomic filter
formulae (a filter symbol applied to argument terms) act as independent
propositional atoms; conjunctive filter formulae are consistent sets of signed
atoms. There is no equational theory on terms: equality is structural.

Canonical text forms, used by the CLI and in golden tests:

    term   alpha(beta(x1,x3)[2],x1)[1]          variables are x1, x2, ...
    AFF    f(x1,beta(x2)[1])                    "!" prefix for a negated clause
    CFF    f(x1) & !g(x2)                       clauses sorted, "T" when empty
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

from .errors import FormulaError, TermError


@dataclass(frozen=True)
class Var:
    """Input variable x{index}; indices are 1-based."""

    index: int

    def __post_init__(self):
        if self.index < 1:
            raise TermError(f"variable index must be positive, got {self.index}")


@dataclass(frozen=True)
class App:
    """Projection `proj` of operation `op` applied to `args`; proj is 1-based."""

    op: str
    args: tuple["Term", ...]
    proj: int

    def __post_init__(self):
        if self.proj < 1:
            raise TermError(f"projection index must be positive, got {self.proj}")


Term = Union[Var, App]


def substitute(term: Term, subs: Sequence[Term]) -> Term:
    """Simultaneously replace x1..xn in `term` by subs[0..n-1]."""
    if isinstance(term, Var):
        if term.index > len(subs):
            raise TermError(f"x{term.index} has no substitute (only {len(subs)} given)")
        return subs[term.index - 1]
    return App(term.op, tuple(substitute(a, subs) for a in term.args), term.proj)


def term_vars(term: Term) -> frozenset[int]:
    if isinstance(term, Var):
        return frozenset((term.index,))
    out: frozenset[int] = frozenset()
    for a in term.args:
        out |= term_vars(a)
    return out


def max_var(term: Term) -> int:
    return max(term_vars(term), default=0)


def term_to_str(term: Term) -> str:
    if isinstance(term, Var):
        return f"x{term.index}"
    args = ",".join(term_to_str(a) for a in term.args)
    return f"{term.op}({args})[{term.proj}]"


def term_type(term: Term, sig, dom: Sequence[str]) -> str:
    """Column type of a term over input columns typed by `dom`."""
    if isinstance(term, Var):
        if term.index > len(dom):
            raise TermError(f"x{term.index} out of range for a {len(dom)}-column input")
        return dom[term.index - 1]
    decl = sig.operation(term.op)
    if len(term.args) != len(decl.dom):
        raise TermError(f"{term.op} expects {len(decl.dom)} arguments, got {len(term.args)}")
    if term.proj > len(decl.cod):
        raise TermError(f"{term.op} has {len(decl.cod)} outputs, projection {term.proj} invalid")
    return decl.cod[term.proj - 1]


@dataclass(frozen=True)
class AFF:
    """Atomic filter formula: a filter symbol applied to argument terms."""

    name: str
    args: tuple[Term, ...]


def aff_substitute(aff: AFF, subs: Sequence[Term]) -> AFF:
    return AFF(aff.name, tuple(substitute(a, subs) for a in aff.args))


def aff_sort_key(aff: AFF):
    """The global total order on atomic filter formulae (name, then argument text)."""
    return (aff.name, tuple(term_to_str(a) for a in aff.args))


def aff_to_str(aff: AFF, polarity: bool = True) -> str:
    body = f"{aff.name}({','.join(term_to_str(a) for a in aff.args)})"
    return body if polarity else f"!{body}"


@dataclass(frozen=True)
class CFF:
    """Conjunctive filter formula: a set of signed atoms, at most one sign per atom."""

    clauses: frozenset[tuple[AFF, bool]]

    def __post_init__(self):
        affs = {aff for aff, _ in self.clauses}
        if len(affs) != len(self.clauses):
            raise FormulaError("an atomic filter formula appears with both signs")

    def affs(self) -> frozenset[AFF]:
        return frozenset(aff for aff, _ in self.clauses)


TOP = CFF(frozenset())


def cff(*clauses: tuple[AFF, bool]) -> CFF:
    return CFF(frozenset(clauses))


def cff_disjoint(a: CFF, b: CFF) -> bool:
    """True when some atom occurs in both with opposite signs (never jointly true)."""
    signs = dict(a.clauses)
    return any(aff in signs and signs[aff] is not pol for aff, pol in b.clauses)


def cff_conjoin(a: CFF, b: CFF) -> CFF:
    if cff_disjoint(a, b):
        raise FormulaError("cannot conjoin disjoint filter formulae")
    return CFF(a.clauses | b.clauses)


def cff_try_conjoin(a: CFF, b: CFF) -> CFF | None:
    """Conjunction, or None when the inputs are disjoint."""
    if cff_disjoint(a, b):
        return None
    return CFF(a.clauses | b.clauses)


def cff_substitute(c: CFF, subs: Sequence[Term]) -> CFF | None:
    """Substitute into every atom; None when two clauses collapse to a contradiction."""
    signs: dict[AFF, bool] = {}
    for aff, pol in c.clauses:
        sub = aff_substitute(aff, subs)
        if signs.setdefault(sub, pol) is not pol:
            return None
    return CFF(frozenset(signs.items()))


def cff_satisfied(c: CFF, assignment: Mapping[AFF, bool]) -> bool:
    """Evaluate under a total assignment of the atoms that occur in `c`."""
    return all(assignment[aff] is pol for aff, pol in c.clauses)


def cff_sort_key(c: CFF):
    return tuple(sorted((aff_sort_key(aff), pol) for aff, pol in c.clauses))


def cff_to_str(c: CFF) -> str:
    if not c.clauses:
        return "T"
    ordered = sorted(c.clauses, key=lambda cl: aff_sort_key(cl[0]))
    return " & ".join(aff_to_str(aff, pol) for aff, pol in ordered)


def collect_affs(conds: Iterable[CFF]) -> list[AFF]:
    """All atoms occurring in the given formulae, in the global order."""
    seen = {aff for c in conds for aff in c.affs()}
    return sorted(seen, key=aff_sort_key)
