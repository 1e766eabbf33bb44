"""Classification and membership decision for simple two-rule schemes.

A simple scheme has one insertion rule and one deletion rule with lengths
(3,2) or (2,3).  When every symbol of both rules is equal, the words
derivable from the empty word are exactly the all-equal words, so membership
is decided without search and witnesses are built constructively.  Otherwise
the longest fully defined scattered subword of any derivable word is bounded
by a constant computable from the rules, which caps the candidate set; the
remaining question is answered by a budgeted breadth-first search that
returns UNKNOWN when the budget runs out without settling it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .engine import (
    Rule,
    Scheme,
    ScriptStep,
    SearchBudget,
    SearchOutcome,
    StepKind,
    Trace,
    replay,
    search,
)
from .errors import BoundViolated, NotFullyDefined, UnknownCase
from .words import (
    EMPTY,
    RelationalWord,
    exists_scattered_subword,
    from_string,
    fully_defined_words,
)

__all__ = [
    "SimpleScheme",
    "SchemeCase",
    "DeletionSubcase",
    "SchemeClass",
    "Verdict",
    "Membership",
    "rule_catalog",
    "all_simple_schemes",
    "classify",
    "decide_membership",
    "FdlReport",
    "compute_fdl",
    "epsilon_script",
    "delete_word",
    "BoundsReport",
    "certify_bounds",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = SearchBudget(max_depth=10, max_len=12)


@dataclass(frozen=True)
class SimpleScheme:
    """One insertion rule and one deletion rule, lengths (3,2) or (2,3)."""

    ins_body: RelationalWord
    del_body: RelationalWord

    def __post_init__(self) -> None:
        lens = (len(self.ins_body), len(self.del_body))
        if lens not in ((3, 2), (2, 3)):
            raise ValueError(f"rule lengths {lens} are not (3,2) or (2,3)")
        for body in (self.ins_body, self.del_body):
            if not body.is_fully_defined:
                raise NotFullyDefined("rule bodies must be fully defined")

    @property
    def family(self) -> str:
        return "I3D2" if len(self.ins_body) == 3 else "I2D3"

    @property
    def ins_pattern(self) -> str:
        return self.ins_body.to_letters()

    @property
    def del_pattern(self) -> str:
        return self.del_body.to_letters()

    def to_scheme(self) -> Scheme:
        return Scheme(
            insertions=(Rule("I", StepKind.INSERT, self.ins_body),),
            deletions=(Rule("D", StepKind.DELETE, self.del_body),),
        )

    def __repr__(self) -> str:
        return f"SimpleScheme(ins={self.ins_pattern!r}, del={self.del_pattern!r})"


class SchemeCase(Enum):
    ALL_EQUAL = "all-equal"
    HAS_INEQUALITY = "has-inequality"


class DeletionSubcase(Enum):
    NO_EQUAL_IN_D = "no-equal-in-del-rule"
    ALL_EQUAL_D = "all-equal-del-rule"
    MIXED_D = "mixed-del-rule"


@dataclass(frozen=True)
class SchemeClass:
    case: SchemeCase
    subcase: DeletionSubcase | None
    bound: int | None  # cap on maxFD of any derivable word; None when all-equal


def rule_catalog(length: int) -> list[RelationalWord]:
    """All fully defined words of the given length (the rule universe)."""
    return fully_defined_words(length)


def all_simple_schemes() -> list[SimpleScheme]:
    """The 20 simple schemes: 10 with (3,2) rule lengths, 10 with (2,3)."""
    twos = rule_catalog(2)
    threes = rule_catalog(3)
    out = [SimpleScheme(i, d) for i in threes for d in twos]
    out += [SimpleScheme(i, d) for i in twos for d in threes]
    return out


def classify(scheme: SimpleScheme) -> SchemeClass:
    """Case split on where inequalities occur in the rules.

    The bound for the no-equal-in-deletion subcase is
    max(|I|, |D|*(maxE(I)-1)); an all-equal deletion rule gives |I|; a mixed
    deletion rule gives 3.
    """
    ins, dele = scheme.ins_body, scheme.del_body
    if not ins.neq_class_pairs and not dele.neq_class_pairs:
        return SchemeClass(SchemeCase.ALL_EQUAL, None, None)
    if dele.max_e() == 1:
        bound = max(len(ins), len(dele) * (ins.max_e() - 1))
        return SchemeClass(SchemeCase.HAS_INEQUALITY, DeletionSubcase.NO_EQUAL_IN_D, bound)
    if not dele.neq_class_pairs:
        return SchemeClass(SchemeCase.HAS_INEQUALITY, DeletionSubcase.ALL_EQUAL_D, len(ins))
    return SchemeClass(SchemeCase.HAS_INEQUALITY, DeletionSubcase.MIXED_D, 3)


# -- constructive witnesses for the all-equal case --------------------------------


def _all_equal_script(scheme: SimpleScheme, n: int) -> list[ScriptStep]:
    """Script deriving the all-equal word of length ``n`` from the empty word.

    Build length 1 first, then repeatedly insert at the end and delete a
    window spanning the old last symbol and the start of the block, which
    merges everything into one class and nets one extra position.
    """
    ins = ScriptStep(StepKind.INSERT, 0, "I")
    steps: list[ScriptStep] = []
    if n == 0:
        return steps
    if scheme.family == "I3D2":
        steps += [ins, ScriptStep(StepKind.DELETE, 1, "D")]
        for length in range(1, n):
            steps += [
                ScriptStep(StepKind.INSERT, length, "I"),
                ScriptStep(StepKind.DELETE, length, "D"),
            ]
    else:
        steps += [ins, ScriptStep(StepKind.INSERT, 1, "I"), ScriptStep(StepKind.DELETE, 1, "D")]
        for length in range(1, n):
            steps += [
                ScriptStep(StepKind.INSERT, length, "I"),
                ScriptStep(StepKind.INSERT, length + 1, "I"),
                ScriptStep(StepKind.DELETE, length, "D"),
            ]
    return steps


class Membership(Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Verdict:
    member: Membership
    witness: Trace | None = None
    reason: str = ""
    states_expanded: int = 0
    depth_reached: int = 0


def decide_membership(
    scheme: SimpleScheme,
    target: RelationalWord,
    budget: SearchBudget = DEFAULT_BUDGET,
) -> Verdict:
    """Is the fully defined ``target`` derivable from the empty word?

    All-equal schemes are decided without search.  Otherwise a target longer
    than the scheme's bound is rejected outright, and the rest is a bounded
    search: YES verdicts carry a replayable witness, exhaustion yields
    UNKNOWN.
    """
    if not target.is_fully_defined:
        raise NotFullyDefined("membership is decided for fully defined words")
    cls = classify(scheme)
    if cls.case is SchemeCase.ALL_EQUAL:
        if target.class_count <= 1:
            witness = replay(
                _all_equal_script(scheme, len(target)), EMPTY, scheme.to_scheme()
            )
            return Verdict(Membership.YES, witness, "all-equal word under an all-equal scheme")
        return Verdict(
            Membership.NO, None, "scheme with all-equal rules derives only all-equal words"
        )
    assert cls.bound is not None
    if len(target) > cls.bound:
        return Verdict(
            Membership.NO,
            None,
            f"length {len(target)} exceeds the maxFD bound {cls.bound}",
        )
    outcome = search(
        scheme.to_scheme(), [EMPTY], budget, target=lambda w: w == target
    )
    if outcome.hits:
        return Verdict(
            Membership.YES,
            outcome.trace_to(outcome.hits[0]),
            "found by search",
            outcome.states_expanded,
            outcome.depth_reached,
        )
    return Verdict(
        Membership.UNKNOWN,
        None,
        "budget exhausted without finding the word",
        outcome.states_expanded,
        outcome.depth_reached,
    )


# --der derivable fully defined words ----------------------------------------------


@dataclass(frozen=True)
class FdlReport:
    all_equal_symbolic: bool
    members: tuple[RelationalWord, ...] = ()
    undetermined: tuple[RelationalWord, ...] = ()
    states_expanded: int = 0

    @property
    def complete(self) -> bool:
        return self.all_equal_symbolic or not self.undetermined


def compute_fdl(
    scheme: SimpleScheme, budget: SearchBudget = DEFAULT_BUDGET
) -> FdlReport:
    """Fully defined words derivable from the empty word.

    For an all-equal scheme the answer is the (infinite) family of all-equal
    words, reported symbolically.  Otherwise candidates up to the scheme's
    bound are certified by one shared search: a candidate belongs to the set
    as soon as any reached word contains it as a fully defined scattered
    subword, since single symbols can always be deleted without disturbing
    the rest.
    """
    cls = classify(scheme)
    if cls.case is SchemeCase.ALL_EQUAL:
        return FdlReport(all_equal_symbolic=True)
    assert cls.bound is not None
    candidates: list[RelationalWord] = [EMPTY]
    for n in range(1, cls.bound + 1):
        candidates.extend(fully_defined_words(n))
    outcome = search(scheme.to_scheme(), [EMPTY], budget)
    members = []
    undetermined = []
    for cand in candidates:
        if any(exists_scattered_subword(cand, w) for w in outcome.visited):
            members.append(cand)
        else:
            undetermined.append(cand)
    return FdlReport(
        all_equal_symbolic=False,
        members=tuple(members),
        undetermined=tuple(undetermined),
        states_expanded=outcome.states_expanded,
    )


# -- deleting arbitrary words -------------------------------------------------------

# Scripts that delete one symbol from the front of any word, keyed by
# (insertion pattern, deletion pattern).  Each was checked against the
# reference matrix chains in the test fixtures: replayed on a one-symbol
# word it passes through exactly those matrices and ends empty.  All sites
# stay inside the region the script itself builds, so trailing positions
# and their relations are untouched.
_I = StepKind.INSERT
_D = StepKind.DELETE

_DELETE_FIRST_SCRIPTS: dict[tuple[str, str], tuple[tuple[StepKind, int], ...]] = {
    ("aaa", "aa"): ((_I, 1), (_D, 3), (_D, 1)),
    ("aaa", "ab"): ((_I, 0), (_I, 1), (_I, 1), (_D, 9), (_D, 7), (_D, 4), (_D, 3), (_D, 1)),
    ("abc", "aa"): ((_I, 0), (_I, 2), (_I, 2), (_D, 8), (_D, 2), (_D, 5), (_D, 3), (_D, 1)),
    ("abc", "ab"): ((_I, 0), (_D, 3), (_D, 1)),
    ("aab", "aa"): ((_I, 0), (_D, 3), (_D, 1)),
    ("aab", "ab"): ((_I, 0), (_D, 2), (_D, 1)),
    ("abb", "aa"): ((_I, 0), (_D, 2), (_D, 1)),
    ("abb", "ab"): ((_I, 0), (_D, 3), (_D, 1)),
    ("aba", "aa"): ((_I, 0), (_I, 0), (_I, 2), (_D, 9), (_D, 6), (_D, 5), (_D, 2), (_D, 1)),
    ("aba", "ab"): ((_I, 0), (_D, 1), (_D, 1)),
}


def epsilon_script(scheme: SimpleScheme) -> tuple[ScriptStep, ...]:
    """The stored script deleting one isolated symbol, for (3,2) schemes."""
    if scheme.family != "I3D2":
        raise UnknownCase("stored symbol-deletion scripts exist for (3,2) schemes only")
    key = (scheme.ins_pattern, scheme.del_pattern)
    try:
        ops = _DELETE_FIRST_SCRIPTS[key]
    except KeyError as exc:  # unreachable: the table covers all ten schemes
        raise UnknownCase(f"no script for scheme {key}") from exc
    return tuple(
        ScriptStep(kind, site, "I" if kind is _I else "D") for kind, site in ops
    )


def _append_symbol_script(scheme: SimpleScheme, at: int) -> list[ScriptStep]:
    """Script appending one isolated symbol at position ``at + 1``.

    For (2,3) schemes: the reversed symbol-deletion script of the mirrored
    (3,2) scheme, with insertion of a block undone by deleting it in place
    and deletion of a window undone by inserting the window's rule.
    """
    mirrored = _DELETE_FIRST_SCRIPTS[(scheme.del_pattern, scheme.ins_pattern)]
    out = []
    for kind, site in reversed(mirrored):
        if kind is _I:
            out.append(ScriptStep(StepKind.DELETE, at + site + 1, "D"))
        else:
            out.append(ScriptStep(StepKind.INSERT, at + site - 1, "I"))
    return out


def delete_word(scheme: SimpleScheme, word: RelationalWord) -> Trace:
    """A replayable derivation from ``word`` to the empty word.

    (3,2) schemes delete the first symbol repeatedly with the stored
    scripts.  (2,3) schemes append two isolated symbols at the end, then
    delete the three-symbol suffix, shortening the word by one per round.
    """
    engine_scheme = scheme.to_scheme()
    script: list[ScriptStep] = []
    n = len(word)
    if scheme.family == "I3D2":
        per_symbol = epsilon_script(scheme)
        for _ in range(n):
            script.extend(per_symbol)
    else:
        for length in range(n, 0, -1):
            script.extend(_append_symbol_script(scheme, length))
            script.extend(_append_symbol_script(scheme, length + 1))
            script.append(ScriptStep(StepKind.DELETE, length, "D"))
    return replay(script, word, engine_scheme)


# -- bound certification --------------------------------------------------------------


@dataclass
class BoundsReport:
    scheme: SimpleScheme
    scheme_class: SchemeClass
    depth: int
    max_len: int | None
    states_explored: int = 0
    steps_checked: int = 0
    max_fd_seen: int = 0
    max_e_seen: int = 0
    per_depth_max_fd: dict[int, int] = field(default_factory=dict)


def certify_bounds(
    scheme: SimpleScheme,
    depth: int,
    *,
    max_len: int | None = DEFAULT_BUDGET.max_len,
) -> BoundsReport:
    """Search from the empty word, asserting the maxFD bound and the
    per-step growth laws on every executed edge.

    Insertions must satisfy maxE/maxFD(result) = max(parent, rule) exactly.
    Deletion steps must respect the inequality for the scheme's subcase.  A
    violation raises BoundViolated: it would falsify this implementation,
    not the bounds.
    """
    cls = classify(scheme)
    if cls.case is not SchemeCase.HAS_INEQUALITY:
        raise ValueError("bounds are only claimed for schemes containing an inequality")
    assert cls.bound is not None and cls.subcase is not None
    report = BoundsReport(scheme, cls, depth, max_len)
    ins_body, del_body = scheme.ins_body, scheme.del_body
    d_len = len(del_body)

    def hook(parent: RelationalWord, step) -> None:
        report.steps_checked += 1
        pe, pf = parent.max_e(), parent.max_fd()
        ce, cf = step.result.max_e(), step.result.max_fd()
        if step.kind is StepKind.INSERT:
            if ce != max(pe, ins_body.max_e()) or cf != max(pf, ins_body.max_fd()):
                raise BoundViolated(
                    f"insertion growth law failed at {parent!r} -> {step.result!r}"
                )
            return
        if cls.subcase is DeletionSubcase.NO_EQUAL_IN_D:
            e_ok = ce <= pe
            f_ok = cf <= max(pf, d_len * (pe - 1))
        elif cls.subcase is DeletionSubcase.ALL_EQUAL_D:
            e_ok = ce <= max(pe, d_len * (pe - 1))
            f_ok = cf <= max(pf, pf + (d_len - 1) * pe - d_len)
        else:
            e_ok = ce <= max(pe, 2 * (pe - 1))
            f_ok = cf <= max(pf, pf + pe - 2, 3 * (pe - 1))
        if not (e_ok and f_ok):
            raise BoundViolated(
                f"deletion growth law failed at {parent!r} -> {step.result!r}"
            )

    outcome = search(
        scheme.to_scheme(),
        [EMPTY],
        SearchBudget(max_depth=depth, max_len=max_len),
        step_hook=hook,
    )
    report.states_explored = len(outcome.visited)
    for w, d in outcome.visited.items():
        fd = w.max_fd()
        report.max_fd_seen = max(report.max_fd_seen, fd)
        report.max_e_seen = max(report.max_e_seen, w.max_e())
        report.per_depth_max_fd[d] = max(report.per_depth_max_fd.get(d, 0), fd)
    if report.max_fd_seen > cls.bound:
        raise BoundViolated(
            f"observed maxFD {report.max_fd_seen} exceeds bound {cls.bound}"
        )
    return report
