"""Single-step insertion and deletion on relational words, plus derivations.

Insertion splices a fully defined block into a word; every relation between
an old position and a block position is left undefined.  Deletion is the
two-phase operation: the contiguous window is first *expanded* to match the
rule (undefined window cells are instantiated, merging equality classes and
recording class-level inequalities, with full congruence closure), then the
window positions are removed.  A deletion site is applicable only when
neither the direct cells nor the closure contradict the rule.

Site conventions: insertion sites count the positions before the gap
(0 .. len(word)), deletion sites are the 1-based index of the window's first
position.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Iterator, Sequence

from .errors import (
    NotFullyDefined,
    SiteNotApplicable,
    SiteOutOfRange,
    StepNotApplicable,
    UnknownRule,
)
from .words import Relation, RelationalWord

__all__ = [
    "StepKind",
    "Rule",
    "Scheme",
    "System",
    "DerivationStep",
    "ScriptStep",
    "Trace",
    "insert_at",
    "deletion_sites",
    "delete_at",
    "step_all",
    "replay",
    "normalize_ins_first",
    "SearchBudget",
    "SearchOutcome",
    "search",
]


class StepKind(str, Enum):
    INSERT = "ins"
    DELETE = "del"


@dataclass(frozen=True)
class Rule:
    """A named rewriting rule; the body must be fully defined and nonempty."""

    id: str
    kind: StepKind
    body: RelationalWord

    def __post_init__(self) -> None:
        if len(self.body) == 0:
            raise ValueError(f"rule {self.id!r} has an empty body")
        if not self.body.is_fully_defined:
            raise NotFullyDefined(f"rule {self.id!r} body is not fully defined")


@dataclass(frozen=True)
class Scheme:
    insertions: tuple[Rule, ...]
    deletions: tuple[Rule, ...]

    def __post_init__(self) -> None:
        ids = [r.id for r in self.insertions + self.deletions]
        if len(ids) != len(set(ids)):
            raise ValueError("rule ids must be unique")
        for r in self.insertions:
            if r.kind is not StepKind.INSERT:
                raise ValueError(f"rule {r.id!r} listed as insertion but marked {r.kind}")
        for r in self.deletions:
            if r.kind is not StepKind.DELETE:
                raise ValueError(f"rule {r.id!r} listed as deletion but marked {r.kind}")

    @classmethod
    def from_bodies(
        cls,
        insertions: dict[str, RelationalWord],
        deletions: dict[str, RelationalWord],
    ) -> "Scheme":
        return cls(
            insertions=tuple(Rule(i, StepKind.INSERT, b) for i, b in insertions.items()),
            deletions=tuple(Rule(i, StepKind.DELETE, b) for i, b in deletions.items()),
        )

    def rule(self, rule_id: str) -> Rule:
        for r in self.insertions + self.deletions:
            if r.id == rule_id:
                return r
        raise UnknownRule(f"no rule named {rule_id!r}")


@dataclass(frozen=True)
class System:
    """A scheme together with its axioms (start words)."""

    scheme: Scheme
    axioms: tuple[RelationalWord, ...] = ()


# -- the two rewriting operations ------------------------------------------------


def _require_block(block: RelationalWord) -> None:
    if len(block) == 0 or not block.is_fully_defined:
        raise NotFullyDefined("rule body must be nonempty and fully defined")


def insert_at(w: RelationalWord, block: RelationalWord, k: int) -> RelationalWord:
    """Insert ``block`` after the first ``k`` positions of ``w``.

    Old relations are preserved, the block keeps its internal relations, and
    every (old, new) pair is undefined.
    """
    _require_block(block)
    if not (0 <= k <= len(w)):
        raise SiteOutOfRange(f"insertion site {k} outside 0..{len(w)}")
    offset = len(w)  # class ids of w are < len(w), so this cannot collide
    old = w.position_classes
    blk = [c + offset for c in block.position_classes]
    classes = list(old[:k]) + blk + list(old[k:])
    neq = list(w.neq_class_pairs) + [
        (a + offset, b + offset) for a, b in block.neq_class_pairs
    ]
    return RelationalWord(classes, neq)


def _expansion(
    w: RelationalWord, block: RelationalWord, k: int
) -> tuple[list[int], set[tuple[int, int]]] | None:
    """Class map and inequality set after expanding the window at ``k``.

    Returns ``None`` when the window contradicts the rule, either directly or
    because the closure would make a class unequal to itself.
    """
    m = len(block)
    cls = w.position_classes
    neq = w.neq_class_pairs
    parent = list(range(w.class_count))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    demanded: list[tuple[int, int]] = []
    for i in range(m):
        for j in range(i + 1, m):
            want = block.cell(i + 1, j + 1)
            a, b = cls[k - 1 + i], cls[k - 1 + j]
            if a == b:
                have = Relation.EQ
            elif ((a, b) if a < b else (b, a)) in neq:
                have = Relation.NEQ
            else:
                have = Relation.UNDEF
            if have is Relation.UNDEF:
                if want is Relation.EQ:
                    ra, rb = find(a), find(b)
                    if ra != rb:
                        parent[rb] = ra
                else:
                    demanded.append((a, b))
            elif have is not want:
                return None  # direct contradiction
    merged_neq: set[tuple[int, int]] = set()
    for a, b in list(neq) + demanded:
        ra, rb = find(a), find(b)
        if ra == rb:
            return None  # closure made a class unequal to itself
        merged_neq.add((ra, rb) if ra < rb else (rb, ra))
    return [find(c) for c in cls], merged_neq


def deletion_sites(w: RelationalWord, block: RelationalWord) -> list[int]:
    """All sites where deleting ``block`` is applicable (may be empty)."""
    _require_block(block)
    return [
        k
        for k in range(1, len(w) - len(block) + 2)
        if _expansion(w, block, k) is not None
    ]


def delete_at(w: RelationalWord, block: RelationalWord, k: int) -> RelationalWord:
    """Expand the window at ``k`` to match ``block``, then remove it."""
    _require_block(block)
    m = len(block)
    if not (1 <= k <= len(w) - m + 1):
        raise SiteOutOfRange(f"deletion site {k} outside 1..{len(w) - m + 1}")
    expanded = _expansion(w, block, k)
    if expanded is None:
        raise SiteNotApplicable(f"window at {k} contradicts the rule")
    classes, neq = expanded
    survivors = classes[: k - 1] + classes[k - 1 + m :]
    return RelationalWord(survivors, neq)


# -- derivations ------------------------------------------------------------------


@dataclass(frozen=True)
class DerivationStep:
    kind: StepKind
    rule_id: str
    site: int
    result: RelationalWord


@dataclass(frozen=True)
class ScriptStep:
    kind: StepKind
    site: int
    rule_id: str


@dataclass(frozen=True)
class Trace:
    start: RelationalWord
    steps: tuple[DerivationStep, ...] = ()

    @property
    def final(self) -> RelationalWord:
        return self.steps[-1].result if self.steps else self.start

    def words(self) -> Iterator[RelationalWord]:
        yield self.start
        for s in self.steps:
            yield s.result

    def script(self) -> tuple[ScriptStep, ...]:
        return tuple(ScriptStep(s.kind, s.site, s.rule_id) for s in self.steps)

    def to_json(self) -> str:
        return json.dumps(
            {
                "start": [list(r) for r in self.start.matrix()],
                "steps": [
                    {
                        "kind": s.kind.value,
                        "rule_id": s.rule_id,
                        "site": s.site,
                        "result": [list(r) for r in s.result.matrix()],
                    }
                    for s in self.steps
                ],
            },
            indent=2,
        )


def apply_rule(w: RelationalWord, rule: Rule, site: int) -> RelationalWord:
    if rule.kind is StepKind.INSERT:
        return insert_at(w, rule.body, site)
    return delete_at(w, rule.body, site)


def replay(
    script: Iterable[ScriptStep], start: RelationalWord, scheme: Scheme
) -> Trace:
    """Execute a script step by step, failing fast on inapplicable steps."""
    steps = []
    current = start
    for index, s in enumerate(script):
        rule = scheme.rule(s.rule_id)
        if rule.kind is not s.kind:
            raise StepNotApplicable(index, f"rule {s.rule_id!r} is not a {s.kind.value} rule")
        try:
            current = apply_rule(current, rule, s.site)
        except (SiteNotApplicable, SiteOutOfRange) as exc:
            raise StepNotApplicable(index, str(exc)) from exc
        steps.append(DerivationStep(s.kind, s.rule_id, s.site, current))
    return Trace(start, tuple(steps))


def step_all(
    w: RelationalWord, scheme: Scheme, *, dedupe: bool = True
) -> tuple[DerivationStep, ...]:
    """Every single-step successor of ``w`` under the scheme.

    With ``dedupe`` (the default) one step is kept per distinct result word
    and the steps are returned in canonical-key order, so the output is
    independent of rule or site enumeration order.  With ``dedupe=False``
    the raw (rule, site) multiplicity is preserved for trace debugging.
    """
    raw: list[DerivationStep] = []
    for rule in scheme.insertions:
        for k in range(0, len(w) + 1):
            raw.append(DerivationStep(StepKind.INSERT, rule.id, k, insert_at(w, rule.body, k)))
    for rule in scheme.deletions:
        for k in deletion_sites(w, rule.body):
            raw.append(DerivationStep(StepKind.DELETE, rule.id, k, delete_at(w, rule.body, k)))
    if not dedupe:
        return tuple(raw)
    seen: dict[RelationalWord, DerivationStep] = {}
    for step in raw:
        seen.setdefault(step.result, step)
    return tuple(sorted(seen.values(), key=lambda s: s.result.canonical_key()))


# -- insertion-first normal form ----------------------------------------------


def _swap_del_ins(
    del_rule: Rule, del_site: int, ins_rule: Rule, ins_gap: int
) -> tuple[tuple[Rule, int], tuple[Rule, int]]:
    """Swap an adjacent delete-then-insert pair into insert-then-delete.

    ``del_site`` is in the pre-deletion word; ``ins_gap`` in the
    post-deletion word.  If the insertion gap lies strictly before the
    deleted window it keeps its site and the window shifts right by the
    inserted length; otherwise the gap shifts right by the deleted length
    and the window stays put.
    """
    m = len(del_rule.body)
    t = len(ins_rule.body)
    if ins_gap <= del_site - 2:
        return (ins_rule, ins_gap), (del_rule, del_site + t)
    return (ins_rule, ins_gap + m), (del_rule, del_site)


def normalize_ins_first(trace: Trace, scheme: Scheme) -> Trace:
    """Reorder a derivation so every insertion precedes every deletion.

    Adjacent delete/insert pairs are swapped repeatedly with the site
    arithmetic above; the final word is unchanged.  The result is replayed
    from the start so all intermediate words are consistent.
    """
    ops: list[tuple[Rule, int]] = [
        (scheme.rule(s.rule_id), s.site) for s in trace.steps
    ]
    while True:
        for i in range(len(ops) - 1):
            (r1, s1), (r2, s2) = ops[i], ops[i + 1]
            if r1.kind is StepKind.DELETE and r2.kind is StepKind.INSERT:
                ops[i], ops[i + 1] = _swap_del_ins(r1, s1, r2, s2)
                break
        else:
            break
    script = [ScriptStep(r.kind, site, r.id) for r, site in ops]
    return replay(script, trace.start, scheme)


# -- breadth-first reachability ---------------------------------------------------


@dataclass(frozen=True)
class SearchBudget:
    max_depth: int
    max_len: int | None = None


@dataclass
class SearchOutcome:
    visited: dict[RelationalWord, int]
    parents: dict[RelationalWord, tuple[RelationalWord, DerivationStep]]
    depth_reached: int
    states_expanded: int
    frontier_exhausted: bool
    hits: list[RelationalWord] = field(default_factory=list)

    def trace_to(self, word: RelationalWord) -> Trace:
        """Reconstruct a derivation from a start word to ``word``."""
        chain: list[DerivationStep] = []
        current = word
        while current in self.parents:
            parent, step = self.parents[current]
            chain.append(step)
            current = parent
        chain.reverse()
        return Trace(current, tuple(chain))


def search(
    scheme: Scheme,
    starts: Sequence[RelationalWord],
    budget: SearchBudget,
    *,
    target: Callable[[RelationalWord], bool] | None = None,
    stop_on_hit: bool = True,
    step_hook: Callable[[RelationalWord, DerivationStep], None] | None = None,
) -> SearchOutcome:
    """Deterministic BFS over canonical words reachable from ``starts``.

    ``step_hook`` is called for every executed edge, including edges to
    already-visited or over-length words.  ``target`` marks hit words; with
    ``stop_on_hit`` the search stops as soon as one is found.
    """
    outcome = SearchOutcome({}, {}, 0, 0, False)
    frontier: list[RelationalWord] = []
    for w in sorted(set(starts), key=RelationalWord.canonical_key):
        outcome.visited[w] = 0
        frontier.append(w)
        if target is not None and target(w):
            outcome.hits.append(w)
            if stop_on_hit:
                return outcome
    for depth in range(1, budget.max_depth + 1):
        if not frontier:
            outcome.frontier_exhausted = True
            break
        outcome.depth_reached = depth
        next_frontier: list[RelationalWord] = []
        for w in frontier:
            outcome.states_expanded += 1
            for step in step_all(w, scheme):
                if step_hook is not None:
                    step_hook(w, step)
                result = step.result
                if budget.max_len is not None and len(result) > budget.max_len:
                    continue
                if result in outcome.visited:
                    continue
                outcome.visited[result] = depth
                outcome.parents[result] = (w, step)
                next_frontier.append(result)
                if target is not None and target(result):
                    outcome.hits.append(result)
                    if stop_on_hit:
                        return outcome
        frontier = next_frontier
    else:
        outcome.frontier_exhausted = not frontier
    return outcome
