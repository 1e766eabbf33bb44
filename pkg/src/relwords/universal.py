"""Embedding string insertion-deletion systems into relational words.

Each source letter is coded as a two-letter block pattern: an alternating
left part of length 2K, a middle run of repeated letters whose length
identifies the coded letter, and an alternating right part of length 2K.
Mapping every rule and axiom of a context-free string insertion-deletion
system through the code (then reading the code strings as fully defined
relational words) yields a relational system whose canonical reachable
words mirror the string system's derivations depth for depth.

A relational word is *canonical* when it can be instantiated to the coded
image of some source string: it has the image's length and none of its
defined cells disagree with the image.  Insertion leaves new cross
relations undefined, so the relational image of a string derivation is
usually under-defined; compatibility rather than cell equality is what
makes the depth correspondence hold.  Decoding is unique on fully defined
canonical words.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .engine import Rule, Scheme, SearchBudget, StepKind, System, Trace, search, step_all
from .errors import KTooSmall, Mismatch
from .words import RelationalWord, from_string

__all__ = [
    "StringWord",
    "StringInsDelSystem",
    "string_step",
    "string_reachable",
    "CodeMorphism",
    "encode",
    "decode_all",
    "decode",
    "is_canonical",
    "CompareReport",
    "compare_languages",
    "ProbeReport",
    "repair_probe",
    "unparsed_segment_count",
]

StringWord = tuple[str, ...]


@dataclass(frozen=True)
class StringInsDelSystem:
    """Context-free string insertion-deletion system (no contexts)."""

    alphabet: tuple[str, ...]
    terminals: frozenset[str]
    ins_words: tuple[StringWord, ...]
    del_words: tuple[StringWord, ...]
    axioms: tuple[StringWord, ...]

    def __post_init__(self) -> None:
        letters = set(self.alphabet)
        if not self.terminals <= letters:
            raise ValueError("terminals must be a subset of the alphabet")
        for group in (self.ins_words, self.del_words, self.axioms):
            for word in group:
                if not set(word) <= letters:
                    raise ValueError(f"word {word} uses letters outside the alphabet")

    def is_terminal_word(self, word: StringWord) -> bool:
        return all(ch in self.terminals for ch in word)


def string_step(word: StringWord, system: StringInsDelSystem) -> set[StringWord]:
    """All words one insertion or one deletion away from ``word``."""
    out: set[StringWord] = set()
    for ins in system.ins_words:
        for cut in range(len(word) + 1):
            out.add(word[:cut] + ins + word[cut:])
    for dele in system.del_words:
        m = len(dele)
        for cut in range(len(word) - m + 1):
            if word[cut : cut + m] == dele:
                out.add(word[:cut] + word[cut + m :])
    return out


def string_reachable(
    system: StringInsDelSystem, depth: int, *, max_len: int | None = None
) -> list[set[StringWord]]:
    """Cumulative sets of words reachable from the axioms in <= d steps."""
    levels = [set(system.axioms)]
    frontier = set(system.axioms)
    for _ in range(depth):
        seen = levels[-1]
        nxt = set()
        for w in frontier:
            for succ in string_step(w, system):
                if max_len is not None and len(succ) > max_len:
                    continue
                if succ not in seen and succ not in nxt:
                    nxt.add(succ)
        levels.append(seen | nxt)
        frontier = nxt
    return levels


# -- the code morphism ----------------------------------------------------------


@dataclass(frozen=True)
class CodeMorphism:
    """Letter-to-codeword table c(letter_i) = (ab)^K a^i (ba)^K over {a, b}."""

    letters: tuple[str, ...]
    k: int

    def __post_init__(self) -> None:
        if len(set(self.letters)) != len(self.letters):
            raise ValueError("code letters must be distinct")
        if self.k <= len(self.letters) + 2:
            raise KTooSmall(f"K={self.k} must exceed alphabet size + 2 = {len(self.letters) + 2}")

    def index(self, letter: str) -> int:
        return self.letters.index(letter) + 1

    def codeword(self, letter: str) -> str:
        i = self.index(letter)
        return "ab" * self.k + "a" * i + "ba" * self.k

    def code_string(self, word: Sequence[str]) -> str:
        return "".join(self.codeword(ch) for ch in word)

    def encode_word(self, word: Sequence[str]) -> RelationalWord:
        return from_string(self.code_string(word))

    def chunk_lengths(self) -> range:
        return range(4 * self.k + 1, 4 * self.k + len(self.letters) + 1)

    def labels(self, word: Sequence[str]) -> list[int]:
        """0/1 label per position of the coded image (0 for 'a', 1 for 'b')."""
        out: list[int] = []
        for ch in word:
            i = self.index(ch)
            for off in range(4 * self.k + i):
                if off < 2 * self.k:
                    out.append(off % 2)
                elif off < 2 * self.k + i:
                    out.append(0)
                else:
                    out.append((off - 2 * self.k - i + 1) % 2)
        return out


def encode(
    system: StringInsDelSystem, k: int
) -> tuple[System, CodeMorphism]:
    """Map every rule and axiom through the code morphism."""
    morphism = CodeMorphism(system.alphabet, k)
    insertions = tuple(
        Rule(f"I{n}", StepKind.INSERT, morphism.encode_word(w))
        for n, w in enumerate(system.ins_words, 1)
    )
    deletions = tuple(
        Rule(f"D{n}", StepKind.DELETE, morphism.encode_word(w))
        for n, w in enumerate(system.del_words, 1)
    )
    axioms = tuple(morphism.encode_word(w) for w in system.axioms)
    return System(Scheme(insertions, deletions), axioms), morphism


# -- canonical form and decoding ---------------------------------------------------


def _compatible(word: RelationalWord, labels: Sequence[int]) -> bool:
    # every defined cell of the word must agree with the 0/1 label pattern
    class_label: dict[int, int] = {}
    for pos, cls in enumerate(word.position_classes):
        lab = labels[pos]
        if class_label.setdefault(cls, lab) != lab:
            return False
    for a, b in word.neq_class_pairs:
        if class_label[a] == class_label[b]:
            return False
    return True


def decode_all(word: RelationalWord, morphism: CodeMorphism) -> frozenset[StringWord]:
    """Every source string whose coded image instantiates ``word``.

    Fully defined canonical words decode uniquely; under-defined words may
    be compatible with several codings (or none).
    """
    n = len(word)
    if n == 0:
        return frozenset({()})
    base = 4 * morphism.k
    letters = morphism.letters
    found: list[StringWord] = []

    def rec(pos: int, chosen: list[str]) -> None:
        if pos == n:
            if _compatible(word, morphism.labels(chosen)):
                found.append(tuple(chosen))
            return
        for i in range(1, len(letters) + 1):
            if pos + base + i <= n:
                chosen.append(letters[i - 1])
                rec(pos + base + i, chosen)
                chosen.pop()

    rec(0, [])
    return frozenset(found)


def is_canonical(word: RelationalWord, morphism: CodeMorphism) -> bool:
    return bool(decode_all(word, morphism))


def decode(
    word: RelationalWord,
    morphism: CodeMorphism,
    *,
    terminals: frozenset[str] | None = None,
) -> StringWord | None:
    """The unique decoding of ``word``, if there is exactly one.

    With ``terminals`` given, only decodings over that letter set count.
    """
    options = decode_all(word, morphism)
    if terminals is not None:
        options = frozenset(w for w in options if all(ch in terminals for ch in w))
    if len(options) == 1:
        return next(iter(options))
    return None


# -- depth-matched comparison -------------------------------------------------------


@dataclass
class CompareReport:
    k: int
    depth: int
    string_counts: list[int] = field(default_factory=list)
    relational_counts: list[int] = field(default_factory=list)
    decoded_counts: list[int] = field(default_factory=list)
    equal: bool = True


def compare_languages(
    system: StringInsDelSystem, k: int, depth: int
) -> CompareReport:
    """Check, depth by depth, that decoding the canonical reachable
    relational words gives back exactly the reachable strings.

    Both sides are restricted to terminal words.  Raises Mismatch if any
    depth disagrees; the report carries per-depth set sizes.
    """
    encoded, morphism = encode(system, k)
    string_levels = string_reachable(system, depth)

    rel_levels: list[set[RelationalWord]] = [set(encoded.axioms)]
    frontier = set(encoded.axioms)
    for _ in range(depth):
        seen = rel_levels[-1]
        nxt: set[RelationalWord] = set()
        for w in sorted(frontier, key=RelationalWord.canonical_key):
            for step in step_all(w, encoded.scheme):
                if step.result not in seen and step.result not in nxt:
                    nxt.add(step.result)
        rel_levels.append(seen | nxt)
        frontier = nxt

    report = CompareReport(k=k, depth=depth)
    for d in range(depth + 1):
        strings = {w for w in string_levels[d] if system.is_terminal_word(w)}
        decoded: set[StringWord] = set()
        for w in rel_levels[d]:
            for s in decode_all(w, morphism):
                if system.is_terminal_word(s):
                    decoded.add(s)
        report.string_counts.append(len(strings))
        report.relational_counts.append(len(rel_levels[d]))
        report.decoded_counts.append(len(decoded))
        if decoded != strings:
            report.equal = False
            missing = sorted(strings - decoded)
            extra = sorted(decoded - strings)
            raise Mismatch(
                f"depth {d}: decoded reachable words differ from string side "
                f"(missing={missing[:3]}, extra={extra[:3]})"
            )
    return report


# -- probing repairs of broken words -------------------------------------------------


def unparsed_segment_count(word: RelationalWord, morphism: CodeMorphism) -> int:
    """Number of maximal contiguous fully defined segments that are not a
    concatenation of codeword patterns (pieces a repair would have to fix)."""
    classes = word.position_classes
    neq = word.neq_class_pairs
    n = len(classes)

    def defined(i: int, j: int) -> bool:
        a, b = classes[i], classes[j]
        return a == b or ((a, b) if a < b else (b, a)) in neq

    count = 0
    start = 0
    while start < n:
        end = start
        while end + 1 < n and all(defined(i, end + 1) for i in range(start, end + 1)):
            end += 1
        segment = RelationalWord(classes[start : end + 1], neq)
        if not decode_all(segment, morphism):
            count += 1
        start = end + 1
    return count


@dataclass
class ProbeReport:
    found: bool
    found_word: RelationalWord | None
    found_depth: int | None
    states_explored: int
    depth: int
    max_len: int
    start_segments: int
    max_segments_seen: int
    step_counts_nondecreasing: bool


def repair_probe(
    broken: RelationalWord,
    system: System,
    morphism: CodeMorphism,
    budget: SearchBudget,
    *,
    origin: RelationalWord | None = None,
) -> ProbeReport:
    """Search for a canonical word reachable from ``broken``.

    ``origin`` (the word the break was introduced into) never counts as a
    repair.  The report also tracks the unparsed-segment statistic along
    every executed edge.
    """
    max_ins = max((len(r.body) for r in system.scheme.insertions), default=0)
    max_len = budget.max_len if budget.max_len is not None else len(broken) + max_ins
    seg_cache: dict[RelationalWord, int] = {}

    def segments(w: RelationalWord) -> int:
        if w not in seg_cache:
            seg_cache[w] = unparsed_segment_count(w, morphism)
        return seg_cache[w]

    nondecreasing = True
    max_seen = segments(broken)

    def hook(parent: RelationalWord, step) -> None:
        nonlocal nondecreasing, max_seen
        if len(step.result) > max_len:
            return
        before, after = segments(parent), segments(step.result)
        max_seen = max(max_seen, after)
        if after < before:
            nondecreasing = False

    def target(w: RelationalWord) -> bool:
        if origin is not None and w == origin:
            return False
        return is_canonical(w, morphism)

    outcome = search(
        system.scheme,
        [broken],
        SearchBudget(max_depth=budget.max_depth, max_len=max_len),
        target=target,
        step_hook=hook,
    )
    hit = outcome.hits[0] if outcome.hits else None
    return ProbeReport(
        found=hit is not None,
        found_word=hit,
        found_depth=outcome.visited.get(hit) if hit is not None else None,
        states_explored=len(outcome.visited),
        depth=budget.max_depth,
        max_len=max_len,
        start_segments=segments(broken),
        max_segments_seen=max_seen,
        step_counts_nondecreasing=nondecreasing,
    )
