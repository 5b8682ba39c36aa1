"""Nondeterministic finite automata over token alphabets.

States are integers ``0..n-1``; a word is a tuple of letter tokens.  The
empty word is never accepted: these machines model epsilon-free languages,
so the initial state may not be final.  Everything here is immutable after
construction and all operations are pure functions.
"""

from __future__ import annotations

import shlex
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

Word = tuple[str, ...]
Transition = tuple[int, str, int]

DEFAULT_WORD_CAP = 10**6
DEFAULT_STATE_CAP = 10**6
DEFAULT_SET_CAP = 10**6


class ParseError(ValueError):
    """Malformed input text; carries the offending line number if known."""

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class CapacityError(RuntimeError):
    """A configured resource cap would be exceeded."""


def parse_word(text: str) -> Word:
    """Parse a '.'-separated token word; blank input is the empty word."""
    text = text.strip()
    if not text:
        return ()
    return tuple(text.split("."))


def format_word(word: Sequence[str]) -> str:
    return ".".join(word)


@dataclass(frozen=True)
class Nfa:
    """An epsilon-free NFA with a total-or-not transition relation.

    ``transitions`` is canonicalised to a deduplicated tuple sorted by
    (source, letter position in the alphabet, target), so equal machines
    compare equal regardless of input order.
    """

    n: int
    alphabet: tuple[str, ...]
    transitions: tuple[Transition, ...]
    initial: int
    finals: frozenset[int]
    total: bool = field(init=False, compare=False)
    _letter_index: dict[str, int] = field(init=False, repr=False, compare=False)
    _step: dict[tuple[int, str], tuple[int, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("state count must be at least 1")
        alphabet = tuple(self.alphabet)
        if not alphabet:
            raise ValueError("alphabet must be nonempty")
        if len(set(alphabet)) != len(alphabet):
            raise ValueError("alphabet letters must be distinct")
        index = {a: i for i, a in enumerate(alphabet)}

        def check_state(q: int, what: str) -> None:
            if not (0 <= q < self.n):
                raise ValueError(f"unknown state: {q} ({what})")

        check_state(self.initial, "initial")
        finals = frozenset(self.finals)
        for q in finals:
            check_state(q, "final")
        if self.initial in finals:
            raise ValueError("initial state cannot be final")

        seen: set[Transition] = set()
        for src, letter, dst in self.transitions:
            check_state(src, "transition source")
            check_state(dst, "transition target")
            if letter not in index:
                raise ValueError(f"unknown letter: {letter!r}")
            seen.add((src, letter, dst))
        canonical = tuple(sorted(seen, key=lambda t: (t[0], index[t[1]], t[2])))

        step: dict[tuple[int, str], list[int]] = {}
        for src, letter, dst in canonical:
            step.setdefault((src, letter), []).append(dst)
        total = all((q, a) in step for q in range(self.n) for a in alphabet)

        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "transitions", canonical)
        object.__setattr__(self, "finals", finals)
        object.__setattr__(self, "total", total)
        object.__setattr__(self, "_letter_index", index)
        object.__setattr__(self, "_step", {k: tuple(v) for k, v in step.items()})

    def step(self, state: int, letter: str) -> tuple[int, ...]:
        """Successors of ``state`` on ``letter``, in ascending state order."""
        return self._step.get((state, letter), ())

    def letter_index(self, letter: str) -> int:
        try:
            return self._letter_index[letter]
        except KeyError:
            raise ValueError(f"unknown letter: {letter!r}") from None

    def word_key(self, word: Word):
        """Sort key realising length-then-lexicographic order by alphabet position."""
        return (len(word), tuple(self.letter_index(a) for a in word))


@dataclass(frozen=True)
class Path:
    """A run through an NFA: an origin state plus consecutive transitions.

    Zero-length paths are allowed; they consist of the origin alone.
    """

    origin: int
    transitions: tuple[Transition, ...] = ()

    def __post_init__(self) -> None:
        prev = self.origin
        for src, _, dst in self.transitions:
            if src != prev:
                raise ValueError("transitions are not consecutive")
            prev = dst

    @property
    def end(self) -> int:
        return self.transitions[-1][2] if self.transitions else self.origin

    @property
    def label(self) -> Word:
        return tuple(a for _, a, _ in self.transitions)

    def __len__(self) -> int:
        return len(self.transitions)


def parse_nfa(text: str) -> Nfa:
    """Parse the line-oriented NFA file format.

    Format ('#' starts a comment)::

        alphabet a b
        states 3
        initial 0
        final 2
        trans 0 a 1

    ``alphabet`` and ``states`` must come first, in that order; the
    remaining lines may appear in any order.  Duplicate transitions are
    ignored.
    """
    alphabet: Optional[tuple[str, ...]] = None
    n: Optional[int] = None
    initial: Optional[int] = None
    finals: set[int] = set()
    transitions: set[Transition] = set()

    def want_int(tok: str, lineno: int, what: str) -> int:
        try:
            return int(tok)
        except ValueError:
            raise ParseError(f"expected integer {what}, got {tok!r}", lineno) from None

    def check_state(q: int, lineno: int) -> int:
        assert n is not None
        if not (0 <= q < n):
            raise ParseError(f"unknown state: {q}", lineno)
        return q

    for lineno, raw in enumerate(text.splitlines(), start=1):
        try:
            tokens = shlex.split(raw, comments=True)
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        if not tokens:
            continue
        keyword, args = tokens[0], tokens[1:]
        if keyword == "alphabet":
            if alphabet is not None:
                raise ParseError("duplicate 'alphabet' line", lineno)
            if not args:
                raise ParseError("alphabet must be nonempty", lineno)
            if len(set(args)) != len(args):
                raise ParseError("alphabet letters must be distinct", lineno)
            alphabet = tuple(args)
            continue
        if alphabet is None:
            raise ParseError("'alphabet' line must come first", lineno)
        if keyword == "states":
            if n is not None:
                raise ParseError("duplicate 'states' line", lineno)
            if len(args) != 1:
                raise ParseError("usage: states <count>", lineno)
            n = want_int(args[0], lineno, "state count")
            if n < 1:
                raise ParseError("state count must be at least 1", lineno)
            continue
        if n is None:
            raise ParseError("'states' line must precede state references", lineno)
        if keyword == "initial":
            if initial is not None:
                raise ParseError("duplicate 'initial' line", lineno)
            if len(args) != 1:
                raise ParseError("usage: initial <state>", lineno)
            initial = check_state(want_int(args[0], lineno, "state"), lineno)
        elif keyword == "final":
            if len(args) != 1:
                raise ParseError("usage: final <state>", lineno)
            finals.add(check_state(want_int(args[0], lineno, "state"), lineno))
        elif keyword == "trans":
            if len(args) != 3:
                raise ParseError("usage: trans <from> <letter> <to>", lineno)
            src = check_state(want_int(args[0], lineno, "state"), lineno)
            dst = check_state(want_int(args[2], lineno, "state"), lineno)
            if args[1] not in alphabet:
                raise ParseError(f"unknown letter: {args[1]!r}", lineno)
            transitions.add((src, args[1], dst))
        else:
            raise ParseError(f"unknown directive: {keyword!r}", lineno)

    if alphabet is None:
        raise ParseError("missing 'alphabet' line")
    if n is None:
        raise ParseError("missing 'states' line")
    if initial is None:
        raise ParseError("missing 'initial' line")
    if initial in finals:
        raise ParseError("initial state cannot be final")
    return Nfa(n=n, alphabet=alphabet, transitions=tuple(transitions), initial=initial,
               finals=frozenset(finals))


def totalize(m: Nfa) -> Nfa:
    """Make the transition relation total by adding one non-final sink.

    The sink gets the highest state index.  Already-total machines are
    returned unchanged; the language is never altered.
    """
    if m.total:
        return m
    sink = m.n
    extra: list[Transition] = []
    for q in range(m.n):
        for a in m.alphabet:
            if not m.step(q, a):
                extra.append((q, a, sink))
    extra.extend((sink, a, sink) for a in m.alphabet)
    return Nfa(n=m.n + 1, alphabet=m.alphabet, transitions=m.transitions + tuple(extra),
               initial=m.initial, finals=m.finals)


def accepts(m: Nfa, word: Sequence[str]) -> bool:
    """True iff some successful run is labelled by ``word``; the empty word
    is always rejected."""
    for a in word:
        if a not in m._letter_index:
            raise ValueError(f"unknown letter: {a!r}")
    if not word:
        return False
    states = {m.initial}
    for a in word:
        states = {dst for q in states for dst in m.step(q, a)}
        if not states:
            return False
    return bool(states & m.finals)


def _distance_to_final(m: Nfa) -> list[Optional[int]]:
    """Minimum number of transitions from each state to a final state."""
    rev: dict[int, set[int]] = {q: set() for q in range(m.n)}
    for src, _, dst in m.transitions:
        rev[dst].add(src)
    dist: list[Optional[int]] = [None] * m.n
    queue: deque[int] = deque()
    for q in m.finals:
        dist[q] = 0
        queue.append(q)
    while queue:
        q = queue.popleft()
        for p in rev[q]:
            if dist[p] is None:
                dist[p] = dist[q] + 1  # type: ignore[operator]
                queue.append(p)
    return dist


def _language_levels(m: Nfa, max_len: int, cap: int):
    """Yield the sorted accepted words of each length 1..max_len in turn.

    Dead prefixes are pruned via distance-to-final, so sparse languages of
    long words stay cheap.  Raises :class:`CapacityError` once more than
    ``cap`` words have been produced in total.
    """
    dist = _distance_to_final(m)
    produced = 0
    frontier: dict[Word, tuple[int, ...]] = {}
    if dist[m.initial] is not None:
        frontier[()] = (m.initial,)
    for length in range(1, max_len + 1):
        remaining = max_len - length
        level: list[Word] = []
        nxt: dict[Word, tuple[int, ...]] = {}
        for w, states in frontier.items():
            for a in m.alphabet:
                targets = {dst for q in states for dst in m.step(q, a)}
                viable = tuple(sorted(
                    q for q in targets if dist[q] is not None and dist[q] <= remaining))
                if not viable:
                    continue
                word = w + (a,)
                nxt[word] = viable
                if any(q in m.finals for q in viable):
                    level.append(word)
                    produced += 1
                    if produced > cap:
                        raise CapacityError(f"enumeration exceeds cap of {cap} words")
        frontier = nxt
        yield level
        if not frontier:
            break


def enumerate_language(m: Nfa, max_len: int, cap: int = DEFAULT_WORD_CAP) -> list[Word]:
    """All accepted words of length 1..max_len in length-then-lex order.

    Raises :class:`CapacityError` once more than ``cap`` words are found.
    """
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    return [w for level in _language_levels(m, max_len, cap) for w in level]


def enumerate_m_paths(m: Nfa, origin: int, length: int,
                      cap: int = DEFAULT_WORD_CAP) -> list[Path]:
    """All paths of exactly ``length`` transitions starting at ``origin``.

    ``length == 0`` yields the single empty path.  Output order follows the
    canonical transition order at every step.
    """
    if not (0 <= origin < m.n):
        raise ValueError(f"unknown state: {origin}")
    if length < 0:
        raise ValueError("length must be nonnegative")
    out_by_state: dict[int, list[Transition]] = {q: [] for q in range(m.n)}
    for t in m.transitions:
        out_by_state[t[0]].append(t)
    seqs: list[tuple[Transition, ...]] = [()]
    for _ in range(length):
        nxt: list[tuple[Transition, ...]] = []
        for seq in seqs:
            here = seq[-1][2] if seq else origin
            for t in out_by_state[here]:
                nxt.append(seq + (t,))
                if len(nxt) > cap:
                    raise CapacityError(f"path enumeration exceeds cap of {cap}")
        seqs = nxt
        if not seqs:
            break
    return [Path(origin, seq) for seq in seqs]


@dataclass(frozen=True)
class EquivalenceResult:
    equivalent: bool
    witness: Optional[Word] = None


def nfa_equivalent(m1: Nfa, m2: Nfa, mode: str = "exact", max_len: Optional[int] = None,
                   state_cap: int = DEFAULT_STATE_CAP,
                   word_cap: int = DEFAULT_WORD_CAP) -> EquivalenceResult:
    """Decide (exactly or up to a length bound) whether two NFAs agree.

    Exact mode runs the subset construction on the fly over the product and
    raises :class:`CapacityError` past ``state_cap`` visited product states.
    On inequivalence a shortest (then lexicographically least) witness word
    is returned.
    """
    if m1.alphabet != m2.alphabet:
        raise ValueError("machines must share the same alphabet")
    if mode == "bounded":
        if max_len is None:
            raise ValueError("bounded mode requires max_len")
        # compare length by length so a short witness is found before a
        # dense disagreeing language gets fully enumerated
        from itertools import zip_longest
        levels1 = _language_levels(m1, max_len, word_cap)
        levels2 = _language_levels(m2, max_len, word_cap)
        for level1, level2 in zip_longest(levels1, levels2, fillvalue=[]):
            if level1 != level2:
                diff = set(level1) ^ set(level2)
                return EquivalenceResult(False, min(diff, key=m1.word_key))
        return EquivalenceResult(True)
    if mode != "exact":
        raise ValueError(f"unknown mode: {mode!r}")

    start = (frozenset({m1.initial}), frozenset({m2.initial}))
    parent: dict[tuple[frozenset[int], frozenset[int]],
                 Optional[tuple[tuple[frozenset[int], frozenset[int]], str]]] = {start: None}
    queue: deque[tuple[frozenset[int], frozenset[int]]] = deque([start])
    while queue:
        pair = queue.popleft()
        s1, s2 = pair
        if bool(s1 & m1.finals) != bool(s2 & m2.finals):
            letters: list[str] = []
            cur = pair
            while parent[cur] is not None:
                cur, a = parent[cur]  # type: ignore[misc]
                letters.append(a)
            return EquivalenceResult(False, tuple(reversed(letters)))
        for a in m1.alphabet:
            t1 = frozenset(dst for q in s1 for dst in m1.step(q, a))
            t2 = frozenset(dst for q in s2 for dst in m2.step(q, a))
            nxt = (t1, t2)
            if nxt not in parent:
                if len(parent) >= state_cap:
                    raise CapacityError(
                        f"equivalence check exceeds cap of {state_cap} product states")
                parent[nxt] = (pair, a)
                queue.append(nxt)
    return EquivalenceResult(True)


def relabel(m: Nfa, mapping: dict[str, str], alphabet: Sequence[str]) -> Nfa:
    """Apply a letter-to-letter mapping to every transition label.

    The result is an NFA over ``alphabet`` accepting the homomorphic image
    of ``m``'s language.
    """
    alphabet = tuple(alphabet)
    for a in m.alphabet:
        if a not in mapping:
            raise ValueError(f"mapping undefined for letter: {a!r}")
        if mapping[a] not in alphabet:
            raise ValueError(f"mapped letter not in target alphabet: {mapping[a]!r}")
    mapped = {(src, mapping[a], dst) for src, a, dst in m.transitions}
    return Nfa(n=m.n, alphabet=alphabet, transitions=tuple(mapped),
               initial=m.initial, finals=m.finals)


def word_set_nfa(words: Iterable[Word], alphabet: Sequence[str]) -> Nfa:
    """A trie-shaped NFA accepting exactly the given finite set of words."""
    alphabet = tuple(alphabet)
    nodes: dict[Word, int] = {(): 0}
    transitions: list[Transition] = []
    finals: set[int] = set()
    for word in sorted(words):
        if not word:
            raise ValueError("cannot accept the empty word")
        for i, a in enumerate(word):
            prefix, ext = word[:i], word[: i + 1]
            if ext not in nodes:
                nodes[ext] = len(nodes)
                transitions.append((nodes[prefix], a, nodes[ext]))
        finals.add(nodes[word])
    return Nfa(n=len(nodes), alphabet=alphabet, transitions=tuple(transitions),
               initial=0, finals=frozenset(finals))


def union_nfa(m1: Nfa, m2: Nfa) -> Nfa:
    """Epsilon-free union of two NFAs over the same alphabet."""
    if m1.alphabet != m2.alphabet:
        raise ValueError("machines must share the same alphabet")
    off1, off2 = 1, 1 + m1.n
    transitions: list[Transition] = []
    for src, a, dst in m1.transitions:
        transitions.append((src + off1, a, dst + off1))
        if src == m1.initial:
            transitions.append((0, a, dst + off1))
    for src, a, dst in m2.transitions:
        transitions.append((src + off2, a, dst + off2))
        if src == m2.initial:
            transitions.append((0, a, dst + off2))
    finals = {q + off1 for q in m1.finals} | {q + off2 for q in m2.finals}
    return Nfa(n=1 + m1.n + m2.n, alphabet=m1.alphabet, transitions=tuple(transitions),
               initial=0, finals=frozenset(finals))
