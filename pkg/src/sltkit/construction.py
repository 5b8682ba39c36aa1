"""Homomorphic decompositions of NFA languages into slt languages.

Two constructions are provided.  The width-2 construction pairs states
with letters, giving a local (width-2) language over n*|A| symbols.  The
main construction encodes states as fixed-length digit blocks and pairs
letters with digits, giving width 2m over only h*|A| symbols, plus a
finite residual of short words handled outside the slt mechanism.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .automata import (
    DEFAULT_SET_CAP,
    DEFAULT_WORD_CAP,
    CapacityError,
    Nfa,
    ParseError,
    Path,
    Word,
    accepts,
    enumerate_language,
    enumerate_m_paths,
    format_word,
    parse_word,
    totalize,
)
from .codes import Code, build_code
from .slt import SltSpec

WIDTH2 = "width2"
MAIN = "main"


@dataclass(frozen=True)
class Homomorphism:
    """A letter-to-letter mapping from local symbols to source letters."""

    pairs: tuple[tuple[str, str], ...]
    _map: dict[str, str] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        pairs = tuple((s, a) for s, a in self.pairs)
        mapping: dict[str, str] = {}
        for sym, letter in pairs:
            if sym in mapping:
                raise ValueError(f"duplicate symbol: {sym!r}")
            mapping[sym] = letter
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "_map", mapping)

    def letter(self, symbol: str) -> str:
        try:
            return self._map[symbol]
        except KeyError:
            raise ValueError(f"unknown symbol: {symbol!r}") from None

    def __call__(self, word: Sequence[str]) -> Word:
        return tuple(self.letter(s) for s in word)

    @property
    def domain(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.pairs)

    @property
    def image(self) -> tuple[str, ...]:
        return tuple(sorted({a for _, a in self.pairs}))


@dataclass(frozen=True)
class Decomposition:
    """An slt spec, a projection back to source letters, and a finite
    residual word set whose union is claimed to equal the source language.

    The claim is checked by the verification module, never assumed here.
    """

    kind: str
    slt: SltSpec
    pi: Homomorphism
    residual: tuple[Word, ...] = ()
    h: Optional[int] = None
    m: Optional[int] = None
    source_fingerprint: str = ""

    def __post_init__(self) -> None:
        if self.kind not in (WIDTH2, MAIN):
            raise ValueError(f"unknown decomposition kind: {self.kind!r}")
        if set(self.pi.domain) != set(self.slt.alphabet):
            raise ValueError("projection domain must equal the local alphabet")
        residual = tuple(sorted({tuple(w) for w in self.residual}, key=lambda w: (len(w), w)))
        if any(len(w) == 0 for w in residual):
            raise ValueError("residual may not contain the empty word")
        if self.kind == WIDTH2:
            if self.slt.width != 2 or residual or self.h is not None or self.m is not None:
                raise ValueError("width2 decompositions have width 2 and no residual")
        else:
            if self.h is None or self.m is None or self.h < 2 or self.m < 2:
                raise ValueError("main decompositions need h >= 2 and m >= 2")
            if self.slt.width != 2 * self.m:
                raise ValueError("main decompositions have width 2m")
        object.__setattr__(self, "residual", residual)

    @property
    def k(self) -> int:
        return self.slt.width


def nfa_fingerprint(m: Nfa) -> str:
    """Short stable digest of a machine's canonical description."""
    lines = ["alphabet " + " ".join(m.alphabet), f"states {m.n}", f"initial {m.initial}"]
    lines.extend(f"final {q}" for q in sorted(m.finals))
    lines.extend(f"trans {s} {a} {t}" for s, a, t in m.transitions)
    return hashlib.sha256("\n".join(lines).encode()).hexdigest()[:12]


def _require_total(m: Nfa) -> None:
    if not m.total:
        raise ValueError("transition relation must be total (totalize first)")


def pair_symbol(first: str, second: str) -> str:
    return f"{first}|{second}"


def state_symbol(state: int, letter: str) -> str:
    return pair_symbol(f"q{state}", letter)


def medvedev_width2(m: Nfa) -> Decomposition:
    """Width-2 decomposition over state-letter pairs.

    A pair <q,a> means "took an a-transition out of q"; allowed prefixes
    anchor the initial state, factors mirror the transition relation, and
    suffixes mark moves that can enter a final state.  The projection
    keeps the letter.  Single-symbol members are exactly the symbols that
    are both an allowed prefix and an allowed suffix.
    """
    _require_total(m)
    symbols = {(q, a): state_symbol(q, a) for q in range(m.n) for a in m.alphabet}
    alphabet = tuple(symbols[(q, a)] for q in range(m.n) for a in m.alphabet)
    prefixes = {(symbols[(m.initial, a)],) for a in m.alphabet}
    factors = {(symbols[(p, a)], symbols[(q, b)])
               for p, a, q in m.transitions for b in m.alphabet}
    suffixes = {(symbols[(p, a)],) for p, a, q in m.transitions if q in m.finals}
    spec = SltSpec(width=2, alphabet=alphabet, prefixes=tuple(prefixes),
                   suffixes=tuple(suffixes), factors=tuple(factors),
                   short_words=tuple(prefixes & suffixes))
    pi = Homomorphism(tuple((symbols[(q, a)], a) for q in range(m.n) for a in m.alphabet))
    return Decomposition(kind=WIDTH2, slt=spec, pi=pi,
                         source_fingerprint=nfa_fingerprint(m))


def encode_path_width2(m: Nfa, path: Path) -> Word:
    """Encode a successful run transition-by-transition as state-letter pairs."""
    if len(path) < 1 or path.origin != m.initial or path.end not in m.finals:
        raise ValueError("path is not successful")
    for src, a, dst in path.transitions:
        if dst not in m.step(src, a):
            raise ValueError(f"not a transition of the machine: ({src}, {a!r}, {dst})")
    return tuple(state_symbol(src, a) for src, a, _ in path.transitions)


def canonical_decomposition(path: Path, m: int) -> list[Path]:
    """Split a path into maximal m-blocks plus one trailing block.

    The result always ends with the trailing block, which is empty when the
    length is an exact multiple of m.
    """
    if m < 1:
        raise ValueError("block length must be at least 1")
    if len(path) < m:
        raise ValueError("path shorter than the block length")
    blocks: list[Path] = []
    ts = path.transitions
    full = len(ts) // m
    for b in range(full):
        seg = ts[b * m:(b + 1) * m]
        blocks.append(Path(seg[0][0], seg))
    blocks.append(Path(blocks[-1].end, ts[full * m:]))
    return blocks


def encode_m_path(code: Code, path: Path) -> Word:
    """Pair a path's letters with the leading digits of its origin's codeword.

    A full m-block carries the whole codeword; a shorter trailing block
    carries only as many digits as it has letters.  The empty path encodes
    to the empty word.
    """
    if len(path) > code.m:
        raise ValueError(f"path longer than the block length {code.m}")
    codeword = code.codewords[path.origin]
    return tuple(pair_symbol(a, codeword[i]) for i, (_, a, _) in enumerate(path.transitions))


def _encode_blocks(code: Code, path: Path) -> Word:
    """Block-wise encoding of an arbitrary path (definitional reference)."""
    if len(path) <= code.m:
        return encode_m_path(code, path)
    out: list[str] = []
    for block in canonical_decomposition(path, code.m):
        out.extend(encode_m_path(code, block))
    return tuple(out)


def _context_automaton(m: Nfa, code: Code):
    """Automaton emitting the letter-digit stream of block-encoded runs.

    Contexts are (current state, block origin, offset into the block);
    block boundaries roll the origin over to the state just entered.  Only
    contexts reachable from block starts exist.  Symbols are indices into
    the letter-major local alphabet.
    """
    blen = code.m
    h = code.h
    digit_index = {d: i for i, d in enumerate(code.digits)}
    cw = [tuple(digit_index[d] for d in w) for w in code.codewords]

    keys: list[tuple[int, int, int]] = []
    ids: dict[tuple[int, int, int], int] = {}

    def ctx(key: tuple[int, int, int]) -> int:
        if key not in ids:
            ids[key] = len(keys)
            keys.append(key)
        return ids[key]

    for q in range(m.n):
        ctx((q, q, 0))
    fwd: list[list[tuple[int, int]]] = []
    i = 0
    while i < len(keys):
        state, origin, offset = keys[i]
        digit = cw[origin][offset]
        edges: list[tuple[int, int]] = []
        for a_idx, a in enumerate(m.alphabet):
            sym = a_idx * h + digit
            for dst in m.step(state, a):
                target = (dst, origin, offset + 1) if offset + 1 < blen else (dst, dst, 0)
                edges.append((sym, ctx(target)))
        fwd.append(edges)
        i += 1
    return keys, ids, fwd


def _forward_words(fwd: list[list[tuple[int, int]]], starts: Iterable[int],
                   steps: int, cap: int) -> dict[bytes, set[int]]:
    """All ``steps``-symbol words readable from ``starts``; maps each word
    to the set of end contexts."""
    frontier: dict[bytes, set[int]] = {b"": set(starts)}
    for _ in range(steps):
        nxt: dict[bytes, set[int]] = {}
        for w, states in frontier.items():
            for st in states:
                for sym, dst in fwd[st]:
                    key = w + bytes((sym,))
                    bucket = nxt.get(key)
                    if bucket is None:
                        nxt[key] = {dst}
                    else:
                        bucket.add(dst)
        if len(nxt) > cap:
            raise CapacityError(f"window set exceeds cap of {cap}: {len(nxt)} prefixes")
        frontier = nxt
    return frontier


def _backward_words(rev: list[list[tuple[int, int]]], ends: Iterable[int],
                    steps: int, cap: int) -> dict[bytes, set[int]]:
    """All ``steps``-symbol words whose forward read ends in ``ends``; maps
    each word to the set of possible start contexts."""
    frontier: dict[bytes, set[int]] = {b"": set(ends)}
    for _ in range(steps):
        nxt: dict[bytes, set[int]] = {}
        for w, states in frontier.items():
            for st in states:
                for sym, src in rev[st]:
                    key = bytes((sym,)) + w
                    bucket = nxt.get(key)
                    if bucket is None:
                        nxt[key] = {src}
                    else:
                        bucket.add(src)
        if len(nxt) > cap:
            raise CapacityError(f"window set exceeds cap of {cap}: {len(nxt)} suffixes")
        frontier = nxt
    return frontier


def _states_with_incoming_block(m: Nfa, blen: int) -> set[int]:
    """States at the end of at least one path of exactly ``blen`` transitions."""
    reach = {dst for _, _, dst in m.transitions}
    for _ in range(blen - 1):
        reach = {dst for src, _, dst in m.transitions if src in reach}
    return reach


def medvedev_main(m: Nfa, h: int, *, set_cap: int = DEFAULT_SET_CAP,
                  word_cap: int = DEFAULT_WORD_CAP) -> Decomposition:
    """Width-2m decomposition over letter-digit pairs at alphabetic ratio h.

    Prefixes come from double-block encodings anchored at the initial
    state's codeword; factors are all double-block windows of triple-block
    encodings; suffixes are windows of runs that end in a final state
    part-way through a block.  Source words shorter than 3m are carried by
    the residual, so the short-word set stays empty.  The window sets are
    swept out of a context automaton with per-prefix deduplication rather
    than by materialising path triples.
    """
    _require_total(m)
    if m.n < 2:
        raise ValueError("construction requires at least 2 states")
    code = build_code(m.n, h)
    blen = code.m
    width = 2 * blen
    if len(m.alphabet) * h > 256:
        raise CapacityError("local alphabet too large for the window sweep")
    symbols = tuple(pair_symbol(a, d) for a in m.alphabet for d in code.digits)

    keys, ids, fwd = _context_automaton(m, code)
    if len(keys) > set_cap:
        raise CapacityError(f"context automaton exceeds cap of {set_cap}: {len(keys)}")
    rev: list[list[tuple[int, int]]] = [[] for _ in keys]
    for src, edges in enumerate(fwd):
        for sym, dst in edges:
            rev[dst].append((sym, src))

    def to_words(byte_words: Iterable[bytes]) -> tuple[Word, ...]:
        return tuple(tuple(symbols[b] for b in bw) for bw in byte_words)

    prefixes = to_words(
        _forward_words(fwd, [ids[(m.initial, m.initial, 0)]], width - 1, set_cap))
    factors = to_words(_forward_words(fwd, range(len(keys)), width, set_cap))

    ends = [i for i, (state, _, _) in enumerate(keys) if state in m.finals]
    incoming = _states_with_incoming_block(m, blen)

    def admissible(idx: int) -> bool:
        state, _, offset = keys[idx]
        return offset >= 1 or state in incoming

    back = _backward_words(rev, ends, width - 1, set_cap)
    suffixes = to_words(w for w, starts in back.items()
                        if any(admissible(i) for i in starts))

    spec = SltSpec(width=width, alphabet=symbols, prefixes=prefixes,
                   suffixes=suffixes, factors=factors, short_words=())
    pi = Homomorphism(tuple((pair_symbol(a, d), a)
                            for a in m.alphabet for d in code.digits))
    residual = tuple(enumerate_language(m, 3 * blen - 1, cap=word_cap))
    return Decomposition(kind=MAIN, slt=spec, pi=pi, residual=residual, h=h, m=blen,
                         source_fingerprint=nfa_fingerprint(m))


def _reference_main_sets(m: Nfa, code: Code, cap: int = DEFAULT_WORD_CAP):
    """Window sets by brute-force enumeration of block triples.

    Definitional oracle for the swept construction; feasible only on small
    machines.  Returns (prefixes, suffixes, factors) as sets of words.
    """
    _require_total(m)
    blen = code.m
    width = 2 * blen
    prefixes: set[Word] = set()
    suffixes: set[Word] = set()
    factors: set[Word] = set()
    for path in enumerate_m_paths(m, m.initial, 2 * blen, cap=cap):
        prefixes.add(_encode_blocks(code, path)[:width - 1])
    for origin in range(m.n):
        for path in enumerate_m_paths(m, origin, 3 * blen, cap=cap):
            z = _encode_blocks(code, path)
            factors.update(z[i:i + width] for i in range(len(z) - width + 1))
        for tail in range(blen):
            for path in enumerate_m_paths(m, origin, 2 * blen + tail, cap=cap):
                if path.end in m.finals:
                    suffixes.add(_encode_blocks(code, path)[-(width - 1):])
    return prefixes, suffixes, factors


def _find_path(m: Nfa, word: Word) -> Path:
    """Deterministic successful path labelled by ``word``: at each step the
    least viable successor in canonical transition order is taken."""
    viable: list[set[int]] = [set(m.finals)]
    by_letter: dict[str, list[tuple[int, int]]] = {}
    for src, a, dst in m.transitions:
        by_letter.setdefault(a, []).append((src, dst))
    for a in reversed(word):
        ahead = viable[-1]
        viable.append({src for src, dst in by_letter.get(a, ()) if dst in ahead})
    viable.reverse()
    if m.initial not in viable[0]:
        raise ValueError("word is not in the machine's language")
    current = m.initial
    transitions: list[tuple[int, str, int]] = []
    for t, a in enumerate(word):
        nxt = min(q for q in m.step(current, a) if q in viable[t + 1])
        transitions.append((current, a, nxt))
        current = nxt
    return Path(m.initial, tuple(transitions))


def encode_word(nfa: Nfa, dec: Decomposition, word: Sequence[str]) -> Optional[Word]:
    """Encode a member of the machine's language into the local language.

    Words shorter than 3m are residual-handled and yield ``None``.  The
    machine is totalized first so block encodings line up with the build.
    """
    if dec.kind != MAIN:
        raise ValueError("word encoding requires a main-kind decomposition")
    total = totalize(nfa)
    word = tuple(word)
    if not accepts(total, word):
        raise ValueError("word is not in the machine's language")
    assert dec.m is not None and dec.h is not None
    if len(word) < 3 * dec.m:
        return None
    code = build_code(total.n, dec.h)
    return _encode_blocks(code, _find_path(total, word))


def decode_word(dec: Decomposition, word: Sequence[str]) -> Word:
    """Project a local word back to source letters, symbol by symbol."""
    return dec.pi(word)


_SECTIONS = ("I", "T", "F", "SHORT", "RESIDUAL")


def _check_token(token: str) -> None:
    if not token or any(c in token for c in ". \t#'\""):
        raise ValueError(f"token not serializable: {token!r}")


def serialize_decomposition(dec: Decomposition) -> str:
    """Canonical text form; parse followed by serialize is byte-identical."""
    lines = [f"kind {dec.kind}"]
    if dec.source_fingerprint:
        lines.append(f"source {dec.source_fingerprint}")
    if dec.kind == MAIN:
        lines.append(f"h {dec.h}")
        lines.append(f"m {dec.m}")
    lines.append(f"k {dec.slt.width}")
    for sym in dec.slt.alphabet:
        _check_token(sym)
        letter = dec.pi.letter(sym)
        _check_token(letter)
        lines.append(f"symbol {sym} -> {letter}")
    for header, words in (("I", dec.slt.prefixes), ("T", dec.slt.suffixes),
                          ("F", dec.slt.factors), ("SHORT", dec.slt.short_words),
                          ("RESIDUAL", dec.residual)):
        lines.append(header)
        lines.extend(format_word(w) for w in words)
    return "\n".join(lines) + "\n"


def parse_decomposition(text: str) -> Decomposition:
    """Parse the section-headed decomposition file format."""
    kind: Optional[str] = None
    source = ""
    numbers: dict[str, int] = {}
    symbol_pairs: list[tuple[str, str]] = []
    sections: dict[str, list[Word]] = {name: [] for name in _SECTIONS}
    current: Optional[str] = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line in _SECTIONS:
            current = line
            continue
        if current is not None:
            sections[current].append(parse_word(line))
            continue
        tokens = line.split()
        keyword = tokens[0]
        if keyword == "kind":
            if kind is not None or len(tokens) != 2:
                raise ParseError("bad or duplicate 'kind' line", lineno)
            kind = tokens[1]
        elif keyword == "source":
            if len(tokens) != 2:
                raise ParseError("usage: source <fingerprint>", lineno)
            source = tokens[1]
        elif keyword in ("h", "m", "k"):
            if keyword in numbers or len(tokens) != 2:
                raise ParseError(f"bad or duplicate {keyword!r} line", lineno)
            try:
                numbers[keyword] = int(tokens[1])
            except ValueError:
                raise ParseError(f"expected integer after {keyword!r}", lineno) from None
        elif keyword == "symbol":
            if len(tokens) != 4 or tokens[2] != "->":
                raise ParseError("usage: symbol <token> -> <letter>", lineno)
            symbol_pairs.append((tokens[1], tokens[3]))
        else:
            raise ParseError(f"unknown directive: {keyword!r}", lineno)

    if kind is None:
        raise ParseError("missing 'kind' line")
    if "k" not in numbers:
        raise ParseError("missing 'k' line")
    if not symbol_pairs:
        raise ParseError("missing 'symbol' lines")
    spec = SltSpec(width=numbers["k"], alphabet=tuple(s for s, _ in symbol_pairs),
                   prefixes=tuple(sections["I"]), suffixes=tuple(sections["T"]),
                   factors=tuple(sections["F"]), short_words=tuple(sections["SHORT"]))
    return Decomposition(kind=kind, slt=spec, pi=Homomorphism(tuple(symbol_pairs)),
                         residual=tuple(sections["RESIDUAL"]),
                         h=numbers.get("h"), m=numbers.get("m"),
                         source_fingerprint=source)
