"""Fixed-length state codes whose windows decode to a unique state.

Codewords are length-m digit words whose single occurrence of "00" is the
final two digits.  Any window of 2m-1 consecutive digits taken from a
stream of concatenated codewords then contains exactly one codeword as a
factor, which identifies one state and its alignment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .automata import DEFAULT_SET_CAP, CapacityError, Word


def _check_h(h: int) -> None:
    if h < 2:
        raise ValueError("digit alphabet size must be at least 2")


@dataclass(frozen=True)
class Code:
    """An injective state -> digit-word mapping with block length ``m``.

    Construction checks shape and injectivity only; the window-decoding
    discipline of generated codes is checked behaviourally by
    :func:`verify_factor_decodable`, so deliberately broken codes can be
    built for testing.
    """

    h: int
    m: int
    digits: tuple[str, ...]
    codewords: tuple[Word, ...]
    _state_of: dict[Word, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        _check_h(self.h)
        if self.m < 2:
            raise ValueError("block length must be at least 2")
        if len(self.digits) != self.h or len(set(self.digits)) != self.h:
            raise ValueError("digit alphabet must have h distinct digits")
        if self.digits[0] != "0":
            raise ValueError("digit alphabet must start with '0'")
        digit_set = set(self.digits)
        for w in self.codewords:
            if len(w) != self.m or any(d not in digit_set for d in w):
                raise ValueError("codewords must be length-m words over the digits")
        if len(set(self.codewords)) != len(self.codewords):
            raise ValueError("codeword mapping must be injective")
        object.__setattr__(self, "codewords", tuple(tuple(w) for w in self.codewords))
        object.__setattr__(self, "_state_of",
                           {w: q for q, w in enumerate(self.codewords)})

    @property
    def n(self) -> int:
        return len(self.codewords)


def count_S(h: int, m: int) -> int:
    """Exact number of length-m digit words whose only "00" is the suffix.

    Satisfies count(2) = 1, count(3) = h-1 and
    count(m) = (h-1) * (count(m-1) + count(m-2)); plain Fibonacci for h=2.
    Exact arbitrary-precision integers throughout.
    """
    _check_h(h)
    if m < 2:
        raise ValueError("block length must be at least 2")
    if m == 2:
        return 1
    two_back, one_back = 1, h - 1  # counts for lengths 2 and 3
    for _ in range(m - 3):
        two_back, one_back = one_back, (h - 1) * (one_back + two_back)
    return one_back


def enumerate_S(h: int, m: int, cap: int = DEFAULT_SET_CAP) -> list[Word]:
    """All length-m digit words whose only "00" occurrence is the suffix,
    in lexicographic digit order."""
    _check_h(h)
    if m < 2:
        raise ValueError("block length must be at least 2")
    if count_S(h, m) > cap:
        raise CapacityError(f"enumeration of {count_S(h, m)} words exceeds cap of {cap}")
    nonzero = range(1, h)
    by_len: dict[int, list[tuple[int, ...]]] = {2: [(0, 0)], 3: [(d, 0, 0) for d in nonzero]}
    for length in range(4, m + 1):
        by_len[length] = ([(d,) + y for d in nonzero for y in by_len[length - 1]]
                          + [(0, d) + y for d in nonzero for y in by_len[length - 2]])
    return [tuple(str(d) for d in w) for w in sorted(by_len[m])]


def choose_m(n: int, h: int) -> int:
    """Smallest block length whose codeword pool has at least n words."""
    if n < 2:
        raise ValueError("state count must be at least 2")
    _check_h(h)
    m = 2
    while count_S(h, m) < n:
        m += 1
    return m


def f_value(h: int) -> float:
    """Reciprocal log of the pool growth rate: block length grows like
    f(h) * lg2(n)."""
    _check_h(h)
    return 1.0 / (math.log2(h - 1 + math.sqrt((h - 1) * (h + 3))) - 1.0)


def g_value(h: int) -> float:
    """Additive constant such that ceil(g(h) + f(h) * lg2(n)) digits always
    suffice (reconciled form; see also :func:`g_value_printed`)."""
    _check_h(h)
    return 1.0 + f_value(h) * (1.0 + 0.5 * (math.log2(h - 1) + math.log2(h + 3)))


def g_value_printed(h: int) -> float:
    """Alternative reading of the additive constant, kept for comparison
    output only; it disagrees with the reference value table, which
    matches :func:`g_value`."""
    _check_h(h)
    return 1.0 + (f_value(h) / 2.0) * (math.log2(h - 1) + math.log2(h + 3))


def closed_form_m(n: int, h: int) -> int:
    """Closed-form sufficient block length ceil(g(h) + f(h) * lg2(n)).

    Always at least :func:`choose_m`; the exact recurrence is what code
    construction actually uses.
    """
    if n < 2:
        raise ValueError("state count must be at least 2")
    return math.ceil(g_value(h) + f_value(h) * math.log2(n))


def build_code(n: int, h: int, cap: int = DEFAULT_SET_CAP) -> Code:
    """Deterministic code for n states: the lexicographically first n words
    of the pool at the smallest sufficient block length."""
    if n < 2:
        raise ValueError("state count must be at least 2")
    _check_h(h)
    m = choose_m(n, h)
    words = enumerate_S(h, m, cap=cap)[:n]
    return Code(h=h, m=m, digits=tuple(str(d) for d in range(h)), codewords=tuple(words))


def factor_decode(code: Code, window: Word) -> Optional[tuple[int, int]]:
    """Locate the unique codeword inside a (2m-1)-digit window.

    Returns ``(position, state)`` with a 1-based position in 1..m, or
    ``None`` when no position or more than one position holds a codeword
    (the latter signals a broken code).
    """
    window = tuple(window)
    m = code.m
    if len(window) != 2 * m - 1:
        raise ValueError(f"window must have length {2 * m - 1}, got {len(window)}")
    digit_set = set(code.digits)
    for d in window:
        if d not in digit_set:
            raise ValueError(f"unknown digit: {d!r}")
    matches = [(j + 1, code._state_of[window[j:j + m]])
               for j in range(m) if window[j:j + m] in code._state_of]
    if len(matches) == 1:
        return matches[0]
    return None


@dataclass(frozen=True)
class CodeCheck:
    ok: bool
    witness: Optional[Word]
    windows_checked: int


def verify_factor_decodable(code: Code, cap: int = DEFAULT_SET_CAP) -> CodeCheck:
    """Sweep every (2m-1)-window over all codeword triples.

    Windows of that length span at most three codewords, so triples cover
    every window of an arbitrarily long codeword stream.  Distinct window
    contents are checked once against every alignment that produces them:
    the check passes iff each window has exactly one codeword occurrence
    and it sits where the true alignment put it.
    """
    m = code.m
    cws = code.codewords
    prefixes = {length: sorted({w[:length] for w in cws}) for length in range(m)}
    suffixes = {length: sorted({w[-length:] for w in cws}) for length in range(1, m)}

    expected: dict[Word, set[tuple[int, int]]] = {}

    def add(window: Word, pos: int, state: int) -> None:
        expected.setdefault(window, set()).add((pos, state))
        if len(expected) > cap:
            raise CapacityError(f"window sweep exceeds cap of {cap} distinct windows")

    # window aligned with the start of the first codeword
    for state, w in enumerate(cws):
        for pre in prefixes[m - 1]:
            add(w + pre, 1, state)
    # window starting offset positions into the first codeword: it shows a
    # codeword suffix, a full middle codeword, then a codeword prefix
    for offset in range(1, m):
        for suf in suffixes[m - offset]:
            for state in range(len(cws)):
                middle = cws[state]
                for pre in prefixes[offset - 1]:
                    add(suf + middle + pre, m + 1 - offset, state)

    state_of = code._state_of
    for window, exp in expected.items():
        matches = [(j + 1, state_of[window[j:j + m]])
                   for j in range(m) if window[j:j + m] in state_of]
        if len(matches) != 1 or set(matches) != exp:
            return CodeCheck(False, window, len(expected))
    return CodeCheck(True, None, len(expected))
