"""Verification of decompositions, numeric tables, and the refuter that
demonstrates why fewer than 2|A| local symbols cannot work.

Nothing here trusts a decomposition: the claimed equality between the
projected slt language (plus residual) and the machine's language is
re-derived either exactly, via automata equivalence, or up to a length
horizon, via pruned enumeration.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path as FsPath
from typing import Optional, Sequence

from .automata import (
    DEFAULT_SET_CAP,
    DEFAULT_STATE_CAP,
    DEFAULT_WORD_CAP,
    CapacityError,
    Nfa,
    Word,
    accepts,
    enumerate_language,
    nfa_equivalent,
    parse_nfa,
    relabel,
    totalize,
    union_nfa,
    word_set_nfa,
)
from .codes import (
    build_code,
    choose_m,
    closed_form_m,
    f_value,
    g_value,
    g_value_printed,
    verify_factor_decodable,
)
from .construction import (
    MAIN,
    WIDTH2,
    Decomposition,
    medvedev_main,
    medvedev_width2,
    parse_decomposition,
)
from .slt import slt_membership, slt_to_nfa, window_ops


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of checking a decomposition against its source machine.

    A failing verdict always carries at least one counterexample: a source
    word that is missing from the claimed language, or one the claim
    produces in excess (with a local-side witness when it came through the
    slt language).
    """

    mode: str
    horizon: Optional[int]
    ok: bool
    missing: Optional[Word] = None
    extra: Optional[Word] = None
    extra_local: Optional[Word] = None
    set_sizes: dict[str, int] = field(default_factory=dict)
    elapsed: float = 0.0
    notice: Optional[str] = None


def default_horizon(dec: Decomposition) -> int:
    """Bounded-mode horizon: past the residual and a full window period."""
    if dec.kind == MAIN:
        assert dec.m is not None
        return max(3 * dec.m + 6, 2 * dec.k + 4)
    return 2 * dec.k + 4


def _set_sizes(dec: Decomposition) -> dict[str, int]:
    return {"I": len(dec.slt.prefixes), "T": len(dec.slt.suffixes),
            "F": len(dec.slt.factors), "short": len(dec.slt.short_words),
            "residual": len(dec.residual)}


def verify_decomposition(m: Nfa, dec: Decomposition, mode: str = "bounded",
                         horizon: Optional[int] = None,
                         word_cap: int = DEFAULT_WORD_CAP,
                         state_cap: int = DEFAULT_STATE_CAP) -> VerificationReport:
    """Check that the projected slt language plus residual equals L(m).

    Bounded mode compares enumerations up to the horizon and reports the
    shortest witness on each failing side.  Exact mode projects the
    compiled slt automaton through the homomorphism, adds the residual as
    a finite branch, and decides equivalence outright; if the state cap is
    hit it downgrades itself to bounded mode with a notice.
    """
    t0 = time.perf_counter()
    sizes = _set_sizes(dec)
    notice = None
    if mode == "exact":
        try:
            candidate = relabel(slt_to_nfa(dec.slt), dict(dec.pi.pairs), m.alphabet)
            if dec.residual:
                candidate = union_nfa(candidate, word_set_nfa(dec.residual, m.alphabet))
            verdict = nfa_equivalent(candidate, m, mode="exact", state_cap=state_cap)
            missing = extra = extra_local = None
            if not verdict.equivalent:
                w = verdict.witness
                assert w is not None
                if accepts(m, w):
                    missing = w
                else:
                    extra = w
                    extra_local = _local_preimage(dec, w, word_cap)
            return VerificationReport(mode="exact", horizon=None, ok=verdict.equivalent,
                                      missing=missing, extra=extra,
                                      extra_local=extra_local, set_sizes=sizes,
                                      elapsed=time.perf_counter() - t0)
        except CapacityError as exc:
            notice = f"exact mode hit a resource cap ({exc}); fell back to bounded"
    elif mode != "bounded":
        raise ValueError(f"unknown mode: {mode!r}")

    h = horizon if horizon is not None else default_horizon(dec)
    want = set(enumerate_language(m, h, cap=word_cap))
    image: dict[Word, Word] = {}
    for z in enumerate_language(slt_to_nfa(dec.slt), h, cap=word_cap):
        image.setdefault(dec.pi(z), z)
    have = set(image) | set(dec.residual)

    missing = extra = extra_local = None
    missing_set = want - have
    extra_set = have - want
    if missing_set:
        missing = min(missing_set, key=m.word_key)
    if extra_set:
        extra = min(extra_set, key=m.word_key)
        extra_local = image.get(extra)
    return VerificationReport(mode="bounded", horizon=h,
                              ok=not missing_set and not extra_set,
                              missing=missing, extra=extra, extra_local=extra_local,
                              set_sizes=sizes, elapsed=time.perf_counter() - t0,
                              notice=notice)


def _local_preimage(dec: Decomposition, word: Word,
                    word_cap: int) -> Optional[Word]:
    """Some local word projecting onto ``word``, if the slt side has one."""
    for z in enumerate_language(slt_to_nfa(dec.slt), len(word), cap=word_cap):
        if len(z) == len(word) and dec.pi(z) == word:
            return z
    return None


@dataclass(frozen=True)
class RefutationResult:
    """Outcome of the small-alphabet refutation procedure."""

    letter: Optional[str]
    symbol: Optional[str]
    indistinguishable_pair: Optional[tuple[Word, Word]]
    witness: Optional[Word]
    bound: int

    @property
    def found(self) -> bool:
        return self.witness is not None


def refute_small_ratio(dec: Decomposition, alphabet: Sequence[str]) -> RefutationResult:
    """Refute a claimed decomposition of the even-doubles language at a
    local alphabet smaller than twice the source alphabet.

    The target language is the union over letters a of (aa)+.  Some letter
    has at most one local preimage b; then b-to-the-2k and b-to-the-(2k+1)
    cannot be told apart by any width-k window test, so the claim must
    either produce an odd-length word or miss an even-length one.  The
    search is bounded by the residual length plus one window period and is
    honest about that bound.
    """
    letters = tuple(alphabet)
    local = dec.slt.alphabet
    if len(local) >= 2 * len(letters):
        raise ValueError(
            "refutation requires fewer than 2|A| local symbols "
            f"(got |B|={len(local)}, |A|={len(letters)})")
    preimages: dict[str, list[str]] = {a: [] for a in letters}
    for sym in local:
        target = dec.pi.letter(sym)
        if target in preimages:
            preimages[target].append(sym)
    k = dec.slt.width
    max_residual = max((len(w) for w in dec.residual), default=0)
    bound = max_residual + 2 * k + 2
    residual_set = set(dec.residual)

    for a in letters:
        syms = preimages[a]
        if len(syms) > 1:
            continue
        b = syms[0] if syms else None
        pair = None
        if b is not None:
            even, odd = (b,) * (2 * k), (b,) * (2 * k + 1)
            if (window_ops(even, k - 1)[:2] != window_ops(odd, k - 1)[:2]
                    or window_ops(even, k)[2] != window_ops(odd, k)[2]):
                raise AssertionError("window triples of b^2k and b^(2k+1) must agree")
            pair = (even, odd)
        for t in range(1, bound + 1):
            claimed = ((b is not None and slt_membership(dec.slt, (b,) * t))
                       or (a,) * t in residual_set)
            if claimed != (t % 2 == 0):
                return RefutationResult(letter=a, symbol=b, indistinguishable_pair=pair,
                                        witness=(a,) * t, bound=bound)
    return RefutationResult(letter=None, symbol=None, indistinguishable_pair=None,
                            witness=None, bound=bound)


@dataclass(frozen=True)
class FgValues:
    f: float
    g_printed: float
    g_reconciled: float


def fg_values(h: int) -> FgValues:
    """The growth-rate coefficient and both additive-constant readings."""
    return FgValues(f=f_value(h), g_printed=g_value_printed(h), g_reconciled=g_value(h))


@dataclass(frozen=True)
class WidthRow:
    h: int
    n: int
    closed_width: int
    exact_width: int


def width_table(h_values: Sequence[int], n_values: Sequence[int]) -> list[WidthRow]:
    """Window widths 2m for each (h, n): closed-form block length versus the
    exact recurrence-based one.  The exact column never exceeds the
    closed-form column."""
    rows = []
    for h in h_values:
        for n in n_values:
            rows.append(WidthRow(h=h, n=n, closed_width=2 * closed_form_m(n, h),
                                 exact_width=2 * choose_m(n, h)))
    return rows


@dataclass(frozen=True)
class CorpusConfig:
    directory: str
    ratios: tuple[int, ...] = (2, 3)
    horizon: Optional[int] = None
    mode: str = "bounded"
    check_codes: bool = True
    jobs: int = 1
    set_cap: int = DEFAULT_SET_CAP
    word_cap: int = DEFAULT_WORD_CAP


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    task: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class CorpusReport:
    entries: tuple[CorpusEntry, ...]

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def summary_lines(self) -> list[str]:
        lines = []
        for e in self.entries:
            line = f"file={e.name} task={e.task} result={'pass' if e.ok else 'FAIL'}"
            if e.detail:
                line += f" {e.detail}"
            lines.append(line)
        failures = sum(1 for e in self.entries if not e.ok)
        lines.append(f"tasks={len(self.entries)} failures={failures}")
        return lines


def _witness_detail(report: VerificationReport) -> str:
    parts = [f"mode={report.mode}"]
    if report.horizon is not None:
        parts.append(f"horizon={report.horizon}")
    if report.missing is not None:
        parts.append("missing=" + ".".join(report.missing))
    if report.extra is not None:
        parts.append("extra=" + ".".join(report.extra))
    return " ".join(parts)


def _run_corpus_file(nfa_path: str, dec_paths: tuple[str, ...],
                     config: CorpusConfig) -> list[CorpusEntry]:
    name = FsPath(nfa_path).name
    entries: list[CorpusEntry] = []
    try:
        machine = parse_nfa(FsPath(nfa_path).read_text())
    except (OSError, ValueError) as exc:
        return [CorpusEntry(name, "parse", False, f"error={exc}")]
    total = totalize(machine)

    try:
        report = verify_decomposition(machine, medvedev_width2(total), mode="exact",
                                      word_cap=config.word_cap)
        entries.append(CorpusEntry(name, "width2", report.ok, _witness_detail(report)))
    except (ValueError, CapacityError) as exc:
        entries.append(CorpusEntry(name, "width2", False, f"error={exc}"))

    for h in config.ratios:
        task = f"main h={h}"
        try:
            dec = medvedev_main(total, h, set_cap=config.set_cap,
                                word_cap=config.word_cap)
            report = verify_decomposition(machine, dec, mode=config.mode,
                                          horizon=config.horizon,
                                          word_cap=config.word_cap)
            entries.append(CorpusEntry(name, task, report.ok, _witness_detail(report)))
        except (ValueError, CapacityError) as exc:
            entries.append(CorpusEntry(name, task, False, f"error={exc}"))
        if config.check_codes:
            try:
                check = verify_factor_decodable(build_code(total.n, h))
                detail = f"windows={check.windows_checked}"
                if check.witness is not None:
                    detail += " witness=" + ".".join(check.witness)
                entries.append(CorpusEntry(name, f"code h={h}", check.ok, detail))
            except (ValueError, CapacityError) as exc:
                entries.append(CorpusEntry(name, f"code h={h}", False, f"error={exc}"))

    for dec_path in dec_paths:
        dec_name = FsPath(dec_path).name
        task = f"fixture {dec_name}"
        try:
            dec = parse_decomposition(FsPath(dec_path).read_text())
            report = verify_decomposition(machine, dec, mode=config.mode,
                                          horizon=config.horizon,
                                          word_cap=config.word_cap)
            entries.append(CorpusEntry(name, task, report.ok, _witness_detail(report)))
        except (OSError, ValueError, CapacityError) as exc:
            entries.append(CorpusEntry(name, task, False, f"error={exc}"))
    return entries


def run_corpus(config: CorpusConfig) -> CorpusReport:
    """Build and verify both constructions for every machine in a directory.

    Picks up ``<stem>.nfa`` machine files plus any ``<stem>[.tag].dec``
    decomposition fixtures, which are verified against their machine.
    Per-file problems are reported as failing entries without aborting the
    run; entry order is canonical by file name regardless of scheduling.
    """
    directory = FsPath(config.directory)
    nfa_files = sorted(directory.glob("*.nfa"))
    fixtures: dict[str, list[str]] = {}
    for dec_file in sorted(directory.glob("*.dec")):
        fixtures.setdefault(dec_file.name.split(".")[0], []).append(str(dec_file))

    jobs = [(str(p), tuple(fixtures.get(p.name.split(".")[0], ())), config)
            for p in nfa_files]
    if config.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_run_corpus_file_star, jobs))
    else:
        results = [_run_corpus_file_star(job) for job in jobs]
    entries = [entry for batch in results for entry in batch]
    return CorpusReport(entries=tuple(entries))


def _run_corpus_file_star(job: tuple[str, tuple[str, ...], CorpusConfig]) -> list[CorpusEntry]:
    return _run_corpus_file(*job)
