import pathlib

import pytest

import sltkit as sk

CORPUS_NAMES = ("abbplus", "abplus", "aplus", "evens", "needs_sink", "nondet")


def corpus_text(name: str) -> str:
    return (pathlib.Path(sk.corpus_dir()) / f"{name}.nfa").read_text()


def lh_nfa(h: int) -> sk.Nfa:
    """Machine for one or more repetitions of a followed by h b's."""
    transitions = ([(0, "a", 1)]
                   + [(i, "b", i + 1) for i in range(1, h + 1)]
                   + [(h + 1, "a", 1)])
    return sk.Nfa(n=h + 2, alphabet=("a", "b"), transitions=tuple(transitions),
                  initial=0, finals=frozenset({h + 1}))


@pytest.fixture(scope="session")
def machines() -> dict[str, sk.Nfa]:
    return {name: sk.parse_nfa(corpus_text(name)) for name in CORPUS_NAMES}


@pytest.fixture(scope="session")
def build_main(machines):
    """Session cache of main-construction decompositions per (machine, ratio)."""
    cache: dict[tuple[str, int], sk.Decomposition] = {}

    def _build(name: str, h: int) -> sk.Decomposition:
        if (name, h) not in cache:
            cache[(name, h)] = sk.medvedev_main(sk.totalize(machines[name]), h)
        return cache[(name, h)]

    return _build
