"""sltkit: homomorphic characterisations of regular languages by strictly
locally testable languages over small local alphabets."""

from importlib import resources

from .automata import (
    CapacityError,
    EquivalenceResult,
    Nfa,
    ParseError,
    Path,
    Word,
    accepts,
    enumerate_language,
    enumerate_m_paths,
    format_word,
    nfa_equivalent,
    parse_nfa,
    parse_word,
    relabel,
    totalize,
    union_nfa,
    word_set_nfa,
)
from .codes import (
    Code,
    CodeCheck,
    build_code,
    choose_m,
    closed_form_m,
    count_S,
    enumerate_S,
    f_value,
    factor_decode,
    g_value,
    g_value_printed,
    verify_factor_decodable,
)
from .construction import (
    Decomposition,
    Homomorphism,
    canonical_decomposition,
    decode_word,
    encode_m_path,
    encode_path_width2,
    encode_word,
    medvedev_main,
    medvedev_width2,
    nfa_fingerprint,
    parse_decomposition,
    serialize_decomposition,
)
from .slt import (
    MinWidthResult,
    SltSpec,
    StreamRecognizer,
    infer_slt,
    make_stream_recognizer,
    min_slt_width,
    slt_membership,
    slt_to_nfa,
    subword,
    window_ops,
)
from .verification import (
    CorpusConfig,
    CorpusEntry,
    CorpusReport,
    FgValues,
    RefutationResult,
    VerificationReport,
    WidthRow,
    default_horizon,
    fg_values,
    refute_small_ratio,
    run_corpus,
    verify_decomposition,
    width_table,
)

__version__ = "0.1.0"


def corpus_dir() -> str:
    """Directory holding the bundled example machines."""
    return str(resources.files(__name__) / "corpus")
