"""String similarity primitives: phonetic, character, token, and
compression based. Each function documents its output range.

The character-level dynamic programs (Damerau-Levenshtein, Jaro-Winkler,
repeated longest-common-substring) run on the kernel backend selected in
`profilematch._kernels`.
"""

from __future__ import annotations

import math
import zlib
from collections import Counter
from typing import Iterable, Sequence

from profilematch import _kernels as kernels
from profilematch.errors import EncodingError

# zlib level is part of the feature definition: compression-based scores must
# be bit-stable across runs and platforms.
COMPRESSION_LEVEL = 6

LCS_MIN_COMMON = 2

_SOUNDEX_CODES = {}
for _letters, _digit in (
    ("BFPV", "1"),
    ("CGJKQSXZ", "2"),
    ("DT", "3"),
    ("L", "4"),
    ("MN", "5"),
    ("R", "6"),
):
    for _c in _letters:
        _SOUNDEX_CODES[_c] = _digit
_SOUNDEX_VOWELS = set("AEIOUY")
_SOUNDEX_TRANSPARENT = set("HW")


def soundex_encode(s: str) -> str:
    """American Soundex code: the first letter plus three digits.

    Adjacent letters with equal codes collapse (also across H/W); vowels
    separate. Non-letters are skipped. Raises EncodingError when the input
    contains no ASCII letter.
    """
    letters = [c for c in s.upper() if "A" <= c <= "Z"]
    if not letters:
        raise EncodingError(f"cannot soundex-encode {s!r}: no ASCII letter")
    first = letters[0]
    prev = _SOUNDEX_CODES.get(first)
    digits = []
    for c in letters[1:]:
        if c in _SOUNDEX_TRANSPARENT:
            continue
        if c in _SOUNDEX_VOWELS:
            prev = None
            continue
        code = _SOUNDEX_CODES[c]
        if code != prev:
            digits.append(code)
        prev = code
    return first + "".join(digits[:3]).ljust(3, "0")


def soundex_sim(a: str, b: str) -> float:
    """1.0 iff the two Soundex codes are equal, else 0.0."""
    return 1.0 if soundex_encode(a) == soundex_encode(b) else 0.0


def difference_sim(a: str, b: str) -> float:
    """Count of positions at which the two Soundex codes agree, divided by 4.

    Values lie in {0, 0.25, 0.5, 0.75, 1}.
    """
    ca = soundex_encode(a)
    cb = soundex_encode(b)
    same = sum(1 for x, y in zip(ca, cb) if x == y)
    return same / 4.0


def lcs_sim(a: str, b: str) -> float:
    """Repeatedly extract the longest common substring (length >= 2) from both
    strings; total removed length divided by the mean of the original lengths.

    Range [0, 1]; empty inputs give 0. Robust to swapped name parts.
    """
    if not a and not b:
        return 0.0
    total = kernels.lcs_total(a, b, LCS_MIN_COMMON)
    return total / ((len(a) + len(b)) / 2.0)


def _compressed_len(data: bytes) -> int:
    return len(zlib.compress(data, COMPRESSION_LEVEL))


def ncd_sim(a: str, b: str) -> float:
    """Compression similarity 1 - NCD(a, b), clamped to [0, 1].

    NCD = (C(ab) - min(C(a), C(b))) / max(C(a), C(b)) with C the zlib-
    compressed byte length at level 6. Both inputs empty gives 1.0.
    """
    if not a and not b:
        return 1.0
    ba = a.encode("utf-8")
    bb = b.encode("utf-8")
    ca = _compressed_len(ba)
    cb = _compressed_len(bb)
    cab = _compressed_len(ba + bb)
    ncd = (cab - min(ca, cb)) / max(ca, cb)
    return min(1.0, max(0.0, 1.0 - ncd))


def damerau_levenshtein(a: str, b: str) -> int:
    """Damerau-Levenshtein distance: inserts, deletes, substitutions, and
    transpositions of two adjacent characters as elementary operations."""
    return kernels.dl_distance(a, b)


def damerau_levenshtein_sim(a: str, b: str) -> float:
    """1 - DL(a, b) / max(len(a), len(b)); both empty gives 1.0. Range [0, 1]."""
    if not a and not b:
        return 1.0
    return 1.0 - kernels.dl_distance(a, b) / max(len(a), len(b))


def jaro_winkler_sim(a: str, b: str) -> float:
    """Jaro similarity with the Winkler bonus for up to four agreeing initial
    characters (scale 0.1). Range [0, 1]; both empty gives 1.0."""
    return kernels.jaro_winkler(a, b)


NGRAM_MODES = ("longer", "shorter", "average", "jaccard")


def _grams(s: str, n: int) -> set:
    if len(s) < n:
        return set()
    return {s[i : i + n] for i in range(len(s) - n + 1)}


def ngram_sim(a: str, b: str, n: int, mode: str = "longer") -> float:
    """Distinct n-gram overlap (no padding), range [0, 1].

    The default denominator is the gram count of the longer string; `shorter`
    (overlap coefficient), `average`, and `jaccard` (set union) are also
    supported. Both gram sets empty gives 1.0 for equal strings, else 0.0.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if mode not in NGRAM_MODES:
        raise ValueError(f"unknown n-gram mode {mode!r}")
    ga = _grams(a, n)
    gb = _grams(b, n)
    if not ga and not gb:
        return 1.0 if a == b else 0.0
    common = len(ga & gb)
    if mode == "longer":
        if len(a) != len(b):
            denom = len(ga) if len(a) > len(b) else len(gb)
        else:
            denom = max(len(ga), len(gb))
    elif mode == "shorter":
        if len(a) != len(b):
            denom = len(ga) if len(a) < len(b) else len(gb)
        else:
            denom = min(len(ga), len(gb))
    elif mode == "average":
        return common / ((len(ga) + len(gb)) / 2.0)
    else:
        denom = len(ga | gb)
    if denom == 0:
        return 0.0
    return common / denom


def vmn_sim(a: str, b: str) -> float:
    """Word-level name similarity for full and partial matches, tolerant of
    swapped name parts.

    Tokens are greedily aligned one-to-one by descending per-token
    Jaro-Winkler score (ties by token order); the aligned scores are summed
    and divided by the larger token count. Range [0, 1].
    """
    ta = a.split()
    tb = b.split()
    if not ta and not tb:
        return 1.0
    if not ta or not tb:
        return 0.0
    scored = []
    for i, x in enumerate(ta):
        for j, y in enumerate(tb):
            scored.append((-kernels.jaro_winkler(x, y), i, j))
    scored.sort()
    used_a = [False] * len(ta)
    used_b = [False] * len(tb)
    total = 0.0
    for neg, i, j in scored:
        if not used_a[i] and not used_b[j]:
            used_a[i] = True
            used_b[j] = True
            total += -neg
    return total / max(len(ta), len(tb))


def jaccard_tokens(a: str, b: str) -> float:
    """Ratio of shared tokens to the union of tokens; both empty gives 1.0."""
    sa = set(a.split())
    sb = set(b.split())
    if not sa and not sb:
        return 1.0
    return len(sa & sb) / len(sa | sb)


def cosine_tf(a: str, b: str) -> float:
    """Cosine of raw term-frequency vectors (TF only, no IDF, no stop words).

    Range [0, 1]; either vector zero gives 0.0.
    """
    ca = Counter(a.split())
    cb = Counter(b.split())
    if not ca or not cb:
        return 0.0
    dot = 0.0
    for term, count in ca.items():
        if term in cb:
            dot += count * cb[term]
    na = math.sqrt(sum(c * c for c in ca.values()))
    nb = math.sqrt(sum(c * c for c in cb.values()))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return min(1.0, dot / (na * nb))  # rounding can push identical vectors past 1


class IdfTable:
    """Immutable IDF lookup built over one corpus of documents.

    idf(term) = ln(N / (1 + df(term))) + 1, which stays positive even for
    terms present in every document and is defined for unseen terms.
    """

    def __init__(self, n_docs: int, df: dict[str, int]):
        if n_docs < 1:
            raise ValueError("IDF table needs a non-empty corpus")
        self.n_docs = n_docs
        self._df = dict(df)

    @classmethod
    def from_texts(cls, texts: Sequence[str]) -> "IdfTable":
        if len(texts) == 0:
            raise ValueError("IDF table needs a non-empty corpus")
        df: Counter = Counter()
        for text in texts:
            df.update(set(text.split()))
        return cls(len(texts), dict(df))

    def idf(self, term: str) -> float:
        return math.log(self.n_docs / (1 + self._df.get(term, 0))) + 1.0


def tfidf_cosine(query: str, doc: str, table: IdfTable) -> float:
    """Cosine of TFxIDF vectors under a prebuilt IDF table. Range [0, 1]."""
    cq = Counter(query.split())
    cd = Counter(doc.split())
    if not cq or not cd:
        return 0.0
    wq = {t: c * table.idf(t) for t, c in cq.items()}
    wd = {t: c * table.idf(t) for t, c in cd.items()}
    dot = sum(w * wd[t] for t, w in wq.items() if t in wd)
    nq = math.sqrt(sum(w * w for w in wq.values()))
    nd = math.sqrt(sum(w * w for w in wd.values()))
    if nq == 0.0 or nd == 0.0:
        return 0.0
    return min(1.0, dot / (nq * nd))


def cosine_tfidf(query: str, doc: str, corpus_texts: Sequence[str]) -> float:
    """TFxIDF cosine between a query and one document of a corpus, with IDF
    computed over corpus_texts. Directional: the corpus belongs to the doc
    side. Raises ValueError on an empty corpus."""
    if len(corpus_texts) == 0:
        raise ValueError("cosine_tfidf requires a non-empty corpus")
    return tfidf_cosine(query, doc, IdfTable.from_texts(corpus_texts))
