"""The 27-dimensional candidate-pair feature vector.

The canonical feature order is frozen here so serialized matrices, ablation
indices, and scenario masks never drift:

    f00-f09  name based (Soundex, Difference, LCS, compression, DL,
             Jaro-Winkler, 2-gram, 3-gram, VMN, name frequency)
    f10-f24  information based (two location distances, three employer
             similarities, Jaccard x4, TF-cosine x4, directional TFxIDF x2)
    f25-f26  topological (mutual friends, mutual friends of friends)

Missing values are carried as NaN in the vector plus an explicit mask; the
learning layer maps them to the -1.0 sentinel (all real features are >= 0).
"""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from profilematch import metrics
from profilematch.errors import EncodingError
from profilematch.profiles import (
    ProfileCorpus,
    ProfileRecord,
    ReferenceData,
    aggregate_info_text,
    full_profile_text,
)

FEATURE_NAMES = (
    "f00_soundexName",
    "f01_differenceName",
    "f02_lcsName",
    "f03_compressionName",
    "f04_damerauLevenshteinName",
    "f05_jaroWinklerName",
    "f06_twoGramName",
    "f07_threeGramName",
    "f08_vmnName",
    "f09_namesFrequency",
    "f10_hometownDistanceKm",
    "f11_currentCityDistanceKm",
    "f12_threeGramEmployer",
    "f13_damerauLevenshteinEmployer",
    "f14_jaroWinklerEmployer",
    "f15_jaccardFullProfile",
    "f16_jaccardExperience",
    "f17_jaccardEducation",
    "f18_jaccardInfoFields",
    "f19_semiVsmFullProfile",
    "f20_semiVsmExperience",
    "f21_semiVsmEducation",
    "f22_semiVsmInfoFields",
    "f23_vsmS1toS2",
    "f24_vsmS2toS1",
    "f25_mutualFriends",
    "f26_mutualFriendsOfFriends",
)

N_FEATURES = 27

NAME_FEATURES = frozenset(range(0, 10))
INFO_FEATURES = frozenset(range(10, 25))
TOPO_FEATURES = frozenset((25, 26))

# Similarity-type slots are bounded in [0, 1]; distances (f10, f11) and the
# name-frequency average (f09) are unnormalized non-negatives, the two mutual
# counts (f25, f26) are non-negative integers.
UNBOUNDED_FEATURES = frozenset((9, 10, 11, 25, 26))

MISSING_SENTINEL = -1.0

EARTH_RADIUS_KM = 6371.0


def feature_subset(included: Iterable[int]) -> frozenset:
    """Validated feature subset: a non-empty set of indices in 0..26."""
    subset = frozenset(int(i) for i in included)
    if not subset:
        raise ValueError("feature subset must be non-empty")
    if not subset <= frozenset(range(N_FEATURES)):
        raise ValueError("feature indices must lie in 0..26")
    return subset


ALL_FEATURES = feature_subset(range(N_FEATURES))
NO_NAME_FEATURES = feature_subset(range(10, N_FEATURES))


@dataclass(frozen=True)
class FeatureVector:
    """The 27 similarity values for one candidate pair; NaN marks missing."""

    values: np.ndarray

    def __post_init__(self) -> None:
        if self.values.shape != (N_FEATURES,):
            raise ValueError(f"expected {N_FEATURES} features, got {self.values.shape}")

    @property
    def missing_mask(self) -> np.ndarray:
        return np.isnan(self.values)

    def learning_values(self) -> np.ndarray:
        """Values with missing entries mapped to the -1.0 sentinel."""
        return np.where(np.isnan(self.values), MISSING_SENTINEL, self.values)

    def validate_ranges(self) -> None:
        """Raise if any present feature value leaves its declared range."""
        for i, v in enumerate(self.values):
            if math.isnan(v):
                continue
            if v < 0.0:
                raise ValueError(f"{FEATURE_NAMES[i]} negative: {v}")
            if i not in UNBOUNDED_FEATURES and v > 1.0 + 1e-12:
                raise ValueError(f"{FEATURE_NAMES[i]} above 1: {v}")


def haversine_km(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    """Great-circle distance in kilometers (Earth radius 6371.0 km)."""
    p1 = math.radians(lat1)
    p2 = math.radians(lat2)
    dp = math.radians(lat2 - lat1)
    dl = math.radians(lon2 - lon1)
    a = math.sin(dp / 2.0) ** 2 + math.cos(p1) * math.cos(p2) * math.sin(dl / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(a)))


def location_distance_km(
    a: str | None, b: str | None, ref: ReferenceData
) -> float | None:
    """Distance between two gazetteer locations, or None when either name is
    absent or unknown. Deliberately not normalized."""
    if not a or not b:
        return None
    ca = ref.gazetteer.get(a)
    cb = ref.gazetteer.get(b)
    if ca is None or cb is None:
        return None
    return haversine_km(ca[0], ca[1], cb[0], cb[1])


def name_frequency_sim(a: str, b: str, ref: ReferenceData) -> float:
    """Mean of the two name-frequency lookups (absent names count 0).
    Deliberately not normalized."""
    return (ref.name_frequency.get(a, 0) + ref.name_frequency.get(b, 0)) / 2.0


def _multiset_overlap(a: Sequence[str], b: Sequence[str]) -> int:
    ca = Counter(a)
    cb = Counter(b)
    return sum(min(count, cb[name]) for name, count in ca.items() if name in cb)


def mutual_friends(a: ProfileRecord, b: ProfileRecord) -> int:
    """Number of friends with identical names in both friend lists
    (multiset intersection: per-name minimum of occurrence counts)."""
    return _multiset_overlap(a.friend_names, b.friend_names)


def mutual_friends_of_friends(a: ProfileRecord, b: ProfileRecord) -> int:
    """Same intersection rule applied to the friends-of-friends name lists."""
    return _multiset_overlap(a.friend_of_friend_names, b.friend_of_friend_names)


def extract_features(
    a: ProfileRecord,
    b: ProfileRecord,
    ref: ReferenceData,
    idf_s1: metrics.IdfTable,
    idf_s2: metrics.IdfTable,
) -> FeatureVector:
    """Fill all 27 feature slots for a cross-network candidate pair.

    The two directional TFxIDF slots follow argument order (f23 scores a's
    profile as a query against b's document under b's corpus IDF table, f24
    the reverse), so swapping the arguments swaps exactly those two slots.
    Features whose underlying field is absent on either side are masked.
    """
    if a.network == b.network:
        raise ValueError("candidate pair must come from two different networks")

    values = np.full(N_FEATURES, np.nan)

    def put(i: int, v: float) -> None:
        values[i] = float(v)

    na, nb = a.full_name, b.full_name
    try:
        put(0, metrics.soundex_sim(na, nb))
        put(1, metrics.difference_sim(na, nb))
    except EncodingError:
        pass  # unencodable name: f00/f01 stay masked
    put(2, metrics.lcs_sim(na, nb))
    put(3, metrics.ncd_sim(na, nb))
    put(4, metrics.damerau_levenshtein_sim(na, nb))
    put(5, metrics.jaro_winkler_sim(na, nb))
    put(6, metrics.ngram_sim(na, nb, 2))
    put(7, metrics.ngram_sim(na, nb, 3))
    put(8, metrics.vmn_sim(na, nb))
    put(9, name_frequency_sim(na, nb, ref))

    d = location_distance_km(a.hometown, b.hometown, ref)
    if d is not None:
        put(10, d)
    d = location_distance_km(a.current_city, b.current_city, ref)
    if d is not None:
        put(11, d)

    if a.current_employer and b.current_employer:
        put(12, metrics.ngram_sim(a.current_employer, b.current_employer, 3))
        put(13, metrics.damerau_levenshtein_sim(a.current_employer, b.current_employer))
        put(14, metrics.jaro_winkler_sim(a.current_employer, b.current_employer))

    full_a = full_profile_text(a)
    full_b = full_profile_text(b)
    put(15, metrics.jaccard_tokens(full_a, full_b))
    put(19, metrics.cosine_tf(full_a, full_b))

    if a.professional_experience and b.professional_experience:
        put(16, metrics.jaccard_tokens(a.professional_experience, b.professional_experience))
        put(20, metrics.cosine_tf(a.professional_experience, b.professional_experience))
    if a.education and b.education:
        put(17, metrics.jaccard_tokens(a.education, b.education))
        put(21, metrics.cosine_tf(a.education, b.education))

    info_a = aggregate_info_text(a)
    info_b = aggregate_info_text(b)
    put(18, metrics.jaccard_tokens(info_a, info_b))
    put(22, metrics.cosine_tf(info_a, info_b))

    idf_for = {"S1": idf_s1, "S2": idf_s2}
    put(23, metrics.tfidf_cosine(full_a, full_b, idf_for[b.network]))
    put(24, metrics.tfidf_cosine(full_b, full_a, idf_for[a.network]))

    put(25, mutual_friends(a, b))
    put(26, mutual_friends_of_friends(a, b))

    return FeatureVector(values)


def corpus_idf_table(corpus: ProfileCorpus) -> metrics.IdfTable:
    """IDF table over a corpus's full-profile texts (shareable, immutable)."""
    return metrics.IdfTable.from_texts([full_profile_text(r) for r in corpus.records])


@dataclass
class FeatureMatrix:
    """Feature vectors for a list of labeled pairs.

    `values` is (n, 27) float64 with NaN for missing entries; `labels` holds
    1 for match and 0 for non-match.
    """

    pairs: list[tuple[str, str]]
    labels: np.ndarray
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.pairs)

    def learning_matrix(self) -> np.ndarray:
        """(n, 27) matrix with missing entries mapped to the -1.0 sentinel."""
        return np.where(np.isnan(self.values), MISSING_SENTINEL, self.values)

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["id1", "id2", "label", *FEATURE_NAMES])
            for (id1, id2), label, row in zip(self.pairs, self.labels, self.values):
                cells = ["" if math.isnan(v) else repr(float(v)) for v in row]
                writer.writerow([id1, id2, int(label), *cells])

    @classmethod
    def from_csv(cls, path) -> "FeatureMatrix":
        pairs = []
        labels = []
        rows = []
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            expected = ["id1", "id2", "label", *FEATURE_NAMES]
            if header != expected:
                raise ValueError(f"{path}: unexpected feature-matrix header")
            for row in reader:
                if not row:
                    continue
                if len(row) != 3 + N_FEATURES:
                    raise ValueError(f"{path}: row with {len(row)} cells")
                pairs.append((row[0], row[1]))
                labels.append(int(row[2]))
                rows.append([float(c) if c != "" else math.nan for c in row[3:]])
        values = (
            np.array(rows, dtype=np.float64)
            if rows
            else np.empty((0, N_FEATURES), dtype=np.float64)
        )
        return cls(pairs=pairs, labels=np.array(labels, dtype=np.int8), values=values)

    @classmethod
    def from_pairs(
        cls,
        labeled: Iterable[tuple[str, str, int]],
        s1: ProfileCorpus,
        s2: ProfileCorpus,
        ref: ReferenceData,
        idf_s1: metrics.IdfTable,
        idf_s2: metrics.IdfTable,
        cache: dict | None = None,
    ) -> "FeatureMatrix":
        """Extract vectors for (id1, id2, label) triples, id1 from S1 and id2
        from S2; a shared cache avoids recomputing pairs that recur across
        folds."""
        pairs = []
        labels = []
        rows = []
        for id1, id2, label in labeled:
            key = (id1, id2)
            if cache is not None and key in cache:
                vec = cache[key]
            else:
                vec = extract_features(s1.by_id[id1], s2.by_id[id2], ref, idf_s1, idf_s2)
                if cache is not None:
                    cache[key] = vec
            pairs.append(key)
            labels.append(int(label))
            rows.append(vec.values)
        values = (
            np.vstack(rows) if rows else np.empty((0, N_FEATURES), dtype=np.float64)
        )
        return cls(pairs=pairs, labels=np.array(labels, dtype=np.int8), values=values)
