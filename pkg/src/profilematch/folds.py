"""Leakage-free train/test fold construction.

Profiles from both networks are randomly partitioned into k groups; a
labeled pair survives only when both of its profiles landed in the same
group (cross-group positives are discarded and reported). Negatives are
sampled inside each group, so fold i (test on group i, train on the rest)
never shares a profile between its train and test sides.
"""

from __future__ import annotations

import csv
import json
import logging
import os
import random
from dataclasses import dataclass, field

from profilematch.features import FeatureMatrix, corpus_idf_table
from profilematch.profiles import ProfileCorpus, ReferenceData

logger = logging.getLogger(__name__)

MATCH = "match"
NON_MATCH = "non_match"


@dataclass(frozen=True)
class LabeledPair:
    """A candidate pair: id1 from S1, id2 from S2, with its ground truth."""

    id1: str
    id2: str
    label: str

    def __post_init__(self) -> None:
        if self.label not in (MATCH, NON_MATCH):
            raise ValueError(f"unknown label {self.label!r}")

    @property
    def is_match(self) -> bool:
        return self.label == MATCH

    @property
    def key(self) -> tuple[str, str]:
        return (self.id1, self.id2)


@dataclass
class GroupPartition:
    """Seeded random assignment of every profile to one of k groups."""

    k: int
    seed: int
    group_of: dict[tuple[str, str], int]
    positives_by_group: list[list[LabeledPair]]
    discarded: list[LabeledPair]


@dataclass
class Fold:
    index: int
    train: list[LabeledPair]
    test: list[LabeledPair]


@dataclass
class FoldSet:
    folds: list[Fold]
    seed: int
    negatives_per_positive_per_side: int


@dataclass
class BuildReport:
    """What the fold build did: retained/discarded positives, negative counts,
    and the effective negative:positive ratio."""

    n_positives_input: int = 0
    n_retained: int = 0
    n_discarded_cross_group: int = 0
    n_negatives: int = 0
    warnings: list = field(default_factory=list)

    @property
    def effective_negative_ratio(self) -> float:
        return self.n_negatives / self.n_retained if self.n_retained else 0.0

    def to_dict(self) -> dict:
        return {
            "n_positives_input": self.n_positives_input,
            "n_retained": self.n_retained,
            "n_discarded_cross_group": self.n_discarded_cross_group,
            "n_negatives": self.n_negatives,
            "effective_negative_ratio": self.effective_negative_ratio,
            "warnings": list(self.warnings),
        }


def partition_groups(
    s1: ProfileCorpus,
    s2: ProfileCorpus,
    positives: list[LabeledPair],
    k: int = 10,
    seed: int = 0,
) -> GroupPartition:
    """Assign every profile of both corpora to one of k groups uniformly at
    random (seeded); attach each positive whose two profiles share a group,
    discard the rest."""
    if k < 1:
        raise ValueError("k must be >= 1")
    n_profiles = len(s1) + len(s2)
    if k > n_profiles:
        raise ValueError(f"k={k} larger than profile count {n_profiles}")
    seen = set()
    for pair in positives:
        if pair.id1 not in s1.by_id:
            raise ValueError(f"positive references unknown S1 id {pair.id1!r}")
        if pair.id2 not in s2.by_id:
            raise ValueError(f"positive references unknown S2 id {pair.id2!r}")
        if pair.key in seen:
            raise ValueError(f"duplicate labeled pair {pair.key}")
        seen.add(pair.key)

    rng = random.Random(seed)
    group_of: dict[tuple[str, str], int] = {}
    for corpus in (s1, s2):
        for rec in corpus.records:
            group_of[(corpus.network, rec.id)] = rng.randrange(k)

    positives_by_group: list[list[LabeledPair]] = [[] for _ in range(k)]
    discarded: list[LabeledPair] = []
    for pair in positives:
        g1 = group_of[("S1", pair.id1)]
        g2 = group_of[("S2", pair.id2)]
        if g1 == g2:
            positives_by_group[g1].append(pair)
        else:
            discarded.append(pair)
    return GroupPartition(
        k=k,
        seed=seed,
        group_of=group_of,
        positives_by_group=positives_by_group,
        discarded=discarded,
    )


def generate_negatives(
    s1_ids: list[str],
    s2_ids: list[str],
    positives_in_group: list[LabeledPair],
    n_per_side: int,
    seed: int,
    forbidden: set | None = None,
) -> tuple[list[LabeledPair], list[str]]:
    """Sample negatives inside one group: for each positive (p, q), n_per_side
    distinct S2 partners for p (excluding q) and n_per_side distinct S1
    partners for q (excluding p).

    No generated pair duplicates a forbidden (known-positive) pair or an
    earlier negative. When a group lacks candidates, fewer pairs are produced
    and a warning is recorded.
    """
    if n_per_side < 1:
        raise ValueError("n_per_side must be >= 1")
    if forbidden is None:
        forbidden = {p.key for p in positives_in_group}
    rng = random.Random(seed)
    seen: set = set()
    negatives: list[LabeledPair] = []
    warnings: list[str] = []
    for pos in positives_in_group:
        cands2 = [
            x
            for x in s2_ids
            if x != pos.id2 and (pos.id1, x) not in forbidden and (pos.id1, x) not in seen
        ]
        picks2 = rng.sample(cands2, min(n_per_side, len(cands2)))
        cands1 = [
            x
            for x in s1_ids
            if x != pos.id1 and (x, pos.id2) not in forbidden and (x, pos.id2) not in seen
        ]
        picks1 = rng.sample(cands1, min(n_per_side, len(cands1)))
        produced = 0
        for x in picks2:
            negatives.append(LabeledPair(pos.id1, x, NON_MATCH))
            seen.add((pos.id1, x))
            produced += 1
        for x in picks1:
            negatives.append(LabeledPair(x, pos.id2, NON_MATCH))
            seen.add((x, pos.id2))
            produced += 1
        if produced < 2 * n_per_side:
            msg = (
                f"positive {pos.key}: only {produced} of {2 * n_per_side} "
                "negatives available in its group"
            )
            warnings.append(msg)
            logger.warning(msg)
    return negatives, warnings


def build_folds(
    partition: GroupPartition,
    negatives_by_group: list[list[LabeledPair]],
    negatives_per_side: int,
) -> FoldSet:
    """Assemble k folds: fold i tests on group i's pairs and trains on all
    other groups' pairs."""
    k = partition.k
    if k < 2:
        raise ValueError("building folds requires k >= 2")
    if len(negatives_by_group) != k:
        raise ValueError("negatives_by_group must have one entry per group")
    group_pairs = [
        list(partition.positives_by_group[g]) + list(negatives_by_group[g])
        for g in range(k)
    ]
    folds = []
    for i in range(k):
        if not partition.positives_by_group[i]:
            logger.warning("fold %d has zero test positives", i)
        train: list[LabeledPair] = []
        for g in range(k):
            if g != i:
                train.extend(group_pairs[g])
        folds.append(Fold(index=i, train=train, test=list(group_pairs[i])))
    return FoldSet(
        folds=folds,
        seed=partition.seed,
        negatives_per_positive_per_side=negatives_per_side,
    )


def build_foldset(
    s1: ProfileCorpus,
    s2: ProfileCorpus,
    positives: list[LabeledPair],
    k: int = 10,
    n_per_side: int = 5,
    seed: int = 0,
) -> tuple[FoldSet, BuildReport]:
    """Partition, sample negatives, and assemble the k leakage-free folds."""
    partition = partition_groups(s1, s2, positives, k=k, seed=seed)
    report = BuildReport(
        n_positives_input=len(positives),
        n_discarded_cross_group=len(partition.discarded),
        n_retained=len(positives) - len(partition.discarded),
    )
    forbidden = {p.key for p in positives}
    s1_by_group: list[list[str]] = [[] for _ in range(k)]
    s2_by_group: list[list[str]] = [[] for _ in range(k)]
    for rec in s1.records:
        s1_by_group[partition.group_of[("S1", rec.id)]].append(rec.id)
    for rec in s2.records:
        s2_by_group[partition.group_of[("S2", rec.id)]].append(rec.id)
    negatives_by_group = []
    for g in range(k):
        negs, warns = generate_negatives(
            s1_by_group[g],
            s2_by_group[g],
            partition.positives_by_group[g],
            n_per_side,
            seed=(seed * 1_000_003 + g) % (2**31),
            forbidden=forbidden,
        )
        negatives_by_group.append(negs)
        report.warnings.extend(warns)
        report.n_negatives += len(negs)
    foldset = build_folds(partition, negatives_by_group, n_per_side)
    return foldset, report


def foldset_to_json(foldset: FoldSet) -> str:
    """Canonical JSON form of a fold set (used for determinism checks)."""
    obj = {
        "seed": foldset.seed,
        "negatives_per_positive_per_side": foldset.negatives_per_positive_per_side,
        "folds": [
            {
                "index": f.index,
                "train": [[p.id1, p.id2, p.label] for p in f.train],
                "test": [[p.id1, p.id2, p.label] for p in f.test],
            }
            for f in foldset.folds
        ],
    }
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


@dataclass
class FoldData:
    """One fold with features attached."""

    index: int
    train: FeatureMatrix
    test: FeatureMatrix


def extract_fold_features(
    foldset: FoldSet,
    s1: ProfileCorpus,
    s2: ProfileCorpus,
    ref: ReferenceData,
) -> list[FoldData]:
    """Compute feature matrices for every fold; each distinct pair is
    extracted once and shared across folds."""
    idf_s1 = corpus_idf_table(s1)
    idf_s2 = corpus_idf_table(s2)
    cache: dict = {}

    def matrix(pairs: list[LabeledPair]) -> FeatureMatrix:
        labeled = [(p.id1, p.id2, 1 if p.is_match else 0) for p in pairs]
        return FeatureMatrix.from_pairs(labeled, s1, s2, ref, idf_s1, idf_s2, cache)

    return [
        FoldData(index=f.index, train=matrix(f.train), test=matrix(f.test))
        for f in foldset.folds
    ]


def read_positive_pairs(path) -> list[LabeledPair]:
    """Read the positive-label CSV (`id1,id2`, all rows are matches); a
    leading header row is tolerated."""
    pairs = []
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or not "".join(row).strip():
                continue
            if lineno == 1 and [c.strip().lower() for c in row[:2]] == ["id1", "id2"]:
                continue
            if len(row) < 2:
                raise ValueError(f"{path}:{lineno}: expected id1,id2")
            pairs.append(LabeledPair(row[0], row[1], MATCH))
    return pairs


def write_positive_pairs(pairs: list[LabeledPair], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id1", "id2"])
        for p in pairs:
            writer.writerow([p.id1, p.id2])


def write_fold_manifest(
    out_dir,
    foldset: FoldSet,
    fold_data: list[FoldData],
    report: BuildReport | None = None,
) -> str:
    """Write per-fold train/test feature CSVs plus a manifest JSON naming
    them; returns the manifest path."""
    os.makedirs(out_dir, exist_ok=True)
    entries = []
    for fd in fold_data:
        train_name = f"fold{fd.index:02d}_train.csv"
        test_name = f"fold{fd.index:02d}_test.csv"
        fd.train.to_csv(os.path.join(out_dir, train_name))
        fd.test.to_csv(os.path.join(out_dir, test_name))
        entries.append({"fold": fd.index, "train": train_name, "test": test_name})
    manifest = {
        "k": len(fold_data),
        "seed": foldset.seed,
        "negatives_per_positive_per_side": foldset.negatives_per_positive_per_side,
        "folds": entries,
    }
    if report is not None:
        manifest["report"] = report.to_dict()
    manifest_path = os.path.join(out_dir, "manifest.json")
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest_path


def read_fold_manifest(manifest_path) -> tuple[list[FoldData], dict]:
    """Load the fold feature matrices named by a manifest."""
    with open(manifest_path, encoding="utf-8") as fh:
        manifest = json.load(fh)
    base = os.path.dirname(os.path.abspath(manifest_path))
    fold_data = []
    for entry in manifest["folds"]:
        fold_data.append(
            FoldData(
                index=int(entry["fold"]),
                train=FeatureMatrix.from_csv(os.path.join(base, entry["train"])),
                test=FeatureMatrix.from_csv(os.path.join(base, entry["test"])),
            )
        )
    return fold_data, manifest
