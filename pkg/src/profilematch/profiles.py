"""Profile data model, corpus ingestion, and text aggregation.

All string fields are normalized once at ingestion (lowercase, NFC,
punctuation stripped, whitespace collapsed); every downstream similarity
operates on the normalized form. Missing optional fields are represented as
None, never as empty strings, so feature extraction can emit missing-value
sentinels.
"""

from __future__ import annotations

import csv
import json
import unicodedata
from dataclasses import dataclass, field
from typing import Iterable

from profilematch.errors import CorpusError

NETWORKS = ("S1", "S2")
GENDERS = ("male", "female", "other")

_OPTIONAL_TEXT_FIELDS = (
    "gender",
    "hometown",
    "current_city",
    "current_employer",
    "professional_experience",
    "education",
)


def normalize_text(raw: str) -> str:
    """Lowercase NFC text with punctuation replaced by spaces and whitespace
    runs collapsed; empty input stays empty."""
    s = unicodedata.normalize("NFC", raw).lower()
    s = "".join(" " if unicodedata.category(c).startswith("P") else c for c in s)
    return " ".join(s.split())


@dataclass(frozen=True)
class ProfileRecord:
    """One user's public profile on one network (fields already normalized)."""

    id: str
    network: str
    full_name: str
    gender: str | None = None
    hometown: str | None = None
    current_city: str | None = None
    current_employer: str | None = None
    professional_experience: str | None = None
    education: str | None = None
    info_fields: dict[str, str] = field(default_factory=dict)
    friend_names: tuple[str, ...] = ()
    friend_of_friend_names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("profile id must be non-empty")
        if self.network not in NETWORKS:
            raise ValueError(f"unknown network {self.network!r}")
        if not self.full_name:
            raise ValueError("full_name must be non-empty after normalization")
        if self.gender is not None and self.gender not in GENDERS:
            raise ValueError(f"unknown gender {self.gender!r}")
        if any(not n for n in self.friend_names):
            raise ValueError("friend_names must not contain empty strings")
        if any(not n for n in self.friend_of_friend_names):
            raise ValueError("friend_of_friend_names must not contain empty strings")
        if len(set(self.friend_of_friend_names)) != len(self.friend_of_friend_names):
            raise ValueError("friend_of_friend_names must be deduplicated")


@dataclass
class ProfileCorpus:
    """All records of one network plus an id index."""

    network: str
    records: list[ProfileRecord]
    by_id: dict[str, ProfileRecord]

    @classmethod
    def build(cls, network: str, records: Iterable[ProfileRecord]) -> "ProfileCorpus":
        records = list(records)
        by_id: dict[str, ProfileRecord] = {}
        for rec in records:
            if rec.network != network:
                raise CorpusError(
                    f"record {rec.id!r} tagged {rec.network}, corpus is {network}"
                )
            if rec.id in by_id:
                raise CorpusError(f"duplicate profile id {rec.id!r}")
            by_id[rec.id] = rec
        return cls(network=network, records=records, by_id=by_id)

    def __len__(self) -> int:
        return len(self.records)


@dataclass(frozen=True)
class ReferenceData:
    """Shared lookup tables: name frequencies and a location gazetteer."""

    name_frequency: dict[str, int]
    gazetteer: dict[str, tuple[float, float]]

    def __post_init__(self) -> None:
        for name, count in self.name_frequency.items():
            if count < 0:
                raise ValueError(f"negative frequency for {name!r}")
        for name, (lat, lon) in self.gazetteer.items():
            if not (-90.0 <= lat <= 90.0):
                raise ValueError(f"latitude out of range for {name!r}: {lat}")
            if not (-180.0 <= lon <= 180.0):
                raise ValueError(f"longitude out of range for {name!r}: {lon}")


def _norm_optional(value, where: str, key: str) -> str | None:
    if value is None:
        return None
    if not isinstance(value, str):
        raise CorpusError(f"{where}: field {key!r} must be a string")
    normalized = normalize_text(value)
    return normalized or None


def _record_from_obj(obj: dict, network: str, where: str) -> ProfileRecord:
    if not isinstance(obj, dict):
        raise CorpusError(f"{where}: profile line must be a JSON object")
    for required in ("id", "full_name"):
        if required not in obj or obj[required] in (None, ""):
            raise CorpusError(f"{where}: missing required field {required!r}")
    rec_id = str(obj["id"])
    full_name = normalize_text(str(obj["full_name"]))
    if not full_name:
        raise CorpusError(f"{where}: full_name empty after normalization")

    kwargs: dict = {"id": rec_id, "network": network, "full_name": full_name}
    for key in _OPTIONAL_TEXT_FIELDS:
        kwargs[key] = _norm_optional(obj.get(key), where, key)
    if kwargs["gender"] is not None and kwargs["gender"] not in GENDERS:
        raise CorpusError(f"{where}: unknown gender {kwargs['gender']!r}")

    info = obj.get("info_fields") or {}
    if not isinstance(info, dict):
        raise CorpusError(f"{where}: info_fields must be an object")
    info_fields = {}
    for key, value in info.items():
        normalized = _norm_optional(value, where, f"info_fields.{key}")
        if normalized:
            info_fields[str(key)] = normalized
    kwargs["info_fields"] = info_fields

    for key in ("friend_names", "friend_of_friend_names"):
        raw = obj.get(key) or []
        if not isinstance(raw, list):
            raise CorpusError(f"{where}: {key} must be an array")
        names = [normalize_text(str(n)) for n in raw]
        names = [n for n in names if n]
        if key == "friend_of_friend_names":
            names = list(dict.fromkeys(names))
        kwargs[key] = tuple(names)

    try:
        return ProfileRecord(**kwargs)
    except ValueError as exc:
        raise CorpusError(f"{where}: {exc}") from exc


def load_corpus(path, network: str) -> ProfileCorpus:
    """Read a JSON Lines profile file into a normalized corpus.

    Raises CorpusError with the offending line number on parse errors,
    duplicate ids, or missing required fields.
    """
    if network not in NETWORKS:
        raise ValueError(f"unknown network {network!r}")
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            where = f"{path}:{lineno}"
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{where}: invalid JSON: {exc.msg}") from exc
            records.append(_record_from_obj(obj, network, where))
    return ProfileCorpus.build(network, records)


def record_to_obj(rec: ProfileRecord) -> dict:
    """Serializable form of a record; absent fields are omitted."""
    obj: dict = {"id": rec.id, "full_name": rec.full_name}
    for key in _OPTIONAL_TEXT_FIELDS:
        value = getattr(rec, key)
        if value is not None:
            obj[key] = value
    if rec.info_fields:
        obj["info_fields"] = dict(rec.info_fields)
    if rec.friend_names:
        obj["friend_names"] = list(rec.friend_names)
    if rec.friend_of_friend_names:
        obj["friend_of_friend_names"] = list(rec.friend_of_friend_names)
    return obj


def save_corpus(corpus: ProfileCorpus, path) -> None:
    """Write a corpus back to JSON Lines (normalized form, absent keys omitted)."""
    with open(path, "w", encoding="utf-8") as fh:
        for rec in corpus.records:
            fh.write(json.dumps(record_to_obj(rec), ensure_ascii=False, sort_keys=True))
            fh.write("\n")


def aggregate_info_text(p: ProfileRecord) -> str:
    """Space-joined info-page fields (gender, hometown, current city, employer,
    then remaining info fields in order) excluding name, experience, education."""
    parts = []
    for value in (p.gender, p.hometown, p.current_city, p.current_employer):
        if value:
            parts.append(value)
    parts.extend(v for v in p.info_fields.values() if v)
    return " ".join(parts)


def full_profile_text(p: ProfileRecord) -> str:
    """The whole profile as one text: info aggregate plus experience and
    education; never includes the user's name."""
    parts = [aggregate_info_text(p)]
    if p.professional_experience:
        parts.append(p.professional_experience)
    if p.education:
        parts.append(p.education)
    return " ".join(part for part in parts if part)


def load_name_frequency(path) -> dict[str, int]:
    """Read a `name<TAB>count` table; names are normalized."""
    table: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise CorpusError(f"{path}:{lineno}: expected name<TAB>count")
            name = normalize_text(parts[0])
            try:
                count = int(parts[1])
            except ValueError as exc:
                raise CorpusError(f"{path}:{lineno}: count is not an integer") from exc
            if count < 0:
                raise CorpusError(f"{path}:{lineno}: negative count")
            table[name] = count
    return table


def save_name_frequency(table: dict[str, int], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for name in sorted(table):
            fh.write(f"{name}\t{table[name]}\n")


def load_gazetteer(path) -> dict[str, tuple[float, float]]:
    """Read a `name,lat,lon` CSV; names are normalized and coordinates
    validated against their ranges."""
    table: dict[str, tuple[float, float]] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or not "".join(row).strip():
                continue
            if len(row) != 3:
                raise CorpusError(f"{path}:{lineno}: expected name,lat,lon")
            name = normalize_text(row[0])
            try:
                lat, lon = float(row[1]), float(row[2])
            except ValueError as exc:
                raise CorpusError(f"{path}:{lineno}: bad coordinates") from exc
            if not (-90.0 <= lat <= 90.0) or not (-180.0 <= lon <= 180.0):
                raise CorpusError(f"{path}:{lineno}: coordinates out of range")
            table[name] = (lat, lon)
    return table


def save_gazetteer(table: dict[str, tuple[float, float]], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        for name in sorted(table):
            lat, lon = table[name]
            writer.writerow([name, repr(lat), repr(lon)])


def load_reference_dir(ref_dir) -> ReferenceData:
    """Load ReferenceData from a directory holding name_frequency.tsv and
    gazetteer.csv."""
    import os

    return ReferenceData(
        name_frequency=load_name_frequency(os.path.join(ref_dir, "name_frequency.tsv")),
        gazetteer=load_gazetteer(os.path.join(ref_dir, "gazetteer.csv")),
    )
