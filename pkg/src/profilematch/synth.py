"""Synthetic two-network corpus generator.

Stands in for a real crawl: builds one network from name/employer/city
vocabularies, clones a configurable number of profiles into the second
network with per-field corruption (character typos, token swaps, wholesale
pseudonyms, field drops, partial friend overlap), and emits the ground-truth
positive list plus a consistent gazetteer and name-frequency table. Fully
deterministic for a given seed.
"""

from __future__ import annotations

import json
import os
import random
import string
from dataclasses import asdict, dataclass

from profilematch.errors import GenerationError
from profilematch.folds import MATCH, LabeledPair, write_positive_pairs
from profilematch.profiles import (
    ProfileCorpus,
    ProfileRecord,
    ReferenceData,
    normalize_text,
    save_corpus,
    save_gazetteer,
    save_name_frequency,
)

FIRST_NAMES = (
    "james", "mary", "john", "patricia", "robert", "jennifer", "michael", "linda",
    "william", "elizabeth", "david", "barbara", "richard", "susan", "joseph",
    "jessica", "thomas", "sarah", "charles", "karen", "christopher", "nancy",
    "daniel", "lisa", "matthew", "betty", "anthony", "margaret", "mark", "sandra",
    "donald", "ashley", "steven", "kimberly", "paul", "emily", "andrew", "donna",
    "joshua", "michelle", "kenneth", "dorothy", "kevin", "carol", "brian", "amanda",
    "george", "melissa", "edward", "deborah", "ronald", "stephanie", "timothy",
    "rebecca", "jason", "sharon", "jeffrey", "laura", "ryan", "cynthia", "jacob",
    "kathleen", "gary", "amy", "nicholas", "angela", "eric", "shirley", "jonathan",
    "anna", "stephen", "brenda", "larry", "pamela", "justin", "emma", "scott",
    "nicole", "brandon", "helen", "benjamin", "samantha", "samuel", "katherine",
    "gregory", "christine", "frank", "debra", "alexander", "rachel", "raymond",
    "carolyn", "patrick", "janet", "jack", "catherine", "dennis", "maria", "jerry",
    "heather", "tyler", "diane", "aaron", "ruth", "jose", "julie", "adam", "olivia",
    "nathan", "joyce", "henry", "virginia", "douglas", "victoria", "zachary",
    "kelly", "peter", "lauren", "kyle", "christina", "walter", "joan", "ethan",
    "evelyn", "jeremy", "judith", "harold", "megan", "keith", "andrea", "christian",
    "cheryl", "roger", "hannah", "noah", "jacqueline", "gerald", "martha", "carl",
    "gloria", "terry", "teresa", "sean", "ann", "austin", "sara", "arthur",
    "madison", "lawrence", "frances",
)

LAST_NAMES = (
    "smith", "johnson", "williams", "brown", "jones", "garcia", "miller", "davis",
    "rodriguez", "martinez", "hernandez", "lopez", "gonzalez", "wilson", "anderson",
    "thomas", "taylor", "moore", "jackson", "martin", "lee", "perez", "thompson",
    "white", "harris", "sanchez", "clark", "ramirez", "lewis", "robinson", "walker",
    "young", "allen", "king", "wright", "scott", "torres", "nguyen", "hill",
    "flores", "green", "adams", "nelson", "baker", "hall", "rivera", "campbell",
    "mitchell", "carter", "roberts", "gomez", "phillips", "evans", "turner",
    "diaz", "parker", "cruz", "edwards", "collins", "reyes", "stewart", "morris",
    "morales", "murphy", "cook", "rogers", "gutierrez", "ortiz", "morgan",
    "cooper", "peterson", "bailey", "reed", "kelly", "howard", "ramos", "kim",
    "cox", "ward", "richardson", "watson", "brooks", "chavez", "wood", "james",
    "bennett", "gray", "mendoza", "ruiz", "hughes", "price", "alvarez", "castillo",
    "sanders", "patel", "myers", "long", "ross", "foster", "jimenez", "powell",
    "jenkins", "perry", "russell", "sullivan", "bell", "coleman", "butler",
    "henderson", "barnes", "fisher", "vasquez", "simmons", "romero", "jordan",
    "patterson", "alexander", "hamilton", "graham", "reynolds", "griffin",
    "wallace", "moreno", "west", "cole", "hayes", "bryant", "herrera", "gibson",
    "ellis", "tran", "medina", "aguilar", "stevens", "murray", "ford", "castro",
    "marshall", "owens", "harrison", "fernandez", "mcdonald",
)

# (normalized city name, latitude, longitude); doubles as the gazetteer.
CITIES = (
    ("new york", 40.71, -74.01), ("los angeles", 34.05, -118.24),
    ("chicago", 41.88, -87.63), ("houston", 29.76, -95.37),
    ("berlin", 52.52, 13.41), ("hamburg", 53.55, 9.99),
    ("munich", 48.14, 11.58), ("cologne", 50.94, 6.96),
    ("vienna", 48.21, 16.37), ("zurich", 47.38, 8.54),
    ("geneva", 46.20, 6.14), ("paris", 48.86, 2.35),
    ("london", 51.51, -0.13), ("madrid", 40.42, -3.70),
    ("barcelona", 41.39, 2.17), ("rome", 41.90, 12.50),
    ("milan", 45.46, 9.19), ("amsterdam", 52.37, 4.90),
    ("brussels", 50.85, 4.35), ("copenhagen", 55.68, 12.57),
    ("stockholm", 59.33, 18.07), ("oslo", 59.91, 10.75),
    ("helsinki", 60.17, 24.94), ("warsaw", 52.23, 21.01),
    ("prague", 50.08, 14.44), ("budapest", 47.50, 19.04),
    ("lisbon", 38.72, -9.14), ("dublin", 53.35, -6.26),
    ("athens", 37.98, 23.73), ("istanbul", 41.01, 28.98),
    ("moscow", 55.76, 37.62), ("tokyo", 35.68, 139.69),
    ("osaka", 34.69, 135.50), ("seoul", 37.57, 126.98),
    ("beijing", 39.90, 116.41), ("shanghai", 31.23, 121.47),
    ("singapore", 1.35, 103.82), ("sydney", -33.87, 151.21),
    ("melbourne", -37.81, 144.96), ("auckland", -36.85, 174.76),
    ("toronto", 43.65, -79.38), ("vancouver", 49.28, -123.12),
    ("mexico city", 19.43, -99.13), ("sao paulo", -23.55, -46.63),
    ("buenos aires", -34.60, -58.38), ("cape town", -33.92, 18.42),
    ("cairo", 30.04, 31.24), ("mumbai", 19.08, 72.88),
)

EMPLOYERS = (
    "acme corp", "globex", "initech", "umbrella systems", "stark industries",
    "wayne enterprises", "wonka works", "tyrell labs", "cyberdyne software",
    "aperture science", "hooli", "pied piper", "vandelay industries",
    "dunder mifflin", "bluth company", "sterling cooper", "oscorp",
    "massive dynamic", "soylent foods", "weyland logistics", "gringotts bank",
    "prestige worldwide", "monsters inc", "gekko capital", "nakatomi trading",
    "oceanic airlines", "virtucon", "zorg industries", "rekall services",
    "macrohard", "pearbook", "twitcher", "linkedout", "facespace",
    "northwind traders", "contoso", "fabrikam", "adventure works",
    "tailspin toys", "wingtip consulting",
)

INSTITUTIONS = (
    "state university", "city college", "technical university", "institute of technology",
    "polytechnic school", "business academy", "national university", "metropolitan college",
    "riverside university", "hillside college", "central academy", "coastal university",
    "northern institute", "southern college", "eastern university", "western polytechnic",
)

DEGREE_WORDS = ("bsc", "msc", "mba", "phd", "diploma", "bachelor", "master")
STUDY_FIELDS = (
    "computer science", "economics", "mechanical engineering", "biology",
    "mathematics", "psychology", "business administration", "physics",
    "graphic design", "history", "electrical engineering", "chemistry",
)

JOB_ROLES = ("junior", "senior", "lead", "principal", "staff", "chief")
JOB_TITLES = (
    "engineer", "developer", "analyst", "consultant", "manager", "designer",
    "researcher", "accountant", "architect", "administrator",
)
JOB_DOMAINS = (
    "software", "data", "marketing", "finance", "logistics", "security",
    "operations", "product", "sales", "support",
)

HOBBY_WORDS = (
    "hiking", "photography", "cooking", "chess", "running", "painting",
    "sailing", "climbing", "cycling", "gardening", "reading", "traveling",
    "swimming", "yoga", "tennis", "guitar", "piano", "baking", "skiing",
    "surfing", "birdwatching", "woodworking", "pottery", "astronomy",
)

LANGUAGES = ("english", "german", "french", "spanish", "italian", "mandarin", "portuguese", "dutch")

_LETTERS = string.ascii_lowercase

_DROPPABLE_FIELDS = (
    "gender",
    "hometown",
    "current_city",
    "current_employer",
    "professional_experience",
    "education",
)


@dataclass(frozen=True)
class SynthConfig:
    """Knobs of the generator; all rates are probabilities in [0, 1]."""

    n_profiles_per_network: int = 1000
    n_matched: int = 200
    typo_rate: float = 0.1
    token_swap_rate: float = 0.1
    pseudonym_rate: float = 0.0
    friend_overlap: float = 0.5
    field_drop_rate: float = 0.2
    seed: int = 42

    def __post_init__(self) -> None:
        if self.n_profiles_per_network < 1:
            raise ValueError("n_profiles_per_network must be >= 1")
        if not (0 <= self.n_matched <= self.n_profiles_per_network):
            raise ValueError("n_matched must lie in [0, n_profiles_per_network]")
        for name in ("typo_rate", "token_swap_rate", "pseudonym_rate", "friend_overlap", "field_drop_rate"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1]")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, obj: dict) -> "SynthConfig":
        return cls(**obj)

    @classmethod
    def from_json_file(cls, path) -> "SynthConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def _typo(text: str, rate: float, rng: random.Random) -> str:
    if rate <= 0.0:
        return text
    out = []
    for ch in text:
        if rng.random() < rate:
            op = rng.randrange(3)
            if op == 0:  # substitute
                out.append(rng.choice(_LETTERS))
            elif op == 1:  # delete
                continue
            else:  # insert after
                out.append(ch)
                out.append(rng.choice(_LETTERS))
        else:
            out.append(ch)
    return "".join(out)


def _token_swap(text: str, rate: float, rng: random.Random) -> str:
    tokens = text.split()
    if len(tokens) >= 2 and rng.random() < rate:
        i, j = rng.sample(range(len(tokens)), 2)
        tokens[i], tokens[j] = tokens[j], tokens[i]
    return " ".join(tokens)


def _corrupt(text: str, cfg: SynthConfig, rng: random.Random) -> str:
    return normalize_text(_typo(_token_swap(text, cfg.token_swap_rate, rng), cfg.typo_rate, rng))


class _NamePool:
    """Distinct full names drawn without replacement from the vocabulary
    product (first x last, extended with middle initials for large corpora);
    raises GenerationError when exhausted."""

    def __init__(self, needed: int, rng: random.Random):
        base = len(FIRST_NAMES) * len(LAST_NAMES)
        capacity = base * (1 + len(_LETTERS))
        if needed > capacity:
            raise GenerationError(
                f"name vocabulary exhausted: need {needed} distinct names, have {capacity}"
            )
        self._names = [self._name_at(i, base) for i in rng.sample(range(capacity), needed)]

    @staticmethod
    def _name_at(idx: int, base: int) -> str:
        first = FIRST_NAMES[idx % base // len(LAST_NAMES)]
        last = LAST_NAMES[idx % base % len(LAST_NAMES)]
        if idx < base:
            return f"{first} {last}"
        return f"{first} {_LETTERS[idx // base - 1]} {last}"

    def take(self) -> str:
        if not self._names:
            raise GenerationError("name vocabulary exhausted")
        return self._names.pop()

    def take_disjoint(self, avoid_tokens: set) -> str:
        """A pooled name sharing no token with avoid_tokens (pseudonyms must
        not leak any part of the original name)."""
        for i in range(len(self._names) - 1, -1, -1):
            if not (set(self._names[i].split()) & avoid_tokens):
                return self._names.pop(i)
        raise GenerationError("name vocabulary exhausted: no token-disjoint name left")


def _random_name(rng: random.Random) -> str:
    return f"{rng.choice(FIRST_NAMES)} {rng.choice(LAST_NAMES)}"


def _base_profile(name: str, rng: random.Random) -> dict:
    employer = rng.choice(EMPLOYERS)
    role = rng.choice(JOB_ROLES)
    title = rng.choice(JOB_TITLES)
    domain = rng.choice(JOB_DOMAINS)
    experience = f"{role} {domain} {title} at {employer} since {rng.randint(1995, 2023)}"
    education = (
        f"{rng.choice(DEGREE_WORDS)} {rng.choice(STUDY_FIELDS)} {rng.choice(INSTITUTIONS)}"
    )
    return {
        "full_name": name,
        "gender": rng.choice(("male", "female", "other")),
        "hometown": rng.choice(CITIES)[0],
        "current_city": rng.choice(CITIES)[0],
        "current_employer": employer,
        "professional_experience": experience,
        "education": education,
        "info_fields": {
            "about": " ".join(rng.sample(HOBBY_WORDS, rng.randint(3, 6))),
            "languages": " ".join(rng.sample(LANGUAGES, rng.randint(1, 3))),
        },
        "friend_names": [_random_name(rng) for _ in range(rng.randint(8, 18))],
        "friend_of_friend_names": [_random_name(rng) for _ in range(rng.randint(25, 60))],
    }


def _overlap_list(source: list, overlap: float, make_new, rng: random.Random) -> list:
    keep = round(overlap * len(source))
    kept = rng.sample(source, keep) if keep else []
    fresh = [make_new(rng) for _ in range(len(source) - keep)]
    return kept + fresh


def _clone_profile(base: dict, cfg: SynthConfig, pool: _NamePool, rng: random.Random) -> dict:
    if rng.random() < cfg.pseudonym_rate:
        name = pool.take_disjoint(set(base["full_name"].split()))
    else:
        name = _corrupt(base["full_name"], cfg, rng) or base["full_name"]
    clone = {
        "full_name": name,
        "gender": base["gender"],
        "hometown": base["hometown"],
        "current_city": base["current_city"],
        "current_employer": _corrupt(base["current_employer"], cfg, rng) or None,
        "professional_experience": _corrupt(base["professional_experience"], cfg, rng) or None,
        "education": _corrupt(base["education"], cfg, rng) or None,
        "info_fields": {
            key: corrupted
            for key, value in base["info_fields"].items()
            if (corrupted := _corrupt(value, cfg, rng))
        },
        "friend_names": _overlap_list(base["friend_names"], cfg.friend_overlap, _random_name, rng),
        "friend_of_friend_names": _overlap_list(
            base["friend_of_friend_names"], cfg.friend_overlap, _random_name, rng
        ),
    }
    return clone


def _apply_drops(raw: dict, cfg: SynthConfig, rng: random.Random) -> dict:
    if cfg.field_drop_rate <= 0.0:
        return raw
    out = dict(raw)
    for key in _DROPPABLE_FIELDS:
        if out.get(key) is not None and rng.random() < cfg.field_drop_rate:
            out[key] = None
    out["info_fields"] = {
        k: v for k, v in raw["info_fields"].items() if rng.random() >= cfg.field_drop_rate
    }
    return out


def _to_record(raw: dict, rec_id: str, network: str) -> ProfileRecord:
    return ProfileRecord(
        id=rec_id,
        network=network,
        full_name=raw["full_name"],
        gender=raw["gender"],
        hometown=raw["hometown"],
        current_city=raw["current_city"],
        current_employer=raw["current_employer"],
        professional_experience=raw["professional_experience"],
        education=raw["education"],
        info_fields=dict(raw["info_fields"]),
        friend_names=tuple(raw["friend_names"]),
        friend_of_friend_names=tuple(dict.fromkeys(raw["friend_of_friend_names"])),
    )


def _zipf_frequency_table(names: list[str], rng: random.Random) -> dict[str, int]:
    shuffled = list(names)
    rng.shuffle(shuffled)
    table = {}
    for rank, name in enumerate(shuffled):
        if rng.random() < 0.9:  # leave some names absent to exercise the 0 path
            table[name] = max(1, int(250_000 / (rank + 1) ** 1.07))
    return table


def generate_corpora(
    cfg: SynthConfig,
) -> tuple[ProfileCorpus, ProfileCorpus, list[LabeledPair], ReferenceData]:
    """Build (S1, S2, positives, reference data) per the configuration."""
    rng = random.Random(cfg.seed)
    n = cfg.n_profiles_per_network
    pool = _NamePool(2 * n, rng)

    bases = [_base_profile(pool.take(), rng) for _ in range(n)]
    matched_idx = sorted(rng.sample(range(n), cfg.n_matched))

    s2_raw: list[dict] = []
    positives: list[LabeledPair] = []
    for slot, i in enumerate(matched_idx):
        s2_raw.append(_clone_profile(bases[i], cfg, pool, rng))
        positives.append(LabeledPair(f"s1-{i:05d}", f"s2-{slot:05d}", MATCH))
    for _ in range(n - cfg.n_matched):
        s2_raw.append(_base_profile(pool.take(), rng))

    s1_records = [
        _to_record(_apply_drops(raw, cfg, rng), f"s1-{i:05d}", "S1")
        for i, raw in enumerate(bases)
    ]
    s2_records = [
        _to_record(_apply_drops(raw, cfg, rng), f"s2-{j:05d}", "S2")
        for j, raw in enumerate(s2_raw)
    ]
    s1 = ProfileCorpus.build("S1", s1_records)
    s2 = ProfileCorpus.build("S2", s2_records)

    all_names = sorted({r.full_name for r in s1_records} | {r.full_name for r in s2_records})
    ref = ReferenceData(
        name_frequency=_zipf_frequency_table(all_names, rng),
        gazetteer={name: (lat, lon) for name, lat, lon in CITIES},
    )
    return s1, s2, positives, ref


def write_corpus_files(
    out_dir,
    s1: ProfileCorpus,
    s2: ProfileCorpus,
    positives: list[LabeledPair],
    ref: ReferenceData,
    cfg: SynthConfig | None = None,
) -> dict[str, str]:
    """Write s1.jsonl, s2.jsonl, positives.csv, name_frequency.tsv,
    gazetteer.csv (and a config echo) into out_dir; returns the path map."""
    os.makedirs(out_dir, exist_ok=True)
    paths = {
        "s1": os.path.join(out_dir, "s1.jsonl"),
        "s2": os.path.join(out_dir, "s2.jsonl"),
        "positives": os.path.join(out_dir, "positives.csv"),
        "name_frequency": os.path.join(out_dir, "name_frequency.tsv"),
        "gazetteer": os.path.join(out_dir, "gazetteer.csv"),
    }
    save_corpus(s1, paths["s1"])
    save_corpus(s2, paths["s2"])
    write_positive_pairs(positives, paths["positives"])
    save_name_frequency(ref.name_frequency, paths["name_frequency"])
    save_gazetteer(ref.gazetteer, paths["gazetteer"])
    if cfg is not None:
        config_path = os.path.join(out_dir, "config.json")
        with open(config_path, "w", encoding="utf-8") as fh:
            json.dump(cfg.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        paths["config"] = config_path
    return paths
