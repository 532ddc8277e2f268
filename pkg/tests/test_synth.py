import filecmp

import pytest

from profilematch.errors import GenerationError
from profilematch.features import corpus_idf_table, extract_features
from profilematch.folds import build_foldset
from profilematch.synth import SynthConfig, generate_corpora, write_corpus_files


class TestSynthConfig:
    def test_rate_validation(self):
        with pytest.raises(ValueError):
            SynthConfig(typo_rate=1.5)
        with pytest.raises(ValueError):
            SynthConfig(n_matched=50, n_profiles_per_network=40)
        with pytest.raises(ValueError):
            SynthConfig(friend_overlap=-0.1)

    def test_dict_round_trip(self):
        cfg = SynthConfig(seed=9, typo_rate=0.3)
        assert SynthConfig.from_dict(cfg.to_dict()) == cfg


class TestGenerateCorpora:
    def test_shapes_and_ground_truth(self):
        cfg = SynthConfig(n_profiles_per_network=50, n_matched=12, seed=1)
        s1, s2, positives, ref = generate_corpora(cfg)
        assert len(s1) == 50 and len(s2) == 50
        assert len(positives) == 12
        for p in positives:
            assert p.id1 in s1.by_id and p.id2 in s2.by_id
        assert len({p.key for p in positives}) == 12
        assert ref.gazetteer  # every vocabulary city resolvable

    def test_positives_pass_fold_validation(self):
        cfg = SynthConfig(n_profiles_per_network=50, n_matched=12, seed=2)
        s1, s2, positives, ref = generate_corpora(cfg)
        foldset, report = build_foldset(s1, s2, positives, k=5, n_per_side=2, seed=3)
        assert report.n_retained + report.n_discarded_cross_group == 12

    def test_deterministic_outputs(self, tmp_path):
        cfg = SynthConfig(n_profiles_per_network=30, n_matched=10, seed=5)
        out1 = tmp_path / "run1"
        out2 = tmp_path / "run2"
        for out in (out1, out2):
            s1, s2, positives, ref = generate_corpora(cfg)
            write_corpus_files(out, s1, s2, positives, ref, cfg)
        for name in ("s1.jsonl", "s2.jsonl", "positives.csv", "name_frequency.tsv",
                     "gazetteer.csv", "config.json"):
            assert filecmp.cmp(out1 / name, out2 / name, shallow=False), name

    def test_pseudonym_rate_one_shares_no_name_token(self):
        cfg = SynthConfig(n_profiles_per_network=60, n_matched=25, pseudonym_rate=1.0, seed=7)
        s1, s2, positives, _ = generate_corpora(cfg)
        for p in positives:
            tokens1 = set(s1.by_id[p.id1].full_name.split())
            tokens2 = set(s2.by_id[p.id2].full_name.split())
            assert not (tokens1 & tokens2), (p.id1, p.id2)

    def test_field_drop_one_removes_every_optional_field(self):
        cfg = SynthConfig(n_profiles_per_network=30, n_matched=10, field_drop_rate=1.0, seed=8)
        s1, s2, _, _ = generate_corpora(cfg)
        for corpus in (s1, s2):
            for rec in corpus.records:
                assert rec.gender is None
                assert rec.hometown is None
                assert rec.current_employer is None
                assert rec.info_fields == {}

    def test_vocabulary_exhaustion(self):
        with pytest.raises(GenerationError, match="exhausted"):
            generate_corpora(SynthConfig(n_profiles_per_network=300_000, n_matched=10, seed=1))

    def test_large_pools_use_middle_initials(self):
        cfg = SynthConfig(n_profiles_per_network=12000, n_matched=0, friend_overlap=0.5, seed=2)
        s1, s2, _, _ = generate_corpora(cfg)
        assert len(s1) == 12000 and len(s2) == 12000
        token_counts = {len(r.full_name.split()) for r in s1.records}
        assert token_counts <= {2, 3} and 3 in token_counts

    def test_friend_overlap_controls_mutual_friends(self):
        high = SynthConfig(n_profiles_per_network=60, n_matched=25, friend_overlap=0.9,
                           typo_rate=0.0, field_drop_rate=0.0, seed=11)
        low = SynthConfig(n_profiles_per_network=60, n_matched=25, friend_overlap=0.0,
                          typo_rate=0.0, field_drop_rate=0.0, seed=11)
        means = []
        for cfg in (high, low):
            s1, s2, positives, ref = generate_corpora(cfg)
            idf1, idf2 = corpus_idf_table(s1), corpus_idf_table(s2)
            vals = [
                extract_features(s1.by_id[p.id1], s2.by_id[p.id2], ref, idf1, idf2).values[25]
                for p in positives
            ]
            means.append(sum(vals) / len(vals))
        assert means[0] > means[1]
        assert means[1] == pytest.approx(0.0, abs=0.2)
