"""Config parsing, validation, and stage-scoped hashing."""

import dataclasses

import pytest

from argex.config import (
    INGEST_FIELDS,
    SPACE_FIELDS,
    PipelineConfig,
    config_from_items,
    config_hash,
    config_to_text,
    ingest_hash,
    load_config,
    space_hash,
)
from argex.errors import ConfigError


class TestValidation:
    def test_defaults_construct(self):
        config = PipelineConfig()
        assert config.vocab_threshold == 1000
        assert config.k_values == (10, 20, 30, 40, 50)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"vocab_threshold": 0},
            {"window_width": 0},
            {"shards": 0},
            {"col_form": -1},
            {"log_base": "2"},
            {"log_base": "10"},
            {"boa_rank_mode": "median"},
            {"boa_space": "arg"},
            {"variant_kinds": ("deps", "bag")},
            {"compositions": ("sum", "avg")},
            {"k_values": ()},
            {"k_values": (10, 0)},
            {"pos_map": "N:n,V"},
        ],
    )
    def test_bad_values_rejected(self, kwargs):
        with pytest.raises(ConfigError):
            PipelineConfig(**kwargs)

    def test_duplicate_column_indices_rejected(self):
        with pytest.raises(ConfigError, match="distinct"):
            PipelineConfig(col_form=2, col_lemma=2)

    def test_log_base_message_explains_the_restriction(self):
        with pytest.raises(ConfigError, match="rankings"):
            PipelineConfig(log_base="10")


class TestCoercion:
    def test_int_and_bool_and_lists(self):
        config = config_from_items(
            {
                "vocab_threshold": " 17 ",
                "vocab_threshold_inclusive": "No",
                "window_filtered_positions": "TRUE",
                "corpus_paths": "a.conll, b.conll ,",
                "k_values": "5, 10",
                "subject_labels": "nsubj",
            }
        )
        assert config.vocab_threshold == 17
        assert config.vocab_threshold_inclusive is False
        assert config.window_filtered_positions is True
        assert config.corpus_paths == ("a.conll", "b.conll")
        assert config.k_values == (5, 10)
        assert config.subject_labels == ("nsubj",)

    @pytest.mark.parametrize(
        "items",
        [
            {"vocab_threshold": "many"},
            {"window_filtered_positions": "maybe"},
            {"k_values": "10,twenty"},
            {"no_such_key": "1"},
        ],
    )
    def test_bad_items_rejected(self, items):
        with pytest.raises(ConfigError):
            config_from_items(items)


class TestLoadConfig:
    def test_comments_blanks_and_overrides(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text(
            "# pipeline settings\n"
            "\n"
            "vocab_threshold = 5   # inclusive\n"
            "corpus_paths = x.conll\n",
            encoding="utf-8",
        )
        config = load_config(str(path))
        assert config.vocab_threshold == 5
        assert config.corpus_paths == ("x.conll",)
        overridden = load_config(str(path), overrides={"vocab_threshold": "9"})
        assert overridden.vocab_threshold == 9

    def test_missing_equals_reports_line_number(self, tmp_path):
        path = tmp_path / "bad.conf"
        path.write_text("vocab_threshold 5\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="line 1"):
            load_config(str(path))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            load_config(str(tmp_path / "absent.conf"))

    def test_checked_in_configs_load(self, fixture_paths):
        bicknell = load_config(str(fixture_paths["bicknell_config"]))
        assert bicknell.vocab_threshold == 3
        chow = load_config(str(fixture_paths["chow_config"]))
        assert chow.chow_path.endswith("chow50.tsv")


class TestCanonicalText:
    def test_every_field_in_definition_order(self):
        config = PipelineConfig()
        lines = config_to_text(config).splitlines()
        names = [line.split("=", 1)[0] for line in lines]
        assert names == [f.name for f in dataclasses.fields(PipelineConfig)]

    def test_round_trips_through_the_parser(self):
        config = PipelineConfig(
            corpus_paths=("a.conll", "b.conll"),
            vocab_threshold=7,
            vocab_threshold_inclusive=False,
            k_values=(5, 15),
            relation_denylist=("punct",),
        )
        items = {}
        for line in config_to_text(config).splitlines():
            key, _, value = line.partition("=")
            items[key] = value
        assert config_from_items(items) == config


class TestHashing:
    def test_field_projections_nest(self):
        assert set(INGEST_FIELDS) < set(SPACE_FIELDS)
        assert "out_dir" not in SPACE_FIELDS

    def test_ingest_fields_change_every_hash(self):
        base = PipelineConfig()
        changed = dataclasses.replace(base, vocab_threshold=7)
        assert ingest_hash(changed) != ingest_hash(base)
        assert space_hash(changed) != space_hash(base)
        assert config_hash(changed) != config_hash(base)

    def test_weighting_fields_spare_the_ingest_hash(self):
        base = PipelineConfig()
        changed = dataclasses.replace(base, boa_rank_mode="max")
        assert ingest_hash(changed) == ingest_hash(base)
        assert space_hash(changed) != space_hash(base)
        assert config_hash(changed) != config_hash(base)

    def test_eval_fields_spare_ingest_and_space_hashes(self):
        base = PipelineConfig()
        changed = dataclasses.replace(base, k_values=(10,), chow_path="x.tsv")
        assert ingest_hash(changed) == ingest_hash(base)
        assert space_hash(changed) == space_hash(base)
        assert config_hash(changed) != config_hash(base)

    def test_out_dir_changes_no_hash(self):
        base = PipelineConfig()
        changed = dataclasses.replace(base, out_dir="elsewhere")
        assert ingest_hash(changed) == ingest_hash(base)
        assert space_hash(changed) == space_hash(base)
        assert config_hash(changed) == config_hash(base)

    def test_shard_count_never_changes_tensor_hashes(self):
        # sharding is an execution detail; merged counts are identical
        base = PipelineConfig()
        changed = dataclasses.replace(base, shards=4)
        assert ingest_hash(changed) == ingest_hash(base)
        assert space_hash(changed) == space_hash(base)

    def test_hashes_are_hex_sha256(self):
        digest = config_hash(PipelineConfig())
        assert len(digest) == 64
        int(digest, 16)
