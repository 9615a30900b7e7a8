import json

import numpy as np
import pytest

import fixtures_e2e as e2e
from oracles import pure_text_predictions
from verbsense.cca import fit_cca
from verbsense.disambig import Prediction
from verbsense.errors import FormatError, InsufficientDataError, MissingKeyError
from verbsense.evaluation import (
    DEFAULT_CELLS,
    accuracy,
    format_report,
    grid_cells,
    load_dataset,
    parse_cell,
    run_grid,
    save_dataset,
)
from verbsense.imagerep import ImageRecord
from verbsense.inventory import parse_inventory


def pred(image_id, sense_id):
    return Prediction(image_id=image_id, verb="v", predicted_sense_id=sense_id)


class TestAccuracy:
    def test_three_of_four(self):
        preds = [pred("a", "s1"), pred("b", "s1"), pred("c", "s1"), pred("d", "s1")]
        gold = {"a": "s1", "b": "s2", "c": "s1", "d": "s1"}
        assert accuracy(preds, gold) == 0.75

    def test_empty_is_undefined(self):
        with pytest.raises(InsufficientDataError):
            accuracy([], {})

    def test_all_correct(self):
        preds = [pred("a", "s1"), pred("b", "s2")]
        assert accuracy(preds, {"a": "s1", "b": "s2"}) == 1.0

    def test_missing_gold(self):
        with pytest.raises(MissingKeyError):
            accuracy([pred("a", "s1")], {"b": "s1"})


class TestLoadDataset:
    def test_three_line_fixture(self, tmp_path):
        inv = e2e.build_inventory()
        records = e2e.build_records()[:3]
        path = tmp_path / "dataset.jsonl"
        save_dataset(records, path)
        assert load_dataset(path, inv) == records

    def test_unknown_sense_reference(self, tmp_path):
        inv = e2e.build_inventory()
        rec = ImageRecord(
            image_id="x", verb="ride", gold_sense_id="ride.99", source_dataset="coco"
        )
        path = tmp_path / "bad.jsonl"
        save_dataset([rec], path)
        with pytest.raises(FormatError, match="ride.99"):
            load_dataset(path, inv)

    def test_unknown_verb_reference(self, tmp_path):
        inv = e2e.build_inventory()
        rec = ImageRecord(
            image_id="x", verb="fly", gold_sense_id="fly.01", source_dataset="coco"
        )
        path = tmp_path / "bad.jsonl"
        save_dataset([rec], path)
        with pytest.raises(FormatError, match="unknown verb"):
            load_dataset(path, inv)

    def test_duplicate_image_id(self, tmp_path):
        inv = e2e.build_inventory()
        records = e2e.build_records()[:1] * 2
        path = tmp_path / "dup.jsonl"
        save_dataset(records, path)
        with pytest.raises(FormatError, match="duplicate image id"):
            load_dataset(path, inv)

    def test_line_number_in_parse_error(self, tmp_path):
        path = tmp_path / "broken.jsonl"
        path.write_text('{"image_id": "a"}\nnot json\n', encoding="utf-8")
        with pytest.raises(FormatError, match="line 1|line 2"):
            load_dataset(path, e2e.build_inventory())


class TestCells:
    def test_parse_cell(self):
        assert parse_cell("O+C") == ("O+C", "none")
        assert parse_cell("concat:CNN+O") == ("CNN+O", "concat")
        assert parse_cell("cca:CNN+O+C") == ("CNN+O+C", "cca")
        with pytest.raises(ValueError):
            parse_cell("bogus")

    def test_grid_cells_expansion(self):
        cells = grid_cells(["O", "CNN", "CNN+C"], ["concat", "cca"])
        assert cells == ["O", "CNN", "concat:CNN+C", "cca:CNN+C"]


class TestRunGrid:
    def test_engineered_c_gold_accuracy_is_one(self):
        report = run_grid(
            e2e.build_records(),
            e2e.build_inventory(),
            cells=("C",),
            table=e2e.build_table(),
        )
        assert report.rows["C"] == 1.0
        assert report.counts["images"] == 12
        assert report.counts["verbs"] == 3

    def test_permuted_descriptions_match_oracle(self):
        records = e2e.build_records(permute=True)
        rows, sense_defs, word_vectors = e2e.oracle_inputs(records)
        oracle_preds = pure_text_predictions(rows, sense_defs, word_vectors)
        oracle_accuracy = sum(
            oracle_preds[r.image_id] == r.gold_sense_id for r in records
        ) / len(records)
        report = run_grid(
            records, e2e.build_inventory(), cells=("C",), table=e2e.build_table()
        )
        assert report.rows["C"] == oracle_accuracy == 0.75

    def test_fs_baseline_on_rank_one_fixture(self):
        inv = parse_inventory(
            {
                "verbs": {
                    "jump": {
                        "class": "motion",
                        "senses": [
                            {"id": "jump.01", "definition": "horse saddle",
                             "examples": [], "depictable": True},
                            {"id": "jump.02", "definition": "guitar chord",
                             "examples": [], "depictable": True},
                        ],
                    }
                }
            }
        )
        records = [
            ImageRecord(
                image_id=f"j{i}", verb="jump", gold_sense_id="jump.01",
                source_dataset="coco", descriptions_gold=("horse saddle",),
            )
            for i in range(4)
        ]
        report = run_grid(records, inv, cells=("C",), table=e2e.build_table())
        assert report.baselines["fs"] == 1.0
        assert report.baselines["mfs"] == 1.0

    def test_lesk_baseline_perfect_on_engineered_fixture(self):
        report = run_grid(
            e2e.build_records(), e2e.build_inventory(), cells=(), table=e2e.build_table()
        )
        assert report.baselines["lesk"] == 1.0

    def test_mfs_at_least_fs(self):
        report = run_grid(
            e2e.build_records(permute=True),
            e2e.build_inventory(),
            cells=(),
            table=e2e.build_table(),
        )
        assert report.baselines["mfs"] >= report.baselines["fs"]

    def test_missing_resources_mark_cell_absent(self):
        report = run_grid(
            e2e.build_records(),
            e2e.build_inventory(),
            cells=("C", "CNN"),
            table=e2e.build_table(),
        )
        assert report.rows["C"] == 1.0
        assert report.rows["CNN"] is None
        assert "CNN" in report.counts["absent"]

    def test_full_grid_with_all_resources(self):
        from verbsense.disambig import DisambigResources, Disambiguator
        from verbsense.imagerep import RepConfig

        records = e2e.build_records()
        image_feats, sense_feats, manifest = e2e.build_feature_stores()
        table = e2e.build_table()
        # CCA trained on (description rep, image feature) pairs, one per image
        disamb = Disambiguator(
            e2e.build_inventory(), RepConfig(channel="C"), DisambigResources(table=table)
        )
        pairs = [
            (disamb.image_rep(rec), image_feats.vector(rec.image_id)) for rec in records
        ]
        cca_model = fit_cca(pairs, n=3, ridge=1e-2)
        report = run_grid(
            records,
            e2e.build_inventory(),
            cells=DEFAULT_CELLS,
            table=table,
            image_features=image_feats,
            sense_features=sense_feats,
            sense_manifest=manifest,
            cca_model=cca_model,
        )
        assert report.rows["C"] == 1.0
        assert report.rows["CNN"] == 1.0  # features engineered on the cluster axes
        for cell in DEFAULT_CELLS:
            assert report.rows[cell] is not None, report.counts["absent"]
            assert 0.0 <= report.rows[cell] <= 1.0
        assert report.counts["absent"] == {}
        text = format_report(report)
        assert "C" in text and "baselines" in text

    def test_deterministic(self):
        kwargs = dict(
            dataset=e2e.build_records(permute=True),
            inv=e2e.build_inventory(),
            cells=("C", "O", "O+C"),
            table=e2e.build_table(),
        )
        a = run_grid(**kwargs)
        b = run_grid(**kwargs)
        assert a.rows == b.rows and a.baselines == b.baselines and a.counts == b.counts

    def test_jobs_do_not_change_results(self):
        serial = run_grid(
            e2e.build_records(permute=True),
            e2e.build_inventory(),
            cells=("C",),
            table=e2e.build_table(),
            jobs=1,
        )
        threaded = run_grid(
            e2e.build_records(permute=True),
            e2e.build_inventory(),
            cells=("C",),
            table=e2e.build_table(),
            jobs=4,
        )
        assert serial.rows == threaded.rows

    def test_class_accuracy_weighted_mean(self):
        records = e2e.build_records(permute=True)
        inv = e2e.build_inventory()
        table = e2e.build_table()
        per_class = {}
        for verb_class in ("motion", "nonmotion", "all"):
            report = run_grid(records, inv, cells=("C",), table=table,
                              verb_class=verb_class)
            per_class[verb_class] = (report.rows["C"], report.counts["images"])
        acc_m, n_m = per_class["motion"]
        acc_n, n_n = per_class["nonmotion"]
        acc_all, n_all = per_class["all"]
        assert n_all == n_m + n_n
        assert acc_all == pytest.approx((acc_m * n_m + acc_n * n_n) / n_all)

    def test_report_round_trips_through_json(self):
        report = run_grid(
            e2e.build_records(), e2e.build_inventory(), cells=("C",), table=e2e.build_table()
        )
        blob = json.dumps(report.to_dict())
        assert json.loads(blob)["rows"]["C"] == 1.0
