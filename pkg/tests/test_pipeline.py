import json

import numpy as np
import pytest

from contour_harmonics.contours import Structure, contour_line, validate_document
from contour_harmonics.errors import (
    ConfigError,
    EmptyInput,
    NonContiguousUnitIds,
    ParseError,
)
from contour_harmonics.features import (
    assemble_matrix,
    matrix_column_names,
    orders_from_training,
)
from contour_harmonics.pipeline import (
    AMPLITUDE_TABLE_COLUMNS,
    BOUNDARY_TABLE_COLUMNS,
    MSE_TABLE_COLUMNS,
    PipelineConfig,
    load_contours,
    run_pipeline,
    write_contours,
)
from contour_harmonics.synthetic import SyntheticSpec, generate_synthetic

from conftest import make_doc


@pytest.fixture(scope="module")
def small_corpus():
    spec = SyntheticSpec(
        n_docs=12,
        edus_per_doc=(5, 8),
        tokens_per_edu=(5, 10),
        amplitudes={(Structure.EDU, 1): (0.9, 0.4)},
        noise_sd=1.0,
        seed=17,
    )
    return generate_synthetic(spec)


@pytest.fixture(scope="module")
def corpus_file(small_corpus, tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "contours.jsonl"
    write_contours(small_corpus, path)
    return path


class TestLoadContours:
    def test_two_documents(self, tmp_path):
        docs = [
            validate_document(make_doc([0, 0, 1], doc_id="a")),
            validate_document(make_doc([0, 1, 1], doc_id="b")),
        ]
        path = tmp_path / "two.jsonl"
        write_contours(docs, path)
        assert [d.doc_id for d in load_contours(path)] == ["a", "b"]

    def test_validation_error_carries_line(self, tmp_path):
        good = contour_line(make_doc([0, 0], doc_id="ok"))
        bad = contour_line(make_doc([0, 2], doc_id="bad"))
        path = tmp_path / "mixed.jsonl"
        path.write_text(good + "\n" + bad + "\n", encoding="utf-8")
        with pytest.raises(NonContiguousUnitIds) as excinfo:
            load_contours(path)
        assert excinfo.value.line == 2
        assert excinfo.value.kind == "NonContiguousUnitIds"

    def test_parse_error_carries_line(self, tmp_path):
        path = tmp_path / "garbage.jsonl"
        good = contour_line(make_doc([0, 0], doc_id="ok"))
        path.write_text(good + "\nnot json\n")
        with pytest.raises(ParseError) as excinfo:
            load_contours(path)
        assert excinfo.value.line == 2

    def test_empty_token_list_is_empty_document(self, tmp_path):
        path = tmp_path / "empty_doc.jsonl"
        path.write_text('{"doc_id": "a", "tokens": []}\n')
        from contour_harmonics.errors import EmptyDocument

        with pytest.raises(EmptyDocument) as excinfo:
            load_contours(path)
        assert excinfo.value.line == 1

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("")
        with pytest.raises(EmptyInput):
            load_contours(path)

    def test_duplicate_doc_id(self, tmp_path):
        line = contour_line(make_doc([0, 0], doc_id="dup"))
        path = tmp_path / "dup.jsonl"
        path.write_text(line + "\n" + line + "\n")
        with pytest.raises(ParseError, match="duplicate"):
            load_contours(path)

    def test_round_trip_file(self, small_corpus, corpus_file):
        assert load_contours(corpus_file) == small_corpus


class TestConfig:
    def test_invariants(self, tmp_path):
        base = dict(input=tmp_path / "x", output_dir=tmp_path)
        with pytest.raises(ConfigError):
            PipelineConfig(lasso_lambda=-0.1, **base)
        with pytest.raises(ConfigError):
            PipelineConfig(alpha=0.0, **base)
        with pytest.raises(ConfigError):
            PipelineConfig(n_folds=1, **base)
        with pytest.raises(ConfigError):
            PipelineConfig(structures=("edu", "chapter"), **base)


@pytest.fixture(scope="module")
def report_dir(small_corpus, corpus_file, tmp_path_factory):
    out = tmp_path_factory.mktemp("report")
    config = PipelineConfig(
        input=corpus_file,
        output_dir=out,
        structures=("doc", "edu", "all"),
        seed=3,
    )
    report = run_pipeline(config, docs=small_corpus)
    return out, report


class TestRunPipeline:
    def test_tables_written(self, report_dir):
        out, report = report_dir
        names = {p.name for p in report.written}
        assert names == {
            "mse_table.csv",
            "amplitude_table.csv",
            "boundary_table.csv",
            "run_meta.json",
        }

    def test_mse_table_schema(self, report_dir):
        out, _ = report_dir
        lines = (out / "mse_table.csv").read_text().splitlines()
        assert lines[0] == ",".join(MSE_TABLE_COLUMNS)
        rows = [line.split(",") for line in lines[1:]]
        assert [r[0] for r in rows] == ["baseline", "doc", "edu", "all"]
        baseline = rows[0]
        assert baseline[3] == baseline[4] == baseline[5] == ""
        for row in rows[1:]:
            # every p printed in both raw and Holm form
            assert row[4] != "" and row[5] != ""
            assert float(row[5]) >= float(row[4]) - 1e-15

    def test_amplitude_table_schema(self, report_dir):
        out, _ = report_dir
        lines = (out / "amplitude_table.csv").read_text().splitlines()
        assert lines[0] == ",".join(AMPLITUDE_TABLE_COLUMNS)
        rows = [line.split(",") for line in lines[1:]]
        assert rows, "no persistent sinusoid rows"
        for row in rows:
            assert row[0] in {"doc", "edu", "all"}
            assert row[1] in {"doc", "edu", "sent", "par"}
            assert int(row[2]) >= 1
            assert float(row[3]) >= 0.0
            assert 0 <= int(row[4]) <= 10

    def test_boundary_table_schema(self, report_dir):
        out, _ = report_dir
        lines = (out / "boundary_table.csv").read_text().splitlines()
        assert lines[0] == ",".join(BOUNDARY_TABLE_COLUMNS)
        rows = [line.split(",") for line in lines[1:]]
        assert [(r[0], r[1]) for r in rows] == [
            ("edu", "1"),
            ("sent", "1"),
            ("par", "1"),
            ("edu", "2"),
            ("sent", "2"),
            ("par", "2"),
        ]

    def test_run_meta(self, report_dir):
        out, report = report_dir
        meta = json.loads((out / "run_meta.json").read_text())
        assert meta["seed"] == 3
        assert meta["lasso_lambda"] == 0.01
        assert meta["alpha"] == 0.001
        assert len(meta["orders_per_fold"]) == 10
        assert set(meta["fold_of_doc"]) == set(report.cv.fold_of_doc)
        assert meta["lasso_converged"] is True

    def test_byte_identical_rerun(self, small_corpus, corpus_file, report_dir, tmp_path):
        out, _ = report_dir
        config = PipelineConfig(
            input=corpus_file,
            output_dir=tmp_path,
            structures=("doc", "edu", "all"),
            seed=3,
        )
        run_pipeline(config, docs=small_corpus)
        for name in ("mse_table.csv", "amplitude_table.csv", "boundary_table.csv"):
            assert (tmp_path / name).read_bytes() == (out / name).read_bytes()

    def test_maximal_model_column_count(self, small_corpus):
        """The "all" design holds every structure's harmonics at once."""
        orders = orders_from_training(small_corpus, list(Structure))
        blocks = {"baseline", "doc", "edu", "sent", "par"}
        X = assemble_matrix(small_corpus, blocks, orders)
        expected = 7 + sum(2 * orders.order_for(s) for s in Structure)
        assert X.n_cols == expected
        assert len(matrix_column_names(blocks, orders)) == expected
