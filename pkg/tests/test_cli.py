import json

import pytest

from localcd.bench import csv_to_records, json_to_records
from localcd.cli import main
from localcd.synth import path_of_cliques, write_dataset


@pytest.fixture()
def raw_dataset(tmp_path):
    edges, comms = path_of_cliques(2, 5, cliques_per_community=1)
    edge_path, cmty_path = write_dataset(tmp_path / "raw", edges, comms)
    return tmp_path, str(edge_path), str(cmty_path)


def preprocess(tmp_path, edge_path, cmty_path, min_size=2):
    bundle_dir = str(tmp_path / "bundle")
    code = main([
        "preprocess", "--edges", edge_path, "--communities", cmty_path,
        "--out", bundle_dir, "--min-size", str(min_size), "--name", "toy",
    ])
    assert code == 0
    return bundle_dir


class TestDefaults:
    def test_experiment_flag_defaults(self):
        from localcd.cli import build_parser

        parser = build_parser()
        aug = parser.parse_args(["augment-bench", "--dataset", "x"])
        assert aug.tau == 3
        assert aug.methods == "ppr,hk,kwalk2,kwalk3,kwalk4"
        assert aug.alpha == 0.99 and aug.epsilon == 1e-4 and aug.t == 4.0
        ext = parser.parse_args(["extract-bench", "--dataset", "x"])
        assert ext.methods == "kwalk2,kwalk3,kwalk4,ppr,ppr-d"
        assert ext.target_nodes == 3000
        det = parser.parse_args(["detect-bench", "--dataset", "x"])
        assert det.algorithms == "hk,ppr,hks,pprs,movs,lemoneasy"
        assert det.r == 10 and det.f == 5
        assert det.extract == "ppr-d"


class TestExitCodes:
    def test_missing_required_flag_is_1(self):
        with pytest.raises(SystemExit) as exc:
            main(["detect-bench"])
        assert exc.value.code == 1

    def test_unknown_command_is_1(self):
        with pytest.raises(SystemExit) as exc:
            main(["no-such-command"])
        assert exc.value.code == 1

    def test_data_error_is_2(self, tmp_path):
        code = main(["stats", "--dataset", str(tmp_path / "missing")])
        assert code == 2

    def test_success_is_0(self, raw_dataset):
        tmp_path, edge_path, cmty_path = raw_dataset
        assert main(["gen", "--kind", "planted", "--blocks", "2",
                     "--block-size", "12", "--out", str(tmp_path / "gen")]) == 0

    def test_all_cells_failing_is_3(self, raw_dataset):
        # gamma far above lambda_2 makes every spectral solve fail.
        tmp_path, edge_path, cmty_path = raw_dataset
        bundle_dir = preprocess(tmp_path, edge_path, cmty_path)
        code = main(["detect-bench", "--dataset", bundle_dir,
                     "--algorithms", "movs", "--gamma", "100"])
        assert code == 3

    def test_partial_failures_become_empty_rows(self, raw_dataset, tmp_path):
        base, edge_path, cmty_path = raw_dataset
        bundle_dir = preprocess(base, edge_path, cmty_path)
        out = str(tmp_path / "mixed.csv")
        code = main(["detect-bench", "--dataset", bundle_dir,
                     "--algorithms", "movs,hk", "--gamma", "100",
                     "--sample", "2", "--out", out])
        assert code == 0
        records = csv_to_records(open(out).read())
        movs = [r for r in records if r.algorithm == "movs"]
        hk = [r for r in records if r.algorithm == "hk"]
        assert movs and all(r.f1 is None for r in movs)  # failed rows, kept
        assert hk and all(r.f1 == 1.0 for r in hk)


class TestPipeline:
    def test_preprocess_stats(self, raw_dataset, capsys):
        tmp_path, edge_path, cmty_path = raw_dataset
        bundle_dir = preprocess(tmp_path, edge_path, cmty_path)
        capsys.readouterr()
        assert main(["stats", "--dataset", bundle_dir]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["n"] == 10 and report["m"] == 21
        assert report["n_communities"] == 2
        assert report["mean_size"] == 5.0
        assert report["mean_diameter"] == 1.0

    def test_min_size_threshold(self, raw_dataset, capsys):
        tmp_path, edge_path, cmty_path = raw_dataset
        bundle_dir = preprocess(tmp_path, edge_path, cmty_path, min_size=10)
        capsys.readouterr()
        main(["stats", "--dataset", bundle_dir])
        report = json.loads(capsys.readouterr().out)
        assert report["n_communities"] == 0

    def test_detect_bench_csv_and_json(self, raw_dataset, tmp_path):
        base, edge_path, cmty_path = raw_dataset
        bundle_dir = preprocess(base, edge_path, cmty_path)
        csv_out = str(tmp_path / "out.csv")
        code = main(["detect-bench", "--dataset", bundle_dir,
                     "--algorithms", "hk,lemoneasy", "--out", csv_out])
        assert code == 0
        records = csv_to_records(open(csv_out).read())
        assert len(records) == 2 * 10
        assert all(r.f1 == 1.0 for r in records)

        json_out = str(tmp_path / "out.json")
        code = main(["detect-bench", "--dataset", bundle_dir,
                     "--algorithms", "hk", "--format", "json", "--out", json_out])
        assert code == 0
        payload = json.loads(open(json_out).read())
        assert payload["schema_version"] == 1
        assert "semideviation" in payload
        assert json_to_records(open(json_out).read())

    def test_csv_determinism_modulo_seconds(self, raw_dataset, tmp_path):
        import csv as csv_mod

        base, edge_path, cmty_path = raw_dataset
        bundle_dir = preprocess(base, edge_path, cmty_path)
        outs = []
        for name in ("a.csv", "b.csv"):
            out = str(tmp_path / name)
            assert main(["extract-bench", "--dataset", bundle_dir,
                         "--methods", "kwalk2,ppr-d", "--out", out]) == 0
            with open(out) as fh:
                rows = list(csv_mod.reader(fh))
            sec_idx = rows[0].index("seconds")
            outs.append([
                [col for i, col in enumerate(row) if i != sec_idx] for row in rows
            ])
        assert outs[0] == outs[1]

    def test_gen_then_full_pipeline(self, tmp_path, capsys):
        gen_dir = str(tmp_path / "g")
        assert main(["gen", "--kind", "ring-of-cliques", "--cliques", "12",
                     "--clique-size", "10", "--out", gen_dir]) == 0
        bundle_dir = str(tmp_path / "b")
        assert main(["preprocess", "--edges", f"{gen_dir}/edges.txt",
                     "--communities", f"{gen_dir}/cmty.txt",
                     "--out", bundle_dir]) == 0
        capsys.readouterr()
        out = str(tmp_path / "aug.csv")
        assert main(["augment-bench", "--dataset", bundle_dir,
                     "--methods", "ppr,kwalk2", "--sample", "1",
                     "--threads", "2", "--timing",
                     "--out", out]) == 0
        records = csv_to_records(open(out).read())
        assert len(records) == 2 * 12
        assert all(r.precision == 1.0 for r in records)
        agg_path = out.replace(".csv", ".aggregates.csv")
        agg_text = open(agg_path).read()
        assert "precision" in agg_text
