import json
import os

import pytest
from click.testing import CliRunner

from gridhom.errors import MalformedGrid
from gridhom.io_cli import (
    GridFile,
    SCHEMA,
    cli,
    corpus_path,
    diagram_of,
    parse_grid_text,
    read_grid_file,
    write_grid_text,
)

CORPUS = [
    "unknot_2x2",
    "unknot_3x3_symmetric",
    "trefoil_31plus_5x5",
    "trefoil_31minus_7x7_symmetric",
    "singular_trefoil_5x5",
    "hopf_gminus_6x6",
    "unknot_gzero_6x6",
    "figure8_7x7_symmetric",
]


def run(*args):
    return CliRunner().invoke(cli, list(args), obj={})


class TestGridFileFormat:
    @pytest.mark.parametrize("name", CORPUS)
    def test_round_trip_byte_identical(self, name):
        path = corpus_path(name)
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        assert write_grid_text(parse_grid_text(text)) == text

    def test_parse_basics(self):
        gf = parse_grid_text(
            "# a comment\nn: 2\nO: (1,2),(2,1)\nX: (1,1),(2,2)\nname: u\n")
        assert gf.n == 2
        assert sorted(gf.O) == [(1, 2), (2, 1)]
        assert gf.name == "u"
        assert gf.XX is None

    def test_parse_optional_fields(self):
        gf = parse_grid_text(
            "n: 5\nO: (1,1)\nX: (1,1)\nXX: (3,3)\nsymmetry: preserve\n"
            "lambda: -2\nquotient: q.grid\n")
        assert gf.XX == (3, 3)
        assert gf.symmetry == "preserve"
        assert gf.lam == -2
        assert gf.quotient == "q.grid"

    def test_rejects_missing_required_field(self):
        with pytest.raises(MalformedGrid):
            parse_grid_text("n: 2\nO: (1,2),(2,1)\n")

    def test_rejects_duplicate_field(self):
        with pytest.raises(MalformedGrid):
            parse_grid_text("n: 2\nn: 3\nO: (1,2)\nX: (1,1)\n")

    def test_rejects_garbage_cells(self):
        with pytest.raises(MalformedGrid):
            parse_grid_text("n: 2\nO: (1,2),bogus\nX: (1,1),(2,2)\n")

    def test_rejects_unkeyed_line(self):
        with pytest.raises(MalformedGrid):
            parse_grid_text("n: 2\nO: (1,2),(2,1)\nX: (1,1),(2,2)\njunk\n")

    def test_rejects_bad_symmetry_value(self):
        with pytest.raises(MalformedGrid):
            parse_grid_text("n: 2\nO: (1,2),(2,1)\nX: (1,1),(2,2)\nsymmetry: maybe\n")

    def test_writer_sorts_cells(self):
        gf = GridFile(n=2, O=[(2, 1), (1, 2)], X=[(2, 2), (1, 1)])
        assert write_grid_text(gf) == "n: 2\nO: (1,2),(2,1)\nX: (1,1),(2,2)\n"

    def test_pinned_symmetry_confirmed(self):
        gf = read_grid_file(corpus_path("trefoil_31plus_5x5"))
        assert gf.symmetry == "swap"
        diagram_of(gf)

    def test_pinned_symmetry_mismatch_fails(self):
        from gridhom.errors import NotSymmetric

        gf = read_grid_file(corpus_path("unknot_2x2"))
        gf.symmetry = "swap"
        with pytest.raises(NotSymmetric):
            diagram_of(gf)


class TestCLI:
    def test_homology_table(self):
        res = run("homology", corpus_path("unknot_2x2"))
        assert res.exit_code == 0
        assert "total rank: 2" in res.output

    def test_homology_json_schema(self):
        res = run("--format", "json", "homology", corpus_path("trefoil_31plus_5x5"))
        assert res.exit_code == 0
        rep = json.loads(res.output)
        assert rep["schema"] == SCHEMA
        assert rep["total_rank"] == 48
        assert rep["stripped"] == [[0, -2, 1], [1, 0, 1], [2, 2, 1]]

    def test_alexpoly(self):
        res = run("alexpoly", corpus_path("hopf_gminus_6x6"))
        assert res.exit_code == 0
        assert "t^1/2 - t^-1/2" in res.output

    def test_symmetry(self):
        res = run("symmetry", corpus_path("singular_trefoil_5x5"))
        assert res.exit_code == 0
        assert "behavior=PreservesOX" in res.output
        assert "FAIL" not in res.output

    def test_symmetry_failing_laws_exit_nonzero(self):
        res = run("symmetry", corpus_path("trefoil_31plus_5x5"))
        assert res.exit_code == 1
        assert "[FAIL] A(tau x) = -A(x)" in res.output

    def test_sstau_reports_graceful_error(self):
        res = run("sstau", corpus_path("trefoil_31plus_5x5"))
        assert res.exit_code == 1
        assert "Error" in res.output
        assert res.exception is None or res.exception.code == 1

    def test_spectral(self):
        res = run("spectral", corpus_path("singular_trefoil_5x5"))
        assert res.exit_code == 0
        assert "page E_1 (rank 48)" in res.output
        assert "page E_2 (rank 4)" in res.output

    def test_skein(self):
        res = run("skein", corpus_path("trefoil_31plus_5x5"))
        assert res.exit_code == 0
        assert "triangle verified: True" in res.output

    def test_thm2(self):
        res = run("thm2", corpus_path("singular_trefoil_5x5"),
                  "--quotient", corpus_path("unknot_2x2"), "--lambda", "1")
        assert res.exit_code == 0
        assert "localization comparison: pass" in res.output

    def test_thm2_wrong_lambda_graceful(self):
        res = run("thm2", corpus_path("singular_trefoil_5x5"),
                  "--quotient", corpus_path("unknot_2x2"), "--lambda", "-1")
        assert res.exit_code == 1
        assert "Error" in res.output

    def test_deterministic_output(self):
        args = ("--format", "json", "spectral", corpus_path("singular_trefoil_5x5"))
        assert run(*args).output == run(*args).output

    def test_threads_do_not_change_output(self):
        base = run("--format", "json", "homology", corpus_path("trefoil_31plus_5x5"))
        threaded = run("--threads", "4", "--format", "json", "homology",
                       corpus_path("trefoil_31plus_5x5"))
        assert base.output == threaded.output

    def test_oversized_grid_refused(self, tmp_path):
        n = 11
        O = ",".join(f"({i},{i % n + 1})" for i in range(1, n + 1))
        X = ",".join(f"({i},{i})" for i in range(1, n + 1))
        path = tmp_path / "big.grid"
        path.write_text(f"n: {n}\nO: {O}\nX: {X}\n", encoding="utf-8")
        res = run("homology", str(path))
        assert res.exit_code == 1
        assert "exceeds the cap" in res.output
        assert not isinstance(res.exception, Exception) or isinstance(
            res.exception, SystemExit)

    def test_malformed_file_graceful(self, tmp_path):
        path = tmp_path / "bad.grid"
        path.write_text("n: 2\nO: (1,2)\nX: (1,1),(2,2)\n", encoding="utf-8")
        res = run("homology", str(path))
        assert res.exit_code == 1
        assert "Error" in res.output

    def test_plot_dir_writes_figures(self, tmp_path):
        out = tmp_path / "plots"
        res = run("--format", "json", "homology", corpus_path("unknot_2x2"),
                  "--plot-dir", str(out))
        assert res.exit_code == 0
        rep = json.loads(res.output)
        assert rep["plots"]
        for p in rep["plots"]:
            assert os.path.exists(p)
            assert p.endswith(".png")

    def test_spectral_plot_dir(self, tmp_path):
        out = tmp_path / "plots"
        res = run("--format", "json", "spectral",
                  corpus_path("singular_trefoil_5x5"), "--plot-dir", str(out))
        assert res.exit_code == 0
        rep = json.loads(res.output)
        assert len(rep["plots"]) == 4
