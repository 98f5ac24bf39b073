"""Spec-file parsing and the command-line interface."""

import io
import json
import os

import pytest

from leafspace.cli import main
from leafspace.errors import SpecParseError
from leafspace.foliation import orthogonal_foliation
from leafspace.specfile import parse_spec, render_spec
from leafspace.tagged import coerce

SPEC_DIR = os.path.join(os.path.dirname(__file__), os.pardir, "specs")


def spec_path(name):
    return os.path.join(SPEC_DIR, name)


T3_SPEC = """
[constants.a]
kind = "algebraic"
minpoly = [-2, 0, 0, 1]
interval = ["1.2", "1.3"]

[constants.b]
kind = "algebraic"
minpoly = [-3, 0, 0, 1]
interval = ["1.4", "1.5"]

[foliation]
ambient_dim = 3
tangent_basis = [["1", "0", "a"], ["0", "1", "b"]]
"""


class TestParsing:
    def test_t3_spec(self):
        spec = parse_spec(T3_SPEC)
        F = spec.build()
        assert F.ambient_dim == 3 and F.leaf_dim == 2

    def test_expressions(self):
        spec = parse_spec("""
[constants.a]
kind = "algebraic"
minpoly = [-2, 0, 1]
interval = ["1.4", "1.5"]
[foliation]
ambient_dim = 2
tangent_basis = [["(1 + a)^2 - 2*a - a^2", "3/2 - 1/2"]]
""")
        (row,) = spec.build().tangent_basis
        assert row == (coerce(1), coerce(1))

    def test_division_by_zero(self):
        with pytest.raises(SpecParseError):
            parse_spec('[foliation]\nambient_dim = 2\n'
                       'tangent_basis = [["1/0", "1"]]')

    def test_non_isolating_interval(self):
        with pytest.raises(SpecParseError, match="isolate"):
            parse_spec("""
[constants.x]
kind = "algebraic"
minpoly = [-2, 0, 1]
interval = ["-2", "2"]
[foliation]
ambient_dim = 1
tangent_basis = [["x"]]
""")

    def test_undeclared_constant(self):
        with pytest.raises(SpecParseError, match="undeclared"):
            parse_spec('[foliation]\nambient_dim = 2\n'
                       'tangent_basis = [["c", "1"]]')

    def test_basis_and_form_exclusive(self):
        with pytest.raises(SpecParseError, match="exactly one"):
            parse_spec('[foliation]\nambient_dim = 2\n'
                       'tangent_basis = [["1", "0"]]\n'
                       'form_coefficients = [["1"]]')

    def test_render_roundtrip(self):
        F = parse_spec(T3_SPEC).build()
        D = orthogonal_foliation(F)
        D2 = parse_spec(render_spec(D)).build()
        assert D2.same_subspace(D)
        assert orthogonal_foliation(D2).same_subspace(F)


class TestCLI:
    def test_analyze_text(self, capsys):
        code = main(["analyze", spec_path("sqrt2_flow.toml")])
        out = capsys.readouterr().out
        assert code == 0
        assert "(ℤ₂ × ℤ) ⋉" in out
        assert "x^2 - 2x - 1" in out  # the unit 1 + sqrt2

    def test_density_not_dense_exit_zero(self, capsys):
        code = main(["density", spec_path("rational_plane.toml")])
        assert code == 0
        assert "not dense" in capsys.readouterr().out

    def test_diffgroup_not_dense_exit_three(self, capsys):
        code = main(["diffgroup", spec_path("rational_plane.toml")])
        assert code == 3
        assert "dense" in capsys.readouterr().err

    def test_parse_error_exit_two(self, tmp_path, capsys):
        bad = tmp_path / "bad.toml"
        bad.write_text('[foliation]\nambient_dim = 2\n'
                       'tangent_basis = [["1/0", "1"]]\n')
        assert main(["analyze", str(bad)]) == 2

    def test_missing_file_exit_two(self, capsys):
        assert main(["analyze", "/nonexistent/spec.toml"]) == 2

    def test_dual_roundtrip(self, tmp_path, capsys):
        code = main(["dual", spec_path("sqrt2_flow.toml")])
        assert code == 0
        dual_text = capsys.readouterr().out
        p = tmp_path / "dual.toml"
        p.write_text(dual_text)
        code = main(["dual", str(p)])
        assert code == 0
        dd_text = capsys.readouterr().out
        orig = parse_spec(open(spec_path("sqrt2_flow.toml")).read()).build()
        dd = parse_spec(dd_text).build()
        assert dd.same_subspace(orig)

    def test_json_deterministic(self, capsys):
        main(["analyze", spec_path("sqrt2_flow.toml"), "--format", "json"])
        first = capsys.readouterr().out
        main(["analyze", spec_path("sqrt2_flow.toml"), "--format", "json"])
        second = capsys.readouterr().out
        assert first == second
        doc = json.loads(first)
        assert doc["schema"] == "leafspace.report/1"
        assert doc["aut"]["rank_exactness"] == "exact"

    def test_json_exactness_tags(self, capsys):
        main(["autgroup", spec_path("cuberoot2_codim1.toml"),
              "--format", "json"])
        doc = json.loads(capsys.readouterr().out)
        gens = doc["aut"]["generators"]
        assert gens and all(g["exactness"] == "exact" for g in gens)
        assert doc["aut"]["dirichlet"] == {"s": 1, "t": 1, "bound": 1,
                                           "exactness": "exact"}

    def test_equivalent_subcommand(self, capsys):
        code = main(["equivalent", spec_path("sqrt2_flow.toml"),
                     spec_path("three_minus_sqrt2_flow.toml")])
        assert code == 0
        assert "equivalent" in capsys.readouterr().out

    def test_moebius_stdin(self, capsys, monkeypatch):
        doc = ('[constants.a]\nkind = "algebraic"\nminpoly = [-2, 0, 1]\n'
               'interval = ["1.4", "1.5"]\n'
               '[moebius]\nmatrix = [[1, 1], [1, 2]]\nvector = ["a"]\n')
        monkeypatch.setattr("sys.stdin", io.StringIO(doc))
        assert main(["moebius"]) == 0
        out = capsys.readouterr().out
        assert "1.585786437627" in out  # 3 - sqrt2

    def test_cf_rational(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO('[cf]\nvalue = "22/7"\n'))
        assert main(["cf"]) == 0
        assert "[3, 7]" in capsys.readouterr().out

    def test_cf_exact_only_drops_heuristic(self, capsys, monkeypatch):
        doc = ('[constants.e]\nkind = "transcendental"\n'
               'approx = "2.718281828459045235360287471352662497757"\n'
               '[cf]\nvalue = "e"\nterms = 6\n')
        monkeypatch.setattr("sys.stdin", io.StringIO(doc))
        assert main(["cf", "--format", "json", "--exact-only"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["exactness"] == "heuristic"
        assert "partial_quotients" not in out
