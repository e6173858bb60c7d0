"""Tests for the umt command line."""

import json
from pathlib import Path

import pytest
import yaml

import umt.cli
from umt.cli import build_parser, main

TWO_CYCLE = {
    "language": {"relations": {"R": 2}},
    "universe": ["a", "b"],
    "relations": {"R": [["a", "b"], ["b", "a"]]},
}


def _write(tmp_path: Path, name: str, data) -> str:
    path = tmp_path / name
    path.write_text(yaml.safe_dump(data))
    return str(path)


def _run_json(capsys, argv):
    code = main([*argv, "--json"])
    return code, json.loads(capsys.readouterr().out)


class TestSyntaxCommands:
    """Tests for parse, eval and vn."""

    def test_parse(self, capsys):
        """Test that parse prints the canonical text, depth and free variables."""
        code, report = _run_json(capsys, ["parse", "forall x in y . x = x"])
        assert code == 0
        assert report["result"] == {"formula": "forall x in y . x = x", "depth": 1, "free": ["y"]}

    def test_parse_error(self, capsys):
        """Test that a syntax error is reported as an input error."""
        code, report = _run_json(capsys, ["parse", "forall x x = x"])
        assert code == 2
        assert report["verdict"] == "error"

    def test_parse_truncated_formula(self, capsys):
        code, report = _run_json(capsys, ["parse", "not"])
        assert code == 2
        assert report["counterexamples"][0]["check"] == "input"

    def test_eval_with_constants(self, capsys):
        """Test evaluating a closed bounded formula."""
        code, report = _run_json(capsys, ["eval", "--formula", "forall x in C_{{a,b}} . x in C_{{a,b,c}}"])
        assert code == 0
        assert report["result"] is True

    def test_eval_with_bindings(self, capsys):
        """Test evaluating with name=entity bindings."""
        argv = ["eval", "--formula", "x in y", "--bind", "x=a", "--bind", "y={b}"]
        code, report = _run_json(capsys, argv)
        assert code == 0
        assert report["result"] is False

    def test_vn(self, capsys):
        """Test the level size for two atoms."""
        code, report = _run_json(capsys, ["vn", "--base", "a,b", "--n", "2"])
        assert code == 0
        assert report["result"] == 66
        assert report["statistics"]["vn-size"]["recurrence"] == 66

    def test_text_output(self, capsys):
        """Test the human-readable rendering."""
        assert main(["vn", "--base", "a", "--n", "1"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("vn: pass")
        assert "vn-size.recurrence = 3" in out
        assert "Result: 3" in out


class TestFilterCommands:
    """Tests for filters, ultraproducts and compactness."""

    @pytest.fixture
    def family(self, tmp_path):
        return _write(tmp_path, "family.yaml", {"index_set": ["x", "y", "z"], "members": [["x", "y"], ["y", "z"]]})

    @pytest.fixture
    def power(self, tmp_path):
        return _write(tmp_path, "power.yaml", {"index_set": ["0", "1"], "power": TWO_CYCLE})

    def test_fip_and_extend(self, capsys, family):
        """Test the finite intersection property and the ultrafilter extension."""
        _, report = _run_json(capsys, ["filters", "fip", "--family", family])
        assert report["result"] is True
        _, report = _run_json(capsys, ["filters", "extend", "--family", family])
        assert report["result"] == {"principal": "y"}

    def test_generate_without_fip(self, capsys, tmp_path):
        """Test that generating from a family without the property is an input error."""
        path = _write(tmp_path, "bad.yaml", {"index_set": ["x", "y"], "members": [["x"], ["y"]]})
        code, report = _run_json(capsys, ["filters", "generate", "--family", path])
        assert code == 2
        assert report["counterexamples"][0]["check"] == "input"

    def test_los_check(self, capsys, tmp_path, power):
        """Test the Łoś suite over a principal ultrafilter."""
        ultrafilter = _write(tmp_path, "u.yaml", {"principal": "1"})
        code, report = _run_json(capsys, ["los-check", "--family", power, "--ultrafilter", ultrafilter, "--depth", "1"])
        assert code == 0
        assert set(report["statistics"]) == {"los", "principal-collapse"}

    def test_los_check_over_a_proper_filter(self, capsys, tmp_path, power):
        """Test that a filter that is not ultra produces counterexamples."""
        proper = _write(tmp_path, "f.yaml", {"members": [["0", "1"]]})
        code, report = _run_json(capsys, ["los-check", "--family", power, "--ultrafilter", proper, "--depth", "1"])
        assert code == 1
        assert report["verdict"] == "fail"

    def test_ultraproduct_needs_an_ultrafilter(self, capsys, tmp_path, power):
        """Test that a proper filter is refused unless --reduced is given."""
        proper = _write(tmp_path, "f.yaml", {"members": [["0", "1"]]})
        assert _run_json(capsys, ["ultraproduct", "--family", power, "--ultrafilter", proper])[0] == 2
        code, report = _run_json(capsys, ["ultraproduct", "--family", power, "--ultrafilter", proper, "--reduced"])
        assert code == 0
        assert len(report["result"]["universe"]) == 4

    def test_compactness(self, capsys, tmp_path):
        """Test the compactness witness from three subset models."""
        both = {**TWO_CYCLE, "universe": ["u", "v"], "relations": {"R": [["u", "u"]]}}
        loop = {**TWO_CYCLE, "universe": ["u"], "relations": {"R": [["u", "u"]]}}
        data = {
            "sentences": ["exists x . R(x, x)", "exists x . not R(x, x)"],
            "models": {"[0]": loop, "[1]": TWO_CYCLE, "[0,1]": both},
        }
        code, report = _run_json(capsys, ["compactness", "--input", _write(tmp_path, "c.yaml", data)])
        assert code == 0
        assert report["result"]["universe"] == ["<u>", "<v>"]


class TestStarCommands:
    """Tests for the star-map subcommands."""

    @pytest.fixture
    def context(self, tmp_path):
        return _write(tmp_path, "ctx.yaml", {"base": ["a", "b"], "rank_bound": 2})

    def test_star_context(self, capsys, context):
        """Test invariants and pointwise laws of a small context."""
        code, report = _run_json(capsys, ["star-context", "--context", context])
        assert code == 0
        assert report["result"]["point"] == "0"
        assert report["result"]["image_base"] == ["a", "b"]

    def test_renamed_context(self, capsys, context):
        """Test that --canonicalize false renames atom classes."""
        code, report = _run_json(capsys, ["star-context", "--context", context, "--canonicalize", "false"])
        assert code == 0
        assert report["result"]["image_base"] == ["U_a", "U_b"]

    def test_classify(self, capsys, context):
        """Test classification of a set over the base atoms in a renamed context."""
        argv = ["classify", "--context", context, "--entity", "{a}", "--canonicalize", "false"]
        code, report = _run_json(capsys, argv)
        assert code == 0
        assert report["result"]["kind"] == "external"

    def test_comprehension(self, capsys, context):
        """Test star comprehension with a parameter."""
        argv = ["comprehension", "--context", context, "--formula", "y notin z", "--set", "{a,b}", "--param", "z={a}"]
        code, report = _run_json(capsys, argv)
        assert code == 0
        assert report["result"] == "{b}"

    def test_enlargement(self, capsys):
        """Test the enlargement pipeline over one atom."""
        code, report = _run_json(capsys, ["enlargement", "--base", "a", "--target", "{a}"])
        assert code == 0
        assert report["result"] == "{a}"

    def test_transfer_check_forwards_options(self, capsys, tmp_path, mocker):
        """Test that --max-params and the configured seed reach the transfer check."""
        spy = mocker.spy(umt.cli, "check_transfer")
        path = _write(tmp_path, "one.yaml", {"base": ["a"], "rank_bound": 2})
        code, report = _run_json(capsys, ["transfer-check", "--context", path, "--depth", "1", "--max-params", "1"])
        assert code == 0
        assert spy.call_args.kwargs == {"depth": 1, "max_params": 1, "seed": 0}
        assert report["seed"] == 0


class TestReversalCommands:
    """Tests for order reversals and epsilon-models on the command line."""

    @pytest.fixture
    def reversal(self, tmp_path):
        data = {
            "ground_set": [0, 1],
            "index_set": ["i0"],
            "p": {"[]": ["i0"], "[0]": ["i0"], "[1]": ["i0"], "[0,1]": []},
        }
        return _write(tmp_path, "p.yaml", data)

    def test_reversal_check(self, capsys, reversal):
        """Test an order reversal that is not anti-additive."""
        code, report = _run_json(capsys, ["reversal-check", "--reversal", reversal])
        assert code == 0
        stats = report["statistics"]["reversal"]
        assert stats["anti_additive"] is False
        assert stats["anti_additivity_witness"] == [[0], [1]]

    def test_support_needs_anti_additivity(self, capsys, reversal):
        """Test that support refuses a reversal that is not anti-additive."""
        code, report = _run_json(capsys, ["support", "--reversal", reversal])
        assert code == 2
        assert report["counterexamples"][0]["witness"] == [[0], [1]]

    def test_collapse(self, capsys, tmp_path):
        """Test the collapse of a small epsilon-model."""
        model = {"carrier": ["X", "a", "b", "s"], "E": [["a", "X"], ["b", "X"], ["a", "s"]], "base": "X"}
        code, report = _run_json(capsys, ["collapse", "--model", _write(tmp_path, "m.yaml", model)])
        assert code == 0
        assert report["result"]["h"]["s"] == "{atom_a}"

    def test_truncate(self, capsys, tmp_path):
        """Test that a self-membered node is dropped."""
        model = {"carrier": ["X", "a", "c"], "E": [["a", "X"], ["c", "c"]], "base": "X"}
        code, report = _run_json(capsys, ["truncate", "--model", _write(tmp_path, "m.yaml", model)])
        assert code == 0
        assert report["result"]["carrier"] == ["X", "a"]

    def test_missing_file(self, capsys, tmp_path):
        """Test that a missing input file is an input error."""
        assert _run_json(capsys, ["collapse", "--model", str(tmp_path / "nope.yaml")])[0] == 2


class TestTheoremMap:
    """Tests for the theorem map."""

    def test_lists_entries(self, capsys):
        """Test that every implemented entry names a test."""
        code, report = _run_json(capsys, ["paper-map"])
        assert code == 0
        assert report["subcommand"] == "paper-map"
        implemented = [t for t in report["result"] if t["status"] == "implemented"]
        assert implemented
        assert all(t["tests"] for t in implemented)

    def test_common_options(self):
        """Test that shared options are accepted by every subcommand parser."""
        parser = build_parser()
        args = parser.parse_args(["paper-map", "--seed", "7"])
        assert args.command == "paper-map"
        assert args.seed == 7
        args = parser.parse_args(["vn", "--base", "a", "--n", "1", "--canonicalize", "no"])
        assert args.canonicalize is False
        assert set(umt.cli.HANDLERS) >= {"vn", "paper-map", "los-check", "collapse"}

    def test_referenced_tests_exist(self, capsys):
        """Test that each test reference in the map names an existing file and class."""
        _, report = _run_json(capsys, ["paper-map"])
        root = Path(__file__).parent.parent
        for entry in report["result"]:
            for ref in entry.get("tests", []):
                path, _, cls = ref.partition("::")
                text = (root / path).read_text()
                assert not cls or f"class {cls}:" in text, ref

    def test_theorem_map_alias(self, capsys):
        """Test that the older subcommand name prints the same listing."""
        _, listing = _run_json(capsys, ["paper-map"])
        code, report = _run_json(capsys, ["theorem-map"])
        assert code == 0
        assert report["result"] == listing["result"]
