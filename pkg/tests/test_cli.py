import json

import pytest

from vlie.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGoldenOutputs:
    def test_bracket_virasoro(self, capsys):
        code, out, _ = run(
            capsys, "bracket", "--builder", "virasoro",
            "--a", "omega", "--m", "3", "--b", "omega", "--n", "-1",
        )
        assert code == 0
        assert out.strip() == "4*omega(1) + 1/2*c(-1)"

    def test_character_virasoro(self, capsys):
        code, out, _ = run(
            capsys, "character", "--builder", "virasoro",
            "--lambda", "c=1/2", "--depth", "10",
        )
        assert code == 0
        assert out.strip() == "1,0,1,1,2,2,4,4,7,8,12"

    def test_lattice_p2_dim(self, capsys):
        code, out, _ = run(capsys, "lattice", "p2", "--gram", "[[4]]", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["dim"] == 7

    def test_lattice_c2_set(self, capsys):
        code, out, _ = run(capsys, "lattice", "c2-set", "--gram", "[[2]]")
        assert code == 0
        assert out.strip() == "(-1) (0) (1)"

    def test_lattice_degenerate(self, capsys):
        code, out, _ = run(capsys, "lattice", "p2", "--gram", "[[-2]]", "--format", "json")
        assert code == 0
        assert json.loads(out)["zero_algebra"] is True

    def test_bk_compare(self, capsys):
        code, out, _ = run(capsys, "lattice", "bk-compare", "--gram", "[[2]]", "--k", "2")
        assert code == 0
        assert "isomorphic, dim 7" in out


class TestActAndDecompose:
    def test_act_json(self, capsys):
        state = json.dumps([[[["omega", -1]], "1"]])
        code, out, _ = run(
            capsys, "act", "--builder", "virasoro", "--lambda", "c=1/2",
            "--mode", "omega:3", "--state", state, "--format", "json",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["state"] == [[[], "1/4"]]

    def test_decompose_round_trip(self, capsys):
        series = json.dumps([
            {"order": 2, "coeff": {"0": "3"}},
            {"order": 0, "coeff": {"1": "1"}},
        ])
        code, out, _ = run(capsys, "decompose", "--series", series)
        assert code == 0
        assert "round trip: exact" in out


class TestCheckSuites:
    def test_check_delta(self, capsys):
        code, out, _ = run(capsys, "check", "delta", "--samples", "10")
        assert code == 0
        assert "PASS delta.power-identities" in out

    def test_check_vla_single_builder(self, capsys):
        code, out, _ = run(
            capsys, "check", "vla", "--builder", "virasoro", "--window", "3"
        )
        assert code == 0
        assert "PASS vla.jacobi.virasoro" in out

    def test_check_lattice_gram(self, capsys):
        code, out, _ = run(capsys, "check", "lattice", "--gram", "[[2]]")
        assert code == 0
        assert "PASS lattice.axioms" in out

    def test_json_report_deterministic(self, capsys):
        code1, out1, _ = run(
            capsys, "check", "delta", "--samples", "6", "--seed", "11",
            "--format", "json",
        )
        code2, out2, _ = run(
            capsys, "check", "delta", "--samples", "6", "--seed", "11",
            "--format", "json",
        )
        assert code1 == code2 == 0
        assert out1 == out2
        payload = json.loads(out1)
        assert payload["seed"] == 11
        assert all(c["pass"] for c in payload["checks"])

    def test_vp_check(self, capsys):
        code, out, _ = run(capsys, "vp-check", "--ultra", "sl2")
        assert code == 0
        assert "PASS vp.table-skew" in out

    def test_pvpa_text(self, capsys):
        code, out, _ = run(capsys, "pvpa", "--ultra", "sl2")
        assert code == 0
        assert "{e,f} = h" in out


class TestErrorPaths:
    def test_unknown_builder_exits_2(self, capsys):
        code, _, err = run(capsys, "bracket", "--builder", "nope",
                           "--a", "x", "--m", "0", "--b", "x", "--n", "0")
        assert code == 2
        assert "unknown builder" in err

    def test_bad_gram_json_exits_2(self, capsys):
        code, _, err = run(capsys, "lattice", "p2", "--gram", "[[oops")
        assert code == 2

    def test_float_rejected(self, capsys):
        code, _, err = run(capsys, "lattice", "p2", "--gram", "[[2.0]]")
        assert code == 2

    def test_usage_error_exits_2(self, capsys):
        code, _, _ = run(capsys, "check", "not-a-suite")
        assert code == 2

    def test_degenerate_gram_exits_1(self, capsys):
        code, _, err = run(capsys, "lattice", "p2", "--gram", "[[2,2],[2,2]]")
        assert code == 1
        assert "degenerate" in err


class TestConfigFile:
    def test_vertex_lie_from_file(self, tmp_path, capsys):
        config = {
            "vertex_lie": {
                "name": "witt-copy",
                "basis": [{"name": "omega", "degree": 2}],
                "d": {"domain": []},
                "brackets": [
                    {"a": "omega", "b": "omega",
                     "terms": [{"f": [["omega", "1"]], "k": 1, "l": 0},
                               {"f": [["omega", "-2"]], "k": 0, "l": 1}]}
                ],
            }
        }
        path = tmp_path / "structure.json"
        path.write_text(json.dumps(config))
        code, out, _ = run(
            capsys, "bracket", "--builder", "config", "--config", str(path),
            "--a", "omega", "--m", "2", "--b", "omega", "--n", "0",
        )
        assert code == 0
        assert out.strip() == "2*omega(1)"

    def test_affine_from_lie_algebra_config(self, tmp_path, capsys):
        config = {
            "lie_algebra": {
                "basis": ["e", "h", "f"],
                "brackets": [
                    ["h", "e", [["e", "2"]]],
                    ["h", "f", [["f", "-2"]]],
                    ["e", "f", [["h", "1"]]],
                ],
                "form": [["0", "0", "1"], ["0", "2", "0"], ["1", "0", "0"]],
            }
        }
        path = tmp_path / "sl2.json"
        path.write_text(json.dumps(config))
        code, out, _ = run(
            capsys, "bracket", "--builder", "affine:config", "--config", str(path),
            "--a", "e", "--m", "1", "--b", "f", "--n", "-1",
        )
        assert code == 0
        assert out.strip() == "h(0) + c(-1)"

    def test_u0_mismatch_rejected(self, tmp_path, capsys):
        config = {
            "vertex_lie": {
                "basis": [{"name": "a", "degree": 1}],
                "d": {"domain": []},
                "u0": ["a"],
                "brackets": [],
            }
        }
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(config))
        code, _, err = run(
            capsys, "bracket", "--builder", "config", "--config", str(path),
            "--a", "a", "--m", "0", "--b", "a", "--n", "0",
        )
        assert code == 2
        assert "u0" in err
