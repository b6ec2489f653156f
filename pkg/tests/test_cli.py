import json

import pytest

from partial_steinhaus.cli import HANDLERS, SCHEMA_VERSION, run, setup_argument_parser
from partial_steinhaus.core.io import read_map_file, read_point_file, write_map_file, write_point_file
from partial_steinhaus.models.geometry import RationalPoint, cube_points
from partial_steinhaus.models.maps import PartialMap


@pytest.fixture
def cli(tmp_path, capsys):
    """Run the CLI against an empty config directory and capture (code, stdout, stderr)."""
    def invoke(*argv):
        code = run(["--config-dir", str(tmp_path / "config"), *argv])
        captured = capsys.readouterr()
        return code, captured.out, captured.err
    return invoke


@pytest.fixture
def fixture_files(tmp_path, fixture_L, fixture_pts):
    map_path = tmp_path / "fixture.json"
    points_path = tmp_path / "fixture.pts"
    write_map_file(map_path, fixture_L)
    write_point_file(points_path, fixture_pts)
    return map_path, points_path


def test_every_subcommand_has_a_handler():
    parser = setup_argument_parser()
    subparsers = next(a for a in parser._actions if a.dest == "command")
    assert set(subparsers.choices) == set(HANDLERS)


def test_no_command_prints_help(cli):
    code, out, _ = cli()
    assert code == 2
    assert "usage" in out


class TestVerify:
    def test_valid_point_set(self, cli, fixture_files):
        code, out, _ = cli("verify-set", str(fixture_files[1]), "--m", "3")
        assert code == 0
        assert out.splitlines()[0] == "Valid"

    def test_scaled_cube_is_invalid(self, cli, tmp_path):
        path = tmp_path / "cube.pts"
        write_point_file(path, [RationalPoint(x.as_vector(), 3) for x in cube_points(3)])
        code, out, _ = cli("verify-set", str(path), "--m", "3")
        assert code == 1
        assert out.startswith("Invalid")

    def test_coverage_failure_is_invalid(self, cli, tmp_path, fixture_pts):
        path = tmp_path / "short.pts"
        write_point_file(path, fixture_pts[1:])
        code, out, _ = cli("--json", "verify-set", str(path), "--m", "3")
        assert code == 1
        document = json.loads(out)
        assert document["status"] == "invalid"
        assert document["coverage"]["missing"] == [[0, 0, 0]]

    def test_valid_map(self, cli, fixture_files):
        code, out, _ = cli("verify-map", str(fixture_files[0]))
        assert code == 0
        assert "permutation tables: 36, even: 36" in out

    def test_zero_map(self, cli, tmp_path, zero_map):
        path = tmp_path / "zero.json"
        write_map_file(path, zero_map)
        code, out, _ = cli("--json", "verify-map", str(path), "--method", "bruteforce")
        assert code == 1
        document = json.loads(out)
        assert document["schema_version"] == SCHEMA_VERSION
        assert document["command"] == "verify-map"
        assert document["status"] == "invalid"
        assert len(document["verdicts"]) == 1

    def test_perms_on_even_modulus_names_m(self, cli, tmp_path):
        path = tmp_path / "four.json"
        write_map_file(path, PartialMap.constant(4))
        code, out, err = cli("verify-map", str(path), "--method", "perms")
        assert code == 2
        assert out == ""
        assert "Error: m:" in err

    def test_all_methods_on_even_modulus(self, cli, tmp_path):
        path = tmp_path / "four.json"
        write_map_file(path, PartialMap.constant(4))
        code, out, _ = cli("verify-map", str(path))
        assert code == 0
        assert out.splitlines()[0] == "Valid"

    def test_pi_table(self, cli, tmp_path, zero_map):
        path = tmp_path / "zero.json"
        write_map_file(path, zero_map)
        code, out, _ = cli("pi", "--map", str(path), "--lambda", "2", "2", "1", "--x", "0", "0", "0")
        assert code == 0
        assert "pi: 0 0 2" in out
        assert "not a permutation: pi(0) = pi(1)" in out


class TestGeometryCommands:
    def test_lambda(self, cli):
        code, out, _ = cli("--json", "lambda", "--p", "5")
        assert code == 0
        assert json.loads(out)["count"] == 24

    def test_conic(self, cli):
        code, out, _ = cli("conic", "--p", "3")
        assert code == 0
        assert out.splitlines()[0].startswith("4 points")

    def test_w(self, cli):
        code, out, _ = cli("--json", "w", "--p", "7")
        assert code == 0
        assert len(json.loads(out)["w"]) == 8

    def test_bad_prime(self, cli):
        code, out, err = cli("lambda", "--p", "9")
        assert code == 2
        assert out == ""
        assert "Error: p:" in err


class TestConstructions:
    def test_search_linear(self, cli, tmp_path):
        output = tmp_path / "linear.json"
        code, out, _ = cli("search-linear", "--p", "3", "--samples", "3", "--output", str(output))
        assert code == 0
        assert "3 solutions sampled, 3 verified" in out
        assert read_map_file(output).m == 3

    def test_search_csp_infeasible(self, cli, tmp_path, zero_map):
        initial = tmp_path / "pair.json"
        L = zero_map
        for x in cube_points(3):
            if x.as_tuple() not in ((0, 0, 0), (2, 2, 1)):
                L = L.with_entry(x, None)
        write_map_file(initial, L)
        code, out, _ = cli("--json", "search-csp", "--p", "3", "--initial", str(initial))
        assert code == 1
        document = json.loads(out)
        assert document["status"] == "infeasible"
        assert document["stats"]["nodes"] == 0
        assert document["witness"] is not None

    def test_search_csp_completion(self, cli, tmp_path, fixture_L):
        initial = tmp_path / "blanked.json"
        write_map_file(initial, fixture_L.with_entry((0, 0, 0), None).with_entry((1, 1, 1), None))
        output = tmp_path / "found.json"
        code, out, _ = cli("search-csp", "--p", "3", "--initial", str(initial), "--output", str(output))
        assert code == 0
        assert out.splitlines()[0] == "found"
        assert read_map_file(output).is_complete

    def test_search_csp_wrong_size(self, cli, tmp_path):
        initial = tmp_path / "small.json"
        initial.write_text(json.dumps({"m": 1, "entries": [None]}), encoding="utf-8")
        code, _, err = cli("search-csp", "--p", "3", "--initial", str(initial))
        assert code == 2
        assert "Error: initial:" in err


class TestHeuristic:
    def test_single_prime(self, cli):
        code, out, _ = cli("heuristic", "--p", "7")
        assert code == 0
        assert out.strip() == "7 1.0E2"

    def test_range(self, cli):
        code, out, _ = cli("heuristic", "--range", "2", "13")
        assert code == 0
        assert out.splitlines() == ["3 1.4E15", "5 5.8E49", "7 1.0E2", "11 1.1E-1438", "13 4.0E-3748"]

    def test_exact_and_stirling(self, cli):
        code, out, _ = cli("--json", "heuristic", "--p", "3", "--exact", "--stirling")
        assert code == 0
        row = json.loads(out)["rows"][0]
        assert row["exact"] == str(3 ** 9 * 2 ** 36)
        assert "stirling_residual" in row

    def test_empty_range(self, cli):
        code, _, err = cli("heuristic", "--range", "14", "16")
        assert code == 2
        assert "Error: range:" in err


class TestDescent:
    def test_explicit_point(self, cli):
        code, out, _ = cli("--json", "descent", "6", "--point", "1", "2", "7", "3")
        assert code == 0
        runs = json.loads(out)["runs"]
        assert len(runs) == 1
        assert sum(c * c for c in runs[0]["vector"]) == 6
        assert runs[0]["denominators"][0] == 3

    def test_random_point_with_path(self, cli):
        code, out, _ = cli("descent", "54", "--seed", "4", "--path")
        assert code == 0
        assert out.startswith("54 = ")
        assert sum(line.startswith("54 = ") for line in out.splitlines()) == 10

    def test_seed_count(self, cli):
        code, out, _ = cli("--json", "descent", "54", "--seeds", "3")
        assert code == 0
        runs = json.loads(out)["runs"]
        assert len(runs) == 3
        assert all(sum(c * c for c in run["vector"]) == 54 for run in runs)
        code, _, err = cli("descent", "54", "--seeds", "0")
        assert code == 2
        assert "Error: seeds:" in err

    def test_not_representable(self, cli):
        code, out, _ = cli("descent", "7")
        assert code == 1
        assert "not a sum of three squares" in out

    def test_point_off_sphere(self, cli):
        code, _, err = cli("descent", "6", "--point", "1", "1", "4", "3")
        assert code == 2
        assert "Error: descent:" in err


class TestMapTools:
    def test_fixture_emit_round_trip(self, cli, tmp_path, fixture_L, fixture_pts):
        points_path = tmp_path / "out" / "fixture.pts"
        map_path = tmp_path / "out" / "fixture.json"
        code, out, _ = cli("fixture", "--emit", str(points_path), "--map-output", str(map_path))
        assert code == 0
        assert read_point_file(points_path) == fixture_pts
        assert read_map_file(map_path) == fixture_L
        code, out, _ = cli("verify-set", str(points_path), "--m", "3")
        assert code == 0

    def test_restrict(self, cli, fixture_files):
        code, out, _ = cli("--json", "restrict", str(fixture_files[0]), "--m-prime", "1")
        assert code == 0
        document = json.loads(out)
        assert document["map"]["m"] == 1
        assert document["verdict"] is None

    def test_restrict_invalid_result(self, cli, tmp_path, zero_map):
        path = tmp_path / "zero.json"
        write_map_file(path, zero_map)
        code, out, _ = cli("restrict", str(path), "--m-prime", "3")
        assert code == 1
        assert "bruteforce: Invalid" in out
        code, out, _ = cli("--json", "restrict", str(path), "--m-prime", "3")
        assert code == 1
        document = json.loads(out)
        assert document["status"] == "invalid"
        assert document["verdict"]["valid"] is False

    def test_restrict_bad_divisor(self, cli, fixture_files):
        code, _, err = cli("restrict", str(fixture_files[0]), "--m-prime", "2")
        assert code == 2
        assert "Error: restrict:" in err

    def test_identities(self, cli, tmp_path, zero_map):
        path = tmp_path / "zero.json"
        write_map_file(path, zero_map)
        code, out, _ = cli(
            "identities", "--map", str(path), "--lambda", "1", "1", "2", "--x", "2", "0", "0", "--a", "1", "--alpha", "1"
        )
        assert code == 0
        assert "translation: as stated fails, unreduced subscript holds" in out

    def test_identities_rejects_zero_alpha(self, cli, fixture_files):
        code, _, err = cli(
            "identities", "--map", str(fixture_files[0]), "--lambda", "1", "1", "1", "--x", "0", "0", "0",
            "--alpha", "3",
        )
        assert code == 2
        assert "Error: alpha:" in err

    def test_missing_map_file(self, cli, tmp_path):
        code, _, err = cli("verify-map", str(tmp_path / "absent.json"))
        assert code == 2
        assert "cannot read file" in err


class TestConfigCommand:
    def test_validate(self, cli):
        code, out, _ = cli("config", "--validate")
        assert code == 0
        assert "passed" in out

    def test_show(self, cli):
        code, out, _ = cli("--json", "config", "--show")
        assert code == 0
        assert json.loads(out)["config"]["search"]["threads"] == 1

    def test_no_operation(self, cli):
        code, _, err = cli("config")
        assert code == 2
        assert "Error: config:" in err

    def test_argparse_errors(self, cli):
        code, _, err = cli("heuristic")
        assert code == 2
        assert "required" in err
