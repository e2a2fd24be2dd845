import pytest

from profinite import Usage
from profinite.cli import execute, main, parse_command, split_element


def run(argv):
    return execute(parse_command(argv))


def test_parse_encode():
    cmd = parse_command(["encode", "--tower", "tower cyclotomic p=3 depth=2", "--element", "2,5"])
    assert cmd.verb == "encode"
    assert cmd.args["element"] == "2,5"


def test_parse_dist():
    cmd = parse_command(["dist", "cantor", "0110", "0100"])
    assert cmd.args["metric"] == "cantor"


@pytest.mark.parametrize("argv", [
    ["encode", "--element", "2,5"],
    ["frobnicate"],
    [],
    ["dist", "euclid", "0", "1"],
    ["partition", "--tower", "cyclotomic p=3 depth=2", "--lambda", "1", "--colour", "red"],
    ["integral", "--tower", "binary", "--depth", "1", "--w", "1", "--mode", "mc"],
])
def test_usage_errors(argv):
    with pytest.raises(Usage):
        parse_command(argv)


def test_main_exit_codes(capsys):
    assert main(["encode", "--element", "2,5"]) == 2
    assert main(["tower", "--tower", "aut_f2ab depth=4"]) == 4
    assert main(["encode", "--tower", "cyclotomic p=3 depth=2", "--element", "1,5"]) == 3
    assert "IncoherentAtLevel" in capsys.readouterr().out


def test_dist_report():
    r = run(["dist", "cantor", "0110", "0100"])
    assert "d = 1/8" in r.body().splitlines()
    assert "d = 2" in run(["dist", "hamming", "0101", "0110"]).body()


def test_integral_report():
    r = run(["integral", "--tower", "binary", "--depth", "1", "--w", "3.141592653589793", "--hbar", "1"])
    line = next(ln for ln in r.results if ln.startswith("I_1"))
    re, _, im = line.split("=")[1].split("delta")[0].strip().rstrip("i").partition(" + ")
    assert abs(float(re)) < 1e-12 and abs(float(im)) < 1e-12


def test_partition_report():
    r = run(["partition", "--tower", "cyclotomic p=3 depth=2", "--lambda", "0.6931471805599453"])
    (line,) = r.results
    assert abs(float(line.split("=")[1]) - 2.5) < 1e-10


def test_correlate_report():
    r = run(["correlate", "--tower", "cyclotomic p=5 depth=1", "--primes", "11"])
    assert r.results == ["<alpha_11> = 1 + 0i"]


def test_encode_decode_roundtrip():
    spec = "tower aut_f2ab depth=2"
    element = "[0,1;1,1],[2,1;3,3]"
    enc = run(["encode", "--tower", spec, "--element", element])
    bits = enc.results[0].split("= ")[1]
    dec = run(["decode", "--tower", spec, "--bits", bits])
    assert dec.results == [f"element = {element}"]


def test_blocks_report():
    r = run(["blocks", "--tower", "cyclotomic p=3 depth=2", "--element", "2,5"])
    assert r.results[0] == "blocks = b1:1|b2:101"
    assert "coherent 2->1 = True" in r.results


def test_validate_and_tower_file(tmp_path):
    f = tmp_path / "t.txt"
    f.write_text("cyclic 2\ncyclic 4\nbond 1: 0 1 0 1\n")
    r = run(["validate", "--tower-file", str(f)])
    assert r.results[-1] == "valid = True"


def test_action_file(tmp_path):
    f = tmp_path / "a.txt"
    f.write_text("hbar 1\nw 0 0\nQ\n0 0\n0 0\n")
    r = run(["integral", "--tower", "binary depth=1", "--action", str(f)])
    assert r.results[0].startswith("I_2 = 1 + 0i")


def test_split_element():
    assert split_element("(0,1),(2,3)") == ["(0,1)", "(2,3)"]
    assert split_element("2,5") == ["2", "5"]
