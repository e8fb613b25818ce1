import io
import json

import pytest

from ucikit.cli import run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_encode_decode_round_trip(tmp_path):
    f = tmp_path / "f.uci"
    assert call("encode", "--code", "delta", "--out", str(f), "1", "2", "3")[0] == 0
    assert call("decode", str(f)) == (0, "1 2 3\n")


def test_big_integers_on_command_line(tmp_path):
    f = tmp_path / "big.uci"
    big = str(2**150 + 7)
    assert call("encode", "--code", "nu", "--out", str(f), big, "1")[0] == 0
    assert call("decode", str(f)) == (0, f"{big} 1\n")


def test_encode_rejects_bad_input(tmp_path):
    f = str(tmp_path / "x.uci")
    assert call("encode", "--code", "delta", "--out", f, "abc")[0] == 2
    assert call("encode", "--code", "delta", "--out", f, "0")[0] == 2
    assert call("encode", "--code", "beta", "--out", f, "3")[0] == 2
    assert call("encode", "--code", "omega", "3")[0] == 2


def test_decode_bad_file(tmp_path):
    f = tmp_path / "bad.uci"
    f.write_bytes(b"nope")
    assert call("decode", str(f))[0] == 2
    assert call("decode", str(tmp_path / "missing"))[0] == 2


def test_kraft_check_nu():
    code, out = call("kraft-check", "--code", "nu")
    assert code == 0
    assert "partial through small symbols + S-blocks = 1187/4096" in out
    assert "total = 1\n" in out


def test_kraft_check_delta_block():
    code, out = call("kraft-check", "--code", "delta", "--through-block", "3")
    assert code == 0
    assert "partial + tail = 1" in out
    assert "sum over a = 1..7 = 3/4" in out


def test_lengths():
    code, out = call("lengths", "--code", "dd", "2", "3")
    assert code == 0
    assert "010" in out and "01111" in out


def test_analyze_witness():
    code, out = call("analyze", "--code", "nu", "--dist", "spike:0.992886244,132")
    assert code == 0
    ratio = [ln for ln in out.splitlines() if ln.startswith("ratio")][0]
    assert ratio.split()[1].startswith("2.0239")
    assert "> 2.023936" in ratio


def test_analyze_json():
    code, out = call("analyze", "--code", "gamma", "--dist", "explicit:1/2,1/4,1/4", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["avg_len"] == "2.0" and data["entropy"] == "1.5"


def test_analyze_bad_spec():
    assert call("analyze", "--code", "nu", "--dist", "spike:2")[0] == 2


def test_verify_bounds():
    code, out = call("verify-bounds", "--code", "dd")
    assert code == 0
    assert "x3" in out and "PASS" in out
    assert call("verify-bounds", "--code", "gamma")[0] == 2


def test_usage_error():
    assert call()[0] == 2
    assert call("nope")[0] == 2


def test_repro_is_deterministic():
    c1, o1 = call("repro")
    c2, o2 = call("repro")
    assert c1 == 0 and o1 == o2
    assert o1.rstrip().endswith("items match")
    assert " NO" not in o1
