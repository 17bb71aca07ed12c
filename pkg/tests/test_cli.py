import csv
import io
import json
import subprocess
import sys

import pytest

from decbrw import bench, kat
from decbrw.cli import main

RFC_KEY = "85d6be7857556d337f4452fe42d506a80103808afb0db2fd4abff6af4149f51b"
RFC_MSG = b"Cryptographic Forum Research Group".hex()
KEY = bytes(range(16)).hex()
MSG = bytes((7 * i + 3) % 256 for i in range(150)).hex()


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_poly1305_rfc(capsys):
    code, out, _ = run(capsys, "hash", "--algo", "poly1305", "--key-hex", RFC_KEY, "--msg-hex", RFC_MSG)
    assert code == 0 and out.strip() == "a8061dc1305136c6c22b8baf0c0127a9"


def test_decbrw_c1_equals_brwhash(capsys):
    _, a, _ = run(capsys, "hash", "--algo", "decbrw", "--c", "1", "--key-hex", KEY, "--msg-hex", MSG)
    _, b, _ = run(capsys, "hash", "--algo", "brwhash", "--key-hex", KEY, "--msg-hex", MSG)
    assert a == b and len(a.strip()) == 32


def test_empty_message(capsys):
    code, out, _ = run(capsys, "hash", "--algo", "polyhash", "--key-hex", KEY, "--msg-hex", "")
    assert code == 0 and out.strip() == "0" * 32


@pytest.mark.parametrize("algo,prime,extra,want", [
    ("polyhash", "1305", [], "ebaedb2183a58bdaec013980926094f8"),
    ("decbrw", "1305", ["--c", "3"], "8cf84a32800233336c8e1c7c4bbe65c8"),
    ("decbrw", "1271", ["--backend", "vec4"], "470251d19f1e19d42d78d11a5888ec0d"),
    ("brwhash", "1271", ["--limbs", "4", "--t", "2"], "9113249774be2ee8b9b98f875faeb733"),
    ("polyhash", "1271", ["--backend", "vec4", "--g", "1"], "3d340b1a7b97e1bf1d952ab04ea8a223"),
])
def test_cli_matches_library(capsys, algo, prime, extra, want):
    _, out, _ = run(capsys, "hash", "--algo", algo, "--prime", prime, "--key-hex", KEY, "--msg-hex", MSG, *extra)
    assert out.strip() == want


def test_input_file(capsys, tmp_path):
    path = tmp_path / "msg.bin"
    path.write_bytes(bytes.fromhex(MSG))
    _, out, _ = run(capsys, "hash", "--algo", "brwhash", "--key-hex", KEY, "--in", str(path))
    assert out.strip() == "86364a210a8bc611d3c5dcbd05bf2748"


def test_counters_json(capsys):
    code, _, err = run(capsys, "hash", "--algo", "polyhash", "--key-hex", KEY, "--msg-hex", MSG,
                       "--g", "2", "--counters")
    counts = json.loads(err)
    assert code == 0
    assert counts["scalar_unreduced_mults"] == 10 and counts["scalar_reductions"] == 5


@pytest.mark.parametrize("algo,key", [("polyhash", "00" * 15), ("poly1305", "00" * 16), ("decbrw", "00" * 32)])
def test_key_length_exit_3(capsys, algo, key):
    code, _, err = run(capsys, "hash", "--algo", algo, "--key-hex", key, "--msg-hex", "00")
    assert code == 3 and "key" in err


@pytest.mark.parametrize("argv", [
    ["hash", "--algo", "sha1", "--key-hex", KEY, "--msg-hex", ""],
    ["hash", "--algo", "polyhash", "--key-hex", KEY, "--msg-hex", "", "--g", "7"],
    ["hash", "--algo", "polyhash", "--key-hex", KEY, "--msg-hex", "zz"],
    ["hash", "--algo", "brwhash", "--key-hex", KEY, "--msg-hex", "", "--backend", "vec4"],
    ["hash", "--algo", "decbrw", "--key-hex", KEY, "--msg-hex", "", "--c", "9"],
    ["hash", "--algo", "polyhash", "--prime", "1271", "--key-hex", "ff" * 16, "--msg-hex", ""],
    ["bench", "--algos", "nope"],
    [],
])
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_kat_round_trip(capsys, tmp_path):
    path = tmp_path / "kat.jsonl"
    code, out, _ = run(capsys, "kat", "generate", str(path))
    assert code == 0 and "records" in out
    lines = path.read_text().splitlines()
    assert len(lines) == len(kat.generate_records())
    assert run(capsys, "kat", "verify", str(path))[0] == 0
    assert run(capsys, "kat", "verify", str(path), "--backend", "vec4")[0] == 0


def test_kat_corruption_detected(capsys, tmp_path):
    path = tmp_path / "kat.jsonl"
    run(capsys, "kat", "generate", str(path))
    records = kat.read_kat(str(path))
    d = records[5]["digest_hex"]
    records[5]["digest_hex"] = ("1" if d[0] != "1" else "2") + d[1:]
    kat.write_kat(str(path), records)
    code, out, _ = run(capsys, "kat", "verify", str(path))
    assert code == 1 and "FAIL record 6" in out and records[5]["digest_hex"] in out


def test_kat_deterministic():
    assert kat.generate_records() == kat.generate_records()
    assert kat.generate_records(seed=1) != kat.generate_records()


def parse_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_bench_default_grid_counts(capsys):
    assert max(bench.DEFAULT_LENGTHS) == 32768
    code, out, _ = run(capsys, "bench", "--reps", "1", "--no-pin")
    assert code == 0
    rows = parse_csv(out)
    assert list(rows[0].keys()) == bench.CSV_HEADER
    assert len(rows) == 2 * len(bench.DEFAULT_LENGTHS)
    for r in rows:
        ell = int(r["blocks"])
        lm, lr = int(r["lane_unred_mult"]), int(r["lane_red"])
        if r["algo"] == "polyhash-vec4":
            q = ell // 4
            assert lm == q
            assert lr == (-(-(q - 1) // 4) if q else 0)
        else:
            ns = -(-ell // 4)
            if ns >= 3:
                assert (lm, lr) == (ns // 2, 1 + ns // 4)
        assert float(r["nspb_pre"]) > 0 and float(r["nspb_fly"]) > 0


def test_bench_table4_point(capsys):
    _, out, _ = run(capsys, "bench", "--algos", "decbrw-vec4", "--lengths", "128", "--reps", "1", "--no-pin")
    r = parse_csv(out)[0]
    assert (r["lane_unred_mult"], r["lane_red"]) == ("16", "9")


def test_bench_deterministic_counts(capsys):
    argv = ["bench", "--algos", "polyhash,brwhash,decbrw", "--lengths", "1,7,33", "--reps", "1", "--no-pin"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    strip = [{k: v for k, v in r.items() if not k.startswith("nspb")} for r in parse_csv(a)]
    assert strip == [{k: v for k, v in r.items() if not k.startswith("nspb")} for r in parse_csv(b)]


def test_analyze_default_passes(capsys):
    code, out, _ = run(capsys, "analyze")
    rows = parse_csv(out)
    assert code == 0 and rows and all(r["pass"] == "pass" for r in rows)


def test_analyze_mu_not_below_m(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["analyze", "--params", "7,1,5,6,7"])
    assert exc.value.code == 2


def test_analyze_flags_vacuous(capsys):
    code, out, _ = run(capsys, "analyze", "--params", "7,1,5,3,3", "--kinds", "brwhash")
    assert code == 0 and all(r["vacuous"] == "yes" for r in parse_csv(out))


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "decbrw", "hash", "--algo", "poly1305",
                          "--key-hex", RFC_KEY, "--msg-hex", RFC_MSG],
                         capture_output=True, text=True, check=True)
    assert res.stdout.strip() == "a8061dc1305136c6c22b8baf0c0127a9"
