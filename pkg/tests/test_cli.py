import csv
import os

import pytest

from muse_ecc.cli import main, parse_weights
from muse_ecc.code import CodeSpec, Form, encode
from muse_ecc.container import ContainerError, frame, pack, unpack

SYS = CodeSpec(72, 64, 243, form=Form.SYSTEMATIC)


def test_container_round_trip():
    data = b"hello world, seventeen"
    words = [int(encode(SYS, v)) for v in frame(data, SYS)]
    blob = pack(words, SYS, len(data))
    assert blob[:8] == b"MUSEECC1"
    assert len(blob) == 8 + 32 + 8 + 9 * len(words) + 8
    assert unpack(blob, SYS) == (words, len(data))
    with pytest.raises(ContainerError):
        unpack(blob, CodeSpec(72, 64, 243))
    with pytest.raises(ContainerError):
        unpack(blob[:-1], SYS)
    with pytest.raises(ContainerError):
        unpack(b"XXXXXXXX" + blob[8:], SYS)


def test_parse_weights():
    assert parse_weights("2..5") == (2, 3, 4, 5)
    assert parse_weights("2,4..5") == (2, 4, 5)


def test_search_outputs(tmp_path, capsys):
    assert main(["search", "--n", "72", "--s", "1", "--rb", "8", "--out-dir", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert out.startswith("config: ")
    assert " 243 " in out
    assert (tmp_path / "muse-72-64-m243.yaml").exists()
    code = main(["search", "--n", "80", "--s", "8", "--rb", "13", "--model", "unidir",
                 "--assign", "seq", "--out-dir", str(tmp_path)])
    assert code == 2


def test_usage_errors_exit_1(capsys):
    assert main(["search", "--n", "7", "--s", "2", "--rb", "8"]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["search", "--bogus"])
    assert exc.value.code == 1


def test_magic(capsys):
    assert main(["magic", "--m", "5621", "--bits", "80"]) == 0
    assert "inverse=1761878725188230243585305 shift=93" in capsys.readouterr().out


def test_encode_decode_round_trip_and_repair(tmp_path):
    src = tmp_path / "in.bin"
    src.write_bytes(os.urandom(4099))
    enc, dec = tmp_path / "enc.bin", tmp_path / "dec.bin"
    assert main(["encode", "--codec", "muse7264sys", str(src), str(enc)]) == 0
    assert main(["decode", "--codec", "muse7264sys", str(enc), str(dec)]) == 0
    assert dec.read_bytes() == src.read_bytes()
    bad = tmp_path / "bad.bin"
    assert main(["inject", "--codec", "muse7264sys", str(enc), str(bad), "--seed", "4"]) == 0
    assert main(["decode", "--codec", "muse7264sys", str(bad), str(dec)]) == 0
    assert dec.read_bytes() == src.read_bytes()
    rows = list(csv.DictReader(open(f"{dec}.status.csv")))
    assert len(rows) == 1 and rows[0]["status"] == "corrected"


def test_uncorrectable_blocks_exit_3(tmp_path, capsys):
    src = tmp_path / "in.bin"
    src.write_bytes(bytes(800))
    enc, bad = tmp_path / "enc.bin", tmp_path / "bad.bin"
    main(["encode", "--codec", "muse7264", str(src), str(enc)])
    main(["inject", "--codec", "muse7264", str(enc), str(bad), "--count", "20", "--weight", "3"])
    assert main(["decode", "--codec", "muse7264", str(bad), str(tmp_path / "o")]) == 3
    assert "byte offset" in capsys.readouterr().err


def test_empty_input(tmp_path):
    src = tmp_path / "empty"
    src.write_bytes(b"")
    enc, dec = tmp_path / "e.bin", tmp_path / "d.bin"
    assert main(["encode", "--codec", "muse7264", str(src), str(enc)]) == 0
    assert main(["decode", "--codec", "muse7264", str(enc), str(dec)]) == 0
    assert dec.read_bytes() == b""


def test_decode_with_wrong_code_is_corruption(tmp_path):
    src = tmp_path / "in.bin"
    src.write_bytes(b"x" * 16)
    enc = tmp_path / "e.bin"
    main(["encode", "--codec", "muse7264", str(src), str(enc)])
    assert main(["decode", "--codec", "muse7264sys", str(enc), str(tmp_path / "d")]) == 3


def test_evaluate_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["evaluate", "--codec", "hamming7264", "--weights", "2..4", "--patterns", "50",
            "--errors", "4", "--seed", "1"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_evaluate_spec_file_and_report(tmp_path, capsys):
    main(["search", "--n", "48", "--s", "4", "--rb", "10", "--stop", "first",
          "--out-dir", str(tmp_path / "specs")])
    spec = next((tmp_path / "specs").glob("*.yaml"))
    j1, j2 = tmp_path / "1.json", tmp_path / "2.json"
    assert main(["evaluate", "--spec", str(spec), "--patterns", "20", "--errors", "5",
                 "--json", str(j1)]) == 0
    assert main(["evaluate", "--codec", "rs8064", "--patterns", "20", "--errors", "5",
                 "--json", str(j2)]) == 0
    capsys.readouterr()
    series = tmp_path / "series.csv"
    assert main(["report", str(j1), str(j2), "--out", str(series)]) == 0
    assert series.read_text().splitlines()[0] == f"weight,{spec.stem},rs8064"


def test_inject_raw_image(tmp_path, capsys):
    src = tmp_path / "img"
    src.write_bytes(os.urandom(800))
    log = tmp_path / "log.csv"
    assert main(["inject", "--codec", "muse7264", str(src), str(tmp_path / "o"),
                 "--rate", "0.5", "--log", str(log)]) == 0
    assert (tmp_path / "o").read_bytes() == src.read_bytes()
    assert "corrected=" in capsys.readouterr().out
