import json
import os
import subprocess
import sys

import numpy as np
import pytest
from PIL import Image

from lsbpls import cli
from lsbpls.crypto import PlsKeyFile, open_pls, pls_file_size, sealed_hex_length
from lsbpls.image_model import ImageMatrix, load_image, save_image
from lsbpls.metrics import mse
from lsbpls.stego_codec import extract

from .conftest import random_image

PW = "s3cret passphrase"
PAPER_MESSAGE = "This secret message has to be embedded into the image"


@pytest.fixture(autouse=True)
def passphrase(monkeypatch):
    monkeypatch.setenv("STEGO_PW", PW)
    monkeypatch.delenv(cli.DEFAULT_PASSPHRASE_ENV, raising=False)


@pytest.fixture
def cover(tmp_path, rng):
    path = tmp_path / "cover.png"
    save_image(random_image(rng, 48, 48), path)
    return path


def run(*argv):
    return cli.main([str(a) for a in argv])


def encode(cover, tmp_path, message=PAPER_MESSAGE, tag="", *extra):
    stego, key = tmp_path / f"stego{tag}.png", tmp_path / f"key{tag}.pls"
    code = run("encode", "--cover", cover, "--message", message, "--out", stego,
               "--pls-out", key, "--passphrase-env", "STEGO_PW", *extra)
    return code, stego, key


def decode(stego, key, *extra):
    return run("decode", "--stego", stego, "--pls", key, "--passphrase-env", "STEGO_PW", *extra)


def test_encode_decode_roundtrip(cover, tmp_path, capsys):
    code, stego, key = encode(cover, tmp_path)
    assert code == 0
    out = capsys.readouterr().out
    n_enc = sealed_hex_length(len(PAPER_MESSAGE))
    assert f"(N_enc): {n_enc}" in out
    assert f"(N_p): {3 * n_enc}" in out
    assert "capacity: 768 characters" in out
    assert os.path.getsize(key) == pls_file_size(3 * n_enc)
    assert decode(stego, key) == 0
    assert capsys.readouterr().out == PAPER_MESSAGE + "\n"


def test_decode_to_file(cover, tmp_path):
    _, stego, key = encode(cover, tmp_path, "line one\nline two\n")
    out = tmp_path / "msg.txt"
    assert decode(stego, key, "--out", out) == 0
    assert out.read_text() == "line one\nline two\n"


def test_message_file(cover, tmp_path, capsys):
    msg = tmp_path / "m.txt"
    msg.write_text("from a file ✓", encoding="utf-8")
    stego, key = tmp_path / "s.png", tmp_path / "k.pls"
    assert run("encode", "--cover", cover, "--message-file", msg, "--out", stego,
               "--pls-out", key, "--passphrase-env", "STEGO_PW") == 0
    capsys.readouterr()
    assert decode(stego, key) == 0
    assert capsys.readouterr().out == "from a file ✓\n"


def test_seeded_encodes_still_differ(cover, tmp_path, capsys):
    _, s1, k1 = encode(cover, tmp_path, PAPER_MESSAGE, "1", "--seed", "5")
    _, s2, k2 = encode(cover, tmp_path, PAPER_MESSAGE, "2", "--seed", "5")
    assert load_image(s1) != load_image(s2)
    capsys.readouterr()
    for s, k in ((s1, k1), (s2, k2)):
        assert decode(s, k) == 0
        assert capsys.readouterr().out == PAPER_MESSAGE + "\n"


def test_capacity_exceeded(tmp_path, rng, capsys):
    small = tmp_path / "small.png"
    save_image(random_image(rng, 8, 8), small)
    code, stego, key = encode(small, tmp_path)
    assert code == 2
    assert not stego.exists() and not key.exists()
    assert "capacity" in capsys.readouterr().err


def test_wrong_passphrase(cover, tmp_path, monkeypatch, capsys):
    _, stego, key = encode(cover, tmp_path)
    capsys.readouterr()
    monkeypatch.setenv("STEGO_PW", "not it")
    assert decode(stego, key) == 6
    captured = capsys.readouterr()
    assert captured.out == ""
    assert PAPER_MESSAGE not in captured.err and "not it" not in captured.err


def test_jpeg_stego_rejected(cover, tmp_path):
    _, stego, key = encode(cover, tmp_path)
    jpg = tmp_path / "stego.jpg"
    Image.open(stego).save(jpg, format="JPEG")
    assert decode(jpg, key) == 3


def test_encode_refuses_lossy_output(cover, tmp_path):
    assert run("encode", "--cover", cover, "--message", "x", "--out", tmp_path / "s.jpg",
               "--pls-out", tmp_path / "k", "--passphrase-env", "STEGO_PW") == 3


def test_missing_cover_is_io_error(tmp_path):
    code, _, _ = encode(tmp_path / "absent.png", tmp_path)
    assert code == 4


def test_decode_with_mismatched_image(cover, tmp_path, rng):
    _, stego, key = encode(cover, tmp_path)
    tiny = tmp_path / "tiny.png"
    save_image(random_image(rng, 10, 10), tiny)
    assert decode(tiny, key) == 5


def test_decode_truncated_keyfile(cover, tmp_path):
    _, stego, key = encode(cover, tmp_path)
    key.write_bytes(key.read_bytes()[:40])
    assert decode(stego, key) == 5


def overwrite_char(pixels, triad, ch):
    """Force the parities of one triad to spell ``ch`` (test-side, not the codec)."""
    slots = [(p, c) for p in triad for c in range(3)][:8]
    for bit, (p, c) in zip(format(ord(ch), "08b"), slots):
        v = int(pixels[p, c])
        if v % 2 != int(bit):
            pixels[p, c] = v + 1 if v < 255 else v - 1


def tamper(stego, key, position, ch):
    pls = open_pls(PlsKeyFile.read(key), PW)
    img = load_image(stego)
    pixels = img.copy_pixels().reshape(-1, 3)
    overwrite_char(pixels, pls.indices[3 * position:3 * position + 3], ch)
    save_image(ImageMatrix(pixels.reshape(img.pixels.shape)), stego)
    return pls


def test_decode_corrupted_payload(cover, tmp_path):
    _, stego, key = encode(cover, tmp_path)
    tamper(stego, key, 0, "z")
    assert decode(stego, key) == 7


def test_decode_tampered_ciphertext(cover, tmp_path, capsys):
    _, stego, key = encode(cover, tmp_path, "x" * 40)
    pls = open_pls(PlsKeyFile.read(key), PW)
    current = extract(load_image(stego), pls)
    tamper(stego, key, len(current) - 1, "0" if current[-1] != "0" else "1")
    capsys.readouterr()
    code = decode(stego, key)
    # last block damaged: padding fails, or the output is not the message
    assert code in (0, 6)
    if code == 0:
        assert capsys.readouterr().out != "x" * 40 + "\n"


def test_manual_pls(cover, tmp_path, capsys):
    n_p = 3 * sealed_hex_length(2)
    manual = tmp_path / "manual.txt"
    picks = list(range(2303, 2303 - n_p - 9, -1))
    manual.write_text("\n".join(map(str, picks)) + "\n")
    code, stego, key = encode(cover, tmp_path, "hi", "", "--manual-pls", manual)
    assert code == 0
    assert open_pls(PlsKeyFile.read(key), PW).indices == tuple(picks[:n_p])
    capsys.readouterr()
    assert decode(stego, key) == 0
    assert capsys.readouterr().out == "hi\n"


@pytest.mark.parametrize("picks, expected", [([0, 1, 1], 5), ([0, 1, 99999], 5), ([0, 1, 2, 3], 5), (list(range(9)), 2)])
def test_manual_pls_errors(cover, tmp_path, picks, expected):
    manual = tmp_path / "manual.txt"
    manual.write_text("\n".join(map(str, picks)))
    code, _, _ = encode(cover, tmp_path, "hi", "", "--manual-pls", manual)
    assert code == expected


def test_genpls_then_encode(cover, tmp_path, capsys):
    key_in = tmp_path / "pre.pls"
    n_enc = sealed_hex_length(len("hello"))
    assert run("genpls", "--cover", cover, "--length", n_enc, "--seed", 3,
               "--out", key_in, "--passphrase-env", "STEGO_PW") == 0
    code, stego, key = encode(cover, tmp_path, "hello", "", "--pls", key_in)
    assert code == 0
    assert open_pls(PlsKeyFile.read(key), PW) == open_pls(PlsKeyFile.read(key_in), PW)
    capsys.readouterr()
    assert decode(stego, key) == 0
    assert capsys.readouterr().out == "hello\n"


def test_genpls_full_occupancy(tmp_path):
    out = tmp_path / "g.pls"
    assert run("genpls", "--pixels", 9, "--length", 3, "--out", out, "--passphrase-env", "STEGO_PW") == 0
    pls = open_pls(PlsKeyFile.read(out), PW)
    assert sorted(pls) == list(range(9))


def test_genpls_capacity(tmp_path):
    out = tmp_path / "g.pls"
    assert run("genpls", "--pixels", 9, "--length", 4, "--out", out, "--passphrase-env", "STEGO_PW") == 2
    assert not out.exists()


def test_metrics_identity(cover, tmp_path, capsys):
    assert run("metrics", "--cover", cover, "--stego", cover) == 0
    assert json.loads(capsys.readouterr().out) == {"mse": 0.0, "psnr_db": "inf", "width": 48, "height": 48}


def test_metrics_files(cover, tmp_path):
    _, stego, _ = encode(cover, tmp_path)
    report, outdir = tmp_path / "r.json", tmp_path / "hist"
    assert run("metrics", "--cover", cover, "--stego", stego, "--json", report, "--out", outdir) == 0
    data = json.loads(report.read_text())
    n_enc = sealed_hex_length(len(PAPER_MESSAGE))
    assert data["mse"] == pytest.approx(mse(load_image(cover), load_image(stego)))
    assert data["mse"] <= 8 * n_enc / (3 * 48 * 48)
    assert sorted(os.listdir(outdir)) == ["hist_b.csv", "hist_g.csv", "hist_r.csv"]


def test_metrics_dimension_mismatch(cover, tmp_path, rng):
    other = tmp_path / "other.png"
    save_image(random_image(rng, 20, 48), other)
    assert run("metrics", "--cover", cover, "--stego", other) == 8


def test_metrics_five_images(tmp_path, rng, capsys):
    sizes = [(225, 225), (356, 493), (512, 512), (384, 512), (480, 512)]
    reports = []
    for i, (h, w) in enumerate(sizes):
        c = tmp_path / f"c{i}.png"
        save_image(random_image(rng, h, w), c)
        code, stego, _ = encode(c, tmp_path, PAPER_MESSAGE, str(i))
        assert code == 0
        r = tmp_path / f"report{i}.json"
        assert run("metrics", "--cover", c, "--stego", stego, "--json", r) == 0
        reports.append(json.loads(r.read_text()))
    assert [(r["height"], r["width"]) for r in reports] == sizes
    assert all(r["psnr_db"] != "inf" and r["psnr_db"] > 60 for r in reports)


def test_usage_errors_exit_64(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["encode", "--cover", "x.png"])
    assert info.value.code == cli.EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        cli.main(["bogus"])
    assert info.value.code == cli.EXIT_USAGE


def test_missing_passphrase_env(cover, tmp_path, monkeypatch):
    monkeypatch.delenv("STEGO_PW")
    code, _, _ = encode(cover, tmp_path)
    assert code == cli.EXIT_USAGE


def test_default_passphrase_env(cover, tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(cli.DEFAULT_PASSPHRASE_ENV, PW)
    stego, key = tmp_path / "s.png", tmp_path / "k.pls"
    assert run("encode", "--cover", cover, "--message", "m", "--out", stego, "--pls-out", key) == 0
    capsys.readouterr()
    assert run("decode", "--stego", stego, "--pls", key) == 0
    assert capsys.readouterr().out == "m\n"


def test_no_secrets_written(cover, tmp_path, capsys):
    secret = "do-not-leak-this-message"
    _, stego, key = encode(cover, tmp_path, secret)
    captured = capsys.readouterr()
    blobs = [p.read_bytes() for p in tmp_path.iterdir() if p.is_file()]
    for blob in blobs:
        assert secret.encode() not in blob
        assert PW.encode() not in blob
    assert secret not in captured.out + captured.err
    assert PW not in captured.out + captured.err


def test_module_entry_point(cover, tmp_path):
    env = dict(os.environ, STEGO_PW=PW)
    stego, key = tmp_path / "s.png", tmp_path / "k.pls"
    enc = subprocess.run(
        [sys.executable, "-m", "lsbpls", "encode", "--cover", str(cover), "--message", "sub",
         "--out", str(stego), "--pls-out", str(key), "--passphrase-env", "STEGO_PW"],
        env=env, capture_output=True, text=True,
    )
    assert enc.returncode == 0, enc.stderr
    dec = subprocess.run(
        [sys.executable, "-m", "lsbpls", "decode", "--stego", str(stego), "--pls", str(key),
         "--passphrase-env", "STEGO_PW"],
        env=env, capture_output=True, text=True,
    )
    assert dec.returncode == 0 and dec.stdout == "sub\n"
