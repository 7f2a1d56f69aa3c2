"""Command-line front end: ``encode``, ``decode``, ``genpls`` and ``metrics``.

Exit codes::

    0  success
    1  other error (empty message, missing passphrase, ...)
    2  capacity exceeded
    3  unsupported or undecodable image format
    4  I/O error
    5  invalid pixel locator sequence
    6  decryption failed (wrong passphrase or tampered data)
    7  embedded payload corrupted
    8  image dimensions differ
    64 command-line usage error
"""
from __future__ import annotations

import argparse
import getpass
import json
import os
import sys

from . import crypto, metrics
from .errors import CapacityExceeded, DecryptionError, PayloadCorrupted, StegoError, UnsupportedFormat
from .image_model import load_image, save_image
from .pls import check_pls, generate_pls, read_manual_pls, required_pixels, PixelLocatorSequence
from .stego_codec import capacity, embed, extract

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_IO = 4
EXIT_USAGE = 64
DEFAULT_PASSPHRASE_ENV = "LSBPLS_PASSPHRASE"


class UsageError(StegoError):
    exit_code = EXIT_USAGE


class _Parser(argparse.ArgumentParser):
    # argparse's default status 2 would collide with CapacityExceeded
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _passphrase(args, confirm=False) -> str:
    if args.passphrase_env:
        value = os.environ.get(args.passphrase_env)
        if not value:
            raise UsageError(f"environment variable {args.passphrase_env} is unset or empty")
        return value
    value = os.environ.get(DEFAULT_PASSPHRASE_ENV)
    if value:
        return value
    if not sys.stdin.isatty():
        raise UsageError(f"no passphrase: use --passphrase-env or set {DEFAULT_PASSPHRASE_ENV}")
    value = getpass.getpass("Passphrase: ")
    if confirm and getpass.getpass("Repeat passphrase: ") != value:
        raise UsageError("passphrases do not match")
    if not value:
        raise UsageError("passphrase must not be empty")
    return value


def _read_message(args) -> bytes:
    if args.message is not None:
        return args.message.encode("utf-8")
    with open(args.message_file, "rb") as fh:
        return fh.read()


def _require_png(path):
    if os.path.splitext(path)[1].lower() != ".png":
        raise UnsupportedFormat(f"{path}: stego output must be a .png file")


def _fit_sequence(pls: PixelLocatorSequence, total_pixels: int, needed: int) -> PixelLocatorSequence:
    """Validate a supplied sequence and trim it to the first ``needed`` entries."""
    check_pls(pls, total_pixels)
    if len(pls) < needed:
        raise CapacityExceeded(f"locator sequence has {len(pls)} pixels, payload needs {needed}")
    return PixelLocatorSequence(pls.indices[:needed], total_pixels)


def cmd_encode(args) -> int:
    _require_png(args.out)
    cover = load_image(args.cover)
    message = _read_message(args)
    if not message:
        raise crypto.EmptyPlaintext("message is empty")
    passphrase = _passphrase(args, confirm=True)

    payload = crypto.seal(message, passphrase).to_hex()
    n_enc = len(payload)
    n_p = required_pixels(n_enc)
    total = cover.total_pixels
    if n_p > total:
        raise CapacityExceeded(
            f"payload of {n_enc} characters needs {n_p} pixels; image has {total} "
            f"(capacity {capacity(cover)} characters)"
        )
    if args.manual_pls:
        pls = _fit_sequence(read_manual_pls(args.manual_pls), total, n_p)
    elif args.pls:
        pls = _fit_sequence(crypto.open_pls(crypto.PlsKeyFile.read(args.pls), passphrase), total, n_p)
    else:
        pls = generate_pls(total, n_p, args.seed)

    stego = embed(cover, pls, payload)
    save_image(stego, args.out)
    crypto.seal_pls(pls, passphrase).write(args.pls_out)

    report = metrics.compare_report(cover, stego).report
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(report.to_dict(), fh)
    print(f"characters embedded (N_enc): {n_enc}")
    print(f"pixels used (N_p): {n_p}")
    print(f"capacity: {capacity(cover)} characters")
    print(f"quality: {report.to_json()}")
    return EXIT_OK


def cmd_decode(args) -> int:
    stego = load_image(args.stego)
    keyfile = crypto.PlsKeyFile.read(args.pls)
    passphrase = _passphrase(args)
    pls = crypto.open_pls(keyfile, passphrase, stego.total_pixels)
    check_pls(pls, stego.total_pixels)
    text = extract(stego, pls)
    try:
        sealed = crypto.SealedPayload.from_hex(text)
    except PayloadCorrupted:
        raise
    except ValueError as exc:
        raise PayloadCorrupted(str(exc)) from None
    plaintext = crypto.unseal(sealed, passphrase)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(plaintext)
        return EXIT_OK
    try:
        message = plaintext.decode("utf-8")
    except UnicodeDecodeError:
        # padding survived by chance; treat like any other failed decryption
        raise DecryptionError() from None
    sys.stdout.write(message)
    if not message.endswith("\n"):
        sys.stdout.write("\n")
    return EXIT_OK


def cmd_genpls(args) -> int:
    if args.cover:
        total = load_image(args.cover).total_pixels
    elif args.pixels is not None:
        total = args.pixels
    else:
        raise UsageError("give --cover or --pixels")
    if total < 1 or args.length < 1:
        raise UsageError("pixel count and message length must be positive")
    needed = required_pixels(args.length)
    if needed > total:
        raise CapacityExceeded(f"{args.length} characters need {needed} pixels; only {total} available")
    passphrase = _passphrase(args, confirm=True)
    pls = generate_pls(total, needed, args.seed)
    crypto.seal_pls(pls, passphrase).write(args.out)
    print(f"wrote {needed} pixel indices to {args.out}")
    return EXIT_OK


def cmd_metrics(args) -> int:
    cover = load_image(args.cover)
    stego = load_image(args.stego)
    comparison = metrics.compare_report(cover, stego)
    text = comparison.report.to_json()
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if args.out:
        comparison.write_csvs(args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lsbpls", description="Hide AES-sealed text in randomly located pixel LSBs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_passphrase(p):
        p.add_argument("--passphrase-env", metavar="VAR",
                       help=f"read the passphrase from this environment variable "
                            f"(default: {DEFAULT_PASSPHRASE_ENV}, else prompt)")

    p = sub.add_parser("encode", help="seal a message and hide it in a cover image")
    p.add_argument("--cover", required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--message")
    src.add_argument("--message-file")
    p.add_argument("--out", required=True, help="stego image (.png)")
    p.add_argument("--pls-out", required=True, help="encrypted locator key file to write")
    seq = p.add_mutually_exclusive_group()
    seq.add_argument("--pls", help="use a key file made by 'genpls' instead of a fresh sequence")
    seq.add_argument("--manual-pls", help="plain text file, one pixel index per line")
    p.add_argument("--seed", type=int)
    p.add_argument("--json", help="also write the quality report here")
    add_passphrase(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="recover a message from a stego image and key file")
    p.add_argument("--stego", required=True)
    p.add_argument("--pls", required=True)
    p.add_argument("--out", help="write the message here instead of stdout")
    add_passphrase(p)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("genpls", help="generate an encrypted locator key file")
    where = p.add_mutually_exclusive_group(required=True)
    where.add_argument("--cover", help="size the sequence for this image")
    where.add_argument("--pixels", type=int, help="total pixel count")
    p.add_argument("--length", "--message-length", dest="length", type=int, required=True,
                   help="characters to embed (3 pixels each)")
    p.add_argument("--out", "--pls-out", dest="out", required=True)
    p.add_argument("--seed", type=int)
    add_passphrase(p)
    p.set_defaults(func=cmd_genpls)

    p = sub.add_parser("metrics", help="MSE/PSNR report and histograms for cover vs stego")
    p.add_argument("--cover", required=True)
    p.add_argument("--stego", required=True)
    p.add_argument("--json", help="write the report JSON here instead of stdout")
    p.add_argument("--out", help="directory for hist_{r,g,b}.csv")
    p.set_defaults(func=cmd_metrics)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StegoError as exc:
        print(f"lsbpls: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"lsbpls: {exc.strerror or exc}: {exc.filename or ''}".rstrip(": "), file=sys.stderr)
        return EXIT_IO
    except KeyboardInterrupt:
        return 130


if __name__ == "__main__":
    sys.exit(main())
