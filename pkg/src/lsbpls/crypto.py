"""AES-256 sealing for the hidden message and for the locator key file.

Both use the same container: ``salt(16) || iv(16) || ciphertext``, where
the key is PBKDF2-HMAC-SHA256 of the passphrase and the ciphertext is
AES-256-CBC with PKCS#7 padding.  Messages are embedded as the lowercase
hex of that container.
"""
from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass

from cryptography.hazmat.primitives import padding
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

from .errors import (
    BadPadding,
    EmptyPassphrase,
    EmptyPlaintext,
    InvalidHexDigit,
    MalformedPls,
    OddLength,
)
from .pls import MAGIC, PixelLocatorSequence, deserialize_pls, serialize_pls

KEY_SIZE = 32
SALT_SIZE = 16
IV_SIZE = 16
BLOCK_SIZE = 16
KDF_ITERATIONS = 100_000
HEADER_SIZE = SALT_SIZE + IV_SIZE

_HEX_DIGITS = frozenset("0123456789abcdef")


def derive_key(passphrase: str, salt: bytes) -> bytes:
    if not passphrase:
        raise EmptyPassphrase("passphrase must not be empty")
    if len(salt) != SALT_SIZE:
        raise ValueError(f"salt must be {SALT_SIZE} bytes")
    return hashlib.pbkdf2_hmac("sha256", passphrase.encode("utf-8"), salt, KDF_ITERATIONS, KEY_SIZE)


def encrypt_block(key: bytes, block: bytes) -> bytes:
    """Single-block AES-256 (the raw cipher, no mode)."""
    if len(key) != KEY_SIZE or len(block) != BLOCK_SIZE:
        raise ValueError("need a 32-byte key and a 16-byte block")
    enc = Cipher(algorithms.AES(key), modes.ECB()).encryptor()
    return enc.update(block) + enc.finalize()


def decrypt_block(key: bytes, block: bytes) -> bytes:
    if len(key) != KEY_SIZE or len(block) != BLOCK_SIZE:
        raise ValueError("need a 32-byte key and a 16-byte block")
    dec = Cipher(algorithms.AES(key), modes.ECB()).decryptor()
    return dec.update(block) + dec.finalize()


def _cbc_encrypt(key, iv, plaintext):
    padder = padding.PKCS7(BLOCK_SIZE * 8).padder()
    padded = padder.update(plaintext) + padder.finalize()
    enc = Cipher(algorithms.AES(key), modes.CBC(iv)).encryptor()
    return enc.update(padded) + enc.finalize()


def _cbc_decrypt(key, iv, ciphertext):
    dec = Cipher(algorithms.AES(key), modes.CBC(iv)).decryptor()
    padded = dec.update(ciphertext) + dec.finalize()
    unpadder = padding.PKCS7(BLOCK_SIZE * 8).unpadder()
    try:
        return unpadder.update(padded) + unpadder.finalize()
    except ValueError:
        raise BadPadding() from None


@dataclass(frozen=True)
class SealedPayload:
    salt: bytes
    iv: bytes
    ciphertext: bytes

    def __post_init__(self):
        if len(self.salt) != SALT_SIZE or len(self.iv) != IV_SIZE:
            raise ValueError("salt and iv must be 16 bytes each")
        if not self.ciphertext or len(self.ciphertext) % BLOCK_SIZE:
            raise ValueError("ciphertext must be a positive multiple of 16 bytes")

    def to_bytes(self) -> bytes:
        return self.salt + self.iv + self.ciphertext

    @classmethod
    def from_bytes(cls, data: bytes) -> SealedPayload:
        if len(data) < HEADER_SIZE + BLOCK_SIZE or (len(data) - HEADER_SIZE) % BLOCK_SIZE:
            raise ValueError(f"{len(data)} bytes is not a valid sealed payload size")
        return cls(data[:SALT_SIZE], data[SALT_SIZE:HEADER_SIZE], data[HEADER_SIZE:])

    def to_hex(self) -> str:
        return to_hex(self.to_bytes())

    @classmethod
    def from_hex(cls, text: str) -> SealedPayload:
        return cls.from_bytes(from_hex(text))


def sealed_hex_length(plaintext_length: int) -> int:
    """Hex characters produced by sealing ``plaintext_length`` bytes."""
    blocks = plaintext_length // BLOCK_SIZE + 1
    return 2 * (HEADER_SIZE + BLOCK_SIZE * blocks)


def seal(plaintext: bytes, passphrase: str, *, salt: bytes | None = None,
         iv: bytes | None = None) -> SealedPayload:
    """Encrypt ``plaintext`` under a fresh salt and IV.

    ``salt`` and ``iv`` may be pinned for reproducible output; never reuse
    them for real data.
    """
    if not plaintext:
        raise EmptyPlaintext("nothing to seal")
    if not passphrase:
        raise EmptyPassphrase("passphrase must not be empty")
    salt = os.urandom(SALT_SIZE) if salt is None else bytes(salt)
    iv = os.urandom(IV_SIZE) if iv is None else bytes(iv)
    key = derive_key(passphrase, salt)
    return SealedPayload(salt, iv, _cbc_encrypt(key, iv, bytes(plaintext)))


def unseal(sealed: SealedPayload, passphrase: str) -> bytes:
    key = derive_key(passphrase, sealed.salt)
    return _cbc_decrypt(key, sealed.iv, sealed.ciphertext)


def to_hex(data: bytes) -> str:
    return bytes(data).hex()


def from_hex(text: str) -> bytes:
    for pos, ch in enumerate(text):
        if ch not in _HEX_DIGITS:
            raise InvalidHexDigit(f"invalid hex digit {ch!r} at position {pos}")
    if len(text) % 2:
        raise OddLength(f"hex string has odd length {len(text)}")
    return bytes.fromhex(text)


@dataclass(frozen=True)
class PlsKeyFile:
    """Encrypted locator sequence as written to disk."""

    salt: bytes
    iv: bytes
    ciphertext: bytes

    def to_bytes(self) -> bytes:
        return self.salt + self.iv + self.ciphertext

    @classmethod
    def from_bytes(cls, data: bytes) -> PlsKeyFile:
        if len(data) < HEADER_SIZE + BLOCK_SIZE or (len(data) - HEADER_SIZE) % BLOCK_SIZE:
            raise MalformedPls(f"key file of {len(data)} bytes is truncated or padded wrongly")
        return cls(data[:SALT_SIZE], data[SALT_SIZE:HEADER_SIZE], data[HEADER_SIZE:])

    def write(self, path) -> None:
        with open(os.fspath(path), "wb") as fh:
            fh.write(self.to_bytes())

    @classmethod
    def read(cls, path) -> PlsKeyFile:
        with open(os.fspath(path), "rb") as fh:
            return cls.from_bytes(fh.read())


def pls_file_size(needed: int) -> int:
    """On-disk size of a key file holding ``needed`` indices."""
    body = len(MAGIC) + 4 + 4 * needed
    return HEADER_SIZE + BLOCK_SIZE * (body // BLOCK_SIZE + 1)


def seal_pls(pls: PixelLocatorSequence, passphrase: str, *, salt: bytes | None = None,
             iv: bytes | None = None) -> PlsKeyFile:
    sealed = seal(serialize_pls(pls), passphrase, salt=salt, iv=iv)
    return PlsKeyFile(sealed.salt, sealed.iv, sealed.ciphertext)


def open_pls(keyfile: PlsKeyFile, passphrase: str, total_pixels: int | None = None) -> PixelLocatorSequence:
    """Decrypt a key file back into its sequence.

    A wrong passphrase usually fails the padding check; when the padding
    happens to survive, the magic check catches it and the same
    :class:`BadPadding` is raised so callers cannot tell the two apart.
    A correctly decrypted body with inconsistent length fields is
    :class:`MalformedPls`.
    """
    if len(keyfile.ciphertext) < BLOCK_SIZE or len(keyfile.ciphertext) % BLOCK_SIZE:
        raise MalformedPls("key file ciphertext is not a whole number of blocks")
    key = derive_key(passphrase, keyfile.salt)
    body = _cbc_decrypt(key, keyfile.iv, keyfile.ciphertext)
    if not body.startswith(MAGIC):
        raise BadPadding()
    return deserialize_pls(body, total_pixels)
