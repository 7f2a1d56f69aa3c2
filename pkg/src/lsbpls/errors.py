"""Exception types shared across the package.

Each error carries the CLI exit status it maps to, so the command layer
never has to keep a second lookup table in sync.
"""


class StegoError(Exception):
    exit_code = 1


class CapacityExceeded(StegoError):
    exit_code = 2


class UnsupportedFormat(StegoError):
    exit_code = 3


class DecodeError(StegoError):
    exit_code = 3


class InvalidPls(StegoError):
    exit_code = 5


class IndexOutOfRange(InvalidPls):
    pass


class MalformedPls(InvalidPls):
    pass


class DecryptionError(StegoError):
    """Wrong passphrase or corrupted ciphertext (bad PKCS#7 padding).

    The message is deliberately generic.
    """

    exit_code = 6

    def __init__(self, msg="decryption failed"):
        super().__init__(msg)


# PKCS#7 failures are the common cause; keep the name callers expect.
BadPadding = DecryptionError


class PayloadCorrupted(StegoError):
    exit_code = 7


class InvalidHexDigit(PayloadCorrupted, ValueError):
    pass


class OddLength(PayloadCorrupted, ValueError):
    pass


class DimensionMismatch(StegoError):
    exit_code = 8


class EmptyPassphrase(StegoError, ValueError):
    pass


class EmptyPlaintext(StegoError, ValueError):
    pass
