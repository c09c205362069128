"""Exception types shared across the package."""


class UnsupportedParameter(ValueError):
    """Requested a security parameter or backend the build does not support."""


class DecodeError(ValueError):
    """Malformed or non-canonical byte encoding (scalar, element, or file)."""


class ZeroInversion(ArithmeticError):
    """Attempted to invert the zero scalar; signals a degenerate protocol state."""


class StateConsumed(RuntimeError):
    """A single-use session state was offered to encapsulation twice."""


class KeyValidationError(ValueError):
    """A partial private key failed its validation equation."""


class DecryptFailure(Exception):
    """Authenticated symmetric decryption rejected the ciphertext."""


class StubMiss(LookupError):
    """Stub-hash mode was queried for an input the test table does not list."""


class Rejected(Exception):
    """Opaque decapsulation/unsigncryption failure.

    Deliberately carries no cause: all verification failures are
    indistinguishable to the caller.
    """

    def __init__(self):
        super().__init__("invalid encapsulation")
