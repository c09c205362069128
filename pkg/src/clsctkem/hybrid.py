"""Signcryption of arbitrary-length messages: tag-KEM plus DEM.

The message is encrypted under a key derived from the KEM session key,
and the resulting DEM ciphertext is fed to the KEM encapsulation as its
tag.  Verifying the encapsulation therefore authenticates the payload;
flipping any ciphertext byte invalidates the whole object.
"""

from dataclasses import dataclass

from . import dktuts, lsw
from .dktuts import DEFAULT_FRESHNESS_WINDOW, system_clock
from .errors import DecryptFailure, Rejected
from .keys import combine_public_key

PROTOCOLS = (lsw.PROTOCOL_ID, dktuts.PROTOCOL_ID)


@dataclass(frozen=True)
class SigncryptedMessage:
    protocol: str
    encapsulation: object
    ciphertext: bytes


def signcrypt(params, protocol, message, sender_sk, sender_pk, receiver_pk, rng,
              clock=None):
    """One-pass signcryption of ``message`` to the holder of ``receiver_pk``."""
    clock = clock or system_clock
    receiver_key = combine_public_key(params, receiver_pk)
    if protocol == lsw.PROTOCOL_ID:
        kem_key, state = lsw.symmetric_key_gen(
            params, sender_sk.identity, receiver_pk.identity, receiver_key, rng)
        ciphertext = _dem_encrypt(params, kem_key, message)
        encap = lsw.encapsulate(state, ciphertext, sender_sk, sender_pk, rng)
    elif protocol == dktuts.PROTOCOL_ID:
        kem_key, state = dktuts.symmetric_key_gen(
            params, sender_sk.identity, receiver_pk.identity, receiver_key, clock, rng)
        ciphertext = _dem_encrypt(params, kem_key, message)
        encap = dktuts.encapsulate(state, ciphertext, sender_sk, sender_pk, receiver_pk)
    else:
        raise ValueError(f"unknown protocol {protocol!r}")
    return SigncryptedMessage(protocol=protocol, encapsulation=encap, ciphertext=ciphertext)


def unsigncrypt(params, sc, sender_pk, receiver_sk, receiver_pk, clock=None,
                freshness_window=DEFAULT_FRESHNESS_WINDOW):
    """Recover and verify the original message, or raise Rejected."""
    clock = clock or system_clock
    if sc.protocol == lsw.PROTOCOL_ID:
        kem_key = lsw.decapsulate(params, sc.encapsulation, sc.ciphertext,
                                  sender_pk, receiver_sk, receiver_pk)
    elif sc.protocol == dktuts.PROTOCOL_ID:
        kem_key = dktuts.decapsulate(params, sc.encapsulation, sc.ciphertext,
                                     sender_pk, receiver_sk, receiver_pk, clock,
                                     freshness_window)
    else:
        raise Rejected()
    try:
        return params.suite.sym_decrypt(
            params.suite.dem_key(params.group, kem_key), sc.ciphertext)
    except DecryptFailure:
        raise Rejected() from None


def _dem_encrypt(params, kem_key, message):
    return params.suite.sym_encrypt(params.suite.dem_key(params.group, kem_key), message)
