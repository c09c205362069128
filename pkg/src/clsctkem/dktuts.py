"""Timestamped direct-key-transport certificateless signcryption tag-KEM.

The sender draws the session key K directly, transports it inside an
authenticated ciphertext bound to a timestamp and the tag, and signs the
transport with a Schnorr-style quotient s = x/(r + x_A).  The recipient
rebuilds the shared point X' = s*(d_B + x_B)*(P_A + r*P), rederives the
cipher/MAC keys from X' + U, and accepts only if the timestamp is fresh
and the transported U, X, and MAC tag r all match.

Online cost: sender 2 point mults, 1 field inversion, 1 field mult, 1
encryption; recipient 2 point mults, 1 field mult, 1 decryption.

Freshness is |clock - TS| <= window with an injected clock.  Replay of a
valid encapsulation inside the window is accepted by design; callers
needing stronger replay protection must keep their own seen-cache.
"""

import time
from dataclasses import dataclass, field

from .errors import DecodeError, DecryptFailure, Rejected, StateConsumed, ZeroInversion
from .hashsuite import decode_transcript, elem, encode_transcript, ident, raw, stamp

PROTOCOL_ID = "dktuts"

DEFAULT_FRESHNESS_WINDOW = 120  # seconds


def system_clock():
    return int(time.time())


@dataclass
class DktutsSessionState:
    """Sender-side ephemeral state; single-use, consumed by encapsulate()."""

    params: object
    x: int
    k1: bytes
    k2: bytes
    ts: int
    sender_id: str
    receiver_id: str
    receiver_pk: object        # FullPublicKey of the recipient
    receiver_combined: object  # CombinedPublicKey, kept for degenerate resampling
    X: object
    U: object
    K: bytes
    rng: object = field(default=None, repr=False)  # source for degenerate resampling
    consumed: bool = field(default=False, repr=False)


@dataclass(frozen=True)
class DktutsEncapsulation:
    """Wire object <U, c, r, s>."""

    U: object
    c: bytes
    r: int
    s: int


def _package_items(key, ts, tag, sender_id, receiver_id, sender_pk, receiver_pk, X, U):
    # the tuple that is both encrypted under k1 and MACed under k2
    return [raw(key), stamp(ts), raw(tag), ident(sender_id), ident(receiver_id),
            elem(sender_pk.R), elem(receiver_pk.R),
            elem(sender_pk.P), elem(receiver_pk.P),
            elem(X), elem(U)]


_PACKAGE_KINDS = ("raw", "ts", "raw", "id", "id", "elem", "elem", "elem", "elem", "elem", "elem")


def symmetric_key_gen(params, sender_id, receiver_id, receiver_key, clock, rng):
    """Draw K and the transport ephemerals toward one recipient.

    ``receiver_key`` is the recipient's CombinedPublicKey; ``clock`` is a
    zero-argument callable returning epoch seconds.  Returns (K, state).
    Exactly 2 point mults online.
    """
    if receiver_key.identity != receiver_id:
        raise ValueError(f"combined key belongs to {receiver_key.identity!r}, not {receiver_id!r}")
    g = params.group
    key = rng.randbytes(params.suite.key_size)
    x = g.random_nonzero_scalar(rng)
    a = g.random_nonzero_scalar(rng)
    big_u = g.point_mul(a, g.generator)
    big_x = g.point_mul(x, receiver_key.Y)
    k1, k2 = params.suite.split_keys(g, g.point_add(big_x, big_u))
    state = DktutsSessionState(params=params, x=x, k1=k1, k2=k2, ts=int(clock()),
                               sender_id=sender_id, receiver_id=receiver_id,
                               receiver_pk=receiver_key.pk, receiver_combined=receiver_key,
                               X=big_x, U=big_u, K=key, rng=rng)
    return key, state


def encapsulate(state, tag, sender_sk, sender_pk, receiver_pk):
    """Encrypt-and-sign the key transport, consuming the session state.

    Online cost: 1 field inversion, 1 field mult, 1 encryption.  Needs no
    fresh randomness on the honest path; a degenerate denominator
    r + x_A == 0 forces redrawing x from the session's rng (r depends on
    X, so x is the only free variable), rebuilding X, the derived keys,
    the ciphertext, and the MAC.
    """
    if state.consumed:
        raise StateConsumed("DKTUTS session state already used")
    if sender_sk.identity != state.sender_id or sender_pk.identity != state.sender_id:
        raise ValueError("sender keys do not match the session state")
    if receiver_pk != state.receiver_pk:
        raise ValueError("receiver public key does not match the session state")
    params = state.params
    g = params.group
    while True:
        items = _package_items(state.K, state.ts, tag, state.sender_id, state.receiver_id,
                               sender_pk, receiver_pk, state.X, state.U)
        c = params.suite.sym_encrypt(state.k1, encode_transcript(g, items))
        g.note_encryption()
        r = params.suite.mac_scalar(g, state.k2, items)
        denom = g.scalar_add(r, sender_sk.x)
        if denom != 0:
            break
        # r + x_A == 0: rebuild everything downstream of x
        state.x = g.random_nonzero_scalar(state.rng)
        state.X = g.point_mul(state.x, state.receiver_combined.Y)
        state.k1, state.k2 = params.suite.split_keys(g, g.point_add(state.X, state.U))
    s = g.scalar_mul(state.x, g.scalar_invert(denom))
    state.consumed = True
    return DktutsEncapsulation(U=state.U, c=c, r=r, s=s)


def decapsulate(params, encap, tag, sender_pk, receiver_sk, receiver_pk, clock,
                freshness_window=DEFAULT_FRESHNESS_WINDOW):
    """Verify a key transport and recover K, or raise Rejected.

    ``encap``, ``tag``, and ``sender_pk`` are untrusted.  Accepts iff the
    ciphertext authenticates, the timestamp is within ``freshness_window``
    seconds of ``clock()``, the transported U and X match the transmitted
    U and recomputed X', the recomputed MAC matches r, and the decrypted
    tag/identities/public-key components equal the supplied ones.  Online
    cost: 2 point mults, 1 field mult, 1 decryption.
    """
    if receiver_pk.identity != receiver_sk.identity:
        raise ValueError("receiver public key does not match its private key")
    g = params.group
    try:
        if not 1 <= encap.r < g.q or not 1 <= encap.s < g.q:
            raise Rejected()
        t = g.scalar_mul(encap.s, g.scalar_add(receiver_sk.d, receiver_sk.x))
        big_x = g.point_mul(t, g.point_add(sender_pk.P, g.point_mul(encap.r, g.generator)))
        k1, k2 = params.suite.split_keys(g, g.point_add(big_x, encap.U))
        plain = params.suite.sym_decrypt(k1, encap.c)
        g.note_decryption()
        items = decode_transcript(g, plain)
        if tuple(i.kind for i in items) != _PACKAGE_KINDS:
            raise Rejected()
        (key, ts, tag_in, sender_id, receiver_id,
         sender_r, receiver_r, sender_p, receiver_p, x_in, u_in) = (i.value for i in items)
        r_check = params.suite.mac_scalar(g, k2, items)
        fresh = abs(int(clock()) - ts) <= freshness_window
        ok = (fresh
              and u_in == encap.U
              and x_in == big_x
              and r_check == encap.r
              and tag_in == tag
              and sender_id == sender_pk.identity
              and receiver_id == receiver_sk.identity
              and sender_r == sender_pk.R
              and sender_p == sender_pk.P
              and receiver_r == receiver_pk.R
              and receiver_p == receiver_pk.P)
        if not ok:
            raise Rejected()
        return key
    except (DecryptFailure, DecodeError, ZeroInversion):
        raise Rejected() from None
