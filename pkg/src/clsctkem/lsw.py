"""LSW certificateless signcryption tag-KEM.

One-pass flow: the sender derives the session key from a fresh ephemeral
(SymmetricKeyGen), then signs a tag-bound challenge with its full private
key (Encapsulation).  The recipient recovers the shared point with its
combined private scalar and accepts only if the signature equation
s*(h*P_A + R_A + H1(ID_A, R_A)*P_pub) == Q holds and the transmitted
challenge matches the recomputed one (Decapsulation).

Online cost with the peer's combined key precomputed: sender 3 point
mults, 1 field inversion, 2 field mults; recipient 3 point mults, 1
field inversion.
"""

from dataclasses import dataclass, field

from .errors import Rejected, StateConsumed, ZeroInversion
from .hashsuite import elem, ident, raw
from .keys import combine_public_key

PROTOCOL_ID = "lsw"


@dataclass
class LswSessionState:
    """Sender-side ephemeral state; single-use, consumed by encapsulate()."""

    params: object
    u: int
    sender_id: str
    receiver_id: str
    receiver_pk: object  # FullPublicKey of the recipient
    X: object
    U: object
    consumed: bool = field(default=False, repr=False)


@dataclass(frozen=True)
class LswEncapsulation:
    """Wire object <Q, U, sigma=(s, h)>."""

    Q: object
    U: object
    s: int
    h: int


def _session_key_items(X, U, sender_id, receiver_id):
    return [elem(X), elem(U), ident(sender_id), ident(receiver_id)]


def _challenge_items(tag, sender_id, receiver_id, sender_pk, receiver_pk, Q, X, U):
    return [raw(tag), ident(sender_id), ident(receiver_id),
            elem(sender_pk.R), elem(receiver_pk.R),
            elem(sender_pk.P), elem(receiver_pk.P),
            elem(Q), elem(X), elem(U)]


def symmetric_key_gen(params, sender_id, receiver_id, receiver_key, rng):
    """Derive the session key and ephemeral state toward one recipient.

    ``receiver_key`` is the recipient's CombinedPublicKey and must belong to
    ``receiver_id``.  Returns (K, state).  Exactly 2 point mults online.
    """
    if receiver_key.identity != receiver_id:
        raise ValueError(f"combined key belongs to {receiver_key.identity!r}, not {receiver_id!r}")
    g = params.group
    u = g.random_nonzero_scalar(rng)
    big_u = g.point_mul(u, receiver_key.Y)
    big_x = g.point_mul(u, g.generator)
    key = params.suite.session_key(g, _session_key_items(big_x, big_u, sender_id, receiver_id))
    state = LswSessionState(params=params, u=u, sender_id=sender_id, receiver_id=receiver_id,
                            receiver_pk=receiver_key.pk, X=big_x, U=big_u)
    return key, state


def encapsulate(state, tag, sender_sk, sender_pk, rng):
    """Sign the tag-bound challenge, consuming the session state.

    Online cost: 1 point mult, 1 field inversion, 2 field mults.  A
    degenerate denominator h*x + d == 0 (probability ~1/q) is resolved
    internally by redrawing the signing ephemeral; callers never see it.
    """
    if state.consumed:
        raise StateConsumed("LSW session state already used")
    if sender_sk.identity != state.sender_id or sender_pk.identity != state.sender_id:
        raise ValueError("sender keys do not match the session state")
    params = state.params
    g = params.group
    while True:
        a = g.random_nonzero_scalar(rng)
        big_q = g.point_mul(a, g.generator)
        h = params.suite.h2_sign(g, _challenge_items(
            tag, state.sender_id, state.receiver_id, sender_pk, state.receiver_pk,
            big_q, state.X, state.U))
        denom = g.scalar_add(g.scalar_mul(h, sender_sk.x), sender_sk.d)
        if denom != 0:
            break
    s = g.scalar_mul(a, g.scalar_invert(denom))
    state.consumed = True
    return LswEncapsulation(Q=big_q, U=state.U, s=s, h=h)


def decapsulate(params, encap, tag, sender_pk, receiver_sk, receiver_pk, sender_combined=None):
    """Verify an encapsulation and recover the session key, or raise Rejected.

    ``encap``, ``tag``, and ``sender_pk`` are untrusted; ``receiver_pk`` is
    the receiver's own public key (its components enter the challenge).
    Passing the sender's precomputed CombinedPublicKey keeps the online
    cost at 3 point mults and 1 field inversion; without it one extra
    point mult is spent rebuilding it.  Every verification failure raises
    the same opaque ``Rejected``.
    """
    if receiver_pk.identity != receiver_sk.identity:
        raise ValueError("receiver public key does not match its private key")
    g = params.group
    try:
        if not 1 <= encap.s < g.q or not 1 <= encap.h < g.q:
            raise Rejected()
        big_x = g.point_mul(g.scalar_invert(g.scalar_add(receiver_sk.d, receiver_sk.x)),
                            encap.U)
        h = params.suite.h2_sign(g, _challenge_items(
            tag, sender_pk.identity, receiver_sk.identity, sender_pk, receiver_pk,
            encap.Q, big_x, encap.U))
        if sender_combined is None:
            sender_combined = combine_public_key(params, sender_pk)
        if sender_combined.identity != sender_pk.identity or sender_combined.pk != sender_pk:
            raise Rejected()
        # R_A + H1(ID_A, R_A)*P_pub, recovered from Y_A at zero point mults
        partial_pub = g.point_sub(sender_combined.Y, sender_pk.P)
        lhs = g.point_mul(encap.s, g.point_add(g.point_mul(h, sender_pk.P), partial_pub))
        if lhs != encap.Q or h != encap.h:
            raise Rejected()
        return params.suite.session_key(
            g, _session_key_items(big_x, encap.U, sender_pk.identity, receiver_sk.identity))
    except ZeroInversion:
        raise Rejected() from None
