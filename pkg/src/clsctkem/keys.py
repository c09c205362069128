"""User-side key material: full certificateless key pairs and combined keys.

A full private key joins the user-chosen secret x with the KGC-issued
partial secret d; the matching public key exposes P = x*P and the KGC
commitment R.  The combined public key Y = R + H1(id, R)*P_pub + P equals
(d + x)*P and is the one-scalar-multiplication precomputation that keeps
the online protocol cost down; cache it per peer.
"""

from dataclasses import dataclass

from .errors import KeyValidationError
from .hashsuite import elem, ident
from .kgc import validate_partial_key


@dataclass(frozen=True)
class FullPrivateKey:
    identity: str
    x: int  # user-chosen secret
    d: int  # KGC-issued partial secret


@dataclass(frozen=True)
class FullPublicKey:
    identity: str
    P: object  # x*P, user half
    R: object  # KGC commitment from extraction


@dataclass(frozen=True)
class CombinedPublicKey:
    """Precomputed R + H1(id, R)*P_pub + P for one peer; equals (d + x)*P.

    Keeps a reference to the source public key so protocol transcripts can
    reach the peer's R and P without re-supplying them.
    """

    identity: str
    Y: object
    pk: FullPublicKey


def gen_user_keys(params, rng):
    """Draw the user secret x and its public point x*P."""
    g = params.group
    x = g.random_nonzero_scalar(rng)
    return x, g.point_mul(x, g.generator)


def make_keypair(params, ppk, rng):
    """Validate a partial key and assemble the full key pair around it."""
    if not validate_partial_key(params, ppk):
        raise KeyValidationError(f"partial key for {ppk.identity!r} fails validation")
    x, p_elem = gen_user_keys(params, rng)
    sk = FullPrivateKey(identity=ppk.identity, x=x, d=ppk.d)
    pk = FullPublicKey(identity=ppk.identity, P=p_elem, R=ppk.R)
    return sk, pk


def combine_public_key(params, pk):
    """Fold a peer's public key into its combined form; 1 scalar mult, offline."""
    g = params.group
    h = params.suite.h1(g, [ident(pk.identity), elem(pk.R)])
    y = g.point_add(g.point_add(pk.R, g.point_mul(h, params.p_pub)), pk.P)
    return CombinedPublicKey(identity=pk.identity, Y=y, pk=pk)
