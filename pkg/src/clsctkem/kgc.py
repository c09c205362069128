"""Key Generating Center: system setup and partial-private-key extraction.

The KGC holds the master secret and, per identity, issues the partial
private key half of a certificateless key pair.  Extraction is blinded
by a fresh nonce per call, and the recipient can validate the delivered
key against the public parameters without trusting the transport.
"""

import random
from dataclasses import dataclass

from .errors import UnsupportedParameter
from .group import BACKEND_SECP256K1, Group, make_group
from .hashsuite import HashSuite, elem, ident


@dataclass(frozen=True)
class SystemParams:
    """Published system parameters: group description, KGC public key, hash suite."""

    group: Group
    p_pub: object
    suite: HashSuite


@dataclass(frozen=True)
class MasterKey:
    x_msk: int


@dataclass(frozen=True)
class PartialPrivateKey:
    """KGC-issued key half: commitment point R and partial secret d.

    Valid iff d*P == R + H1(identity, R)*P_pub.
    """

    identity: str
    R: object
    d: int


def _default_rng():
    return random.SystemRandom()


def setup(bits=256, rng=None, *, group=None, suite=None):
    """Generate system parameters and the master key.

    ``bits`` selects the production backend (only 256 is supported); pass
    ``group`` explicitly for a toy instance.  Raises UnsupportedParameter
    for anything else.
    """
    if group is None:
        if bits != 256:
            raise UnsupportedParameter(f"no backend for {bits}-bit groups")
        group = make_group(BACKEND_SECP256K1)
    rng = rng or _default_rng()
    suite = suite or HashSuite()
    x_msk = group.random_nonzero_scalar(rng)
    p_pub = group.point_mul(x_msk, group.generator)
    return SystemParams(group=group, p_pub=p_pub, suite=suite), MasterKey(x_msk=x_msk)


def extract_partial_key(msk, params, identity, rng=None):
    """Issue the partial private key for an identity.

    Fresh blinding per call: extracting the same identity twice yields
    different (R, d) pairs.  A degenerate d == 0 is resampled so d stays
    usable in denominators downstream.
    """
    if not identity:
        raise ValueError("identity must be nonempty")
    rng = rng or _default_rng()
    g = params.group
    while True:
        r = g.random_nonzero_scalar(rng)
        big_r = g.point_mul(r, g.generator)
        h = params.suite.h1(g, [ident(identity), elem(big_r)])
        d = g.scalar_add(r, g.scalar_mul(msk.x_msk, h))
        if d != 0:
            return PartialPrivateKey(identity=identity, R=big_r, d=d)


def validate_partial_key(params, ppk):
    """Check d*P == R + H1(identity, R)*P_pub."""
    g = params.group
    h = params.suite.h1(g, [ident(ppk.identity), elem(ppk.R)])
    lhs = g.point_mul(ppk.d, g.generator)
    rhs = g.point_add(ppk.R, g.point_mul(h, params.p_pub))
    return lhs == rhs
