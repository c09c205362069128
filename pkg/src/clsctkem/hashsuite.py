"""Hash, KDF, MAC, and symmetric-cipher suite over injective transcripts.

All of the protocol hashes take multi-typed argument lists (identities,
group elements, scalars, tag bytes, timestamps).  They are encoded
injectively: each item is type-tagged and length-prefixed, so no two
distinct item sequences produce the same byte string.  Every logical
function carries its own domain-separation label.

Scalar-valued hashes return values in [1, q-1]: the digest is reduced
mod q and a (negligibly likely) zero is remapped to 1, keeping outputs
usable as denominators.

The cipher is AES-128-GCM with a nonce derived from (key, plaintext),
making encryption a pure function; fresh session keys make nonce reuse
a non-issue and determinism keeps test vectors replayable.

Stub-hash mode: constructing the suite with a ``StubHashes`` table makes
every hash/KDF/MAC return the table's value for listed inputs and fail
loudly (``StubMiss``) on anything unlisted.  This exists solely so toy
group vectors stay hand-computable; the cipher is never stubbed.
"""

import hashlib
import hmac as _hmac
from dataclasses import dataclass
from typing import NamedTuple

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM

from .errors import DecodeError, DecryptFailure, StubMiss


class Item(NamedTuple):
    kind: str
    value: object


def ident(name):
    """Identity-string transcript item."""
    return Item("id", name)


def elem(point):
    """Group-element transcript item."""
    return Item("elem", point)


def scal(value):
    """Scalar transcript item."""
    return Item("scalar", value)


def raw(data):
    """Opaque-bytes transcript item (tags, transported keys)."""
    return Item("raw", data)


def stamp(seconds):
    """Timestamp transcript item (unsigned seconds since epoch)."""
    return Item("ts", seconds)


_KIND_TAGS = {"id": 1, "elem": 2, "scalar": 3, "raw": 4, "ts": 5}
_TAG_KINDS = {v: k for k, v in _KIND_TAGS.items()}


def _item_payload(group, item):
    kind, value = item
    if kind == "id":
        return value.encode("utf-8")
    if kind == "elem":
        return group.encode_element(value)
    if kind == "scalar":
        return group.encode_scalar(value)
    if kind == "raw":
        return bytes(value)
    if kind == "ts":
        if not 0 <= value < 1 << 64:
            raise ValueError(f"timestamp out of range: {value}")
        return value.to_bytes(8, "big")
    raise ValueError(f"unknown transcript item kind {kind!r}")


def encode_transcript(group, items):
    """Injective encoding: type tag, 4-byte big-endian length, payload."""
    out = bytearray()
    for item in items:
        payload = _item_payload(group, item)
        out.append(_KIND_TAGS[item.kind])
        out += len(payload).to_bytes(4, "big")
        out += payload
    return bytes(out)


def decode_transcript(group, data):
    """Parse a transcript back into items; DecodeError on malformed input."""
    items = []
    pos = 0
    n = len(data)
    while pos < n:
        if pos + 5 > n:
            raise DecodeError("truncated transcript item header")
        kind = _TAG_KINDS.get(data[pos])
        if kind is None:
            raise DecodeError(f"unknown transcript tag {data[pos]:#x}")
        size = int.from_bytes(data[pos + 1:pos + 5], "big")
        pos += 5
        if pos + size > n:
            raise DecodeError("truncated transcript item payload")
        payload = data[pos:pos + size]
        pos += size
        if kind == "id":
            try:
                value = payload.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise DecodeError("identity is not valid UTF-8") from exc
        elif kind == "elem":
            value = group.decode_element(payload)
        elif kind == "scalar":
            value = group.decode_scalar(payload)
        elif kind == "raw":
            value = bytes(payload)
        else:
            if size != 8:
                raise DecodeError("timestamp must be 8 bytes")
            value = int.from_bytes(payload, "big")
        items.append(Item(kind, value))
    return items


def stub_key(group, items):
    """Hashable, JSON-compatible canonical form of an item list."""
    out = []
    for kind, value in items:
        if kind == "elem":
            out.append((kind, group.element_to_plain(value)))
        elif kind == "raw":
            out.append((kind, bytes(value).hex()))
        else:
            out.append((kind, value))
    return tuple(out)


class StubHashes:
    """Lookup table replacing the hash functions in toy-vector tests."""

    def __init__(self):
        self._entries = {}

    def put(self, fn, items_key, out, extra=None):
        self._entries[(fn, extra, tuple(items_key))] = out

    def lookup(self, fn, items_key, extra=None):
        try:
            return self._entries[(fn, extra, tuple(items_key))]
        except KeyError:
            raise StubMiss(f"no stub value for {fn} extra={extra!r} items={items_key!r}") from None

    def __len__(self):
        return len(self._entries)


# Domain-separation labels, fixed for suite id "sha256-aesgcm128" v1.
_L_H1 = b"clsc-tkem.v1/h1"
_L_H2_SIGN = b"clsc-tkem.v1/h2-sign"
_L_SESSION_KDF = b"clsc-tkem.v1/session-key"
_L_SPLIT_KDF = b"clsc-tkem.v1/split-keys"
_L_MAC = b"clsc-tkem.v1/mac"
_L_DEM = b"clsc-tkem.v1/dem-key"
_L_NONCE = b"clsc-tkem.v1/nonce"

DEFAULT_SUITE_ID = "sha256-aesgcm128"


@dataclass(frozen=True)
class HashSuite:
    """Concrete hash/KDF/MAC/cipher instantiation shared by both protocols."""

    suite_id: str = DEFAULT_SUITE_ID
    hash_name: str = "sha256"
    cipher_name: str = "aes-128-gcm"
    key_bits: int = 128
    stub: StubHashes | None = None

    @property
    def key_size(self):
        return self.key_bits // 8

    def _digest(self, label, data):
        return hashlib.new(self.hash_name, label + b"\x00" + data).digest()

    def _to_nonzero_scalar(self, group, digest):
        v = int.from_bytes(digest, "big") % group.q
        return v if v else 1

    def h1(self, group, items):
        """Identity-binding hash to a nonzero scalar."""
        if self.stub is not None:
            return self.stub.lookup("h1", stub_key(group, items))
        digest = self._digest(_L_H1, encode_transcript(group, items))
        return self._to_nonzero_scalar(group, digest)

    def h2_sign(self, group, items):
        """Signature-challenge hash to a nonzero scalar."""
        if self.stub is not None:
            return self.stub.lookup("h2", stub_key(group, items))
        digest = self._digest(_L_H2_SIGN, encode_transcript(group, items))
        return self._to_nonzero_scalar(group, digest)

    def _expand(self, label, data, size):
        # counter-mode expansion from the base hash
        blocks = bytearray()
        counter = 1
        while len(blocks) < size:
            blocks += self._digest(label + counter.to_bytes(4, "big"), data)
            counter += 1
        return bytes(blocks[:size])

    def session_key(self, group, items, out_bits=None):
        """Derive the session key K from a transcript."""
        out_bits = self.key_bits if out_bits is None else out_bits
        if out_bits != self.key_bits:
            raise ValueError(f"session keys are {self.key_bits} bits for this suite")
        if self.stub is not None:
            return self.stub.lookup("kdf", stub_key(group, items))
        return self._expand(_L_SESSION_KDF, encode_transcript(group, items), out_bits // 8)

    def split_keys(self, group, point):
        """Derive the (cipher key, MAC key) pair from a single group element."""
        if self.stub is not None:
            k1, k2 = self.stub.lookup("split", stub_key(group, [elem(point)]))
            return k1, k2
        okm = self._expand(_L_SPLIT_KDF, encode_transcript(group, [elem(point)]), 2 * self.key_size)
        return okm[:self.key_size], okm[self.key_size:]

    def mac_scalar(self, group, mac_key, items):
        """Keyed tag over a transcript, reduced to a nonzero scalar."""
        if self.stub is not None:
            return self.stub.lookup("mac", stub_key(group, items), extra=bytes(mac_key).hex())
        digest = _hmac.new(mac_key, _L_MAC + b"\x00" + encode_transcript(group, items),
                           self.hash_name).digest()
        return self._to_nonzero_scalar(group, digest)

    def dem_key(self, group, kem_key):
        """Payload-encryption key derived from a KEM session key."""
        if self.stub is not None:
            return self.stub.lookup("dem", stub_key(group, [raw(kem_key)]))
        return self._expand(_L_DEM, encode_transcript(group, [raw(kem_key)]), self.key_size)

    def sym_encrypt(self, key, plaintext):
        """Deterministic AEAD encryption; returns nonce || ciphertext."""
        if len(key) != self.key_size:
            raise ValueError(f"cipher key must be {self.key_size} bytes")
        nonce = self._digest(_L_NONCE, key + plaintext)[:12]
        return nonce + AESGCM(key).encrypt(nonce, plaintext, None)

    def sym_decrypt(self, key, data):
        if len(key) != self.key_size:
            raise ValueError(f"cipher key must be {self.key_size} bytes")
        if len(data) < 12 + 16:
            raise DecryptFailure("ciphertext too short")
        try:
            return AESGCM(key).decrypt(data[:12], data[12:], None)
        except InvalidTag:
            raise DecryptFailure("authentication failed") from None


def suite_by_id(suite_id):
    if suite_id != DEFAULT_SUITE_ID:
        raise DecodeError(f"unknown hash suite {suite_id!r}")
    return HashSuite()
