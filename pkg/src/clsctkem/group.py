"""Prime-order additive groups with an instrumented scalar field.

Two interchangeable backends:

* ``ToyGroup`` -- the additive group of integers mod a small prime q with
  generator 1, so k*E is literally ``k*E mod q``.  Hand-checkable and
  variable-time; test use only.
* ``Secp256k1Group`` -- the secp256k1 curve (prime order, cofactor 1).
  Point multiplication uses a Montgomery ladder with a fixed iteration
  count and a uniform add+double per bit, independent of scalar bits.
  Python big-integer arithmetic is not strictly constant-time, so treat
  this as best-effort side-channel discipline, not a guarantee.

Scalars are plain ints reduced mod the group order q.  Elements are
backend-native: ints for the toy group, affine ``(x, y)`` tuples or
``None`` (identity) for the curve.  The group object doubles as the
published group description (backend id, order, generator).

Every operation is a pure function of its inputs except for the optional
operation counter: while one is attached, ``point_mul`` tallies a scalar
multiplication and ``scalar_mul``/``scalar_invert`` tally field work.
"""

from gmpy2 import invert as _gmp_invert, mpz

from .errors import DecodeError, UnsupportedParameter, ZeroInversion

BACKEND_TOY = "toy"
BACKEND_SECP256K1 = "secp256k1"


def _is_small_prime(n):
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


class Group:
    """Shared scalar-field arithmetic and instrumentation hooks."""

    backend_id = None
    q = None  # prime group order

    def __init__(self):
        self._counter = None

    # -- instrumentation ------------------------------------------------

    def attach_counter(self, counter):
        self._counter = counter

    def detach_counter(self):
        self._counter = None

    def _tick(self, kind):
        if self._counter is not None:
            self._counter.tick(kind)

    def note_encryption(self):
        """Tally one symmetric-cipher encryption (called at cipher call sites)."""
        self._tick("enc")

    def note_decryption(self):
        self._tick("dec")

    # -- scalar field mod q ----------------------------------------------

    def scalar_add(self, a, b):
        return (a + b) % self.q

    def scalar_sub(self, a, b):
        return (a - b) % self.q

    def scalar_neg(self, a):
        return -a % self.q

    def scalar_mul(self, a, b):
        self._tick("mul")
        return a * b % self.q

    def scalar_invert(self, a):
        """Multiplicative inverse mod q; raises ZeroInversion on 0."""
        a %= self.q
        if a == 0:
            raise ZeroInversion("cannot invert 0 mod group order")
        self._tick("inv")
        return int(_gmp_invert(a, self.q))

    def random_nonzero_scalar(self, rng):
        return rng.randrange(1, self.q)

    @property
    def scalar_size(self):
        return (self.q.bit_length() + 7) // 8

    def encode_scalar(self, a):
        a %= self.q
        return int(a).to_bytes(self.scalar_size, "big")

    def decode_scalar(self, data, nonzero=False):
        if len(data) != self.scalar_size:
            raise DecodeError(f"scalar must be {self.scalar_size} bytes, got {len(data)}")
        v = int.from_bytes(data, "big")
        if v >= self.q:
            raise DecodeError("scalar not reduced mod group order")
        if nonzero and v == 0:
            raise DecodeError("scalar must be nonzero")
        return v

    # -- group interface (backend-specific) -------------------------------

    identity = None
    generator = None
    element_size = None

    def point_mul(self, k, point):
        raise NotImplementedError

    def point_add(self, a, b):
        raise NotImplementedError

    def point_neg(self, a):
        raise NotImplementedError

    def point_sub(self, a, b):
        return self.point_add(a, self.point_neg(b))

    def is_identity(self, e):
        return e == self.identity

    def encode_element(self, e):
        raise NotImplementedError

    def decode_element(self, data):
        raise NotImplementedError

    # plain form: JSON-friendly value used by vector files and stub tables
    def element_to_plain(self, e):
        raise NotImplementedError

    def element_from_plain(self, v):
        raise NotImplementedError

    def describe(self):
        return {"backend": self.backend_id, "order": int(self.q)}


class ToyGroup(Group):
    """Integers mod a small prime under addition; generator 1.

    Scalar multiplication is integer multiplication mod q, so every
    protocol value can be recomputed by hand or by a brute-force
    repeated-addition oracle.  Variable-time on purpose; never use
    outside tests.
    """

    backend_id = BACKEND_TOY
    identity = 0
    element_size = 2

    def __init__(self, order=13):
        super().__init__()
        if not _is_small_prime(order) or order < 3 or order >= 1 << 16:
            raise UnsupportedParameter(f"toy order must be a small odd prime, got {order}")
        self.q = order
        self.generator = 1

    def point_mul(self, k, point):
        self._tick("em")
        return k % self.q * point % self.q

    def point_add(self, a, b):
        return (a + b) % self.q

    def point_neg(self, a):
        return -a % self.q

    def encode_element(self, e):
        return int(e % self.q).to_bytes(self.element_size, "big")

    def decode_element(self, data):
        if len(data) != self.element_size:
            raise DecodeError(f"element must be {self.element_size} bytes, got {len(data)}")
        v = int.from_bytes(data, "big")
        if v >= self.q:
            raise DecodeError("element out of range for toy group")
        return v

    def element_to_plain(self, e):
        return int(e)

    def element_from_plain(self, v):
        if not isinstance(v, int) or not 0 <= v < self.q:
            raise DecodeError(f"bad toy element {v!r}")
        return v


# secp256k1: y^2 = x^3 + 7 over F_p, prime order, cofactor 1
_P = 0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEFFFFFC2F
_N = 0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEBAAEDCE6AF48A03BBFD25E8CD0364141
_GX = 0x79BE667EF9DCBBAC55A06295CE870B07029BFCDB2DCE28D959F2815B16F81798
_GY = 0x483ADA7726A3C4655DA4FBFC0E1108A8FD17B448A68554199C47D08FFB10D4B8
_PZ = mpz(_P)
_INF = (mpz(1), mpz(1), mpz(0))  # Jacobian point at infinity


def _jdouble(pt):
    x1, y1, z1 = pt
    if not z1 or not y1:
        return _INF
    a = x1 * x1 % _PZ
    b = y1 * y1 % _PZ
    c = b * b % _PZ
    d = 2 * ((x1 + b) * (x1 + b) - a - c) % _PZ
    e = 3 * a % _PZ
    x3 = (e * e - 2 * d) % _PZ
    y3 = (e * (d - x3) - 8 * c) % _PZ
    z3 = 2 * y1 * z1 % _PZ
    return (x3, y3, z3)


def _jadd(p1, p2):
    x1, y1, z1 = p1
    x2, y2, z2 = p2
    if not z1:
        return p2
    if not z2:
        return p1
    z1z1 = z1 * z1 % _PZ
    z2z2 = z2 * z2 % _PZ
    u1 = x1 * z2z2 % _PZ
    u2 = x2 * z1z1 % _PZ
    s1 = y1 * z2 * z2z2 % _PZ
    s2 = y2 * z1 * z1z1 % _PZ
    h = (u2 - u1) % _PZ
    r = (s2 - s1) % _PZ
    if not h:
        if not r:
            return _jdouble(p1)
        return _INF
    hh = h * h % _PZ
    hhh = h * hh % _PZ
    v = u1 * hh % _PZ
    x3 = (r * r - hhh - 2 * v) % _PZ
    y3 = (r * (v - x3) - s1 * hhh) % _PZ
    z3 = z1 * z2 * h % _PZ
    return (x3, y3, z3)


def _jaffine(pt):
    x, y, z = pt
    if not z:
        return None
    zi = _gmp_invert(z, _PZ)
    zi2 = zi * zi % _PZ
    return (int(x * zi2 % _PZ), int(y * zi2 * zi % _PZ))


class Secp256k1Group(Group):
    """secp256k1 with compressed 33-byte point encoding.

    Identity encodes as 33 zero bytes.  Decoding rejects off-curve and
    out-of-range inputs; with cofactor 1 every accepted non-identity
    point has prime order q.
    """

    backend_id = BACKEND_SECP256K1
    q = _N
    identity = None
    generator = (_GX, _GY)
    element_size = 33

    def point_mul(self, k, point):
        self._tick("em")
        k %= self.q
        if point is None or k == 0:
            return None
        # Montgomery ladder: one add + one double per bit, fixed 256 bits
        r0 = _INF
        r1 = (mpz(point[0]), mpz(point[1]), mpz(1))
        for i in range(255, -1, -1):
            if (k >> i) & 1:
                r0, r1 = _jadd(r0, r1), _jdouble(r1)
            else:
                r0, r1 = _jdouble(r0), _jadd(r0, r1)
        return _jaffine(r0)

    def point_add(self, a, b):
        if a is None:
            return b
        if b is None:
            return a
        x1, y1 = mpz(a[0]), mpz(a[1])
        x2, y2 = mpz(b[0]), mpz(b[1])
        if x1 == x2:
            if (y1 + y2) % _PZ == 0:
                return None
            if not y1:
                return None
            lam = 3 * x1 * x1 * _gmp_invert(2 * y1, _PZ) % _PZ
        else:
            lam = (y2 - y1) * _gmp_invert(x2 - x1, _PZ) % _PZ
        x3 = (lam * lam - x1 - x2) % _PZ
        y3 = (lam * (x1 - x3) - y1) % _PZ
        return (int(x3), int(y3))

    def point_neg(self, a):
        if a is None:
            return None
        return (a[0], -a[1] % _P)

    def encode_element(self, e):
        if e is None:
            return b"\x00" * self.element_size
        x, y = e
        return bytes([0x02 | (y & 1)]) + int(x).to_bytes(32, "big")

    def decode_element(self, data):
        if len(data) != self.element_size:
            raise DecodeError(f"element must be {self.element_size} bytes, got {len(data)}")
        prefix = data[0]
        if prefix == 0:
            if any(data):
                raise DecodeError("bad identity encoding")
            return None
        if prefix not in (2, 3):
            raise DecodeError(f"bad compression prefix {prefix:#x}")
        x = int.from_bytes(data[1:], "big")
        if x >= _P:
            raise DecodeError("x coordinate out of field range")
        y2 = (mpz(x) ** 3 + 7) % _PZ
        y = pow(y2, (_PZ + 1) // 4, _PZ)
        if y * y % _PZ != y2:
            raise DecodeError("point not on curve")
        y = int(y)
        if (y & 1) != (prefix & 1):
            y = _P - y
        return (x, y)

    def element_to_plain(self, e):
        return self.encode_element(e).hex()

    def element_from_plain(self, v):
        if not isinstance(v, str):
            raise DecodeError(f"bad curve element {v!r}")
        return self.decode_element(bytes.fromhex(v))


def make_group(backend_id, toy_order=13):
    """Instantiate a backend by id; raises UnsupportedParameter on unknown ids."""
    if backend_id == BACKEND_TOY:
        return ToyGroup(toy_order)
    if backend_id == BACKEND_SECP256K1:
        return Secp256k1Group()
    raise UnsupportedParameter(f"unknown group backend {backend_id!r}")
