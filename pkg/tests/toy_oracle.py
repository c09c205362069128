"""Brute-force oracle for the Z_q toy group, independent of the library.

Everything here is plain modular arithmetic on ints: the toy group is the
additive group of integers mod a small prime q with generator 1, so a
"point multiplication" k*E is literally k*E mod q and a "point addition"
is addition mod q.  Hash values are supplied explicitly (the library's
stub-hash tables play the same role), which keeps every quantity
hand-checkable.

Used to derive the frozen expected values in the test suite.  Must not
import the package under test.
"""


def inv_mod(a, q):
    # exhaustive search; fine for toy q
    a %= q
    for b in range(1, q):
        if a * b % q == 1:
            return b
    raise ZeroDivisionError("no inverse for %d mod %d" % (a, q))


def point_mul(k, e, q):
    # repeated addition, the definitional brute-force route
    acc = 0
    for _ in range(k % q):
        acc = (acc + e) % q
    return acc


def extract_partial(x_msk, r, h, q):
    """KGC extraction: R = r*P, d = r + x_msk*h mod q (P = 1)."""
    big_r = point_mul(r, 1, q)
    d = (r + x_msk * h) % q
    return big_r, d


def validate_partial(d, big_r, h, p_pub, q):
    return point_mul(d, 1, q) == (big_r + point_mul(h, p_pub, q)) % q


def combine_public(big_r, h, p_pub, p_elem, q):
    """R + h*P_pub + P_E, the combined public key."""
    return (big_r + point_mul(h, p_pub, q) + p_elem) % q


def lsw_keygen(u, y_b, q):
    big_u = point_mul(u, y_b, q)
    big_x = point_mul(u, 1, q)
    return big_u, big_x


def lsw_encap(a, h, x_a, d_a, q):
    big_q = point_mul(a, 1, q)
    s = a * inv_mod(h * x_a + d_a, q) % q
    return big_q, s


def lsw_decap(big_u, big_q, s, h, h_a, big_r_a, p_a, p_pub, d_b, x_b, q):
    big_x = point_mul(inv_mod(d_b + x_b, q), big_u, q)
    lhs = point_mul(s, (point_mul(h, p_a, q) + big_r_a + point_mul(h_a, p_pub, q)) % q, q)
    ok = lhs == big_q
    return big_x, lhs, ok


def dktuts_keygen(x, a, y_b, q):
    big_u = point_mul(a, 1, q)
    big_x = point_mul(x, y_b, q)
    return big_u, big_x


def dktuts_encap(x, r, x_a, q):
    return x * inv_mod(r + x_a, q) % q


def dktuts_decap(s, r, d_b, x_b, p_a, q):
    t = s * (d_b + x_b) % q
    big_x = point_mul(t, (p_a + point_mul(r, 1, q)) % q, q)
    return t, big_x


def derive_all(q=13):
    """Re-derive the full toy scenario; returns a flat name->value dict."""
    v = {}
    # system: x_msk=3
    v["p_pub"] = point_mul(3, 1, q)
    # sender: r=2, h1(id_a, R_a)=5; receiver: r=7, h1(id_b, R_b)=4
    v["R_a"], v["d_a"] = extract_partial(3, 2, 5, q)
    v["R_b"], v["d_b"] = extract_partial(3, 7, 4, q)
    assert validate_partial(v["d_a"], v["R_a"], 5, v["p_pub"], q)
    assert validate_partial(v["d_b"], v["R_b"], 4, v["p_pub"], q)
    # user secrets: x_a=6, x_b=5
    v["P_a"] = point_mul(6, 1, q)
    v["P_b"] = point_mul(5, 1, q)
    v["Y_b"] = combine_public(v["R_b"], 4, v["p_pub"], v["P_b"], q)
    assert v["Y_b"] == point_mul((v["d_b"] + 5) % q, 1, q)

    # LSW run: u=2, a=3, h2=7
    v["lsw_U"], v["lsw_X"] = lsw_keygen(2, v["Y_b"], q)
    v["lsw_Q"], v["lsw_s"] = lsw_encap(3, 7, 6, v["d_a"], q)
    dx, lhs, ok = lsw_decap(
        v["lsw_U"], v["lsw_Q"], v["lsw_s"], 7, 5, v["R_a"], v["P_a"],
        v["p_pub"], v["d_b"], 5, q)
    assert ok, "LSW verification equation failed"
    v["lsw_decap_X"] = dx
    v["lsw_check_lhs"] = lhs

    # DKTUTS run: x=4, a=2, mac r=3
    v["dk_U"], v["dk_X"] = dktuts_keygen(4, 2, v["Y_b"], q)
    v["dk_XplusU"] = (v["dk_X"] + v["dk_U"]) % q
    v["dk_s"] = dktuts_encap(4, 3, 6, q)
    t, dx2 = dktuts_decap(v["dk_s"], 3, v["d_b"], 5, v["P_a"], q)
    v["dk_t"] = t
    v["dk_decap_X"] = dx2
    assert dx2 == v["dk_X"], "DKTUTS recovered X mismatch"
    return v


if __name__ == "__main__":
    vals = derive_all()
    for name in sorted(vals):
        print(f"{name} = {vals[name]}")
