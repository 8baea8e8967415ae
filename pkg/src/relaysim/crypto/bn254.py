"""BN254 (alt_bn128) field towers, curve groups, and the optimal ate pairing.

Pure-Python arithmetic tuned for simulation scale: field elements are ints
(Fp) and nested tuples (Fp2/Fp6/Fp12), points are affine tuples with None
as the identity. G1 is the prime-order curve y^2 = x^3 + 3 over Fp (cofactor
one), G2 the order-r subgroup of the sextic twist over Fp2. Signatures live
in G1, public keys in G2.
"""

from __future__ import annotations

from typing import List, Optional, Tuple

# Curve parameters. p and r are the base-field and group orders generated by
# the BN construction from the seed U.
U = 4965661367192848881
P = 21888242871839275222246405745257275088696311157297823662689037894645226208583
R = 21888242871839275222246405745257275088548364400416034343698204186575808495617
ATE_LOOP_COUNT = 6 * U + 2

Fp2 = Tuple[int, int]
Fp6 = Tuple[Fp2, Fp2, Fp2]
Fp12 = Tuple[Fp6, Fp6]
G1Point = Optional[Tuple[int, int]]
G2Point = Optional[Tuple[Fp2, Fp2]]

B1 = 3  # G1: y^2 = x^3 + 3

# ---------------------------------------------------------------------------
# Fp2 = Fp[i] / (i^2 + 1)

FP2_ZERO: Fp2 = (0, 0)
FP2_ONE: Fp2 = (1, 0)
XI: Fp2 = (9, 1)  # sextic twist constant 9 + i


def fp2_add(a: Fp2, b: Fp2) -> Fp2:
    return ((a[0] + b[0]) % P, (a[1] + b[1]) % P)


def fp2_sub(a: Fp2, b: Fp2) -> Fp2:
    return ((a[0] - b[0]) % P, (a[1] - b[1]) % P)


def fp2_neg(a: Fp2) -> Fp2:
    return (-a[0] % P, -a[1] % P)


def fp2_mul(a: Fp2, b: Fp2) -> Fp2:
    a0, a1 = a
    b0, b1 = b
    t0 = a0 * b0
    t1 = a1 * b1
    t2 = (a0 + a1) * (b0 + b1)
    return ((t0 - t1) % P, (t2 - t0 - t1) % P)


def fp2_sqr(a: Fp2) -> Fp2:
    a0, a1 = a
    # (a0 + a1 i)^2 = (a0+a1)(a0-a1) + 2 a0 a1 i
    return ((a0 + a1) * (a0 - a1) % P, 2 * a0 * a1 % P)


def fp2_scalar(a: Fp2, k: int) -> Fp2:
    return (a[0] * k % P, a[1] * k % P)


def fp2_conj(a: Fp2) -> Fp2:
    return (a[0], -a[1] % P)


def fp2_inv(a: Fp2) -> Fp2:
    a0, a1 = a
    norm = (a0 * a0 + a1 * a1) % P
    inv = pow(norm, -1, P)
    return (a0 * inv % P, -a1 * inv % P)


def fp2_pow(a: Fp2, e: int) -> Fp2:
    result = FP2_ONE
    base = a
    while e:
        if e & 1:
            result = fp2_mul(result, base)
        base = fp2_sqr(base)
        e >>= 1
    return result


def fp2_mul_xi(a: Fp2) -> Fp2:
    # multiply by 9 + i
    a0, a1 = a
    return ((9 * a0 - a1) % P, (9 * a1 + a0) % P)


def fp2_is_square(a: Fp2) -> bool:
    # norm map to Fp: a is a square in Fp2 iff its norm is a square in Fp
    norm = (a[0] * a[0] + a[1] * a[1]) % P
    return norm == 0 or pow(norm, (P - 1) // 2, P) == 1


def fp2_sqrt(a: Fp2) -> Optional[Fp2]:
    """Square root in Fp2 for p = 3 mod 4 (complex method); None if non-square."""
    if a == FP2_ZERO:
        return FP2_ZERO
    a1 = fp2_pow(a, (P - 3) // 4)
    alpha = fp2_mul(fp2_sqr(a1), a)
    x0 = fp2_mul(a1, a)
    if alpha == (P - 1, 0):
        cand = fp2_mul((0, 1), x0)
    else:
        b = fp2_pow(fp2_add(FP2_ONE, alpha), (P - 1) // 2)
        cand = fp2_mul(b, x0)
    if fp2_sqr(cand) == a:
        return cand
    return None


# Twist curve constant: y^2 = x^3 + 3/(9+i).
B2: Fp2 = fp2_mul((3, 0), fp2_inv(XI))

# ---------------------------------------------------------------------------
# Fp6 = Fp2[v] / (v^3 - xi)

FP6_ZERO: Fp6 = (FP2_ZERO, FP2_ZERO, FP2_ZERO)
FP6_ONE: Fp6 = (FP2_ONE, FP2_ZERO, FP2_ZERO)


def fp6_add(a: Fp6, b: Fp6) -> Fp6:
    return (fp2_add(a[0], b[0]), fp2_add(a[1], b[1]), fp2_add(a[2], b[2]))


def fp6_sub(a: Fp6, b: Fp6) -> Fp6:
    return (fp2_sub(a[0], b[0]), fp2_sub(a[1], b[1]), fp2_sub(a[2], b[2]))


def fp6_neg(a: Fp6) -> Fp6:
    return (fp2_neg(a[0]), fp2_neg(a[1]), fp2_neg(a[2]))


def fp6_mul(a: Fp6, b: Fp6) -> Fp6:
    a0, a1, a2 = a
    b0, b1, b2 = b
    t0 = fp2_mul(a0, b0)
    t1 = fp2_mul(a1, b1)
    t2 = fp2_mul(a2, b2)
    c0 = fp2_add(t0, fp2_mul_xi(fp2_sub(fp2_mul(fp2_add(a1, a2), fp2_add(b1, b2)), fp2_add(t1, t2))))
    c1 = fp2_add(fp2_sub(fp2_mul(fp2_add(a0, a1), fp2_add(b0, b1)), fp2_add(t0, t1)), fp2_mul_xi(t2))
    c2 = fp2_add(fp2_sub(fp2_mul(fp2_add(a0, a2), fp2_add(b0, b2)), fp2_add(t0, t2)), t1)
    return (c0, c1, c2)


def fp6_sqr(a: Fp6) -> Fp6:
    return fp6_mul(a, a)


def fp6_scalar(a: Fp6, k: Fp2) -> Fp6:
    return (fp2_mul(a[0], k), fp2_mul(a[1], k), fp2_mul(a[2], k))


def fp6_mul_v(a: Fp6) -> Fp6:
    # multiply by v: (a0, a1, a2) -> (xi*a2, a0, a1)
    return (fp2_mul_xi(a[2]), a[0], a[1])


def fp6_inv(a: Fp6) -> Fp6:
    a0, a1, a2 = a
    c0 = fp2_sub(fp2_sqr(a0), fp2_mul_xi(fp2_mul(a1, a2)))
    c1 = fp2_sub(fp2_mul_xi(fp2_sqr(a2)), fp2_mul(a0, a1))
    c2 = fp2_sub(fp2_sqr(a1), fp2_mul(a0, a2))
    t = fp2_add(fp2_mul_xi(fp2_add(fp2_mul(a2, c1), fp2_mul(a1, c2))), fp2_mul(a0, c0))
    t_inv = fp2_inv(t)
    return (fp2_mul(c0, t_inv), fp2_mul(c1, t_inv), fp2_mul(c2, t_inv))


# ---------------------------------------------------------------------------
# Fp12 = Fp6[w] / (w^2 - v)

FP12_ZERO: Fp12 = (FP6_ZERO, FP6_ZERO)
FP12_ONE: Fp12 = (FP6_ONE, FP6_ZERO)


def fp12_add(a: Fp12, b: Fp12) -> Fp12:
    return (fp6_add(a[0], b[0]), fp6_add(a[1], b[1]))


def fp12_sub(a: Fp12, b: Fp12) -> Fp12:
    return (fp6_sub(a[0], b[0]), fp6_sub(a[1], b[1]))


def fp12_mul(a: Fp12, b: Fp12) -> Fp12:
    a0, a1 = a
    b0, b1 = b
    t0 = fp6_mul(a0, b0)
    t1 = fp6_mul(a1, b1)
    c1 = fp6_sub(fp6_mul(fp6_add(a0, a1), fp6_add(b0, b1)), fp6_add(t0, t1))
    c0 = fp6_add(t0, fp6_mul_v(t1))
    return (c0, c1)


def fp12_sqr(a: Fp12) -> Fp12:
    a0, a1 = a
    t = fp6_mul(a0, a1)
    c0 = fp6_sub(fp6_mul(fp6_add(a0, a1), fp6_add(a0, fp6_mul_v(a1))), fp6_add(t, fp6_mul_v(t)))
    return (c0, fp6_add(t, t))


def fp12_neg(a: Fp12) -> Fp12:
    return (fp6_neg(a[0]), fp6_neg(a[1]))


def fp12_conj(a: Fp12) -> Fp12:
    # conjugation over Fp6 = Frobenius p^6
    return (a[0], fp6_neg(a[1]))


def fp12_inv(a: Fp12) -> Fp12:
    a0, a1 = a
    t = fp6_sub(fp6_sqr(a0), fp6_mul_v(fp6_sqr(a1)))
    t_inv = fp6_inv(t)
    return (fp6_mul(a0, t_inv), fp6_neg(fp6_mul(a1, t_inv)))


def fp12_pow(a: Fp12, e: int) -> Fp12:
    result = FP12_ONE
    base = a
    while e:
        if e & 1:
            result = fp12_mul(result, base)
        base = fp12_sqr(base)
        e >>= 1
    return result


# Frobenius coefficients, derived from xi at import time.
_G_V = fp2_pow(XI, (P - 1) // 3)   # v^p = gamma_v * v
_G_V2 = fp2_sqr(_G_V)              # v^(2p) factor
_G_W = fp2_pow(XI, (P - 1) // 6)   # w^p = gamma_w * w


def fp6_frobenius(a: Fp6) -> Fp6:
    return (fp2_conj(a[0]), fp2_mul(fp2_conj(a[1]), _G_V), fp2_mul(fp2_conj(a[2]), _G_V2))


def fp12_frobenius(a: Fp12) -> Fp12:
    c0 = fp6_frobenius(a[0])
    c1 = fp6_frobenius(a[1])
    return (c0, fp6_scalar(c1, _G_W))


def fp12_frobenius2(a: Fp12) -> Fp12:
    return fp12_frobenius(fp12_frobenius(a))


# ---------------------------------------------------------------------------
# Group arithmetic: affine tuples, Jacobian internals.


def g1_is_on_curve(pt: G1Point) -> bool:
    if pt is None:
        return True
    x, y = pt
    return (y * y - x * x * x - B1) % P == 0


def g1_neg(pt: G1Point) -> G1Point:
    if pt is None:
        return None
    return (pt[0], -pt[1] % P)


def g1_add(a: G1Point, b: G1Point) -> G1Point:
    if a is None:
        return b
    if b is None:
        return a
    x1, y1 = a
    x2, y2 = b
    if x1 == x2:
        if (y1 + y2) % P == 0:
            return None
        lam = 3 * x1 * x1 * pow(2 * y1, -1, P) % P
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, P) % P
    x3 = (lam * lam - x1 - x2) % P
    y3 = (lam * (x1 - x3) - y1) % P
    return (x3, y3)


def g1_double(a: G1Point) -> G1Point:
    return g1_add(a, a)


def _g1_jac_double(X, Y, Z):
    if Y == 0:
        return (0, 1, 0)
    A = X * X % P
    B = Y * Y % P
    C = B * B % P
    D = 2 * ((X + B) * (X + B) - A - C) % P
    E = 3 * A % P
    F = E * E % P
    X3 = (F - 2 * D) % P
    Y3 = (E * (D - X3) - 8 * C) % P
    Z3 = 2 * Y * Z % P
    return (X3, Y3, Z3)


def _g1_jac_add_affine(X1, Y1, Z1, x2, y2):
    # mixed addition, (x2, y2) affine
    if Z1 == 0:
        return (x2, y2, 1)
    Z1Z1 = Z1 * Z1 % P
    U2 = x2 * Z1Z1 % P
    S2 = y2 * Z1 * Z1Z1 % P
    if U2 == X1 and S2 == Y1:
        return _g1_jac_double(X1, Y1, Z1)
    H = (U2 - X1) % P
    if H == 0 and (S2 - Y1) % P != 0:
        return (0, 1, 0)
    HH = H * H % P
    I = 4 * HH % P
    J = H * I % P
    rr = 2 * (S2 - Y1) % P
    V = X1 * I % P
    X3 = (rr * rr - J - 2 * V) % P
    Y3 = (rr * (V - X3) - 2 * Y1 * J) % P
    Z3 = 2 * Z1 * H % P
    return (X3, Y3, Z3)


def _g1_jac_to_affine(X, Y, Z) -> G1Point:
    if Z == 0:
        return None
    zi = pow(Z, -1, P)
    zi2 = zi * zi % P
    return (X * zi2 % P, Y * zi2 % P * zi % P)


def g1_mul(pt: G1Point, k: int) -> G1Point:
    k %= R
    if pt is None or k == 0:
        return None
    x, y = pt
    acc = (0, 1, 0)
    for bit in bin(k)[2:]:
        acc = _g1_jac_double(*acc)
        if bit == "1":
            acc = _g1_jac_add_affine(*acc, x, y)
    return _g1_jac_to_affine(*acc)


def g2_is_on_curve(pt: G2Point) -> bool:
    if pt is None:
        return True
    x, y = pt
    return fp2_sqr(y) == fp2_add(fp2_mul(fp2_sqr(x), x), B2)


def g2_neg(pt: G2Point) -> G2Point:
    if pt is None:
        return None
    return (pt[0], fp2_neg(pt[1]))


def g2_add(a: G2Point, b: G2Point) -> G2Point:
    if a is None:
        return b
    if b is None:
        return a
    x1, y1 = a
    x2, y2 = b
    if x1 == x2:
        if fp2_add(y1, y2) == FP2_ZERO:
            return None
        lam = fp2_mul(fp2_scalar(fp2_sqr(x1), 3), fp2_inv(fp2_scalar(y1, 2)))
    else:
        lam = fp2_mul(fp2_sub(y2, y1), fp2_inv(fp2_sub(x2, x1)))
    x3 = fp2_sub(fp2_sub(fp2_sqr(lam), x1), x2)
    y3 = fp2_sub(fp2_mul(lam, fp2_sub(x1, x3)), y1)
    return (x3, y3)


def g2_double(a: G2Point) -> G2Point:
    return g2_add(a, a)


def g2_mul(pt: G2Point, k: int) -> G2Point:
    k %= R
    if pt is None or k == 0:
        return None
    acc: G2Point = None
    for bit in bin(k)[2:]:
        acc = g2_add(acc, acc)
        if bit == "1":
            acc = g2_add(acc, pt)
    return acc


def g2_subgroup_check(pt: G2Point) -> bool:
    return g2_is_on_curve(pt) and g2_mul(pt, R) is None


# Generators. G2 coordinates are the standard alt_bn128 values.
G1_GEN: G1Point = (1, 2)
G2_GEN: G2Point = (
    (
        10857046999023057135944570762232829481370756359578518086990519993285655852781,
        11559732032986387107991004021392285783925812861821192530917403151452391805634,
    ),
    (
        8495653923123431417604973247489272438418190587263600148770280649306958101930,
        4082367875863433681332203403145435568316851327593401208105741076214120093531,
    ),
)

assert g1_is_on_curve(G1_GEN)
assert g2_is_on_curve(G2_GEN)


class _FixedBaseTable:
    """Doubling table for fast fixed-base scalar multiplication."""

    def __init__(self, base, add, double):
        self._add = add
        self._table = [base]
        for _ in range(R.bit_length()):
            self._table.append(double(self._table[-1]))

    def mul(self, k: int):
        k %= R
        acc = None
        i = 0
        while k:
            if k & 1:
                acc = self._add(acc, self._table[i])
            k >>= 1
            i += 1
        return acc


_G1_TABLE = _FixedBaseTable(G1_GEN, g1_add, g1_double)
_G2_TABLE = _FixedBaseTable(G2_GEN, g2_add, g2_double)


def g1_base_mul(k: int) -> G1Point:
    return _G1_TABLE.mul(k)


def g2_base_mul(k: int) -> G2Point:
    return _G2_TABLE.mul(k)


# ---------------------------------------------------------------------------
# Optimal ate pairing. G2 points are embedded into E(Fp12) through the twist
# (x, y) -> (x w^2, y w^3); the Miller loop runs in projective coordinates
# over Fp12 with the line function evaluated at the G1 point.


def _embed_fp(a: int) -> Fp12:
    return (((a % P, 0), FP2_ZERO, FP2_ZERO), FP6_ZERO)


def fp12_scalar_int(a: Fp12, k: int) -> Fp12:
    (c0, c1, c2), (c3, c4, c5) = a
    return (
        (
            (c0[0] * k % P, c0[1] * k % P),
            (c1[0] * k % P, c1[1] * k % P),
            (c2[0] * k % P, c2[1] * k % P),
        ),
        (
            (c3[0] * k % P, c3[1] * k % P),
            (c4[0] * k % P, c4[1] * k % P),
            (c5[0] * k % P, c5[1] * k % P),
        ),
    )


def _twist(pt: G2Point) -> Tuple[Fp12, Fp12]:
    x, y = pt
    # x * w^2 = x * v ; y * w^3 = (y * v) * w
    xw2: Fp12 = ((FP2_ZERO, x, FP2_ZERO), FP6_ZERO)
    yw3: Fp12 = (FP6_ZERO, (FP2_ZERO, y, FP2_ZERO))
    return (xw2, yw3)


def _line_eval(m_num, m_den, x1, y1, z1, xt, yt):
    # line through (x1:y1:z1) with slope m_num/m_den, evaluated at affine (xt, yt)
    lhs = fp12_mul(m_num, fp12_sub(fp12_scalar_int(z1, xt), x1))
    rhs = fp12_mul(m_den, fp12_sub(fp12_scalar_int(z1, yt), y1))
    return fp12_sub(lhs, rhs)


def _line_tangent(pt, xt, yt):
    x1, y1, z1 = pt
    m_num = fp12_scalar_int(fp12_sqr(x1), 3)
    m_den = fp12_scalar_int(fp12_mul(y1, z1), 2)
    return _line_eval(m_num, m_den, x1, y1, z1, xt, yt)


def _line_chord(p1, q_affine, xt, yt):
    # q_affine has z = 1
    x1, y1, z1 = p1
    x2, y2 = q_affine
    m_num = fp12_sub(fp12_mul(y2, z1), y1)
    m_den = fp12_sub(fp12_mul(x2, z1), x1)
    if m_den == FP12_ZERO:
        if m_num == FP12_ZERO:
            return _line_tangent(p1, xt, yt)
        # vertical line x/z = x1/z1
        return fp12_sub(fp12_scalar_int(z1, xt), x1)
    return _line_eval(m_num, m_den, x1, y1, z1, xt, yt)


def _proj_double(pt):
    x, y, z = pt
    w = fp12_scalar_int(fp12_sqr(x), 3)
    s = fp12_mul(y, z)
    b = fp12_mul(fp12_mul(x, y), s)
    h = fp12_sub(fp12_sqr(w), fp12_scalar_int(b, 8))
    s2 = fp12_sqr(s)
    x3 = fp12_scalar_int(fp12_mul(h, s), 2)
    y3 = fp12_sub(
        fp12_mul(w, fp12_sub(fp12_scalar_int(b, 4), h)),
        fp12_scalar_int(fp12_mul(fp12_sqr(y), s2), 8),
    )
    z3 = fp12_scalar_int(fp12_mul(s, s2), 8)
    return (x3, y3, z3)


def _proj_add_affine(p1, q_affine):
    # add a z=1 point to a projective point
    x1, y1, z1 = p1
    x2, y2 = q_affine
    if z1 == FP12_ZERO:
        return (x2, y2, FP12_ONE)
    u1 = fp12_mul(y2, z1)
    v1 = fp12_mul(x2, z1)
    if v1 == x1:
        if u1 == y1:
            return _proj_double(p1)
        return (FP12_ONE, FP12_ONE, FP12_ZERO)
    u = fp12_sub(u1, y1)
    v = fp12_sub(v1, x1)
    v2_ = fp12_sqr(v)
    v3 = fp12_mul(v2_, v)
    vvx = fp12_mul(v2_, x1)
    a = fp12_sub(fp12_mul(fp12_sqr(u), z1), fp12_add(v3, fp12_scalar_int(vvx, 2)))
    x3 = fp12_mul(v, a)
    y3 = fp12_sub(fp12_mul(u, fp12_sub(vvx, a)), fp12_mul(v3, y1))
    z3 = fp12_mul(v3, z1)
    return (x3, y3, z3)


_ATE_BITS = bin(ATE_LOOP_COUNT)[3:]


def miller_loop(q: G2Point, p: G1Point) -> Fp12:
    if q is None or p is None:
        return FP12_ONE
    qx, qy = _twist(q)
    xt, yt = p[0], p[1]
    rpt = (qx, qy, FP12_ONE)
    f = FP12_ONE
    for bit in _ATE_BITS:
        f = fp12_mul(fp12_sqr(f), _line_tangent(rpt, xt, yt))
        rpt = _proj_double(rpt)
        if bit == "1":
            f = fp12_mul(f, _line_chord(rpt, (qx, qy), xt, yt))
            rpt = _proj_add_affine(rpt, (qx, qy))
    q1 = (fp12_frobenius(qx), fp12_frobenius(qy))
    nq2 = (fp12_frobenius2(qx), fp12_neg(fp12_frobenius2(qy)))
    f = fp12_mul(f, _line_chord(rpt, q1, xt, yt))
    rpt = _proj_add_affine(rpt, q1)
    f = fp12_mul(f, _line_chord(rpt, nq2, xt, yt))
    return f


def final_exponentiation(f: Fp12) -> Fp12:
    # easy part: f^((p^6 - 1)(p^2 + 1))
    t0 = fp12_mul(fp12_conj(f), fp12_inv(f))
    m = fp12_mul(fp12_frobenius2(t0), t0)
    # hard part (standard BN addition chain)
    fp1 = fp12_frobenius(m)
    fp2_ = fp12_frobenius2(m)
    fp3 = fp12_frobenius(fp2_)
    fu = fp12_pow(m, U)
    fu2 = fp12_pow(fu, U)
    fu3 = fp12_pow(fu2, U)
    y0 = fp12_mul(fp12_mul(fp1, fp2_), fp3)
    y1 = fp12_conj(m)
    y2 = fp12_frobenius2(fu2)
    y3 = fp12_conj(fp12_frobenius(fu))
    y4 = fp12_conj(fp12_mul(fu, fp12_frobenius(fu2)))
    y5 = fp12_conj(fu2)
    y6 = fp12_conj(fp12_mul(fu3, fp12_frobenius(fu3)))
    t0 = fp12_mul(fp12_mul(fp12_sqr(y6), y4), y5)
    t1 = fp12_mul(fp12_mul(y3, y5), t0)
    t0 = fp12_mul(t0, y2)
    t1 = fp12_sqr(fp12_mul(fp12_sqr(t1), t0))
    t0 = fp12_mul(t1, y1)
    t1 = fp12_mul(t1, y0)
    t0 = fp12_sqr(t0)
    return fp12_mul(t0, t1)


def pairing(p: G1Point, q: G2Point) -> Fp12:
    """e(p, q) for p in G1, q in G2."""
    return final_exponentiation(miller_loop(q, p))


def pairing_product(pairs: List[Tuple[G1Point, G2Point]]) -> Fp12:
    """Product of pairings, sharing one final exponentiation."""
    f = FP12_ONE
    for p, q in pairs:
        if p is None or q is None:
            continue
        f = fp12_mul(f, miller_loop(q, p))
    return final_exponentiation(f)


def pairing_check(pairs: List[Tuple[G1Point, G2Point]]) -> bool:
    """True iff the product of pairings equals one."""
    return pairing_product(pairs) == FP12_ONE


# ---------------------------------------------------------------------------
# Compressed point encodings (see docs/wire_format.md).
#
# G1: 33 bytes, tag 0x02/0x03 (y parity) + 32-byte big-endian x.
# G2: 65 bytes, tag 0x02/0x03 (parity of y.c0, or y.c1 when y.c0 = 0)
#     + x.c0 + x.c1, each 32 bytes big-endian.
# The identity is a single 0x00 tag padded to full width.

G1_ENC_LEN = 33
G2_ENC_LEN = 65


def _fp2_sign(a: Fp2) -> int:
    return (a[0] & 1) if a[0] != 0 else (a[1] & 1)


def g1_to_bytes(pt: G1Point) -> bytes:
    if pt is None:
        return b"\x00" * G1_ENC_LEN
    x, y = pt
    return bytes([0x02 | (y & 1)]) + x.to_bytes(32, "big")


def g1_from_bytes(data: bytes) -> G1Point:
    if len(data) != G1_ENC_LEN:
        raise ValueError("bad G1 encoding length")
    if data[0] == 0x00:
        if any(data[1:]):
            raise ValueError("bad G1 identity encoding")
        return None
    if data[0] not in (0x02, 0x03):
        raise ValueError("bad G1 tag")
    x = int.from_bytes(data[1:], "big")
    if x >= P:
        raise ValueError("G1 x not reduced")
    y2 = (x * x * x + B1) % P
    y = pow(y2, (P + 1) // 4, P)
    if y * y % P != y2:
        raise ValueError("G1 x not on curve")
    if (y & 1) != (data[0] & 1):
        y = P - y
    return (x, y)


def g2_to_bytes(pt: G2Point) -> bytes:
    if pt is None:
        return b"\x00" * G2_ENC_LEN
    x, y = pt
    return bytes([0x02 | _fp2_sign(y)]) + x[0].to_bytes(32, "big") + x[1].to_bytes(32, "big")


def g2_from_bytes(data: bytes) -> G2Point:
    if len(data) != G2_ENC_LEN:
        raise ValueError("bad G2 encoding length")
    if data[0] == 0x00:
        if any(data[1:]):
            raise ValueError("bad G2 identity encoding")
        return None
    if data[0] not in (0x02, 0x03):
        raise ValueError("bad G2 tag")
    c0 = int.from_bytes(data[1:33], "big")
    c1 = int.from_bytes(data[33:], "big")
    if c0 >= P or c1 >= P:
        raise ValueError("G2 x not reduced")
    x: Fp2 = (c0, c1)
    y = fp2_sqrt(fp2_add(fp2_mul(fp2_sqr(x), x), B2))
    if y is None:
        raise ValueError("G2 x not on curve")
    if _fp2_sign(y) != (data[0] & 1):
        y = fp2_neg(y)
    return (x, y)
