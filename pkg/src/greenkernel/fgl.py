"""Honda formal group law of height n over GF(p), by exact rational arithmetic.

The construction: the height-n logarithm is

    log(x) = sum_{i >= 0} x^{q^i} / p^i,        q = p^n,

its compositional inverse exp is computed degree by degree, and the group
law is F(x, y) = exp(log x + log y).  Every coefficient of F is p-integral
(asserted), so F reduces mod p; all downstream coproducts are generated
from this reduction.  Its defining property mod p is [p](x) = x^q.

The bivariate evaluation is the hot path, so it runs over scaled integers
(mantissa dict plus a shared power-of-p denominator) rather than Fraction;
a Fraction reference path is kept for cross-checking.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exactkernel import ExactKernelError, TruncPoly, _check_prime


@dataclass(frozen=True)
class HondaParams:
    """Prime p, height n >= 1, total truncation degree trunc (exponents run
    in [0, trunc))."""

    p: int
    n: int
    trunc: int

    def __post_init__(self):
        _check_prime(self.p)
        if self.n < 1:
            raise ExactKernelError("height must be >= 1")
        if self.trunc < 2:
            raise ExactKernelError("truncation degree must be >= 2")

    @property
    def q(self) -> int:
        return self.p ** self.n


@dataclass(frozen=True)
class Fgl:
    """A computed formal group law: F in GF(p)[x, y] with caps (D, D)."""

    params: HondaParams
    F: TruncPoly

    @property
    def p(self) -> int:
        return self.params.p

    @property
    def q(self) -> int:
        return self.params.q


def honda_log(params: HondaParams) -> TruncPoly:
    """The logarithm sum_{q^i < trunc} x^{q^i}/p^i over BigRational."""
    coeffs = {}
    e, i = 1, 0
    while e < params.trunc:
        coeffs[(e,)] = Fraction(1, params.p ** i)
        e *= params.q
        i += 1
    return TruncPoly(("x",), (params.trunc,), coeffs, modulus=None)


def _power_chain_ops(q: int):
    """Binary multiplication chain reaching exponent q from 1; each op is
    (a, b, a+b) meaning series_{a+b} = series_a * series_b."""
    ops = []
    have = {1}

    def build(e):
        if e in have:
            return
        if e % 2 == 0:
            build(e // 2)
            ops.append((e // 2, e // 2, e))
        else:
            build(e - 1)
            ops.append((e - 1, 1, e))
        have.add(e)

    build(q)
    return ops


def honda_exp_coeffs(p: int, q: int, K: int) -> list[Fraction]:
    """Coefficients e_0..e_K of the compositional inverse of the logarithm.

    Degree-by-degree solve of g = u - sum_{i>=1} g^{q^i}/p^i.  The q-powers
    of g are maintained through a binary multiplication chain whose degree-d
    coefficients only involve g-coefficients below d, so one left-to-right
    pass is exact.
    """
    imax, e = 0, q
    while e <= K:
        imax += 1
        e *= q
    ops = _power_chain_ops(q)
    zero = Fraction(0)
    g = [zero] * (K + 1)
    if K >= 1:
        g[1] = Fraction(1)
    # chain[i] holds the series g^{q^i * e} for the chain exponents e
    chain: list[dict[int, list[Fraction]]] = []
    for _ in range(imax):
        lvl: dict[int, list[Fraction]] = {1: [zero] * (K + 1)}
        for (_, _, c) in ops:
            lvl[c] = [zero] * (K + 1)
        chain.append(lvl)
    if imax:
        chain[0][1] = g
    for d in range(2, K + 1):
        for i in range(imax):
            lvl = chain[i]
            if i > 0:
                lvl[1] = chain[i - 1][q]
            for (a, b, c) in ops:
                ma, mb = lvl[a], lvl[b]
                tot = zero
                for t in range(1, d):
                    ca = ma[t]
                    if ca:
                        cb = mb[d - t]
                        if cb:
                            tot += ca * cb
                lvl[c][d] = tot
        val = zero
        pe, ee = p, q
        for i in range(imax):
            if ee <= d:
                val += chain[i][q][d] / pe
            pe *= p
            ee *= q
        g[d] = -val
    return g


def _fgl_rational_reference(params: HondaParams) -> TruncPoly:
    """Fraction-arithmetic evaluation of exp(log x + log y); slow, used for
    cross-checks at small truncation."""
    D = params.trunc
    K = 2 * D - 2
    exp = honda_exp_coeffs(params.p, params.q, K)
    caps = (D, D)
    log = honda_log(params)
    w = TruncPoly(("x", "y"), caps, {}, None)
    for (e,), c in log.coeffs.items():
        w = w + TruncPoly(("x", "y"), caps, {(e, 0): c, (0, e): c}, None)
    F = TruncPoly.zero(("x", "y"), caps, None)
    wp = TruncPoly.const(("x", "y"), caps, 1, None)
    for k in range(1, K + 1):
        wp = wp * w
        if wp.is_zero():
            break
        if exp[k]:
            F = F + wp.scale(exp[k])
    return F


def _fgl_scaled(params: HondaParams) -> TruncPoly:
    """Scaled-integer Horner evaluation of exp(log x + log y).

    Intermediates are dicts {i*D+j: mantissa} with one shared denominator
    exponent; no gcd is ever taken, only exact strips of powers of p.
    """
    p, q, D = params.p, params.q, params.trunc
    K = 2 * D - 2
    exp = honda_exp_coeffs(p, q, K)
    ge = 0
    for c in exp:
        if c:
            den, e = c.denominator, 0
            while den > 1:
                den //= p
                e += 1
            ge = max(ge, e)
    gm = [int(c * p ** ge) for c in exp]

    ew = 0
    terms = []
    e, i = 1, 0
    while e < D:
        terms.append((e, i))
        ew = max(ew, i)
        e *= q
        i += 1
    witems = []
    for e_, i_ in terms:
        witems.append((e_ * D, p ** (ew - i_)))
        witems.append((e_, p ** (ew - i_)))

    def mulw(acc: dict) -> dict:
        out: dict = {}
        get = out.get
        for key, c in acc.items():
            i1 = key // D
            j1 = key - i1 * D
            for wk, wc in witems:
                i2 = wk // D
                ii = i1 + i2
                if ii >= D:
                    continue
                jj = j1 + (wk - i2 * D)
                if jj >= D:
                    continue
                nk = ii * D + jj
                v = get(nk)
                out[nk] = c * wc if v is None else v + c * wc
        return out

    acc = {0: gm[K]}
    eacc = ge
    for k in range(K - 1, 0, -1):
        acc = mulw(acc)
        eacc += ew
        vmin = eacc
        for c in acc.values():
            if c:
                v = 0
                while v < vmin and c % p == 0:
                    c //= p
                    v += 1
                if v < vmin:
                    vmin = v
                if vmin == 0:
                    break
        if vmin:
            pv = p ** vmin
            acc = {kk: c // pv for kk, c in acc.items() if c}
            eacc -= vmin
        else:
            acc = {kk: c for kk, c in acc.items() if c}
        ck = gm[k]
        if ck:
            if eacc >= ge:
                acc[0] = acc.get(0, 0) + ck * p ** (eacc - ge)
            else:
                f = p ** (ge - eacc)
                acc = {kk: c * f for kk, c in acc.items()}
                eacc = ge
                acc[0] = acc.get(0, 0) + ck
    acc = mulw(acc)
    eacc += ew

    scale = p ** eacc
    coeffs = {}
    for kk, c in acc.items():
        if not c:
            continue
        if c % scale:
            raise ExactKernelError(
                "internal consistency: non p-integral FGL coefficient at exponent %r"
                % ((kk // D, kk % D),)
            )
        coeffs[(kk // D, kk % D)] = c // scale
    return TruncPoly(("x", "y"), (D, D), coeffs, None)


_fgl_cache: dict[tuple[int, int], Fgl] = {}
_fgl_lock = threading.Lock()


def honda_fgl(params: HondaParams) -> Fgl:
    """The Honda FGL over GF(p) at the requested truncation.

    Requires trunc >= q so the level-1 reduction is faithful.  Results are
    cached per (p, n) at the largest truncation computed so far; smaller
    requests are served by re-truncation.
    """
    if params.trunc < params.q:
        raise ExactKernelError("truncation %d below q = %d" % (params.trunc, params.q))
    key = (params.p, params.n)
    with _fgl_lock:
        hit = _fgl_cache.get(key)
        if hit is not None and hit.params.trunc >= params.trunc:
            if hit.params.trunc == params.trunc:
                return hit
            D = params.trunc
            coeffs = {e: c for e, c in hit.F.coeffs.items() if e[0] < D and e[1] < D}
            return Fgl(params, TruncPoly(("x", "y"), (D, D), coeffs, params.p))
        Fq = _fgl_scaled(params)
        F = Fq.reduce_mod(params.p)
        out = Fgl(params, F)
        _fgl_cache[key] = out
        return out


def _uni_to_vec(f: TruncPoly, cap: int) -> "np.ndarray":
    v = np.zeros(cap, dtype=np.int64)
    for (e,), c in f.coeffs.items():
        if e < cap:
            v[e] = c
    return v


def _vec_to_uni(v, cap: int, p: int) -> TruncPoly:
    return TruncPoly(("x",), (cap,), {(e,): int(c) for e, c in enumerate(v) if c}, p)


def _conv(a, b, cap: int, p: int):
    """Truncated product of univariate coefficient vectors (exact in int64:
    entries < p^2 * cap stay far below 2^63)."""
    return np.convolve(a, b)[:cap] % p


def _eval_bivariate(fgl: Fgl, avec, bvec, cap: int):
    """F(a(x), b(x)) as a coefficient vector of length cap."""
    p = fgl.p
    by_i: dict[int, list[tuple[int, int]]] = {}
    for (i, j), c in fgl.F.coeffs.items():
        by_i.setdefault(i, []).append((j, c))
    max_i = max(by_i, default=0)
    max_j = max((j for terms in by_i.values() for j, _ in terms), default=0)

    def powers(vec, top):
        pw = [np.zeros(cap, dtype=np.int64)]
        pw[0][0] = 1
        cur = pw[0]
        for _ in range(top):
            cur = _conv(cur, vec, cap, p)
            pw.append(cur)
            if not cur.any():
                break
        return pw

    apow = powers(avec, max_i)
    bpow = powers(bvec, max_j)
    out = np.zeros(cap, dtype=np.int64)
    for i, terms in by_i.items():
        if i >= len(apow):
            continue
        binner = np.zeros(cap, dtype=np.int64)
        for j, c in terms:
            if j < len(bpow):
                binner = (binner + c * bpow[j]) % p
        if binner.any():
            out = (out + _conv(apow[i], binner, cap, p)) % p
    return out


def formal_sum(fgl: Fgl, a: TruncPoly, b: TruncPoly) -> TruncPoly:
    """F(a, b) for univariate series a, b in the same capped ring."""
    if a.caps != b.caps or a.modulus != b.modulus or a.modulus != fgl.p:
        raise ExactKernelError("formal_sum arguments live in different rings")
    cap = a.caps[0]
    return _vec_to_uni(_eval_bivariate(fgl, _uni_to_vec(a, cap), _uni_to_vec(b, cap), cap), cap, fgl.p)


def formal_inverse(fgl: Fgl, cap: int) -> TruncPoly:
    """The series i(x) with F(x, i(x)) = 0, to exponents < cap.

    Fixed-point iteration i <- i - F(x, i) gains one correct degree per
    step because F(x, y) = x + y + higher terms.
    """
    p = fgl.p
    x = np.zeros(cap, dtype=np.int64)
    if cap > 1:
        x[1] = 1
    inv = (-x) % p
    for _ in range(cap + 1):
        err = _eval_bivariate(fgl, x, inv, cap)
        if not err.any():
            break
        inv = (inv - err) % p
    else:
        raise ExactKernelError("internal consistency: formal inverse did not converge")
    return _vec_to_uni(inv, cap, p)


def m_series(fgl: Fgl, m: int, cap: int) -> TruncPoly:
    """The multiplication-by-m series of the group law, truncated at x^cap.

    [0] = 0, [k+1](x) = F([k](x), x), and [-m](x) = i([m](x)).
    """
    if cap > fgl.params.trunc:
        raise ExactKernelError("cap %d exceeds computed truncation %d" % (cap, fgl.params.trunc))
    p = fgl.p
    x = np.zeros(cap, dtype=np.int64)
    if cap > 1:
        x[1] = 1
    if m == 0:
        return _vec_to_uni(np.zeros(cap, dtype=np.int64), cap, p)
    series = x.copy()
    for _ in range(abs(m) - 1):
        series = _eval_bivariate(fgl, series, x, cap)
    if m < 0:
        invpoly = formal_inverse(fgl, cap)
        # compose: inv(series(x)) by Horner on powers of series
        out = np.zeros(cap, dtype=np.int64)
        spow = np.zeros(cap, dtype=np.int64)
        spow[0] = 1
        top = max((e for (e,) in invpoly.coeffs), default=0)
        pw = [spow]
        cur = spow
        for _ in range(top):
            cur = _conv(cur, series, cap, p)
            pw.append(cur)
        for (e,), c in invpoly.coeffs.items():
            out = (out + c * pw[e]) % p
        series = out
    return _vec_to_uni(series, cap, p)
