"""Finite fields GF(p^e), root-of-unity extensions, and trace predicates."""

from __future__ import annotations

import math
from typing import Dict, List, Optional, Tuple

import numpy as np


class FieldError(Exception):
    pass


class NonPrimeCharacteristic(FieldError):
    pass


class NotCoprime(FieldError):
    pass


class EvenQ(FieldError):
    pass


class HypothesisViolated(FieldError):
    pass


class FieldTooLarge(FieldError):
    pass


# Largest extension degree we materialise as an explicit field.  Beyond this,
# traces of composite-order roots are assembled from coprime-degree subfields.
DIRECT_DEGREE_CAP = 200


# ---------------------------------------------------------------------------
# elementary number theory


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> Dict[int, int]:
    """Prime factorisation by trial division (inputs here stay desk-sized)."""
    assert n >= 1
    out: Dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def v_adic(n: int, p: int) -> int:
    assert n != 0
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def mult_order(q: int, m: int) -> int:
    """Least o >= 1 with q^o = 1 mod m (lcm over the prime-power parts)."""
    if m < 1:
        raise ValueError(f"modulus must be positive, got {m}")
    if math.gcd(q, m) != 1:
        raise NotCoprime(f"gcd({q}, {m}) != 1")
    if m == 1:
        return 1
    out = 1
    for p, a in factorize(m).items():
        o1 = 1
        t = q % p
        while t != 1:
            t = (t * q) % p
            o1 += 1
        i0 = v_adic(q**o1 - 1, p) if p > 2 or a == 1 else 0
        if p == 2:
            # ord mod 2 is 1; lift through the 2-power tower directly
            o_pa = 1
            t = q % (2**a)
            while t != 1:
                t = (t * q) % (2**a)
                o_pa += 1
        else:
            o_pa = o1 * p ** max(0, a - i0)
        out = out * o_pa // math.gcd(out, o_pa)
    return out


# ---------------------------------------------------------------------------
# polynomials over GF(p): 1-D int64 arrays, low degree first


def _trim(a: np.ndarray) -> np.ndarray:
    nz = np.nonzero(a)[0]
    if len(nz) == 0:
        return a[:1] * 0
    return a[: nz[-1] + 1]


def _pmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return np.convolve(a, b) % p


def _pdivmod(a: np.ndarray, b: np.ndarray, p: int) -> Tuple[np.ndarray, np.ndarray]:
    b = _trim(b)
    db = len(b) - 1
    assert db >= 0 and b[db] != 0
    inv_lead = pow(int(b[db]), p - 2, p)
    r = a.copy() % p
    if len(r) - 1 < db:
        return np.zeros(1, dtype=np.int64), _trim(r)
    quo = np.zeros(len(r) - db, dtype=np.int64)
    for d in range(len(r) - 1, db - 1, -1):
        c = r[d] % p
        if c:
            f = (c * inv_lead) % p
            quo[d - db] = f
            r[d - db : d + 1] = (r[d - db : d + 1] - f * b) % p
    return _trim(quo), _trim(r)


def _pgcd(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    a, b = _trim(a % p), _trim(b % p)
    while len(b) > 1 or b[0] != 0:
        _, r = _pdivmod(a, b, p)
        a, b = b, r
    return a


# ---------------------------------------------------------------------------
# GF(p^e) contexts


BaseElem = Tuple[int, ...]


class FieldCtx:
    """GF(p^e) with the lexicographically least monic irreducible modulus.

    Elements are coefficient tuples over GF(p), low degree first, length e.
    Two contexts with equal (p, e) are bit-identical by construction.
    """

    def __init__(self, p: int, e: int, modulus: Tuple[int, ...]):
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = modulus
        self._mod_low = np.array(modulus[:e], dtype=np.int64)

    def __repr__(self):
        return f"GF({self.q})"

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and (self.p, self.e) == (other.p, other.e)

    def __hash__(self):
        return hash((self.p, self.e))

    # -- elements ----------------------------------------------------------
    def zero(self) -> BaseElem:
        return (0,) * self.e

    def one(self) -> BaseElem:
        return (1,) + (0,) * (self.e - 1)

    def scalar(self, c: int) -> BaseElem:
        return (c % self.p,) + (0,) * (self.e - 1)

    def element_by_counter(self, n: int) -> BaseElem:
        """Counter order matches lex order on coefficient tuples (c0 first)."""
        digits = []
        for _ in range(self.e):
            digits.append(n % self.p)
            n //= self.p
        return tuple(reversed(digits))

    def elements(self):
        for n in range(self.q):
            yield self.element_by_counter(n)

    # -- arithmetic ----------------------------------------------------------
    def add(self, a: BaseElem, b: BaseElem) -> BaseElem:
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a: BaseElem, b: BaseElem) -> BaseElem:
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a: BaseElem) -> BaseElem:
        p = self.p
        return tuple((-x) % p for x in a)

    def smul(self, c: int, a: BaseElem) -> BaseElem:
        p = self.p
        return tuple((c * x) % p for x in a)

    def mul(self, a: BaseElem, b: BaseElem) -> BaseElem:
        p, e = self.p, self.e
        if e == 1:
            return ((a[0] * b[0]) % p,)
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        mod = self.modulus
        for d in range(2 * e - 2, e - 1, -1):
            c = prod[d] % p
            if c:
                for j in range(e):
                    prod[d - e + j] -= c * mod[j]
            prod[d] = 0
        return tuple(v % p for v in prod[:e])

    def pow(self, a: BaseElem, n: int) -> BaseElem:
        result = self.one()
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def inv(self, a: BaseElem) -> BaseElem:
        if all(x == 0 for x in a):
            raise ZeroDivisionError("inverse of 0")
        return self.pow(a, self.q - 2)

    def is_zero(self, a: BaseElem) -> bool:
        return all(x == 0 for x in a)


_FIELD_CACHE: Dict[Tuple[int, int], FieldCtx] = {}


def _prime_irreducible(p: int, e: int) -> Tuple[int, ...]:
    """Lex-least monic irreducible of degree e over GF(p) (tuple, low first).

    Lex order compares the constant coefficient first; candidates with zero
    constant term are divisible by x, so enumeration starts at c0 = 1.
    """
    if e == 1:
        return (0, 1)  # the polynomial x, degree-1 convention for prime fields
    for c0 in range(1, p):
        for rest in range(p ** (e - 1)):
            digits = []
            nn = rest
            for _ in range(e - 1):
                digits.append(nn % p)
                nn //= p
            low = (c0,) + tuple(reversed(digits))
            f = np.array(low + (1,), dtype=np.int64)
            if _poly_is_irreducible(f, p):
                return low + (1,)
    raise FieldError("no irreducible found")  # unreachable


def _poly_is_irreducible(f: np.ndarray, p: int) -> bool:
    """x^(p^k) distinct-degree sieve with early exit on any small factor."""
    d = len(f) - 1
    if d == 1:
        return True
    x = np.array([0, 1], dtype=np.int64)
    h = x.copy()
    for _ in range(d // 2):
        # h <- h^p mod f
        acc = np.array([1], dtype=np.int64)
        base = h
        n = p
        while n:
            if n & 1:
                acc = _pdivmod(_pmul(acc, base, p), f, p)[1]
            base = _pdivmod(_pmul(base, base, p), f, p)[1]
            n >>= 1
        h = acc
        diff = h.copy()
        if len(diff) < 2:
            diff = np.concatenate([diff, np.zeros(2 - len(diff), dtype=np.int64)])
        diff[1] = (diff[1] - 1) % p
        g = _pgcd(diff, f, p)
        if len(g) > 1:
            return False
    return True


def make_field(p: int, e: int = 1) -> FieldCtx:
    if not is_prime(p):
        raise NonPrimeCharacteristic(f"{p} is not prime")
    if e < 1:
        raise ValueError("extension degree must be >= 1")
    key = (p, e)
    ctx = _FIELD_CACHE.get(key)
    if ctx is None:
        ctx = FieldCtx(p, e, _prime_irreducible(p, e))
        _FIELD_CACHE[key] = ctx
    return ctx


# ---------------------------------------------------------------------------
# polynomials over GF(q) via Kronecker-packed int64 arrays
#
# A degree-(rows-1) polynomial over GF(q), q = p^e, is stored as an
# (rows, e) int64 array.  Multiplication packs each base coefficient into a
# width-(2e-1) block so a single np.convolve computes the bivariate product
# without cross-block carries.


class _ExtPoly:
    """Helper arithmetic for polynomials over a FieldCtx base."""

    def __init__(self, base: FieldCtx):
        self.base = base
        self.W = 2 * base.e - 1

    def pack(self, rows: np.ndarray) -> np.ndarray:
        n, e = rows.shape
        if e == 1:
            return rows[:, 0].copy()
        out = np.zeros(n * self.W, dtype=np.int64)
        for s in range(e):
            out[s :: self.W][:n] = rows[:, s]
        return out

    def unpack(self, flat: np.ndarray, nrows: int) -> np.ndarray:
        e = self.base.e
        if e == 1:
            out = np.zeros((nrows, 1), dtype=np.int64)
            k = min(len(flat), nrows)
            out[:k, 0] = flat[:k]
            return out
        out = np.zeros((nrows, self.W), dtype=np.int64)
        total = nrows * self.W
        buf = np.zeros(total, dtype=np.int64)
        k = min(len(flat), total)
        buf[:k] = flat[:k]
        return buf.reshape(nrows, self.W)

    def reduce_x(self, rows: np.ndarray) -> np.ndarray:
        """Reduce every row modulo the base modulus; return (n, e) array."""
        p, e = self.base.p, self.base.e
        if e == 1:
            return rows.reshape(len(rows), 1) % p
        rows = rows % p
        mod_low = self.base._mod_low
        for col in range(rows.shape[1] - 1, e - 1, -1):
            c = rows[:, col]
            rows[:, col - e : col] = (rows[:, col - e : col] - c[:, None] * mod_low) % p
            rows[:, col] = 0
        return rows[:, :e] % p

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Plain product of (na, e) x (nb, e) -> (na+nb-1, e), x-reduced."""
        flat = np.convolve(self.pack(a), self.pack(b))
        rows = self.unpack(flat, a.shape[0] + b.shape[0] - 1)
        return self.reduce_x(rows)

    def mulmod(self, a: np.ndarray, b: np.ndarray, f: np.ndarray) -> np.ndarray:
        """Product modulo the monic (deg, e)-row polynomial f."""
        return self.rem(self.mul(a, b), f)

    def rem(self, rows: np.ndarray, f: np.ndarray) -> np.ndarray:
        """rows mod f where f is monic of degree d stored as (d+1, e)."""
        base = self.base
        p = base.p
        d = f.shape[0] - 1
        rows = rows % p
        if rows.shape[0] <= d:
            out = np.zeros((d, base.e), dtype=np.int64)
            out[: rows.shape[0]] = rows
            return out
        low = f[:d]
        low_flat = self.pack(low)
        for top in range(rows.shape[0] - 1, d - 1, -1):
            c = rows[top]
            if c.any():
                contrib = np.convolve(low_flat, c) if base.e > 1 else low_flat * c[0]
                block = self.unpack(contrib, d)
                block = self.reduce_x(block)
                rows[top - d : top] = (rows[top - d : top] - block) % p
            rows[top] = 0
        return rows[:d] % p

    def powmod(self, a: np.ndarray, n: int, f: np.ndarray) -> np.ndarray:
        d = f.shape[0] - 1
        result = np.zeros((d, self.base.e), dtype=np.int64)
        result[0] = np.array(self.base.one(), dtype=np.int64)
        base_pow = self.rem(a.copy(), f)
        while n:
            if n & 1:
                result = self.mulmod(result, base_pow, f)
            base_pow = self.mulmod(base_pow, base_pow, f)
            n >>= 1
        return result

    def gcd_is_trivial(self, a: np.ndarray, b: np.ndarray) -> bool:
        """True iff gcd(a, b) over GF(q)[y] is a nonzero constant."""
        base = self.base

        def degree(r):
            for i in range(r.shape[0] - 1, -1, -1):
                if r[i].any():
                    return i
            return -1

        A, B = a % base.p, b % base.p
        da, db = degree(A), degree(B)
        if da < db:
            A, B, da, db = B, A, db, da
        while db > 0:
            inv_lead = np.array(base.inv(tuple(int(v) for v in B[db])), dtype=np.int64)
            R = A.copy()
            dr = da
            while dr >= db:
                c = R[dr]
                if c.any():
                    fac = self.reduce_x(
                        self.unpack(
                            np.convolve(self.pack(c.reshape(1, -1)), inv_lead)
                            if base.e > 1
                            else c * inv_lead,
                            1,
                        )
                    )[0]
                    shifted = np.zeros_like(R)
                    prod = self.mul(B[: db + 1], fac.reshape(1, -1))
                    shifted[dr - db : dr - db + prod.shape[0]] = prod
                    R = (R - shifted) % base.p
                dr = degree(R)
            A, B = B, R
            da, db = degree(A), degree(B)
        return db == 0  # gcd is a nonzero constant


def _ext_irreducible(base: FieldCtx, d: int) -> np.ndarray:
    """Lex-least monic irreducible of degree d over GF(q), as (d+1, e) rows."""
    if d == 1:
        f = np.zeros((2, base.e), dtype=np.int64)
        f[1] = np.array(base.one(), dtype=np.int64)
        return f
    arith = _ExtPoly(base)
    q = base.q
    y = np.zeros((2, base.e), dtype=np.int64)
    y[1] = np.array(base.one(), dtype=np.int64)
    # zero constant term means a factor of y, so lex enumeration starts c0 = 1
    for c0 in range(1, q):
        for rest in range(q ** (d - 1)):
            digits = [c0]
            nn = rest
            low = []
            for _ in range(d - 1):
                low.append(nn % q)
                nn //= q
            digits.extend(reversed(low))
            f = np.zeros((d + 1, base.e), dtype=np.int64)
            for i, dig in enumerate(digits):
                f[i] = np.array(base.element_by_counter(dig), dtype=np.int64)
            f[d] = np.array(base.one(), dtype=np.int64)
            h = y.copy()[:d] if d > 1 else y.copy()[:1]
            ok = True
            for _ in range(d // 2):
                h = arith.powmod(h, q, f)
                diff = h.copy()
                diff[1] = (diff[1] - y[1]) % base.p
                if not arith.gcd_is_trivial(diff, f):
                    ok = False
                    break
            if ok:
                return f
    raise FieldError("no irreducible found")  # unreachable


# ---------------------------------------------------------------------------
# extension contexts carrying a root of unity


ExtElem = Tuple[BaseElem, ...]


class ExtFieldCtx:
    """GF(q^o) over a FieldCtx base, with xi a fixed element of order m.

    o is the multiplicative order of q modulo m, so GF(q^o) is the least
    extension containing an m-th root of unity.
    """

    def __init__(self, base: FieldCtx, m: int, o: int, modulus: np.ndarray):
        self.base = base
        self.m = m
        self.o = o
        self.q = base.q
        self._f = modulus  # (o+1, e) rows, monic
        self._arith = _ExtPoly(base)
        self.order = base.q**o
        self.xi: ExtElem = self._find_xi()
        self.modulus: Tuple[ExtElem, ...] = tuple(
            tuple(int(v) for v in row) for row in modulus
        )

    def __repr__(self):
        return f"GF({self.base.q}^{self.o}) with xi_{self.m}"

    # -- element plumbing ----------------------------------------------------
    def _rows(self, x: ExtElem) -> np.ndarray:
        return np.array(x, dtype=np.int64).reshape(self.o, self.base.e)

    def _elem(self, rows: np.ndarray) -> ExtElem:
        return tuple(tuple(int(v) for v in row) for row in rows)

    def zero(self) -> ExtElem:
        return self._elem(np.zeros((self.o, self.base.e), dtype=np.int64))

    def one(self) -> ExtElem:
        rows = np.zeros((self.o, self.base.e), dtype=np.int64)
        rows[0] = np.array(self.base.one(), dtype=np.int64)
        return self._elem(rows)

    def embed(self, c: BaseElem) -> ExtElem:
        rows = np.zeros((self.o, self.base.e), dtype=np.int64)
        rows[0] = np.array(c, dtype=np.int64)
        return self._elem(rows)

    def add(self, a: ExtElem, b: ExtElem) -> ExtElem:
        return self._elem((self._rows(a) + self._rows(b)) % self.base.p)

    def sub(self, a: ExtElem, b: ExtElem) -> ExtElem:
        return self._elem((self._rows(a) - self._rows(b)) % self.base.p)

    def mul(self, a: ExtElem, b: ExtElem) -> ExtElem:
        return self._elem(self._arith.mulmod(self._rows(a), self._rows(b), self._f))

    def pow(self, a: ExtElem, n: int) -> ExtElem:
        return self._elem(self._arith.powmod(self._rows(a), n, self._f))

    def is_zero(self, a: ExtElem) -> bool:
        return not self._rows(a).any()

    def is_scalar(self, a: ExtElem) -> bool:
        return not self._rows(a)[1:].any()

    def as_base(self, a: ExtElem) -> BaseElem:
        rows = self._rows(a)
        assert not rows[1:].any(), "element does not lie in the base field"
        return tuple(int(v) for v in rows[0])

    # -- xi construction -----------------------------------------------------
    def _find_xi(self) -> ExtElem:
        m = self.m
        if m == 1:
            return self.one()
        s = (self.order - 1) // m
        mf = factorize(m)
        for n in range(1, min(self.order, 1 << 20)):
            w_rows = np.zeros((self.o, self.base.e), dtype=np.int64)
            counter = n
            # counter order mirrors the base-field lex rule across rows
            digits = []
            for _ in range(self.o):
                digits.append(counter % self.q)
                counter //= self.q
            digits.reverse()
            for i, dig in enumerate(digits):
                w_rows[i] = np.array(self.base.element_by_counter(dig), dtype=np.int64)
            y = self._arith.powmod(w_rows, s, self._f)
            cand = self._elem(y)
            if self.is_zero(cand):
                continue
            if self._has_exact_order(cand, m, mf):
                return cand
        raise FieldError(f"no element of order {m} found")  # unreachable

    def _has_exact_order(self, x: ExtElem, m: int, mf: Dict[int, int]) -> bool:
        if not self.is_one(self.pow(x, m)):
            return False
        for ell in mf:
            if self.is_one(self.pow(x, m // ell)):
                return False
        return True

    def is_one(self, a: ExtElem) -> bool:
        rows = self._rows(a)
        if rows[1:].any():
            return False
        return tuple(int(v) for v in rows[0]) == self.base.one()


_EXT_CACHE: Dict[Tuple[int, int, int], ExtFieldCtx] = {}
_EXT_MOD_CACHE: Dict[Tuple[int, int, int], np.ndarray] = {}


def extension_for_root(ctx: FieldCtx, m: int) -> ExtFieldCtx:
    """GF(q^o) with o = ord_m(q), carrying a fixed primitive m-th root xi."""
    if math.gcd(ctx.q, m) != 1:
        raise NotCoprime(f"gcd(q={ctx.q}, m={m}) != 1")
    key = (ctx.p, ctx.e, m)
    ext = _EXT_CACHE.get(key)
    if ext is not None:
        return ext
    o = mult_order(ctx.q, m)
    mod_key = (ctx.p, ctx.e, o)
    modulus = _EXT_MOD_CACHE.get(mod_key)
    if modulus is None:
        modulus = _ext_irreducible(ctx, o)
        _EXT_MOD_CACHE[mod_key] = modulus
    ext = ExtFieldCtx(ctx, m, o, modulus)
    _EXT_CACHE[key] = ext
    return ext


def rel_trace(ext: ExtFieldCtx, x: ExtElem) -> BaseElem:
    """tr_{GF(q^o)/GF(q)}(x) = sum of x^(q^j), j < o; lands in GF(q)."""
    acc = x
    t = x
    for _ in range(ext.o - 1):
        t = ext.pow(t, ext.q)
        acc = ext.add(acc, t)
    return ext.as_base(acc)


def primitive_element(ext: ExtFieldCtx) -> ExtElem:
    """Least element of full multiplicative order (small fields only)."""
    n = ext.order - 1
    if n >= 1 << 48:
        raise FieldTooLarge("q^o - 1 too large to certify a primitive element")
    nf = factorize(n)
    for counter in range(1, ext.order):
        digits = []
        c = counter
        for _ in range(ext.o):
            digits.append(c % ext.q)
            c //= ext.q
        digits.reverse()
        rows = np.zeros((ext.o, ext.base.e), dtype=np.int64)
        for i, dig in enumerate(digits):
            rows[i] = np.array(ext.base.element_by_counter(dig), dtype=np.int64)
        cand = ext._elem(rows)
        if ext.is_zero(cand):
            continue
        if ext._has_exact_order(cand, n, nf):
            return cand
    raise FieldError("no primitive element found")  # unreachable


# ---------------------------------------------------------------------------
# trace tables for roots of unity
#
# trace_table(ctx, m)[t] = tr(xi_m^t) as a GF(q) coefficient tuple.  When the
# required extension degree exceeds DIRECT_DEGREE_CAP the table is assembled
# from a coprime split m = m1*m2 with gcd(o_m1(q), o_m2(q)) = 1, where the
# trace factors as a product of subfield traces.

_TRACE_CACHE: Dict[Tuple[int, int, int, int], List[BaseElem]] = {}


def trace_table(ctx: FieldCtx, m: int, relabel: int = 1) -> List[BaseElem]:
    if math.gcd(ctx.q, m) != 1:
        raise NotCoprime(f"gcd(q={ctx.q}, m={m}) != 1")
    relabel %= m if m > 1 else 1
    if m > 1 and math.gcd(relabel, m) != 1:
        raise ValueError("relabel exponent must be a unit mod m")
    key = (ctx.p, ctx.e, m, relabel)
    table = _TRACE_CACHE.get(key)
    if table is not None:
        return table
    o = mult_order(ctx.q, m)
    if o <= DIRECT_DEGREE_CAP:
        table = _trace_table_direct(ctx, m, relabel)
    else:
        table = _trace_table_split(ctx, m, relabel)
    _TRACE_CACHE[key] = table
    return table


def _trace_table_direct(ctx: FieldCtx, m: int, relabel: int) -> List[BaseElem]:
    ext = extension_for_root(ctx, m)
    xi = ext.pow(ext.xi, relabel) if relabel != 1 else ext.xi
    powers = [ext.one()]
    for _ in range(1, m):
        powers.append(ext.mul(powers[-1], xi))
    o = ext.o
    table: List[Optional[BaseElem]] = [None] * m
    seen = [False] * m
    for t0 in range(m):
        if seen[t0]:
            continue
        orbit = []
        t = t0
        while not seen[t]:
            seen[t] = True
            orbit.append(t)
            t = (t * ctx.q) % m
        acc = powers[orbit[0]]
        for s in orbit[1:]:
            acc = ext.add(acc, powers[s])
        mult = (o // len(orbit)) % ctx.p
        value = ctx.smul(mult, ext.as_base(acc))
        for s in orbit:
            table[s] = value
    return table  # type: ignore[return-value]


def _coprime_split(q: int, m: int) -> Optional[Tuple[int, int]]:
    """Split m = m1*m2, coprime, with coprime trace degrees, if possible."""
    parts = [p**a for p, a in factorize(m).items()]
    if len(parts) < 2:
        return None
    for mask in range(1, 1 << (len(parts) - 1)):
        m1 = 1
        for i, pk in enumerate(parts):
            if mask >> i & 1:
                m1 *= pk
        m2 = m // m1
        o1, o2 = mult_order(q, m1), mult_order(q, m2)
        if math.gcd(o1, o2) == 1:
            return m1, m2
    return None


def _trace_table_split(ctx: FieldCtx, m: int, relabel: int) -> List[BaseElem]:
    split = _coprime_split(ctx.q, m)
    if split is None:
        raise FieldTooLarge(
            f"trace table for m={m} needs degree {mult_order(ctx.q, m)} over GF({ctx.q})"
        )
    m1, m2 = split
    t1 = trace_table(ctx, m1, relabel % m1 if m1 > 1 else 0)
    t2 = trace_table(ctx, m2, relabel % m2 if m2 > 1 else 0)
    return [ctx.mul(t1[t % m1], t2[t % m2]) for t in range(m)]


def root_trace(ctx: FieldCtx, m: int, k: int, relabel: int = 1) -> BaseElem:
    """tr(xi_m^k) over GF(q), via the cached table."""
    return trace_table(ctx, m, relabel)[k % m]


# ---------------------------------------------------------------------------
# trace-vanishing predicates
#
# The q-orbit sum S_k = sum_j xi_M^(k q^j) vanishes for EVERY unit k exactly
# when <q> mod M contains the full kernel of U(M) -> U(M/p) for some prime p
# with p^2 | M (the kernel then has order p and each orbit fibre is a full
# geometric sum of p-th roots).  Equivalently: o_M(q) = p * o_{M/p}(q).
# Outside that regime the sum is a Gauss period whose vanishing genuinely
# depends on k, so the predicates resolve those cells by an exact trace.


def uniform_trace_vanishes(q: int, M: int) -> bool:
    """The structural all-k vanishing criterion for the q-orbit sum mod M."""
    if math.gcd(q, M) != 1:
        raise NotCoprime(f"gcd({q}, {M}) != 1")
    o = mult_order(q, M)
    for p in factorize(M):
        if M % (p * p) == 0 and o == p * mult_order(q, M // p):
            return True
    return False


def two_adic_branch(q: int) -> Tuple[int, int, int]:
    """Write odd q = sign + 2^i0 * c with c odd and i0 >= 2."""
    if q % 2 == 0:
        raise EvenQ(f"q={q} must be odd")
    if q < 3:
        raise ValueError("q must be an odd prime power >= 3")
    if q % 4 == 1:
        i0 = v_adic(q - 1, 2)
        return 1, i0, (q - 1) >> i0
    i0 = v_adic(q + 1, 2)
    return -1, i0, (q + 1) >> i0


def trace_vanishes_2power(q: int, i: int) -> bool:
    """Whether tr(xi_{2^i}) = 0 over GF(q), q odd.

    For q = 1 + 2^i0 c the threshold is i > i0; for q = -1 + 2^i0 c it is
    i = 2 or i > i0 + 1.  (The -1 branch threshold is one step later than
    the source lemma prints; the direct-trace sweeps adjudicate.)
    """
    if i < 1:
        raise ValueError("i must be >= 1")
    sign, i0, _ = two_adic_branch(q)
    if sign == 1:
        return i > i0
    return i == 2 or i > i0 + 1


def odd_prime_i0(q: int, p: int) -> int:
    """Largest j with ord_{p^j}(q) = ord_p(q), for an odd prime p."""
    assert p % 2 == 1 and is_prime(p)
    if math.gcd(q, p) != 1:
        raise NotCoprime(f"gcd({q}, {p}) != 1")
    return v_adic(q ** mult_order(q, p) - 1, p)


def two_power_i_star(q: int) -> int:
    """Largest i with tr(xi_{2^i}) != 0 over GF(q) (excluding the i=2 zero)."""
    sign, i0, _ = two_adic_branch(q)
    return i0 if sign == 1 else i0 + 1


def _orbit_sum_is_zero(q: int, M: int, k: int) -> bool:
    """Exact per-k resolution via the trace table (small fields only here)."""
    tab = trace_table(make_field(q) if is_prime(q) else _prime_power_field(q), M)
    return all(v == 0 for v in tab[k % M])


def _prime_power_field(q: int) -> FieldCtx:
    fac = factorize(q)
    assert len(fac) == 1, f"q={q} is not a prime power"
    ((p, e),) = fac.items()
    return make_field(p, e)


def trace_vanishes_two_odd_primes(
    q: int, p1: int, p2: int, j1: int, j2: int, k: int
) -> bool:
    """Vanishing of the q-orbit sum of xi_{p1^j1 p2^j2}^k (two odd primes).

    The structural criterion settles the all-k vanishing cells (which,
    under the p1 | (p2-1) exclusion, are exactly j1 > i0_1 or j2 > i0_2);
    remaining cells are k-dependent Gauss periods resolved exactly.
    """
    if not (is_prime(p1) and is_prime(p2)) or p1 % 2 == 0 or p2 % 2 == 0:
        raise ValueError("p1, p2 must be odd primes")
    if not p1 < p2:
        raise ValueError("need p1 < p2")
    if (p2 - 1) % p1 == 0:
        raise HypothesisViolated(f"{p1} divides {p2}-1; fall back to direct traces")
    n = p1**j1 * p2**j2
    if math.gcd(q, p1 * p2) != 1:
        raise NotCoprime(f"gcd({q}, {p1 * p2}) != 1")
    if math.gcd(k, n) != 1:
        raise ValueError("k must be coprime to p1^j1 p2^j2")
    if j1 < 1 or j2 < 1:
        raise ValueError("j1, j2 must be >= 1")
    if uniform_trace_vanishes(q, n):
        return True
    return _orbit_sum_is_zero(q, n, k)


def trace_vanishes_2p(q: int, p: int, j1: int, j2: int, k: int) -> bool:
    """Vanishing of the q-orbit sum of xi_{2^j1 p^j2}^k (mixed 2*p case)."""
    if not is_prime(p) or p % 2 == 0:
        raise ValueError("p must be an odd prime")
    if q % 2 == 0:
        raise EvenQ(f"q={q} must be odd")
    if math.gcd(q, 2 * p) != 1:
        raise NotCoprime(f"gcd({q}, {2 * p}) != 1")
    if math.gcd(k, 2**j1 * p**j2) != 1:
        raise ValueError("k must be coprime to 2^j1 p^j2")
    if j1 < 1 or j2 < 1:
        raise ValueError("j1, j2 must be >= 1")
    M = 2**j1 * p**j2
    if uniform_trace_vanishes(q, M):
        return True
    return _orbit_sum_is_zero(q, M, k)
