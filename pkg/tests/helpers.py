"""Independent oracles and sweep utilities shared by the test modules."""

from __future__ import annotations

from functools import lru_cache
from typing import List

import numpy as np

from metacode.ffield import (
    FieldCtx,
    extension_for_root,
    factorize,
    make_field,
    mult_order,
    rel_trace,
)

ORACLE_FIELD_CAP = 140


def odd_prime_powers_leq(bound: int) -> List[int]:
    out = []
    for q in range(3, bound + 1, 2):
        f = factorize(q)
        if len(f) == 1:
            out.append(q)
    return out


def base_field_of(q: int) -> FieldCtx:
    ((p, e),) = factorize(q).items()
    return make_field(p, e)


@lru_cache(maxsize=None)
def _ext_for(q: int, m: int):
    return extension_for_root(base_field_of(q), m)


def direct_trace_vanishes(q: int, m: int, k: int) -> bool:
    """The direct rel_trace oracle: tr(xi_m^k) == 0 in GF(q^o)."""
    ext = _ext_for(q, m)
    value = rel_trace(ext, ext.pow(ext.xi, k % m))
    return all(v == 0 for v in value)


def _fold_axis(arr: np.ndarray, p: int, j: int, axis: int, char: int) -> np.ndarray:
    """Reduce exponent-count array modulo the p^j-th cyclotomic polynomial.

    Phi_{p^j}(x) = sum_{t<p} x^(t p^(j-1)), so x^d with d >= (p-1)p^(j-1)
    folds down as x^d = -sum_{t<p-1} x^(d - (p-1-t) p^(j-1)).
    """
    arr = np.swapaxes(arr, 0, axis).copy()
    step = p ** (j - 1)
    phi = (p - 1) * step
    for d in range(arr.shape[0] - 1, phi - 1, -1):
        coef = arr[d].copy()
        if not coef.any():
            continue
        for t in range(p - 1):
            arr[d - phi + t * step] = (arr[d - phi + t * step] - coef) % char
        arr[d] = 0
    return np.swapaxes(arr, 0, axis)


def phi_all_vanish(q: int, m: int) -> bool:
    """Exact check that the q-orbit sum of xi_m^k vanishes for EVERY unit k.

    Works in GF(char)[x] by reducing sum_j x^(q^j mod m) modulo the m-th
    cyclotomic polynomial (componentwise over the prime-power parts of m);
    a zero residue annihilates every primitive m-th root in any embedding.
    """
    ((char, _),) = factorize(q).items()
    fac = sorted(factorize(m).items())
    assert 1 <= len(fac) <= 2, "oracle handles one- and two-prime moduli"
    o = mult_order(q, m)
    exps = []
    t = 1 % m
    for _ in range(o):
        exps.append(t)
        t = (t * q) % m
    if len(fac) == 1:
        (p, j) = fac[0]
        arr = np.zeros((m, 1), dtype=np.int64)
        for e in exps:
            arr[e, 0] += 1
        arr %= char
        arr = _fold_axis(arr, p, j, 0, char)
        return not arr.any()
    (p1, j1), (p2, j2) = fac
    A, B = p1**j1, p2**j2
    arr = np.zeros((A, B), dtype=np.int64)
    for e in exps:
        arr[e % A, e % B] += 1
    arr %= char
    arr = _fold_axis(arr, p1, j1, 0, char)
    arr = _fold_axis(arr, p2, j2, 1, char)
    return not arr.any()


def oracle_vanishes(q: int, m: int, k: int) -> bool:
    """Exact oracle for the vanishing of the q-orbit sum of xi_m^k.

    A zero cyclotomic residue proves vanishing at every primitive root, so
    no field is built for those cells; the remaining (k-dependent) cells
    have small orbit order and are resolved by the direct trace.
    """
    if phi_all_vanish(q, m):
        return True
    o = mult_order(q, m)
    assert o <= ORACLE_FIELD_CAP, (
        f"oracle gap: q={q}, m={m} is k-dependent yet needs degree {o}"
    )
    return direct_trace_vanishes(q, m, k)


def brute_force_min_weight(genmat: np.ndarray, q: int) -> int:
    """Plain full enumeration over all messages (test-scale oracle)."""
    k, n = genmat.shape
    best = n + 1
    for idx in range(1, q**k):
        msg = np.empty(k, dtype=np.int64)
        v = idx
        for pos in range(k - 1, -1, -1):
            msg[pos] = v % q
            v //= q
        w = int(np.count_nonzero((msg @ genmat) % q))
        if w < best:
            best = w
    return best
