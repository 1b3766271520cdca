"""Linear codes from idempotents: rank, exact and certified distances, bounds."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Tuple

import numpy as np

from .ffield import mult_order, odd_prime_i0, v_adic
from .groups import FiniteGroup, Subgroup, quotient_is_cyclic
from .idem import GroupAlgebra, Idempotent, census
DEFAULT_BUDGET = 500_000_000


class CodeError(Exception):
    pass


class ZeroCode(CodeError):
    pass


class QuotientNotCyclic(CodeError):
    pass


# ---------------------------------------------------------------------------
# GF(p) linear algebra


def ref_mod(mat: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    """Row echelon form mod p; returns (nonzero rows, pivot columns)."""
    M = mat.copy() % p
    nrows, ncols = M.shape
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        col = M[r:, c]
        nz = np.nonzero(col)[0]
        if len(nz) == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        M[r] = (M[r] * pow(int(M[r, c]), -1, p)) % p
        rest = M[r + 1 :, c]
        hot = np.nonzero(rest)[0]
        if len(hot):
            M[r + 1 + hot] = (M[r + 1 + hot] - np.outer(rest[hot], M[r])) % p
        pivots.append(c)
        r += 1
    return M[:r], pivots


def rref_mod(mat: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form mod p."""
    R, pivots = ref_mod(mat, p)
    for i in range(len(pivots) - 1, -1, -1):
        c = pivots[i]
        above = R[:i, c]
        hot = np.nonzero(above)[0]
        if len(hot):
            R[hot] = (R[hot] - np.outer(above[hot], R[i])) % p
    return R, pivots


def rank_mod(mat: np.ndarray, p: int) -> int:
    return len(ref_mod(mat, p)[1])


def parity_check(genmat: np.ndarray, pivots: List[int], p: int) -> np.ndarray:
    """Parity-check matrix of the code with RREF generator matrix genmat."""
    k, n = genmat.shape
    free = [c for c in range(n) if c not in set(pivots)]
    H = np.zeros((n - k, n), dtype=np.int64)
    for i, c in enumerate(free):
        H[i, c] = 1
        H[i, pivots] = (-genmat[:, c]) % p
    return H % p


# ---------------------------------------------------------------------------
# codes


@dataclass
class LinearCode:
    q: int
    n: int
    genmat: np.ndarray  # k x n, RREF
    pivots: List[int]
    d_lo: int
    d_hi: int
    witness: Optional[np.ndarray] = None
    provenance: Dict = field(default_factory=dict)

    @property
    def k(self) -> int:
        return self.genmat.shape[0]

    @property
    def params(self) -> Tuple[int, int, Optional[int]]:
        d = self.d_lo if self.d_lo == self.d_hi else None
        return (self.n, self.k, d)

    def __repr__(self):
        d = str(self.d_lo) if self.d_lo == self.d_hi else f"{self.d_lo}..{self.d_hi}"
        return f"[{self.n}, {self.k}, {d}]_{self.q}"


def ideal_to_code(
    alg: GroupAlgebra, e, side: str = "left", provenance: Optional[Dict] = None
) -> LinearCode:
    """Row-reduced span of {g*e : g in G}: the left ideal as a linear code."""
    if isinstance(e, Idempotent):
        e = e.value
    G, q = alg.G, alg.q
    n = G.order
    rows = np.empty((n, n), dtype=np.int64)
    for g in range(n):
        rows[g] = e.vec[G.lmul_table(G.inv(g))]
    genmat, pivots = rref_mod(rows, q)
    prov = dict(provenance or {})
    prov.setdefault("side", side)
    return LinearCode(q, n, genmat, pivots, 1, n, provenance=prov)


def code_from_rows(alg_q: int, rows: np.ndarray, provenance=None) -> LinearCode:
    genmat, pivots = rref_mod(rows, alg_q)
    return LinearCode(alg_q, rows.shape[1], genmat, pivots, 1, rows.shape[1],
                      provenance=dict(provenance or {}))


# ---------------------------------------------------------------------------
# minimum distance


def min_distance(
    code: LinearCode,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    workers: Optional[int] = None,
) -> Tuple[int, int, Optional[np.ndarray]]:
    """Exact distance when affordable, otherwise an honest interval.

    Exact routes: full message-space enumeration (q^k within budget) or the
    MacWilliams transform of the dual weight distribution (q^(n-k) within
    budget).  Fallback: bounded weight-enumeration lower bound plus an
    information-set sampling upper bound.
    """
    if code.k == 0:
        raise ZeroCode("zero-dimensional code has no distance")
    q, n, k = code.q, code.n, code.k
    if workers is None:
        workers = int(os.environ.get("METACODE_THREADS", "1"))
    if q**k <= budget:
        d, witness = _exact_enumeration(code.genmat, q, workers)
        code.d_lo = code.d_hi = d
        code.witness = witness
        return d, d, witness
    if q ** (n - k) <= budget:
        d = _macwilliams_distance(code, budget)
        witness = _find_weight_word(code, d, budget)
        code.d_lo = code.d_hi = d
        code.witness = witness
        return d, d, witness
    lo = _weight_enum_lower(code, budget)
    hi, witness = _information_set_upper(code, budget, seed)
    code.d_lo, code.d_hi, code.witness = lo, hi, witness
    return lo, hi, witness


_BLOCK = 1 << 17
_TABLE_CAP = 1 << 14


def _digits_block(idx: np.ndarray, q: int, width: int, out: np.ndarray) -> np.ndarray:
    rem = idx.copy()
    for pos in range(width - 1, -1, -1):
        out[: len(idx), pos] = rem % q
        rem //= q
    return out[: len(idx)]


def _digits_of(value: int, q: int, width: int) -> np.ndarray:
    out = np.empty(width, dtype=np.int64)
    for pos in range(width - 1, -1, -1):
        out[pos] = value % q
        value //= q
    return out


def _suffix_table(rows: np.ndarray, q: int) -> np.ndarray:
    """All GF(q) combinations of the given rows, reduced mod q (uint8).

    Index digits follow _digits_of: rows[0] is the most significant digit.
    """
    w, n = rows.shape
    table = np.zeros((q**w, n), dtype=np.uint8)
    span = 1
    for pos in range(w - 1, -1, -1):
        row = (rows[pos] % q).astype(np.uint8)
        for digit in range(1, q):
            scaled = (digit * row) % q
            table[digit * span : (digit + 1) * span] = (table[:span] + scaled) % q
        span *= q
    return table


def _enum_range(
    genmat: np.ndarray, q: int, lead: int, start: int, stop: int, w_lo: int
) -> Tuple[int, Optional[np.ndarray]]:
    """Scan messages with first nonzero symbol 1 at `lead`.

    The last w_lo tail digits are tabulated once; [start, stop) ranges over
    the remaining prefix digits.  Pure integer arithmetic throughout.
    """
    k, n = genmat.shape
    width = k - lead - 1
    w_hi = width - w_lo
    base = genmat[lead] % q
    tail = genmat[lead + 1 :] % q
    table = (_suffix_table(tail[w_hi:], q) + base.astype(np.uint8)) % q
    lut = np.array([1 if v % q else 0 for v in range(2 * q)], dtype=np.uint8)
    best_w, best_msg = n + 1, None
    hi_rows = tail[:w_hi]
    buf = np.empty_like(table)
    counts = np.empty(table.shape[0], dtype=np.int32)
    for prefix in range(start, stop):
        if w_hi:
            digits_hi = _digits_of(prefix, q, w_hi)
            pre = (digits_hi @ hi_rows) % q
            np.add(table, pre.astype(np.uint8), out=buf)
        else:
            buf[:] = table
        np.take(lut, buf, out=buf)
        np.sum(buf, axis=1, dtype=np.int32, out=counts)
        i = int(np.argmin(counts))
        if counts[i] < best_w:
            best_w = int(counts[i])
            best_msg = np.zeros(k, dtype=np.int64)
            best_msg[lead] = 1
            if w_hi:
                best_msg[lead + 1 : lead + 1 + w_hi] = _digits_of(prefix, q, w_hi)
            best_msg[lead + 1 + w_hi :] = _digits_of(i, q, w_lo)
    return best_w, best_msg


def _exact_enumeration(genmat: np.ndarray, q: int, workers: int = 1):
    """Minimum weight over one representative per scalar class of messages."""
    k, n = genmat.shape
    tasks = []
    for lead in range(k):
        width = k - lead - 1
        w_lo = 0
        while w_lo < width and q ** (w_lo + 1) <= _TABLE_CAP:
            w_lo += 1
        prefixes = q ** (width - w_lo)
        chunk = max(1, min(prefixes, 1 << 12))
        for start in range(0, prefixes, chunk):
            tasks.append((genmat, q, lead, start, min(start + chunk, prefixes), w_lo))
    if workers > 1 and len(tasks) > 1:
        import multiprocessing as mp

        with mp.Pool(workers) as pool:
            results = pool.starmap(_enum_range, tasks, chunksize=1)
    else:
        results = [_enum_range(*t) for t in tasks]
    best_w, best_msg = n + 1, None
    for w, msg in results:
        if w < best_w:
            best_w, best_msg = w, msg
    witness = (best_msg @ genmat) % q
    assert np.count_nonzero(witness) == best_w
    return best_w, witness


def _dual_weight_distribution(code: LinearCode, budget: int) -> np.ndarray:
    q, n, k = code.q, code.n, code.k
    H = parity_check(code.genmat, code.pivots, q)
    r = H.shape[0]
    assert q**r <= budget
    counts = np.zeros(n + 1, dtype=object)
    counts[0] += 1  # zero dual codeword
    Hf = H.astype(np.float32)
    dig_buf = np.empty((_BLOCK, max(1, r - 1)), dtype=np.float32)
    for lead in range(r):
        width = r - lead - 1
        total = q**width
        base = Hf[lead]
        tail = Hf[lead + 1 :]
        for start in range(0, total, _BLOCK):
            cnt = min(_BLOCK, total - start)
            idx = np.arange(start, start + cnt, dtype=np.int64)
            digits = _digits_block(idx, q, width, dig_buf[:, :width])
            cw = digits @ tail
            cw += base
            np.remainder(cw, q, out=cw)
            w = np.count_nonzero(cw, axis=1)
            for wv, cv in zip(*np.unique(w, return_counts=True)):
                counts[int(wv)] += int(cv) * (q - 1)  # scalar classes
    return counts


def _krawtchouk(n: int, q: int, w: int, j: int) -> int:
    out = 0
    for s in range(min(w, j) + 1):
        out += (-1) ** s * (q - 1) ** (w - s) * math.comb(j, s) * math.comb(n - j, w - s)
    return out


def _macwilliams_distance(code: LinearCode, budget: int) -> int:
    """Exact distance via the MacWilliams transform of the dual distribution."""
    q, n, k = code.q, code.n, code.k
    B = _dual_weight_distribution(code, budget)
    dual_size = q ** (n - k)
    assert sum(int(b) for b in B) == dual_size
    d = None
    total = 0
    for w in range(n + 1):
        acc = 0
        for j in range(n + 1):
            b = int(B[j])
            if b:
                acc += b * _krawtchouk(n, q, w, j)
        assert acc % dual_size == 0, "MacWilliams transform must be integral"
        Aw = acc // dual_size
        assert Aw >= 0
        total += Aw
        if w == 0:
            assert Aw == 1
        elif Aw > 0 and d is None:
            d = w
    assert total == q**k
    assert d is not None
    return d


def _find_weight_word(code: LinearCode, d: int, budget: int) -> Optional[np.ndarray]:
    """A codeword of weight exactly d (support search, then sampling)."""
    q, n = code.q, code.n
    H = parity_check(code.genmat, code.pivots, q)
    if math.comb(n, d) * max(1, (q - 1) ** (d - 1)) <= 2_000_000:
        for support in combinations(range(n), d):
            sub = H[:, support]
            R, pivots = ref_mod(sub.T.copy(), q)
            if len(pivots) < d:
                # nonzero kernel vector supported inside `support`
                word = _kernel_vector(sub, q)
                if word is None:
                    continue
                out = np.zeros(n, dtype=np.int64)
                out[list(support)] = word
                if np.count_nonzero(out) == d:
                    return out
    for seed in range(8):
        w, word = _information_set_upper(code, budget, seed)
        if w == d:
            return word
    return None


def _kernel_vector(mat: np.ndarray, p: int) -> Optional[np.ndarray]:
    """A nonzero kernel vector of mat (columns = unknowns), or None."""
    R, pivots = rref_mod(mat.copy(), p)
    ncols = mat.shape[1]
    free = [c for c in range(ncols) if c not in set(pivots)]
    if not free:
        return None
    x = np.zeros(ncols, dtype=np.int64)
    x[free[0]] = 1
    for i, c in enumerate(pivots):
        x[c] = (-R[i, free[0]]) % p
    return x


def _weight_enum_lower(code: LinearCode, budget: int) -> int:
    """Largest w+1 such that no nonzero codeword has weight <= w."""
    q, n = code.q, code.n
    H = parity_check(code.genmat, code.pivots, q)
    # w = 1: a zero column of H
    if not H.any(axis=0).all():
        return 1
    lo = 2
    # w = 2: two proportional columns, detected by normalised hashing
    normed = H.copy()
    for c in range(n):
        col = normed[:, c]
        nz = np.nonzero(col)[0]
        if len(nz):
            normed[:, c] = (col * pow(int(col[nz[0]]), -1, q)) % q
    seen = set()
    pair_found = False
    for c in range(n):
        key = normed[:, c].tobytes()
        if key in seen:
            pair_found = True
            break
        seen.add(key)
    if pair_found:
        return 2
    lo = 3
    w = 3
    while math.comb(n, w) * (q - 1) ** (w - 1) <= budget // max(1, n):
        found = False
        for support in combinations(range(n), w):
            sub = H[:, support]
            if rank_mod(sub.T.copy(), q) < w:
                word = _kernel_vector(sub, q)
                if word is not None and np.count_nonzero(word) == w:
                    found = True
                    break
        if found:
            return w
        w += 1
        lo = w
    return lo


def _information_set_upper(code: LinearCode, budget: int, seed: int):
    """Minimum weight found over rows of randomly permuted RREFs."""
    q, n, k = code.q, code.n, code.k
    rng = np.random.default_rng(seed)
    best_w, best = n, None
    trials = max(8, min(64, budget // max(1, k * n * n)))
    for _ in range(trials):
        perm = rng.permutation(n)
        R, _ = rref_mod(code.genmat[:, perm], q)
        back = np.empty_like(perm)
        back[perm] = np.arange(n)
        R = R[:, back]
        weights = np.count_nonzero(R, axis=1)
        i = int(np.argmin(weights))
        if weights[i] < best_w:
            best_w, best = int(weights[i]), R[i].copy()
        # a few sparse random combinations of rows
        for _ in range(16):
            coeffs = rng.integers(0, q, size=k)
            word = (coeffs @ code.genmat) % q
            wgt = int(np.count_nonzero(word))
            if 0 < wgt < best_w:
                best_w, best = wgt, word.copy()
    return best_w, best


# ---------------------------------------------------------------------------
# theorem audits


@dataclass
class TheoremBounds:
    source: str
    dim: int
    d_min_bound: int
    d_max_bound: int
    d_exact: Optional[int] = None
    details: Dict = field(default_factory=dict)

    def contains(self, d: int) -> bool:
        if self.d_exact is not None and d != self.d_exact:
            return False
        return self.d_min_bound <= d <= self.d_max_bound


def theorem21_bounds(
    alg: GroupAlgebra, K: Subgroup, e: Idempotent, check_basis: bool = True
) -> TheoremBounds:
    """Dimension, basis, and 2|K| <= d <= wt(e) for (G, K)-type codes."""
    G, q = alg.G, alg.q
    g0 = quotient_is_cyclic(G, K)
    if g0 is None:
        raise QuotientNotCyclic("G/K is not cyclic")
    t = G.order // K.order
    dim = mult_order(q, t)
    details: Dict = {"index": t}
    if t == 1:
        # K = G: the averaging idempotent spans the repetition-like code
        return TheoremBounds("thm-2.1", 1, G.order, G.order, G.order, details)
    if check_basis:
        rows = np.empty((dim, G.order), dtype=np.int64)
        cur = e.value
        gv = alg.basis(g0)
        for i in range(dim):
            rows[i] = cur.vec
            cur = cur * gv
        details["basis_rank"] = rank_mod(rows, q)
    wt = e.value.weight()
    d_exact = None
    if t % 2 == 1 and t > 1:
        p = min(f for f in range(2, t + 1) if t % f == 0)
        j, tt = 0, t
        while tt % p == 0:
            tt //= p
            j += 1
        phi = p ** (j - 1) * (p - 1)
        if tt == 1 and p % 2 == 1 and dim == phi:
            d_exact = 2 * K.order
    return TheoremBounds("thm-2.1", dim, 2 * K.order, wt, d_exact, details)


def theorem61_params(G, q: int, j1: int, beta: int) -> TheoremBounds:
    """Predicted dimension and distance window for e_{p1^j1,k} <b^beta>^ codes."""
    p1, m = _prime_power(G.N)
    p2, l = _prime_power(G.M)
    assert p1 is not None and p2 is not None, "Eq.(3)-shaped group required"
    o = mult_order(q, p1**j1)
    lam = v_adic(math.gcd(beta, p2**l), p2) if beta % p2**l else l
    qgrp = {pow(q, j, p1**j1) for j in range(o)}
    r = G.r % (p1**j1)
    omega0, t = 1, r
    while t not in qgrp:
        t = (t * r) % (p1**j1)
        omega0 += 1
    lam0 = v_adic(math.gcd(omega0, p2**l), p2) if omega0 % p2**l else l
    dim = o * p2 ** (lam + lam0)
    i01 = odd_prime_i0(q, p1)
    lo = 2 * p1 ** (m - j1) * p2 ** (l - lam)
    hi = (p1**m if j1 <= i01 else p1 ** (m - j1 + i01)) * p2 ** (l - lam)
    return TheoremBounds(
        "thm-6.1", dim, lo, hi, details={"lambda": lam, "lambda0": lam0, "omega0": omega0}
    )


def _prime_power(n: int):
    if n < 2:
        return None, 0
    p = min(f for f in range(2, n + 1) if n % f == 0)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return (p, k) if n == 1 else (None, 0)


# ---------------------------------------------------------------------------
# algebra structure reports


@dataclass
class WedderburnReport:
    q: int
    group_name: str
    components: List[Tuple[int, int, int]]  # (matrix size, field degree, multiplicity)
    total_dim: int

    def multiset(self) -> Tuple[Tuple[int, int, int], ...]:
        return tuple(sorted(self.components))


def wedderburn_report(G: FiniteGroup, q: int) -> WedderburnReport:
    rows = census(G, q)
    tally: Dict[Tuple[int, int], int] = {}
    for r in rows:
        tally[(r.matrix_size, r.field_degree)] = tally.get((r.matrix_size, r.field_degree), 0) + 1
    comps = [(size, deg, mult) for (size, deg), mult in sorted(tally.items())]
    total = sum(r.dim for r in rows)
    assert total == G.order, f"Wedderburn dimension {total} != |G| = {G.order}"
    return WedderburnReport(q, G.name, comps, total)


def algebra_isomorphic(G1: FiniteGroup, G2: FiniteGroup, q: int) -> bool:
    """Componentwise comparison of the two Wedderburn decompositions."""
    return wedderburn_report(G1, q).multiset() == wedderburn_report(G2, q).multiset()


# ---------------------------------------------------------------------------
# generator-matrix serialisation


def emit_genmat(code: LinearCode) -> str:
    """Header `q n k`, then k rows of GF(q) digits (prime fields)."""
    assert code.q < 10, "digit format covers prime fields up to q = 7"
    lines = [f"{code.q} {code.n} {code.k}"]
    for row in code.genmat:
        lines.append("".join(str(int(v)) for v in row))
    return "\n".join(lines) + "\n"


def parse_genmat(text: str) -> LinearCode:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    q, n, k = (int(v) for v in lines[0].split())
    rows = np.array([[int(ch) for ch in ln.strip()] for ln in lines[1 : k + 1]],
                    dtype=np.int64)
    assert rows.shape == (k, n)
    genmat, pivots = rref_mod(rows, q)
    assert genmat.shape[0] == k, "rows of a generator matrix must be independent"
    return LinearCode(q, n, genmat, pivots, 1, n)
