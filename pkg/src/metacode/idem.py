"""Cyclotomic orbits and synthesis of primitive central idempotents."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .ffield import (
    is_prime,
    mult_order,
    odd_prime_i0,
    trace_table,
    two_power_i_star,
    make_field,
    NotCoprime,
)
from .groups import FiniteGroup, Subgroup, cyclic_quotient_generator, full_subgroup
from .shoda import ShodaPair, ssp_catalog


class AlgebraError(Exception):
    pass


class NotSemisimple(AlgebraError):
    pass


class RegimeMismatch(AlgebraError):
    pass


class GroupAlgebra:
    """The semisimple group algebra F_q G for prime q coprime to |G|."""

    def __init__(self, G: FiniteGroup, q: int):
        if not is_prime(q):
            raise NotSemisimple(
                f"algebra elements are implemented over prime fields, got q={q}"
            )
        if math.gcd(q, G.order) != 1:
            raise NotSemisimple(f"gcd(q={q}, |G|={G.order}) != 1")
        self.G = G
        self.q = q
        self.field = make_field(q)
        self._coset_ids: Dict[Tuple[int, ...], np.ndarray] = {}

    def __repr__(self):
        return f"F{self.q}[{self.G.name}]"

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, np.zeros(self.G.order, dtype=np.int64))

    def one(self) -> "AlgebraElement":
        vec = np.zeros(self.G.order, dtype=np.int64)
        vec[self.G.identity] = 1
        return AlgebraElement(self, vec)

    def basis(self, g: int, coeff: int = 1) -> "AlgebraElement":
        vec = np.zeros(self.G.order, dtype=np.int64)
        vec[g] = coeff % self.q
        return AlgebraElement(self, vec)

    def element(self, coeffs: Dict[int, int]) -> "AlgebraElement":
        vec = np.zeros(self.G.order, dtype=np.int64)
        for g, c in coeffs.items():
            vec[g] = (vec[g] + c) % self.q
        return AlgebraElement(self, vec)

    def hat(self, S: Subgroup) -> "AlgebraElement":
        """(1/|S|) sum of S; the averaging idempotent S-hat."""
        if len(S.elements) % self.q == 0:
            raise NotCoprime(f"|S| = {len(S.elements)} not invertible mod {self.q}")
        inv = pow(len(S.elements), -1, self.q)
        vec = np.zeros(self.G.order, dtype=np.int64)
        vec[list(S.elements)] = inv
        return AlgebraElement(self, vec, parts=((S, {self.G.identity: 1}),))

    def left_coset_ids(self, S: Subgroup) -> np.ndarray:
        key = S.elements
        ids = self._coset_ids.get(key)
        if ids is None:
            G = self.G
            ids = np.full(G.order, -1, dtype=np.int64)
            members = np.array(S.elements, dtype=np.int64)
            next_id = 0
            for g in G.elements():
                if ids[g] < 0:
                    ids[G.mul_vec(members, np.full(len(members), g))] = next_id
                    next_id += 1
            self._coset_ids[key] = ids
        return ids


Parts = Tuple[Tuple[Subgroup, Dict[int, int]], ...]


class AlgebraElement:
    """Dense coefficient vector over GF(q) indexed by group elements.

    `parts` is optional provenance of the form sum_i hat(K_i) * w_i with
    sparse w_i; it enables the O(parts * |G|) product used by the
    large-scale idempotency checks and is carried only where exact.
    """

    __slots__ = ("alg", "vec", "parts")

    def __init__(self, alg: GroupAlgebra, vec: np.ndarray, parts: Optional[Parts] = None):
        self.alg = alg
        self.vec = vec % alg.q
        self.parts = parts

    # -- basics ---------------------------------------------------------------
    def copy(self) -> "AlgebraElement":
        return AlgebraElement(self.alg, self.vec.copy(), self.parts)

    def support(self) -> np.ndarray:
        return np.nonzero(self.vec)[0]

    def weight(self) -> int:
        return int(np.count_nonzero(self.vec))

    def key(self) -> bytes:
        return self.vec.tobytes()

    def __eq__(self, other) -> bool:
        return isinstance(other, AlgebraElement) and np.array_equal(self.vec, other.vec)

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        G, terms = self.alg.G, []
        for g in self.support()[:8]:
            c = int(self.vec[g])
            terms.append(f"{c}*{G.elem_label(int(g))}" if c != 1 else G.elem_label(int(g)))
        more = "" if self.weight() <= 8 else f" + ... ({self.weight()} terms)"
        return " + ".join(terms) + more if terms else "0"

    # -- linear structure -------------------------------------------------------
    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        parts = None
        if self.parts is not None and other.parts is not None:
            parts = self.parts + other.parts
        return AlgebraElement(self.alg, (self.vec + other.vec) % self.alg.q, parts)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return AlgebraElement(self.alg, (self.vec - other.vec) % self.alg.q)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.alg, (-self.vec) % self.alg.q)

    def scaled(self, c: int) -> "AlgebraElement":
        return AlgebraElement(self.alg, (self.vec * (c % self.alg.q)) % self.alg.q)

    # -- multiplicative structure -----------------------------------------------
    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        assert self.alg is other.alg
        G, q = self.alg.G, self.alg.q
        if self.parts is not None and self.weight() > 4 * len(self.parts) * 8:
            return _mul_structured(self.parts, other)
        out = np.zeros(G.order, dtype=np.int64)
        sa, sb = self.support(), other.support()
        if len(sa) <= len(sb):
            for g in sa:
                tab = G.lmul_table(G.inv(int(g)))
                out = (out + int(self.vec[g]) * other.vec[tab]) % q
        else:
            for h in sb:
                tab = G.rmul_table(G.inv(int(h)))
                out = (out + int(other.vec[h]) * self.vec[tab]) % q
        return AlgebraElement(self.alg, out)

    def conjugate(self, x: int) -> "AlgebraElement":
        """x^-1 * self * x."""
        G = self.alg.G
        xinv = G.inv(x)
        vec = self.vec[G.conj_table(xinv)]
        parts = None
        if self.parts is not None:
            parts = tuple(
                (
                    Subgroup(
                        G,
                        [G.conjugate(s, x) for s in K.elements],
                        gens=tuple(G.conjugate(s, x) for s in (K.gens or ())),
                    ),
                    {G.conjugate(h, x): c for h, c in terms.items()},
                )
                for K, terms in self.parts
            )
        return AlgebraElement(self.alg, vec, parts)

    def is_central(self) -> bool:
        G = self.alg.G
        return all(self.conjugate(g) == self for g in G.generators())

    def is_idempotent(self) -> bool:
        if self.parts is not None:
            return _mul_structured(self.parts, self) == self
        return self * self == self


def _mul_structured(parts: Parts, x: AlgebraElement) -> AlgebraElement:
    """(sum_i hat(K_i) * w_i) * x, exact, in O(sum_i |w_i|) vector passes."""
    alg = x.alg
    G, q = alg.G, alg.q
    out = np.zeros(G.order, dtype=np.int64)
    for K, terms in parts:
        y = np.zeros(G.order, dtype=np.int64)
        for h, c in terms.items():
            if c % q:
                y = (y + c * x.vec[G.lmul_table(G.inv(h))]) % q
        ids = alg.left_coset_ids(K)
        sums = np.bincount(ids, weights=y.astype(np.float64))
        coset_sums = np.rint(sums).astype(np.int64) % q
        inv = pow(len(K.elements), -1, q)
        out = (out + inv * coset_sums[ids]) % q
    return AlgebraElement(alg, out)


# ---------------------------------------------------------------------------
# cyclotomic cosets and the conjugation action on them


@dataclass(frozen=True)
class CyclotomicCoset:
    m: int
    rep: int
    members: Tuple[int, ...]


def cyclotomic_cosets(m: int, q: int) -> List[CyclotomicCoset]:
    """q-cosets of the generators of a cyclic group of order m."""
    if m == 1:
        return [CyclotomicCoset(1, 0, (0,))]
    seen = set()
    out = []
    for k in range(1, m):
        if math.gcd(k, m) != 1 or k in seen:
            continue
        orbit = []
        t = k
        while t not in seen:
            seen.add(t)
            orbit.append(t)
            t = (t * q) % m
        out.append(CyclotomicCoset(m, min(orbit), tuple(sorted(orbit))))
    return out


@dataclass
class OrbitData:
    pair: ShodaPair
    q: int
    m: int
    h0: int
    o: int
    cosets: List[CyclotomicCoset]
    orbits: List[Tuple[int, ...]]  # orbits of coset reps under the * action
    orbit_reps: List[int]
    stab_index: int  # [E : H], equal across orbits
    action_exps: Tuple[int, ...]  # the t with x^-1 h0 x = h0^t mod K, x in N
    omega0: Optional[int]  # least w >= 1 with t_b^w in <q> (cyclic N/H only)


def cosets_and_orbits(G: FiniteGroup, pair: ShodaPair, q: int) -> OrbitData:
    H, K = pair.H, pair.K
    m = pair.index
    h0 = cyclic_quotient_generator(G, H, K)
    if h0 is None:
        raise AlgebraError(f"H/K is not cyclic for {pair.label()}")
    o = mult_order(q, m)

    # label each element of H by its K-coset exponent t (h in K h0^t)
    coset_of: Dict[int, int] = {}
    t_elem = G.identity
    for t in range(m):
        for kk in K.elements:
            coset_of[G.mul(kk, t_elem)] = t
        t_elem = G.mul(t_elem, h0)

    # N = N_G(H) cap N_G(K), vectorised membership test
    all_idx = np.arange(G.order, dtype=np.int64)
    inv_all = G.inv_vec(all_idx)
    mask = np.ones(G.order, dtype=bool)
    h_set = np.zeros(G.order, dtype=bool)
    h_set[list(H.elements)] = True
    k_set = np.zeros(G.order, dtype=bool)
    k_set[list(K.elements)] = True
    for s in H.gens or H.elements:
        conj = G.mul_vec(G.mul_vec(inv_all, np.full(G.order, s)), all_idx)
        mask &= h_set[conj]
    for s in K.gens or K.elements:
        conj = G.mul_vec(G.mul_vec(inv_all, np.full(G.order, s)), all_idx)
        mask &= k_set[conj]
    N_elems = np.nonzero(mask)[0]

    exps = sorted({coset_of[G.conjugate(h0, int(x))] for x in N_elems})
    t_of_x = {int(x): coset_of[G.conjugate(h0, int(x))] for x in N_elems}

    cosets = cyclotomic_cosets(m, q)
    by_rep = {c.rep: c for c in cosets}
    member_rep = {s: c.rep for c in cosets for s in c.members}

    unseen = set(by_rep)
    orbits: List[Tuple[int, ...]] = []
    for rep in sorted(by_rep):
        if rep not in unseen:
            continue
        orbit = set()
        frontier = [rep]
        unseen.discard(rep)
        while frontier:
            r = frontier.pop()
            orbit.add(r)
            for t in exps:
                r2 = member_rep[(r * t) % m] if m > 1 else 0
                if r2 in unseen:
                    unseen.discard(r2)
                    frontier.append(r2)
        orbits.append(tuple(sorted(orbit)))
    orbit_reps = [min(o_) for o_ in orbits]

    # stabiliser index [E:H] from the first orbit (all agree; asserted)
    stab_indices = []
    for rep in orbit_reps:
        members = set(by_rep[rep].members)
        count = sum(1 for x in N_elems if (rep * t_of_x[int(x)]) % m in members)
        assert count % H.order == 0
        stab_indices.append(count // H.order)
    assert len(set(stab_indices)) <= 1, "orbits of one pair must have equal stabilisers"
    sizes = {len(o_) for o_ in orbits}
    assert len(sizes) <= 1, "orbits of one pair must have equal size"

    # omega0: least w with t_b^w in <q> mod m, for cyclic N/H
    omega0 = None
    qgrp = {pow(q, j, m) for j in range(o)} if m > 1 else {0}
    if m > 1:
        H_set = set(H.elements)
        non_H = [int(x) for x in N_elems if int(x) not in H_set]
        if non_H:
            # use the action exponent of a coset generator of N/H if one exists
            Nsub = Subgroup(G, [int(x) for x in N_elems])
            x0 = cyclic_quotient_generator(G, Nsub, pair.H) if _normal_in(G, H, Nsub) else None
            if x0 is not None:
                t0 = t_of_x[int(x0)] if int(x0) in t_of_x else coset_of[G.conjugate(h0, int(x0))]
                w, t = 1, t0 % m
                while t not in qgrp and w <= m:
                    t = (t * t0) % m
                    w += 1
                omega0 = w if t in qgrp else None
        else:
            omega0 = 1
    else:
        omega0 = 1

    return OrbitData(
        pair=pair,
        q=q,
        m=m,
        h0=h0,
        o=o,
        cosets=cosets,
        orbits=orbits,
        orbit_reps=orbit_reps,
        stab_index=stab_indices[0] if stab_indices else 1,
        action_exps=tuple(exps),
        omega0=omega0,
    )


def _normal_in(G: FiniteGroup, H: Subgroup, N: Subgroup) -> bool:
    return all(G.conjugate(s, x) in H for x in N.gens or N.elements for s in H.gens or H.elements)


# ---------------------------------------------------------------------------
# idempotent synthesis


@dataclass
class Idempotent:
    value: AlgebraElement
    pair: Optional[ShodaPair]
    k: int
    kind: str  # "central" | "left"

    def __repr__(self):
        tag = f"{self.pair.label()} k={self.k}" if self.pair else "ad hoc"
        return f"Idempotent[{self.kind}; {tag}; wt={self.value.weight()}]"


def epsilon(alg: GroupAlgebra, pair: ShodaPair, k: int, relabel: int = 1) -> AlgebraElement:
    """The building-block idempotent from one cyclotomic class of H/K."""
    G, q = alg.G, alg.q
    H, K = pair.H, pair.K
    m = pair.index
    if math.gcd(m, q) != 1:
        raise NotCoprime(f"[H:K] = {m} not invertible mod {q}")
    h0 = cyclic_quotient_generator(G, H, K)
    assert h0 is not None, "pair does not have cyclic quotient"
    tt = trace_table(alg.field, m, relabel)
    inv_m = pow(m % q, -1, q)
    inv_k = pow(len(K.elements), -1, q)
    K_arr = np.array(K.elements, dtype=np.int64)
    vec = np.zeros(G.order, dtype=np.int64)
    terms: Dict[int, int] = {}
    h_inv = G.identity
    h0_inv = G.inv(h0)
    for t in range(m):
        tr = tt[(k * t) % m][0]
        if tr:
            c = (tr * inv_m) % q
            terms[h_inv] = c
            vec[G.mul_vec(K_arr, np.full(len(K_arr), h_inv))] += c * inv_k
        h_inv = G.mul(h_inv, h0_inv)
    return AlgebraElement(alg, vec % q, parts=((K, terms),))


def pci(alg: GroupAlgebra, pair: ShodaPair, k: int, relabel: int = 1) -> Idempotent:
    """Sum of the distinct G-conjugates of epsilon: the central idempotent."""
    G = alg.G
    eps = epsilon(alg, pair, k, relabel)
    seen = {eps.key(): eps}
    frontier = [eps]
    while frontier:
        nxt = []
        for e in frontier:
            for g in G.generators():
                c = e.conjugate(g)
                if c.key() not in seen:
                    seen[c.key()] = c
                    nxt.append(c)
        frontier = nxt
    conjugates = list(seen.values())
    total = conjugates[0]
    for c in conjugates[1:]:
        total = total + c
    return Idempotent(total, pair, k, "central")


def pcis_for_pair(alg: GroupAlgebra, pair: ShodaPair, relabel: int = 1) -> List[Idempotent]:
    od = cosets_and_orbits(alg.G, pair, alg.q)
    return [pci(alg, pair, k, relabel) for k in od.orbit_reps]


def pcis_for_group(
    alg: GroupAlgebra, pairs: Optional[Sequence[ShodaPair]] = None, relabel: int = 1
) -> List[Idempotent]:
    """All pcis from the catalog, deduplicated by coefficient vector."""
    if pairs is None:
        pairs = ssp_catalog(alg.G)
    out: List[Idempotent] = []
    seen = set()
    for pair in pairs:
        for idem in pcis_for_pair(alg, pair, relabel):
            key = idem.value.key()
            if key not in seen:
                seen.add(key)
                out.append(idem)
    return out


def left_idempotents(
    alg: GroupAlgebra, e: Idempotent, B: Subgroup
) -> Tuple[Idempotent, Idempotent]:
    """Split e into the left pair e*B-hat and e*(1 - B-hat)."""
    bh = alg.hat(B)
    f1 = e.value * bh
    f2 = e.value * (alg.one() - bh)
    return (
        Idempotent(f1, e.pair, e.k, "left"),
        Idempotent(f2, e.pair, e.k, "left"),
    )


def sum_idempotents(alg: GroupAlgebra, idems: Sequence[Idempotent]) -> AlgebraElement:
    total = alg.zero()
    for e in idems:
        total = total + e.value
    return total


# ---------------------------------------------------------------------------
# closed forms from the family tables


def _prime_power_of(m: int) -> Tuple[int, int]:
    p = min(f for f in range(2, m + 1) if m % f == 0)
    k, n = 0, m
    while n % p == 0:
        n //= p
        k += 1
    if n != 1:
        raise RegimeMismatch(f"index {m} is not a prime power")
    return p, k


def _i0_for(q: int, p: int) -> int:
    # largest level with a surviving trace: the truncation threshold
    if p == 2:
        return two_power_i_star(q)
    return odd_prime_i0(q, p)


def _truncated_indices(m: int, p: int, j: int, i0: int) -> List[int]:
    if j <= i0:
        return list(range(m))
    step = p ** (j - i0)
    return [t * step for t in range(p**i0)]


def _assemble(
    alg: GroupAlgebra,
    K: Subgroup,
    g0: int,
    m: int,
    coeffs: Dict[int, int],
) -> AlgebraElement:
    """sum_t coeffs[t] * hat(K) * g0^(-t), coefficients already scaled by 1/m."""
    G, q = alg.G, alg.q
    inv_k = pow(len(K.elements), -1, q)
    K_arr = np.array(K.elements, dtype=np.int64)
    vec = np.zeros(G.order, dtype=np.int64)
    g0_inv = G.inv(g0)
    h = G.identity
    terms: Dict[int, int] = {}
    for t in range(m):
        c = coeffs.get(t, 0) % q
        if c:
            terms[h] = (terms.get(h, 0) + c) % q
            vec[G.mul_vec(K_arr, np.full(len(K_arr), h))] += c * inv_k
        h = G.mul(h, g0_inv)
    return AlgebraElement(alg, vec % q, parts=((K, terms),))


def _subgroup_power_order(q: int, m: int) -> set:
    return {pow(q, j, m) for j in range(mult_order(q, m))} if m > 1 else {0}


def pci_table_closed_form(alg: GroupAlgebra, pair: ShodaPair, k: int) -> Idempotent:
    """Family-table route to the pci: truncated ranges and merged traces.

    Covers the dihedral/quaternion 2-power tables and the ordinary
    metacyclic family for p = 2 and odd p.  RegimeMismatch outside.
    """
    G, q = alg.G, alg.q
    fam = pair.family
    H, K = pair.H, pair.K
    m = pair.index
    if m == 1:
        top = full_subgroup(G)
        return Idempotent(alg.hat(top), pair, k, "central")
    tt = trace_table(alg.field, m)
    inv_m = pow(m % q, -1, q)

    if fam in ("dihedral", "quaternion", "2group"):
        N = getattr(G, "N", 0)
        if N < 8 or N & (N - 1) or q % 2 == 0:
            raise RegimeMismatch("2-power dihedral/quaternion table needs N=2^n>=8, odd q")
        if H.order == G.order:
            if m != 2:
                raise RegimeMismatch("(G,K) rows of the 2-group tables have index <= 2")
            g0 = cyclic_quotient_generator(G, H, K)
            coeffs = {t: (tt[(k * t) % m][0] * inv_m) % q for t in range(m)}
            return Idempotent(_assemble(alg, K, g0, m, coeffs), pair, k, "central")
        # (⟨a⟩, ⟨a^{2^j}⟩) rows
        p, j = _prime_power_of(m)
        if p != 2:
            raise RegimeMismatch("a-type rows of the 2-group tables have 2-power index")
        i0 = _i0_for(q, 2)
        idxs = _truncated_indices(m, 2, j, i0)
        merged = (-1) % m not in _subgroup_power_order(q, m)
        coeffs = {}
        for t in idxs:
            tr = tt[(k * t) % m][0]
            if merged:
                tr = (tr + tt[(-k * t) % m][0]) % q
            if tr:
                coeffs[t] = (tr * inv_m) % q
        g0 = cyclic_quotient_generator(G, H, K)
        return Idempotent(_assemble(alg, K, g0, m, coeffs), pair, k, "central")

    if fam == "OM":
        p = G.M
        i0 = _i0_for(q, p)
        pm, j = _prime_power_of(m)
        if pm != p:
            raise RegimeMismatch("ordinary metacyclic rows have p-power index")
        g0 = cyclic_quotient_generator(G, H, K)
        idxs = _truncated_indices(m, p, j, i0)
        if H.order == G.order:
            coeffs = {}
            for t in idxs:
                tr = tt[(k * t) % m][0]
                if tr:
                    coeffs[t] = (tr * inv_m) % q
            return Idempotent(_assemble(alg, K, g0, m, coeffs), pair, k, "central")
        # (⟨a⟩, 1) row: sum over the transversal T of <r^omega0> in <r>
        r = G.r % m
        qgrp = _subgroup_power_order(q, m)
        omega0 = 1
        t = r
        while t not in qgrp:
            t = (t * r) % m
            omega0 += 1
        rpow = 1
        transversal = []
        for _ in range(omega0):
            transversal.append(rpow)
            rpow = (rpow * r) % m
        coeffs: Dict[int, int] = {}
        for tau in transversal:
            for t in idxs:
                tr = tt[(k * tau * t) % m][0]
                if tr:
                    coeffs[t] = (coeffs.get(t, 0) + tr * inv_m) % q
        coeffs = {t: c for t, c in coeffs.items() if c % q}
        return Idempotent(_assemble(alg, K, g0, m, coeffs), pair, k, "central")

    raise RegimeMismatch(f"no closed-form table covers family {fam!r}")


# ---------------------------------------------------------------------------
# census (integer-only; also valid for prime-power q)


@dataclass
class ComponentRow:
    pair: ShodaPair
    k: int
    matrix_size: int  # [G:H]
    field_degree: int  # o / [E:H]
    dim: int  # matrix_size^2 * field_degree


def census(G: FiniteGroup, q: int, pairs: Optional[Sequence[ShodaPair]] = None) -> List[ComponentRow]:
    """Wedderburn component parameters per inequivalent pci, by orbit count."""
    if math.gcd(q, G.order) != 1:
        raise NotSemisimple(f"gcd(q={q}, |G|={G.order}) != 1")
    if pairs is None:
        pairs = ssp_catalog(G)
    rows: List[ComponentRow] = []
    seen = set()
    for pair in pairs:
        od = cosets_and_orbits(G, pair, q)
        size = G.order // pair.H.order
        assert od.o % od.stab_index == 0
        deg = od.o // od.stab_index
        for rep in od.orbit_reps:
            key = (pair.H.elements, pair.K.elements, rep)
            if key in seen:
                continue
            seen.add(key)
            rows.append(ComponentRow(pair, rep, size, deg, size * size * deg))
    return rows


def count_pcis(G: FiniteGroup, q: int, pairs: Optional[Sequence[ShodaPair]] = None):
    """Per-pair pci counts plus the total; the dimension identity is checked."""
    rows = census(G, q, pairs)
    total_dim = sum(r.dim for r in rows)
    per_pair: Dict[str, int] = {}
    for r in rows:
        per_pair[r.pair.label()] = per_pair.get(r.pair.label(), 0) + 1
    return {"rows": rows, "per_pair": per_pair, "count": len(rows), "total_dim": total_dim}
