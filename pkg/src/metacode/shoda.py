"""Strong Shoda pair catalogs for the treated families, plus a verifier."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .ffield import is_prime, mult_order
from .groups import (
    FiniteGroup,
    GroupError,
    MetacyclicGroup,
    ProductGroup,
    Subgroup,
    centralizer_mod,
    cyclic_quotient_generator,
    full_subgroup,
    normalizer,
    subgroup_closure,
    trivial_subgroup,
)


class NotGenericFamily(GroupError):
    pass


class BadFamilyIndex(GroupError):
    pass


class TooLarge(GroupError):
    pass


@dataclass(frozen=True)
class ShodaPair:
    H: Subgroup
    K: Subgroup
    family: str
    params: Tuple[Tuple[str, int], ...] = ()

    @property
    def group(self) -> FiniteGroup:
        return self.H.group

    @property
    def index(self) -> int:
        """[H:K], the order of the cyclic quotient."""
        return self.H.order // self.K.order

    def label(self) -> str:
        return f"({self.H!r}, {self.K!r})"


def _pair(H: Subgroup, K: Subgroup, family: str, **params) -> ShodaPair:
    return ShodaPair(H, K, family, tuple(sorted(params.items())))


def _divisors(n: int) -> List[int]:
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


# ---------------------------------------------------------------------------
# catalogs


def ssp_cyclic(G: MetacyclicGroup) -> List[ShodaPair]:
    """All pairs (G, K) of a cyclic group: every subgroup qualifies."""
    if G.N > 1 and G.M > 1:
        raise NotGenericFamily(f"{G.name} is not presented as a cyclic group")
    gen = G.a if G.N > 1 else G.b
    top = full_subgroup(G)
    out = []
    for d in _divisors(G.order):
        K = subgroup_closure(G, [_power(G, gen, d)])
        out.append(_pair(top, K, "cyclic", d=d))
    return out


def _power(G: FiniteGroup, g: int, n: int) -> int:
    out = G.identity
    for _ in range(n):
        out = G.mul(out, g)
    return out


def _ab(G: MetacyclicGroup, i: int, j: int) -> int:
    """The word a^i b^j with proper folding of b^M = a^s (floor semantics)."""
    fold = j // G.M
    return G.encode(i + G.s * fold, j - fold * G.M)


def ssp_dihedral_any(G: MetacyclicGroup) -> List[ShodaPair]:
    """S(D_2n) for arbitrary n >= 3, split by the parity of n."""
    n = G.N
    if G.M != 2 or G.s != 0 or G.r != n - 1 or n < 3:
        raise NotGenericFamily(f"{G.name} is not dihedral")
    top = full_subgroup(G)
    A = subgroup_closure(G, [G.a])
    out = [_pair(top, top, "dihedral"), _pair(top, A, "dihedral")]
    if n % 2 == 0:
        out.append(_pair(top, subgroup_closure(G, [_ab(G, 2, 0), _ab(G, 0, 1)]), "dihedral"))
        out.append(_pair(top, subgroup_closure(G, [_ab(G, 2, 0), _ab(G, 1, 1)]), "dihedral"))
        vs = [v for v in _divisors(n) if v > 2]
    else:
        vs = [v for v in _divisors(n) if v != 1]
    for v in vs:
        out.append(_pair(A, subgroup_closure(G, [_ab(G, v, 0)]), "dihedral", v=v))
    return out


def ssp_quaternion_any(G: MetacyclicGroup) -> List[ShodaPair]:
    """S(Q_4m) for arbitrary m >= 2, split by the parity of m."""
    if G.M != 2 or G.N % 2 or G.r != G.N - 1 or G.s != G.N // 2:
        raise NotGenericFamily(f"{G.name} is not generalised quaternion")
    m = G.N // 2
    top = full_subgroup(G)
    A = subgroup_closure(G, [G.a])
    out = [_pair(top, top, "quaternion"), _pair(top, A, "quaternion")]
    if m % 2 == 1:
        out.append(_pair(top, subgroup_closure(G, [_ab(G, 2, 0)]), "quaternion"))
    else:
        out.append(_pair(top, subgroup_closure(G, [_ab(G, 2, 0), _ab(G, 0, 1)]), "quaternion"))
        out.append(_pair(top, subgroup_closure(G, [_ab(G, 2, 0), _ab(G, 1, 1)]), "quaternion"))
    for v in [v for v in _divisors(2 * m) if v > 2]:
        out.append(_pair(A, subgroup_closure(G, [_ab(G, v, 0)]), "quaternion", v=v))
    return out


def ssp_2group(G: MetacyclicGroup) -> List[ShodaPair]:
    """S(G) for G = D, Q or SD of order 2^(n+1): the shared list."""
    N = G.N
    n = N.bit_length() - 1
    if G.M != 2 or N != 1 << n or n < 2:
        raise NotGenericFamily(f"{G.name} is not a maximal-cyclic 2-group")
    top = full_subgroup(G)
    A = subgroup_closure(G, [G.a])
    out = [
        _pair(top, top, "2group"),
        _pair(top, A, "2group"),
        _pair(top, subgroup_closure(G, [_ab(G, 2, 0), _ab(G, 0, 1)]), "2group"),
        _pair(top, subgroup_closure(G, [_ab(G, 2, 0), _ab(G, 1, 1)]), "2group"),
    ]
    for j in range(2, n + 1):
        out.append(_pair(A, subgroup_closure(G, [_ab(G, 1 << j, 0)]), "2group", j=j))
    return out


def ssp_ordinary_metacyclic(G: MetacyclicGroup) -> List[ShodaPair]:
    """S(G_{p^(n+1)}): the maximal-cyclic ordinary metacyclic family."""
    p = G.M
    if not is_prime(p):
        raise NotGenericFamily(f"{G.name}: M = {p} is not prime")
    n = 0
    N = G.N
    while N % p == 0:
        N //= p
        n += 1
    if N != 1 or n < 2 or G.s != 0 or G.r != p ** (n - 1) + 1:
        raise NotGenericFamily(f"{G.name} is not the G_(p^(n+1)) family")
    top = full_subgroup(G)
    A = subgroup_closure(G, [G.a])
    out = [_pair(top, top, "OM"), _pair(top, A, "OM", j=0)]
    for j in range(1, n):
        for i in range(p):
            K = subgroup_closure(G, [_ab(G, p**j, 0), _ab(G, i * p ** (j - 1), 1)])
            out.append(_pair(top, K, "OM", j=j, i=i))
    out.append(_pair(A, trivial_subgroup(G), "OM", j=n))
    return out


# Same pairs as ssp_ordinary_metacyclic at p = 2, in the shape of the
# dedicated 2-group statement; kept separate so both lists are testable.
def ssp_ordinary_metacyclic_2(G: MetacyclicGroup) -> List[ShodaPair]:
    if G.M != 2:
        raise NotGenericFamily(f"{G.name} is not a 2-group")
    return ssp_ordinary_metacyclic(G)


def ssp_generic_split(G: MetacyclicGroup) -> List[ShodaPair]:
    """S(G) for split C_{p1^m} x| C_{p2^l} with faithful action."""
    p1, m = _prime_power(G.N)
    p2, l = _prime_power(G.M)
    if p1 is None or p2 is None or p1 == p2 or G.s != 0:
        raise NotGenericFamily(f"{G.name} is not the split two-prime family")
    if mult_order(G.r, G.N) != G.M:
        raise NotGenericFamily(f"{G.name}: action of b is not faithful")
    top = full_subgroup(G)
    A = subgroup_closure(G, [G.a])
    out = [_pair(top, top, "generic")]
    for j2 in range(1, l + 1):
        K = subgroup_closure(G, [G.a, _ab(G, 0, p2**j2 % G.M)])
        out.append(_pair(top, K, "generic", j2=j2))
    for j1 in range(1, m + 1):
        out.append(
            _pair(A, subgroup_closure(G, [_ab(G, p1**j1 % G.N, 0)]), "generic", j1=j1)
        )
    return out


def _prime_power(n: int) -> Tuple[Optional[int], int]:
    if n < 2:
        return None, 0
    p = min(f for f in range(2, n + 1) if n % f == 0)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return (p, k) if n == 1 else (None, 0)


# ---------------------------------------------------------------------------
# order-p^5 metacyclic families


def p5_group(family: int, p: int) -> MetacyclicGroup:
    """The four non-abelian metacyclic groups of order p^5 (odd p).

    The source presentations use b a b^-1 = a^t; our convention stores
    r = t^-1 mod N so that b^-1 a b = a^r.
    """
    if family not in (1, 2, 3, 4):
        raise BadFamilyIndex(f"family must be 1..4, got {family}")
    if p == 2 or not is_prime(p):
        raise BadFamilyIndex("p must be an odd prime")
    if family == 1:
        N, M, t, s = p**2, p**3, p + 1, 0
    elif family == 2:
        N, M, t, s = p**3, p**2, p + 1, p**2
    elif family == 3:
        N, M, t, s = p**3, p**2, p**2 + 1, p**2
    else:
        N, M, t, s = p**4, p, p**3 + 1, p
    r = pow(t, -1, N)
    return MetacyclicGroup(N, M, r, s, name=f"P5_{family}(p={p})")


def ssp_p5(family: int, p: int) -> List[ShodaPair]:
    """The quoted S(G_i) lists of the order-p^5 families."""
    G = p5_group(family, p)
    top = full_subgroup(G)

    def sg(*words: Tuple[int, int]) -> Subgroup:
        return subgroup_closure(G, [_ab(G, i, j) for i, j in words])

    out: List[ShodaPair] = []
    fam = f"p5_{family}"
    if family == 1:
        for i in range(3):
            out.append(_pair(top, sg((1, 0), (0, p**i)), fam, kind=0, i=i))
        for i in range(p):
            out.append(_pair(top, sg((i, 1), (p, 0)), fam, kind=1, i=i))
        for i in range(p):
            out.append(_pair(top, sg((1, i * p), (p, 0)), fam, kind=2, i=i))
        for i in range(1, p):
            out.append(_pair(top, sg((1, -i * p * p), (p, 0)), fam, kind=3, i=i))
        H = sg((2, 1), (0, p))
        for i in range(1, p):
            out.append(_pair(H, sg((i * p, p * p)), fam, kind=4, i=i))
        for i in range(p):
            if i == 2:
                continue
            out.append(_pair(H, sg((i * p, p), (0, p * p)), fam, kind=5, i=i))
        out.append(_pair(H, sg((2 * p + 2, 1 - 2 * p), (0, p * p)), fam, kind=6))
    elif family == 2:
        for i in range(3):
            out.append(_pair(top, sg((1, 0), (0, p**i)), fam, kind=0, i=i))
        for k in range(p):
            out.append(_pair(top, sg((k, 1), (p, 0)), fam, kind=1, i=k))
        for k in range(1, p):
            out.append(_pair(top, sg((1, k * p), (p, 0)), fam, kind=2, i=k))
        # k = p-1 fails the cyclic-quotient condition (checked at p = 3, 5);
        # the bespoke pair below covers the remaining component.
        H1 = sg((-1, 1), (p, 0))
        for k in range(p - 1):
            out.append(_pair(H1, sg((k * p, p), (0, p * p)), fam, kind=3, i=k))
        H2 = sg((-1, 1), (0, p))
        out.append(_pair(H2, sg((-1, 1 - 2 * p), (0, p * p)), fam, kind=4))
        out.append(_pair(sg((1, p * p - p)), sg((0, 0)), fam, kind=5))
    elif family == 3:
        for k in range(p * p):
            out.append(_pair(top, sg((k, 1), (0, p * p)), fam, kind=0, i=k))
        for k in range(1, p):
            out.append(_pair(top, sg((1, k * p), (0, p * p)), fam, kind=1, i=k))
        for k in range(p):
            out.append(_pair(top, sg((k, 1), (p, 0)), fam, kind=2, i=k))
        for i in range(3):
            out.append(_pair(top, sg((1, 0), (0, p**i)), fam, kind=3, i=i))
        H = sg((1, 0), (0, p))
        for k in range(p):
            out.append(_pair(H, sg((p * (p - 1), p * (p * k + 1))), fam, kind=4, i=k))
    else:
        for i in range(4):
            out.append(_pair(top, sg((1, -1), (0, p**i)), fam, kind=0, i=i))
        out.append(_pair(top, sg((0, 1)), fam, kind=1))
        out.append(_pair(sg((p, 0), (-1, 2)), sg((0, 0)), fam, kind=2))
        for k in range(1, p):
            for i in range(3):
                out.append(_pair(top, sg((1, k * p**i - 1)), fam, kind=3, i=i, k=k))
    return out


# ---------------------------------------------------------------------------
# direct products


def ssp_product(
    G: ProductGroup, pairs1: List[ShodaPair], pairs2: List[ShodaPair]
) -> List[ShodaPair]:
    """Componentwise pairs (H1 x H2, K1 x K2) for coprime factors."""
    if not G.coprime:
        from .groups import NotCoprimeOrders

        raise NotCoprimeOrders(f"{G.name}: factors share an order factor")
    out = []
    for sp1 in pairs1:
        for sp2 in pairs2:
            H = _product_subgroup(G, sp1.H, sp2.H)
            K = _product_subgroup(G, sp1.K, sp2.K)
            out.append(ShodaPair(H, K, "product", sp1.params + sp2.params))
    return out


def _product_subgroup(G: ProductGroup, S1: Subgroup, S2: Subgroup) -> Subgroup:
    n2 = G.right.order
    elems = [x1 * n2 + x2 for x1 in S1.elements for x2 in S2.elements]
    gens = [g * n2 for g in S1.gens] + list(S2.gens)
    return Subgroup(G, elems, gens=tuple(g for g in gens if g != 0) or (0,))


def ssp_c2_q8(G: ProductGroup) -> List[ShodaPair]:
    """S(C2 x Q8): the (G, K)-type kernels plus the two (⟨a,c⟩, ·) pairs.

    The C2 factor is written c; the Q8 factor carries a, b.  The (G, K)
    entries are the kernels of the seven order-2 characters of G/⟨a²⟩; the
    verifier accepts the full list exhaustively.
    """
    if not (
        isinstance(G.left, MetacyclicGroup)
        and G.left.order == 2
        and isinstance(G.right, MetacyclicGroup)
        and (G.right.N, G.right.M, G.right.r, G.right.s) == (4, 2, 3, 2)
    ):
        raise NotGenericFamily(f"{G.name} is not C2 x Q8")
    q8 = G.right
    c = G.pair(1, 0)
    a = G.pair(0, q8.a)
    b = G.pair(0, q8.b)
    ab = G.mul(a, b)
    a2 = G.mul(a, a)
    top = full_subgroup(G)
    kernels = [
        [a, b],
        [a, c],
        [b, c],
        [ab, c],
        [a, G.mul(b, c)],
        [b, G.mul(a, c)],
        [ab, G.mul(b, c)],
    ]
    out = [_pair(top, top, "C2xQ8")]
    for gens in kernels:
        out.append(_pair(top, subgroup_closure(G, gens + [a2]), "C2xQ8"))
    H = subgroup_closure(G, [a, c])
    out.append(_pair(H, subgroup_closure(G, [c]), "C2xQ8"))
    out.append(_pair(H, subgroup_closure(G, [G.mul(a2, c)]), "C2xQ8"))
    return out


# ---------------------------------------------------------------------------
# dispatcher and verifier


def ssp_catalog(G: FiniteGroup) -> List[ShodaPair]:
    """The paper's S(G) for any catalogued family."""
    if isinstance(G, ProductGroup):
        try:
            return ssp_c2_q8(G)
        except NotGenericFamily:
            pass
        if not G.coprime:
            raise NotGenericFamily(
                f"{G.name}: only coprime products (or C2 x Q8) are catalogued"
            )
        return ssp_product(G, ssp_catalog(G.left), ssp_catalog(G.right))
    if not isinstance(G, MetacyclicGroup):
        raise NotGenericFamily(f"{G.name} is not a catalogued group")
    if G.M == 1 or G.N == 1:
        return ssp_cyclic(G)
    for builder in (
        ssp_dihedral_any,
        ssp_quaternion_any,
        _ssp_sd,
        ssp_ordinary_metacyclic,
        _ssp_p5_match,
        ssp_generic_split,
    ):
        try:
            return builder(G)
        except NotGenericFamily:
            continue
    raise NotGenericFamily(f"no catalog matches {G.name} (N={G.N}, M={G.M}, r={G.r}, s={G.s})")


def _ssp_sd(G: MetacyclicGroup) -> List[ShodaPair]:
    N = G.N
    n = N.bit_length() - 1
    if N != 1 << n or n < 3 or G.M != 2 or G.s != 0 or G.r != N // 2 - 1:
        raise NotGenericFamily(f"{G.name} is not semidihedral")
    return ssp_2group(G)


def _ssp_p5_match(G: MetacyclicGroup) -> List[ShodaPair]:
    order = G.order
    p = round(order ** (1 / 5))
    if p < 3 or p**5 != order or not is_prime(p):
        raise NotGenericFamily("not order p^5")
    for family in (1, 2, 3, 4):
        ref = p5_group(family, p)
        if (ref.N, ref.M, ref.r, ref.s) == (G.N, G.M, G.r, G.s):
            return ssp_p5(family, p)
    raise NotGenericFamily("no p^5 presentation matches")


def verify_ssp(G: FiniteGroup, pair: ShodaPair, bound: int = 10_000):
    """Exhaustive check of the strong Shoda pair conditions.

    Returns (True, "") or (False, reason).  Raises TooLarge above the bound
    (verification skipped, not failed).
    """
    if G.order > bound:
        raise TooLarge(f"|G| = {G.order} exceeds verification bound {bound}")
    H, K = pair.H, pair.K
    if not set(K.elements) <= set(H.elements):
        return False, "K is not contained in H"
    if not H.is_normal_in_G:
        return False, "H is not normal in G"
    for x in H.gens or H.elements:
        for k in K.gens or K.elements:
            if G.conjugate(k, x) not in K:
                return False, "K is not normal in H"
    h0 = cyclic_quotient_generator(G, H, K)
    if h0 is None:
        return False, "H/K is not cyclic"
    N = normalizer(G, K)
    cent = centralizer_mod(G, N, h0, K)
    if set(cent) != set(H.elements):
        return False, "H/K is not maximal abelian in N_G(K)/K"
    return True, ""
