"""Metacyclic group presentations, subgroup machinery, and direct products."""

from __future__ import annotations

import json
import math
import re
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np


class GroupError(Exception):
    pass


class InconsistentPresentation(GroupError):
    pass


class NotNormal(GroupError):
    pass


class NotCoprimeOrders(GroupError):
    pass


class SchemaError(GroupError):
    pass


class FiniteGroup:
    """Finite group with elements 0..order-1 and vectorised index arithmetic."""

    name: str
    order: int

    def mul(self, x: int, y: int) -> int:
        raise NotImplementedError

    def inv(self, x: int) -> int:
        raise NotImplementedError

    def mul_vec(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def inv_vec(self, xs: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def generators(self) -> List[int]:
        raise NotImplementedError

    def elem_label(self, x: int) -> str:
        return str(x)

    @property
    def identity(self) -> int:
        return 0

    def elements(self) -> range:
        return range(self.order)

    # -- cached index tables -------------------------------------------------
    def _table_cache(self) -> Dict:
        cache = getattr(self, "_tables", None)
        if cache is None:
            cache = {}
            self._tables = cache
        return cache

    def lmul_table(self, x: int) -> np.ndarray:
        """Indices of x*h for h = 0..order-1."""
        cache = self._table_cache()
        key = ("l", x)
        t = cache.get(key)
        if t is None:
            all_idx = np.arange(self.order, dtype=np.int64)
            t = self.mul_vec(np.full(self.order, x, dtype=np.int64), all_idx)
            if len(cache) < 64:
                cache[key] = t
        return t

    def rmul_table(self, x: int) -> np.ndarray:
        """Indices of h*x for h = 0..order-1."""
        cache = self._table_cache()
        key = ("r", x)
        t = cache.get(key)
        if t is None:
            all_idx = np.arange(self.order, dtype=np.int64)
            t = self.mul_vec(all_idx, np.full(self.order, x, dtype=np.int64))
            if len(cache) < 64:
                cache[key] = t
        return t

    def conj_table(self, x: int) -> np.ndarray:
        """Indices of x^-1 * h * x for h = 0..order-1."""
        cache = self._table_cache()
        key = ("c", x)
        t = cache.get(key)
        if t is None:
            t = self.rmul_table(x)[self.lmul_table(self.inv(x))]
            if len(cache) < 64:
                cache[key] = t
        return t

    def element_order(self, x: int) -> int:
        o = 1
        t = x
        while t != self.identity:
            t = self.mul(t, x)
            o += 1
        return o

    def conjugate(self, g: int, x: int) -> int:
        """g^x = x^-1 g x."""
        return self.mul(self.mul(self.inv(x), g), x)


class MetacyclicGroup(FiniteGroup):
    """<a, b | a^N = 1, b^M = a^s, b^-1 a b = a^r>, elements a^i b^j.

    Element index is i*M + j.  The non-split families (generalised quaternion,
    the order-p^5 groups G2..G4) are handled through the folding exponent s.
    """

    def __init__(self, N: int, M: int, r: int, s: int = 0, name: str = ""):
        if N < 1 or M < 1:
            raise InconsistentPresentation("N and M must be positive")
        r %= N if N > 1 else 1
        s %= N if N > 1 else 1
        if N == 1:
            r, s = 0, 0
        if N > 1:
            if math.gcd(r, N) != 1:
                raise InconsistentPresentation(f"r={r} not a unit mod N={N}")
            if pow(r, M, N) != 1:
                raise InconsistentPresentation(f"r^M = {pow(r, M, N)} != 1 mod {N}")
            if (s * (r - 1)) % N != 0:
                raise InconsistentPresentation(f"s(r-1) = {s * (r - 1)} != 0 mod {N}")
        self.N = N
        self.M = M
        self.r = r
        self.s = s
        self.order = N * M
        self.name = name or f"M({N},{M},r={r},s={s})"
        self._rpow = np.array(
            [pow(r, j, N) if N > 1 else 0 for j in range(M)], dtype=np.int64
        )
        self._rpow_inv = np.array(
            [pow(int(v), -1, N) if N > 1 else 0 for v in self._rpow], dtype=np.int64
        )

    def __repr__(self):
        return self.name

    @property
    def a(self) -> int:
        return self.M if self.N > 1 else 0

    @property
    def b(self) -> int:
        return 1 if self.M > 1 else 0

    def generators(self) -> List[int]:
        gens = []
        if self.N > 1:
            gens.append(self.a)
        if self.M > 1:
            gens.append(self.b)
        return gens or [0]

    def decode(self, x: int) -> Tuple[int, int]:
        return divmod(x, self.M)

    def encode(self, i: int, j: int) -> int:
        return (i % self.N) * self.M + (j % self.M)

    def mul(self, x: int, y: int) -> int:
        i1, j1 = divmod(x, self.M)
        i2, j2 = divmod(y, self.M)
        jj = j1 + j2
        i = (i1 + i2 * int(self._rpow[j1]) + self.s * (jj // self.M)) % self.N
        return i * self.M + jj % self.M

    def inv(self, x: int) -> int:
        i, j = divmod(x, self.M)
        j2 = (self.M - j) % self.M
        carry = 1 if j > 0 else 0
        rinv = pow(int(self._rpow[j]), -1, self.N) if self.N > 1 else 0
        i2 = (-(i + self.s * carry) * rinv) % self.N
        return i2 * self.M + j2

    def mul_vec(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        i1, j1 = np.divmod(xs, self.M)
        i2, j2 = np.divmod(ys, self.M)
        jj = j1 + j2
        i = (i1 + i2 * self._rpow[j1] + self.s * (jj // self.M)) % self.N
        return i * self.M + jj % self.M

    def inv_vec(self, xs: np.ndarray) -> np.ndarray:
        i, j = np.divmod(xs, self.M)
        j2 = (self.M - j) % self.M
        carry = (j > 0).astype(np.int64)
        if self.N > 1:
            i2 = (-(i + self.s * carry) * self._rpow_inv[j]) % self.N
        else:
            i2 = i * 0
        return i2 * self.M + j2

    def elem_label(self, x: int) -> str:
        i, j = divmod(x, self.M)
        if i == 0 and j == 0:
            return "1"
        parts = []
        if i:
            parts.append("a" if i == 1 else f"a^{i}")
        if j:
            parts.append("b" if j == 1 else f"b^{j}")
        return "*".join(parts)


class ProductGroup(FiniteGroup):
    """Direct product; element index is idx_left * |right| + idx_right."""

    def __init__(self, left: FiniteGroup, right: FiniteGroup, name: str = ""):
        self.left = left
        self.right = right
        self.order = left.order * right.order
        self.coprime = math.gcd(left.order, right.order) == 1
        self.name = name or f"{left.name} x {right.name}"

    def __repr__(self):
        return self.name

    def mul(self, x: int, y: int) -> int:
        n2 = self.right.order
        x1, x2 = divmod(x, n2)
        y1, y2 = divmod(y, n2)
        return self.left.mul(x1, y1) * n2 + self.right.mul(x2, y2)

    def inv(self, x: int) -> int:
        n2 = self.right.order
        x1, x2 = divmod(x, n2)
        return self.left.inv(x1) * n2 + self.right.inv(x2)

    def mul_vec(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        n2 = self.right.order
        x1, x2 = np.divmod(xs, n2)
        y1, y2 = np.divmod(ys, n2)
        return self.left.mul_vec(x1, y1) * n2 + self.right.mul_vec(x2, y2)

    def inv_vec(self, xs: np.ndarray) -> np.ndarray:
        n2 = self.right.order
        x1, x2 = np.divmod(xs, n2)
        return self.left.inv_vec(x1) * n2 + self.right.inv_vec(x2)

    def generators(self) -> List[int]:
        n2 = self.right.order
        gens = [g * n2 for g in self.left.generators() if g != self.left.identity]
        gens += [g for g in self.right.generators() if g != self.right.identity]
        return gens or [0]

    def embed_left(self, x: int) -> int:
        return x * self.right.order

    def embed_right(self, x: int) -> int:
        return x

    def pair(self, x1: int, x2: int) -> int:
        return x1 * self.right.order + x2

    def elem_label(self, x: int) -> str:
        x1, x2 = divmod(x, self.right.order)
        return f"({self.left.elem_label(x1)}, {self.right.elem_label(x2)})"


def direct_product(
    G1: FiniteGroup, G2: FiniteGroup, allow_non_coprime: bool = False
) -> ProductGroup:
    if math.gcd(G1.order, G2.order) != 1 and not allow_non_coprime:
        raise NotCoprimeOrders(
            f"|{G1.name}| = {G1.order} and |{G2.name}| = {G2.order} share a factor"
        )
    return ProductGroup(G1, G2)


# ---------------------------------------------------------------------------
# subgroups


class Subgroup:
    """Explicit subgroup: full sorted element list plus lazy flags."""

    def __init__(self, group: FiniteGroup, elements: Iterable[int], gens=()):
        self.group = group
        self.elements = tuple(sorted(elements))
        self.gens = tuple(gens)
        self._set = frozenset(self.elements)
        self._is_normal: Optional[bool] = None
        self._is_cyclic: Optional[bool] = None

    def __repr__(self):
        gens = ", ".join(self.group.elem_label(g) for g in self.gens) or "1"
        return f"<{gens}> (order {self.order})"

    def __contains__(self, x: int) -> bool:
        return x in self._set

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def index(self) -> int:
        return self.group.order // self.order

    @property
    def is_normal_in_G(self) -> bool:
        if self._is_normal is None:
            G = self.group
            gens = self.gens or self.elements
            self._is_normal = all(
                G.conjugate(h, x) in self._set for x in G.generators() for h in gens
            )
        return self._is_normal

    @property
    def is_cyclic(self) -> bool:
        if self._is_cyclic is None:
            n = self.order
            self._is_cyclic = any(
                self.group.element_order(h) == n for h in self.elements
            )
        return self._is_cyclic


def subgroup_closure(G: FiniteGroup, gens: Sequence[int]) -> Subgroup:
    """Least subgroup containing gens (BFS over right multiplication)."""
    if len(gens) == 0:
        raise ValueError("gens must be nonempty")
    seen = {G.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return Subgroup(G, seen, gens=tuple(dict.fromkeys(gens)))


def trivial_subgroup(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, [G.identity], gens=(G.identity,))


def full_subgroup(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, range(G.order), gens=tuple(G.generators()))


def normalizer(G: FiniteGroup, H: Subgroup) -> Subgroup:
    gens = H.gens or H.elements
    members = [
        x
        for x in G.elements()
        if all(G.conjugate(h, x) in H for h in gens)
    ]
    return Subgroup(G, members, gens=())


def centralizer_mod(G: FiniteGroup, N: Subgroup, h0: int, K: Subgroup) -> List[int]:
    """Elements x of N with [x, h0] in K (centraliser of h0K in N/K)."""
    out = []
    for x in N.elements:
        comm = G.mul(G.inv(G.mul(h0, x)), G.mul(x, h0))
        if comm in K:
            out.append(x)
    return out


def center(G: FiniteGroup) -> Subgroup:
    gens = G.generators()
    members = [x for x in G.elements() if all(G.mul(x, g) == G.mul(g, x) for g in gens)]
    return Subgroup(G, members, gens=())


def cyclic_quotient_generator(
    G: FiniteGroup, H: Subgroup, K: Subgroup
) -> Optional[int]:
    """A representative h0 with <h0 K> = H/K, or None if H/K is not cyclic.

    K must be normal in H; raises NotNormal otherwise.
    """
    hgens = H.gens or H.elements
    for x in hgens:
        for k in K.gens or K.elements:
            if G.conjugate(k, x) not in K:
                raise NotNormal("K is not normal in H")
    target = H.order // K.order
    for h in H.elements:
        t = h
        o = 1
        while t not in K:
            t = G.mul(t, h)
            o += 1
        if o == target:
            return h
    return None


def quotient_is_cyclic(G: FiniteGroup, K: Subgroup) -> Optional[int]:
    """Generator coset representative of G/K when cyclic, else None."""
    return cyclic_quotient_generator(G, full_subgroup(G), K)


# ---------------------------------------------------------------------------
# named constructors and JSON specs


def dihedral(two_n: int) -> MetacyclicGroup:
    if two_n % 2 or two_n < 2:
        raise SchemaError(f"dihedral order must be even, got {two_n}")
    n = two_n // 2
    return MetacyclicGroup(n, 2, n - 1 if n > 1 else 0, 0, name=f"D{two_n}")

def quaternion(four_m: int) -> MetacyclicGroup:
    if four_m % 4 or four_m < 8:
        raise SchemaError(f"generalised quaternion order must be 4m >= 8, got {four_m}")
    n = four_m // 2
    return MetacyclicGroup(n, 2, n - 1, n // 2, name=f"Q{four_m}")


def semidihedral(order: int) -> MetacyclicGroup:
    if order < 16 or order & (order - 1):
        raise SchemaError(f"semidihedral order must be 2^(n+1) >= 16, got {order}")
    n = order // 2
    return MetacyclicGroup(n, 2, n // 2 - 1, 0, name=f"SD{order}")


def ordinary_metacyclic(p: int, n_plus_1: int) -> MetacyclicGroup:
    """G_{p^(n+1)} = <a, b | a^{p^n} = b^p = 1, b^-1 a b = a^{p^(n-1)+1}>."""
    n = n_plus_1 - 1
    if n < 2:
        raise SchemaError("ordinary metacyclic family needs order p^(n+1), n >= 2")
    N = p**n
    return MetacyclicGroup(N, p, p ** (n - 1) + 1, 0, name=f"OM{p}^{n_plus_1}")


def cyclic(n: int) -> MetacyclicGroup:
    return MetacyclicGroup(n, 1, 1 % n if n > 1 else 0, 0, name=f"C{n}")


def c2_x_q8() -> ProductGroup:
    G = direct_product(cyclic(2), quaternion(8), allow_non_coprime=True)
    G.name = "C2xQ8"
    return G


_NAMED = {
    "D": lambda v: dihedral(int(v)),
    "Q": lambda v: quaternion(int(v)),
    "SD": lambda v: semidihedral(int(v)),
    "C": lambda v: cyclic(int(v)),
}


def group_from_name(text: str) -> FiniteGroup:
    text = text.strip()
    if text == "C2xQ8":
        return c2_x_q8()
    m = re.fullmatch(r"OM:(\d+)\^(\d+)", text)
    if m:
        p, k = int(m.group(1)), int(m.group(2))
        return ordinary_metacyclic(p, k)
    m = re.fullmatch(r"(D|Q|SD|C):(\d+)", text)
    if m:
        return _NAMED[m.group(1)](m.group(2))
    raise SchemaError(f"unknown group name {text!r}")


def group_from_spec(obj) -> FiniteGroup:
    """Build a group from a JSON-style dict, a named string, or pass through."""
    if isinstance(obj, FiniteGroup):
        return obj
    if isinstance(obj, str):
        return group_from_name(obj)
    if not isinstance(obj, dict):
        raise SchemaError(f"cannot interpret group spec {obj!r}")
    if "product" in obj:
        specs = obj["product"]
        if not isinstance(specs, list) or len(specs) != 2:
            raise SchemaError("product spec needs exactly two factors")
        G1, G2 = group_from_spec(specs[0]), group_from_spec(specs[1])
        G = direct_product(G1, G2, allow_non_coprime=bool(obj.get("allow_non_coprime")))
        if "name" in obj:
            G.name = str(obj["name"])
        return G
    try:
        N, M = int(obj["N"]), int(obj["M"])
    except KeyError as exc:
        raise SchemaError(f"missing group key {exc}") from None
    r = int(obj.get("r", 1))
    s = int(obj.get("s", 0))
    return MetacyclicGroup(N, M, r, s, name=str(obj.get("name", "")))


def load_group_file(path) -> FiniteGroup:
    with open(path) as fh:
        return group_from_spec(json.load(fh))
