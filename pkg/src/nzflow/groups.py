"""Finite groups as multiplication tables, plus the subgroup machinery.

Elements are the integers ``0..order-1`` and the identity is always ``0``.
Everything here is brute force over the table; it is meant for groups of a
few hundred elements at most.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations
from typing import Callable, Iterable, Mapping, Sequence

from .errors import GroupError

__all__ = [
    "FiniteGroup",
    "Subgroup",
    "build_group",
    "cyclic",
    "dihedral",
    "dicyclic",
    "direct_product",
    "semidirect_product",
    "element_order",
    "generated_subgroup",
    "derived_subgroup",
    "is_normal",
    "centralizer",
    "normalizer",
    "normal_closure",
    "quotient_group",
    "minimal_normal_in",
    "chief_series",
    "is_supersolvable",
    "sylow_subgroup",
    "has_noncyclic_sylow2",
    "is_nilpotent",
    "has_squarefree_derived",
    "left_transversal",
    "all_subgroups",
    "prime_factors",
]


def prime_factors(n: int) -> list[int]:
    """Distinct prime divisors of ``n`` in increasing order."""
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


class FiniteGroup:
    """A finite group given by its Cayley table.

    ``table[g][h]`` is the index of ``g*h``. The table is checked for the
    identity law, the Latin-square property and associativity on
    construction.
    """

    def __init__(
        self,
        table: Sequence[Sequence[int]],
        name: str = "",
        generators: Mapping[str, int] | None = None,
    ):
        n = len(table)
        if n == 0:
            raise GroupError("a group needs at least one element")
        rows = tuple(tuple(int(x) for x in row) for row in table)
        for row in rows:
            if len(row) != n:
                raise GroupError("table is not square")
            if any(x < 0 or x >= n for x in row):
                raise GroupError("table entry out of range")
        full = set(range(n))
        for g in range(n):
            if rows[0][g] != g or rows[g][0] != g:
                raise GroupError("element 0 is not the identity")
            if set(rows[g]) != full:
                raise GroupError(f"row {g} is not a permutation")
            if {rows[h][g] for h in range(n)} != full:
                raise GroupError(f"column {g} is not a permutation")
        for a in range(n):
            ra = rows[a]
            for b in range(n):
                ab = ra[b]
                rab, rb = rows[ab], rows[b]
                for c in range(n):
                    if rab[c] != ra[rb[c]]:
                        raise GroupError(f"not associative at ({a}, {b}, {c})")
        self.order = n
        self.table = rows
        self.identity = 0
        self.name = name or f"G{n}"
        self.generators = dict(generators or {})
        self._inv = tuple(rows[g].index(0) for g in range(n))

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"

    def __len__(self) -> int:
        return self.order

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def prod(self, *elems: int) -> int:
        out = 0
        for e in elems:
            out = self.table[out][e]
        return out

    def inv(self, a: int) -> int:
        return self._inv[a]

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = self._inv[g], -k
        out = 0
        for _ in range(k):
            out = self.table[out][g]
        return out

    def conj(self, h: int, g: int) -> int:
        """``g^-1 h g``."""
        return self.table[self.table[self._inv[g]][h]][g]

    def commutator(self, x: int, y: int) -> int:
        """``x^-1 y^-1 x y``."""
        t = self.table
        return t[t[t[self._inv[x]][self._inv[y]]][x]][y]

    @cached_property
    def orders(self) -> tuple[int, ...]:
        out = []
        for g in range(self.order):
            k, x = 1, g
            while x != 0:
                x = self.table[x][g]
                k += 1
            out.append(k)
        return tuple(out)

    @cached_property
    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    def involutions(self) -> list[int]:
        return [g for g in range(self.order) if self.orders[g] == 2]

    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.order)))

    def trivial(self) -> "Subgroup":
        return Subgroup(self, (0,))


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of ``parent``, stored as a sorted tuple of element indices."""

    parent: FiniteGroup = field(compare=False, repr=False)
    elements: tuple[int, ...]

    def __post_init__(self):
        els = tuple(sorted(set(self.elements)))
        object.__setattr__(self, "elements", els)
        G = self.parent
        s = set(els)
        if 0 not in s:
            raise GroupError("subgroup must contain the identity")
        for a in els:
            if G.inv(a) not in s:
                raise GroupError("subset not closed under inverses")
            for b in els:
                if G.mul(a, b) not in s:
                    raise GroupError("subset not closed under products")
        if G.order % len(els):
            raise GroupError("subgroup order does not divide group order")

    @cached_property
    def members(self) -> frozenset[int]:
        return frozenset(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: int) -> bool:
        return g in self.members

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def is_trivial(self) -> bool:
        return len(self.elements) == 1

    def left_coset(self, g: int) -> frozenset[int]:
        row = self.parent.table[g]
        return frozenset(row[h] for h in self.elements)

    def product_set(self, g: int) -> frozenset[int]:
        """The right coset ``H g``."""
        t = self.parent.table
        return frozenset(t[h][g] for h in self.elements)


# ---------------------------------------------------------------- constructors


def _from_mul(n: int, mul: Callable[[int, int], int], name: str, gens: Mapping[str, int]) -> FiniteGroup:
    return FiniteGroup([[mul(a, b) for b in range(n)] for a in range(n)], name, gens)


def cyclic(n: int) -> FiniteGroup:
    """Z_n with ``k`` standing for ``a^k``."""
    if n < 1:
        raise GroupError("cyclic(n) needs n >= 1")
    return _from_mul(n, lambda a, b: (a + b) % n, f"Z{n}", {"a": 1 % n} if n > 1 else {})


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n: ``k < n`` is ``r^k`` and ``n + k`` is ``s r^k``."""
    if n < 1:
        raise GroupError("dihedral(n) needs n >= 1")

    def mul(a: int, b: int) -> int:
        fa, ia = divmod(a, n)
        fb, ib = divmod(b, n)
        # s r^i = r^-i s
        i = (-ia if fb else ia) + ib
        return ((fa + fb) % 2) * n + i % n

    return _from_mul(2 * n, mul, f"D{n}", {"r": 1 % n, "s": n})


def dicyclic(n: int) -> FiniteGroup:
    """Dicyclic group of order 4n: ``k < 2n`` is ``a^k``, ``2n + k`` is ``x a^k``.

    Relations ``a^(2n) = 1``, ``x^2 = a^n``, ``x^-1 a x = a^-1``.
    """
    if n < 1:
        raise GroupError("dicyclic(n) needs n >= 1")
    m = 2 * n

    def mul(a: int, b: int) -> int:
        ea, ia = divmod(a, m)
        eb, ib = divmod(b, m)
        # x a^i x a^j = x x a^-i a^j
        i = (-ia if eb else ia) + ib
        e = ea + eb
        if e == 2:
            i += n
            e = 0
        return e * m + i % m

    return _from_mul(2 * m, mul, f"Dic{n}", {"a": 1, "x": m})


def _merge_gens(left: Mapping[str, int], right: Mapping[str, int], lmap, rmap) -> dict[str, int]:
    out = {k: lmap(v) for k, v in left.items()}
    for k, v in right.items():
        key = k
        while key in out:
            key += "'"
        out[key] = rmap(v)
    return out


def direct_product(A: FiniteGroup, B: FiniteGroup) -> FiniteGroup:
    """``A x B`` with ``(a, b)`` stored at ``a * |B| + b``."""
    nb = B.order

    def mul(x: int, y: int) -> int:
        a1, b1 = divmod(x, nb)
        a2, b2 = divmod(y, nb)
        return A.mul(a1, a2) * nb + B.mul(b1, b2)

    gens = _merge_gens(A.generators, B.generators, lambda v: v * nb, lambda v: v)
    return _from_mul(A.order * nb, mul, f"{A.name}x{B.name}", gens)


def _check_automorphism(N: FiniteGroup, perm: Sequence[int]) -> None:
    n = N.order
    if sorted(perm) != list(range(n)):
        raise GroupError("action is not a permutation of the normal factor")
    if perm[0] != 0:
        raise GroupError("action does not fix the identity")
    for a in range(n):
        for b in range(n):
            if perm[N.mul(a, b)] != N.mul(perm[a], perm[b]):
                raise GroupError("action is not a homomorphism")


def semidirect_product(N: FiniteGroup, H: FiniteGroup, action: Sequence[int]) -> FiniteGroup:
    """``N x| H`` for cyclic ``H`` generated by its element ``1``.

    ``action`` is the automorphism of ``N`` by which that generator acts, as
    a permutation of ``N``'s element indices: ``h n h^-1 = action[n]``.
    The pair ``(n, h)`` is stored at ``n + |N| * h``.
    """
    action = [int(x) for x in action]
    if len(action) != N.order:
        raise GroupError("action length does not match normal factor")
    _check_automorphism(N, action)
    k = H.order
    if k > 1 and H.orders[1] != k:
        raise GroupError("acting group must be cyclic and generated by element 1")
    expo = {0: 0}
    x = 0
    for j in range(1, k):
        x = H.mul(x, 1)
        expo[x] = j
    powers = [list(range(N.order))]
    for _ in range(1, k + 1):
        prev = powers[-1]
        powers.append([action[prev[i]] for i in range(N.order)])
    if powers[k] != powers[0]:
        raise GroupError("action order does not divide the acting group order")
    nn = N.order

    def mul(x: int, y: int) -> int:
        h1, n1 = divmod(x, nn)
        h2, n2 = divmod(y, nn)
        return H.mul(h1, h2) * nn + N.mul(n1, powers[expo[h1]][n2])

    gens = _merge_gens(N.generators, H.generators, lambda v: v, lambda v: v * nn)
    return _from_mul(nn * k, mul, f"{N.name}:{H.name}", gens)


def build_group(spec) -> FiniteGroup:
    """Build a group from a tagged mapping.

    Accepted kinds: ``table``, ``cyclic``, ``dihedral``, ``dicyclic``,
    ``product`` (``left``/``right``) and ``semidirect``
    (``normal``/``acting``/``action``).
    """
    if isinstance(spec, FiniteGroup):
        return spec
    if not isinstance(spec, Mapping) or "kind" not in spec:
        raise GroupError("group spec must be a mapping with a 'kind'")
    kind = spec["kind"]
    try:
        if kind == "table":
            return FiniteGroup(spec["table"], spec.get("name", ""))
        if kind == "cyclic":
            return cyclic(int(spec["n"]))
        if kind == "dihedral":
            return dihedral(int(spec["n"]))
        if kind == "dicyclic":
            return dicyclic(int(spec["n"]))
        if kind in ("product", "direct_product"):
            return direct_product(build_group(spec["left"]), build_group(spec["right"]))
        if kind in ("semidirect", "semidirect_product"):
            return semidirect_product(build_group(spec["normal"]), build_group(spec["acting"]), spec["action"])
    except KeyError as exc:
        raise GroupError(f"group spec of kind {kind!r} is missing {exc}") from None
    raise GroupError(f"unknown group kind {kind!r}")


# ------------------------------------------------------------------ operations


def element_order(G: FiniteGroup, g: int) -> int:
    if not 0 <= g < G.order:
        raise GroupError(f"element {g} out of range")
    return G.orders[g]


def _closure(G: FiniteGroup, gens: Iterable[int]) -> list[int]:
    gens = sorted(set(gens) - {0})
    seen = {0}
    frontier = [0]
    t = G.table
    while frontier:
        nxt = []
        for x in frontier:
            row = t[x]
            for s in gens:
                y = row[s]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)


def generated_subgroup(G: FiniteGroup, S: Iterable[int]) -> Subgroup:
    return Subgroup(G, tuple(_closure(G, S)))


def derived_subgroup(G: FiniteGroup) -> Subgroup:
    comms = {G.commutator(x, y) for x in range(G.order) for y in range(G.order)}
    return generated_subgroup(G, comms)


def is_normal(G: FiniteGroup, H: Subgroup) -> bool:
    s = H.members
    return all(G.conj(h, g) in s for g in range(G.order) for h in H.elements)


def centralizer(G: FiniteGroup, H: Subgroup) -> Subgroup:
    t = G.table
    els = [g for g in range(G.order) if all(t[g][h] == t[h][g] for h in H.elements)]
    return Subgroup(G, tuple(els))


def normalizer(G: FiniteGroup, H: Subgroup) -> Subgroup:
    s = H.members
    els = [g for g in range(G.order) if all(G.conj(h, g) in s for h in H.elements)]
    return Subgroup(G, tuple(els))


def normal_closure(G: FiniteGroup, S: Iterable[int]) -> Subgroup:
    conjugates = {G.conj(s, g) for s in S for g in range(G.order)}
    return generated_subgroup(G, conjugates)


def quotient_group(G: FiniteGroup, N: Subgroup) -> tuple[FiniteGroup, list[int]]:
    """``G/N`` and the projection ``G -> G/N`` as a list.

    Cosets are numbered by their least member, so ``N`` itself is ``0``.
    """
    if not is_normal(G, N):
        raise GroupError("quotient by a non-normal subgroup")
    proj = [-1] * G.order
    reps = []
    for g in range(G.order):
        if proj[g] < 0:
            idx = len(reps)
            reps.append(g)
            for x in N.left_coset(g):
                proj[x] = idx
    k = len(reps)
    table = [[proj[G.mul(reps[i], reps[j])] for j in range(k)] for i in range(k)]
    gens = {}
    for name, v in G.generators.items():
        if proj[v] != 0 and proj[v] not in gens.values():
            gens[name] = proj[v]
    Q = FiniteGroup(table, f"{G.name}/{len(N)}", gens)
    return Q, proj


def _sort_key(H: Subgroup) -> tuple:
    return (len(H), H.elements)


def minimal_normal_in(G: FiniteGroup, K: Subgroup) -> list[Subgroup]:
    """Minimal normal subgroups of ``G`` that lie inside ``K``.

    Every minimal normal subgroup is the normal closure of any of its
    non-identity elements, so it suffices to take the inclusion-minimal
    normal closures of elements of ``K``.
    """
    cands: dict[tuple[int, ...], Subgroup] = {}
    for g in K.elements:
        if g == 0:
            continue
        C = normal_closure(G, [g])
        if C.members <= K.members:
            cands[C.elements] = C
    out = [C for C in cands.values() if not any(D.members < C.members for D in cands.values())]
    return sorted(out, key=_sort_key)


def chief_series(G: FiniteGroup) -> list[Subgroup]:
    """A chief series ``1 = G_0 < ... < G_k = G`` of normal subgroups.

    At each step the least minimal normal subgroup of the current quotient is
    pulled back.
    """
    series = [G.trivial()]
    current = G.trivial()
    while len(current) < G.order:
        Q, proj = quotient_group(G, current)
        M = minimal_normal_in(Q, Q.whole())[0]
        pre = tuple(g for g in range(G.order) if proj[g] in M.members)
        current = Subgroup(G, pre)
        series.append(current)
    return series


def is_supersolvable(G: FiniteGroup) -> bool:
    series = chief_series(G)
    for lo, hi in zip(series, series[1:]):
        q = len(hi) // len(lo)
        if prime_factors(q) != [q]:
            return False
    return True


def sylow_subgroup(G: FiniteGroup, p: int) -> Subgroup:
    """A Sylow ``p``-subgroup built by greedy normaliser extension."""
    target = 1
    n = G.order
    while n % p == 0:
        n //= p
        target *= p
    P = G.trivial()

    def is_p_power(k: int) -> bool:
        while k % p == 0:
            k //= p
        return k == 1

    while len(P) < target:
        Nm = normalizer(G, P)
        g = next(x for x in Nm.elements if x not in P.members and is_p_power(G.orders[x]))
        P = generated_subgroup(G, list(P.elements) + [g])
    return P


def has_noncyclic_sylow2(G: FiniteGroup) -> bool:
    P = sylow_subgroup(G, 2)
    return not any(G.orders[g] == len(P) for g in P.elements)


def is_nilpotent(G: FiniteGroup) -> bool:
    return all(is_normal(G, sylow_subgroup(G, p)) for p in prime_factors(G.order))


def has_squarefree_derived(G: FiniteGroup) -> bool:
    n = len(derived_subgroup(G))
    return all(n % (p * p) for p in prime_factors(n))


def left_transversal(G: FiniteGroup, H: Subgroup, C: Subgroup | Iterable[int] | None = None) -> list[int]:
    """One representative per left coset ``gH`` with every element of ``C`` used.

    ``C`` must meet ``H`` trivially. Members of ``C`` come first (in increasing
    order), then the least element of every coset not yet represented.
    """
    cset = sorted(set(C.elements if isinstance(C, Subgroup) else (C or [0])))
    seen: set[int] = set()
    reps = []
    for c in cset:
        coset = H.left_coset(c)
        if coset & seen:
            raise GroupError("C meets H nontrivially")
        seen |= coset
        reps.append(c)
    for g in range(G.order):
        if g not in seen:
            seen |= H.left_coset(g)
            reps.append(g)
    return reps


def all_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Every subgroup, by closure over growing generating sets.

    Exponential in the worst case; intended for small test oracles.
    """
    found: dict[tuple[int, ...], Subgroup] = {(0,): G.trivial()}
    frontier = [G.trivial()]
    while frontier:
        nxt = []
        for H in frontier:
            for g in range(G.order):
                if g in H.members:
                    continue
                K = generated_subgroup(G, list(H.elements) + [g])
                if K.elements not in found:
                    found[K.elements] = K
                    nxt.append(K)
        frontier = nxt
    return sorted(found.values(), key=_sort_key)


def isomorphic(A: FiniteGroup, B: FiniteGroup) -> bool:
    """Brute-force isomorphism test over order-preserving bijections.

    Only usable for very small groups; the search extends a partial map along
    a generating sequence of ``A``.
    """
    if A.order != B.order or sorted(A.orders) != sorted(B.orders):
        return False
    gens: list[int] = []
    H = [0]
    for g in range(A.order):
        if g not in H:
            gens.append(g)
            H = _closure(A, gens)
    cands = [[y for y in range(B.order) if B.orders[y] == A.orders[g]] for g in gens]

    def extend(images: list[int]) -> bool:
        if len(images) < len(gens):
            return any(extend(images + [y]) for y in cands[len(images)])
        phi = {0: 0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g, y in zip(gens, images):
                    ax, bx = A.mul(x, g), B.mul(phi[x], y)
                    if ax in phi:
                        if phi[ax] != bx:
                            return False
                    else:
                        phi[ax] = bx
                        nxt.append(ax)
            frontier = nxt
        if len(set(phi.values())) != A.order:
            return False
        return all(phi[A.mul(a, b)] == B.mul(phi[a], phi[b]) for a in range(A.order) for b in range(A.order))

    return extend([])


def alternating4() -> FiniteGroup:
    """A_4 as a table over even permutations of four points."""
    return _perm_group([p for p in permutations(range(4)) if _parity(p) == 0], "A4")


def symmetric4() -> FiniteGroup:
    return _perm_group(list(permutations(range(4))), "S4")


def symmetric3() -> FiniteGroup:
    return _perm_group(list(permutations(range(3))), "S3")


def _parity(p: Sequence[int]) -> int:
    inv = sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
    return inv % 2


def _perm_group(perms: list[tuple[int, ...]], name: str) -> FiniteGroup:
    perms = sorted(perms)
    index = {p: i for i, p in enumerate(perms)}

    def compose(a, b):
        # apply a then b
        return tuple(b[a[i]] for i in range(len(a)))

    table = [[index[compose(a, b)] for b in perms] for a in perms]
    return FiniteGroup(table, name)
