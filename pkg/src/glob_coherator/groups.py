"""Finite groups as multiplication tables, isomorphism search and a small catalogue."""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Dict, Optional, Tuple

# number of groups of each order up to isomorphism, orders 1..20
KNOWN_COUNTS = {1: 1, 2: 1, 3: 1, 4: 2, 5: 1, 6: 2, 7: 1, 8: 5, 9: 2, 10: 2,
                11: 1, 12: 5, 13: 1, 14: 2, 15: 1, 16: 14, 17: 1, 18: 5, 19: 1, 20: 5}


class GroupError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FinGroup:
    names: Tuple[str, ...]
    mul: Tuple[Tuple[int, ...], ...]
    identity: int
    inverse: Tuple[int, ...]
    name: str = ""

    @property
    def order(self):
        return len(self.names)

    def __len__(self):
        return len(self.names)

    def __repr__(self):
        return f"<group {self.name or '?'} of order {self.order}>"

    def m(self, a, b):
        return self.mul[a][b]

    def power(self, a, k):
        r = self.identity
        for _ in range(k):
            r = self.mul[r][a]
        return r

    def element_order(self, a):
        k, x = 1, a
        while x != self.identity:
            x = self.mul[x][a]
            k += 1
        return k

    def is_abelian(self):
        n = self.order
        return all(self.mul[a][b] == self.mul[b][a] for a in range(n) for b in range(a + 1, n))

    def center_size(self):
        n = self.order
        return sum(all(self.mul[a][b] == self.mul[b][a] for b in range(n)) for a in range(n))

    def invariants(self):
        orders = sorted(self.element_order(a) for a in range(self.order))
        return (self.order, self.is_abelian(), tuple(orders), self.center_size())

    def generators(self):
        """A small generating set, chosen greedily by descending element order."""
        order = sorted(range(self.order), key=lambda a: (-self.element_order(a), a))
        gens, span = [], {self.identity}
        for a in order:
            if a in span:
                continue
            gens.append(a)
            span = self.closure(gens)
            if len(span) == self.order:
                break
        return gens

    def closure(self, gens):
        seen = {self.identity}
        todo = [self.identity]
        while todo:
            x = todo.pop()
            for g in gens:
                y = self.mul[x][g]
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return seen

    def table_dict(self):
        return {(self.names[a], self.names[b]): self.names[self.mul[a][b]]
                for a in range(self.order) for b in range(self.order)}


def validate_group(G: FinGroup):
    n = G.order
    rng = range(n)
    for a in rng:
        if G.mul[G.identity][a] != a or G.mul[a][G.identity] != a:
            raise GroupError(f"{G.names[G.identity]} is not an identity at {G.names[a]}")
        if G.mul[a][G.inverse[a]] != G.identity or G.mul[G.inverse[a]][a] != G.identity:
            raise GroupError(f"bad inverse for {G.names[a]}")
    for a in rng:
        for b in rng:
            ab = G.mul[a][b]
            for c in rng:
                if G.mul[ab][c] != G.mul[a][G.mul[b][c]]:
                    raise GroupError(f"not associative at {(G.names[a], G.names[b], G.names[c])}")
    return G


def from_table(names, mul, name=""):
    n = len(names)
    ident = next(e for e in range(n) if all(mul[e][a] == a for a in range(n)))
    inv = tuple(next(b for b in range(n) if mul[a][b] == ident) for a in range(n))
    return FinGroup(tuple(names), tuple(tuple(r) for r in mul), ident, inv, name)


def from_elements(elems, op, name="", show=str):
    """Group from a list of hashable elements closed under ``op``."""
    index = {e: i for i, e in enumerate(elems)}
    mul = [[index[op(a, b)] for b in elems] for a in elems]
    return from_table([show(e) for e in elems], mul, name)


def cyclic(n):
    return from_elements(list(range(n)), lambda a, b: (a + b) % n, f"Z{n}", lambda a: f"g{a}" if a else "e")


def trivial():
    return cyclic(1)


def direct_product(G, H):
    elems = [(a, b) for a in range(G.order) for b in range(H.order)]
    return from_elements(elems, lambda x, y: (G.mul[x[0]][y[0]], H.mul[x[1]][y[1]]),
                         f"{G.name}x{H.name}", lambda x: f"({G.names[x[0]]},{H.names[x[1]]})")


def dicyclic(m):
    """Dic_m of order 4m: <a, x | a^{2m}, x^2 = a^m, x a x^-1 = a^-1>."""
    n = 2 * m
    elems = [(k, s) for s in (0, 1) for k in range(n)]

    def op(p, q):
        (k1, s1), (k2, s2) = p, q
        if s1 == 0:
            return ((k1 + k2) % n, s2)
        if s2 == 0:
            return ((k1 - k2) % n, 1)
        return ((k1 - k2 + m) % n, 0)

    return from_elements(elems, op, f"Dic{m}", lambda p: f"a{p[0]}x{p[1]}")


def automorphism_group(N):
    """Aut(N) as a group of permutations (tuples), found from images of generators."""
    gens = N.generators()
    # word for every element in the generators (BFS)
    words = {N.identity: ()}
    todo = [N.identity]
    while todo:
        x = todo.pop(0)
        for i, g in enumerate(gens):
            y = N.mul[x][g]
            if y not in words:
                words[y] = words[x] + (i,)
                todo.append(y)
    auts = []
    cands = [[b for b in range(N.order) if N.element_order(b) == N.element_order(g)] for g in gens]
    for imgs in product(*cands):
        perm = [None] * N.order
        for x, w in words.items():
            r = N.identity
            for i in w:
                r = N.mul[r][imgs[i]]
            perm[x] = r
        if len(set(perm)) != N.order:
            continue
        if all(perm[N.mul[a][b]] == N.mul[perm[a]][perm[b]] for a in range(N.order) for b in range(N.order)):
            auts.append(tuple(perm))
    ident = tuple(range(N.order))
    auts.sort(key=lambda p: (p != ident, p))
    return from_elements(auts, lambda p, q: tuple(q[p[x]] for x in range(len(p))), f"Aut({N.name})",
                         lambda p: "[" + ",".join(map(str, p)) + "]"), auts


def homomorphisms(H, K):
    """All homomorphisms H -> K, as tuples of images."""
    gens = H.generators()
    out = []
    cands = [[b for b in range(K.order) if H.element_order(g) % K.element_order(b) == 0] for g in gens]
    for imgs in product(*cands):
        f = _extend(H, K, gens, imgs)
        if f is not None:
            out.append(f)
    return out


def _extend(G, H, gens, imgs):
    """The homomorphism G -> H with gens -> imgs, or None if there is none."""
    f = {G.identity: H.identity}
    todo = [G.identity]
    while todo:
        x = todo.pop()
        for g, h in zip(gens, imgs):
            y = G.mul[x][g]
            v = H.mul[f[x]][h]
            if y in f:
                if f[y] != v:
                    return None
            else:
                f[y] = v
                todo.append(y)
    if len(f) != G.order:
        return None
    return tuple(f[x] for x in range(G.order))


def semidirect(N, H, phi, aut_perms):
    """N x| H with h acting on N through the permutation aut_perms[phi[h]]."""
    elems = [(n, h) for h in range(H.order) for n in range(N.order)]

    def op(x, y):
        (n1, h1), (n2, h2) = x, y
        act = aut_perms[phi[h1]]
        return (N.mul[n1][act[n2]], H.mul[h1][h2])

    return from_elements(elems, op, f"{N.name}:{H.name}", lambda x: f"({N.names[x[0]]};{H.names[x[1]]})")


def group_iso(G: FinGroup, H: FinGroup) -> Optional[Dict[str, str]]:
    """An isomorphism G -> H as a name map, or None.

    Exhaustive over images of a generating set of G, pruned by element
    orders; complete for any finite groups (practical up to order 64).
    """
    if G.order != H.order or G.invariants() != H.invariants():
        return None
    gens = G.generators()
    cands = [[b for b in range(H.order) if H.element_order(b) == G.element_order(g)] for g in gens]
    for imgs in product(*cands):
        if len(set(imgs)) != len(imgs):
            continue
        f = _extend(G, H, gens, imgs)
        if f is not None and len(set(f)) == G.order:
            return {G.names[a]: H.names[f[a]] for a in range(G.order)}
    return None


def is_isomorphic(G, H):
    return group_iso(G, H) is not None


@lru_cache(maxsize=None)
def catalogue(max_order=20):
    """Groups of order <= max_order up to isomorphism, built from cyclic and dicyclic
    groups by direct and semidirect products and deduplicated with group_iso."""
    found: Dict[int, list] = {}

    def add(G):
        if G.order > max_order:
            return False
        for K in found.setdefault(G.order, []):
            if group_iso(G, K) is not None:
                return False
        found[G.order].append(G)
        return True

    for n in range(1, max_order + 1):
        add(cyclic(n))
    m = 2
    while 4 * m <= max_order:
        add(dicyclic(m))
        m += 1
    changed = True
    while changed:
        changed = False
        groups = [G for n in sorted(found) for G in found[n]]
        for A in groups:
            for B in groups:
                if A.order < 2 or B.order < 2 or A.order * B.order > max_order:
                    continue
                if A.order <= B.order:
                    changed |= add(direct_product(A, B))
                Aut, perms = _aut(A)
                for phi in homomorphisms(B, Aut):
                    if all(x == Aut.identity for x in phi):
                        continue
                    changed |= add(semidirect(A, B, phi, perms))
    return {n: tuple(sorted(found.get(n, []), key=lambda G: (not G.is_abelian(), G.invariants(), G.name)))
            for n in range(1, max_order + 1)}


_AUT = {}


def _aut(N):
    if id(N) not in _AUT:
        _AUT[id(N)] = (N, automorphism_group(N))
    return _AUT[id(N)][1]
