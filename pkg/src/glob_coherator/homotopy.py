"""Homotopy relation, path components, the groupoids of k-cells up to homotopy,
homotopy groups at identity basepoints, and weak equivalences."""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .groups import FinGroup, from_table, group_iso, is_isomorphic  # noqa: F401  (re-exported)
from .models import (FinGroupoid, FinModel, GroupoidMap, LevelMismatch, ModelError, ModelMap, NotAModelMap,
                     PresGroupoid, PresMap, Word, _homotopy_classes, functor_to_model_map, groupoid_to_model)


class DimOutOfRange(ModelError):
    pass


class MissingOperation(ModelError):
    pass


def _as_model(M):
    if isinstance(M, FinGroupoid):
        return groupoid_to_model(M)
    return M


def homotopic(M, k, u, v) -> bool:
    M = _as_model(M)
    if not 0 <= k < M.level:
        raise DimOutOfRange(f"homotopy of {k}-cells needs 0 <= k < {M.level}")
    X = M.X
    u = X.find(u) if isinstance(u, str) else u
    v = X.find(v) if isinstance(v, str) else v
    return any(X.source(a) == u and X.target(a) == v for a in M.cells(k + 1))


def pi0(M):
    """Path components as sorted tuples of object labels."""
    if isinstance(M, PresGroupoid):
        return [tuple(c) for c in M.components()]
    M = _as_model(M)
    X = M.X
    if M.level == 0:
        return [(X.label(c),) for c in M.cells(0)]
    cls = _homotopy_classes(M, 0)
    groups = {}
    for c in M.cells(0):
        groups.setdefault(cls[c], []).append(X.label(c))
    return sorted(tuple(g) for g in groups.values())


def omega_k(M, k) -> FinGroupoid:
    """Objects the (k-1)-cells, morphisms the k-cells up to homotopy."""
    M = _as_model(M)
    if not 1 <= k < M.level:
        raise DimOutOfRange(f"omega_k needs 1 <= k < {M.level}")
    X = M.X
    cls = _homotopy_classes(M, k)
    reps = sorted(set(cls.values()))
    L = X.label
    c, z, i = M.op(f"c{k}_{k - 1}"), M.op(f"z{k}"), M.op(f"i{k}")
    mors = tuple((L(r), L(X.source(r)), L(X.target(r))) for r in reps)
    comp = {}
    for a in reps:
        for b in reps:
            if X.target(a) == X.source(b):
                comp[(L(a), L(b))] = L(cls[c(a, b)])
    objs = tuple(L(x) for x in M.cells(k - 1))
    ident = {L(x): L(cls[z(x)]) for x in M.cells(k - 1)}
    inv = {L(a): L(cls[i(a)]) for a in reps}
    return FinGroupoid(objs, mors, comp, ident, inv, f"omega{k}")


def basepoint(M, k, x):
    """Z^{k-1}(x): the iterated identity on a 0-cell, as a (k-1)-cell."""
    b = x
    for d in range(1, k):
        name = f"z{d}"
        if name not in M.ops:
            raise MissingOperation(f"model has no identity operation {name}")
        b = M.ops[name].table[(b,)]
    return b


@dataclass(frozen=True, eq=False)
class FreeGroupInfo:
    """A free group given by a basis of reduced loops."""

    rank: int
    basis: Tuple[Tuple[str, Word], ...]

    @property
    def is_trivial(self):
        return self.rank == 0

    def abelianization(self):
        return {"rank": self.rank, "torsion": []}

    def describe(self):
        if self.rank == 0:
            return "trivial"
        if self.rank == 1:
            return "infinite cyclic <" + str(self.basis[0][1]) + ">"
        return f"free of rank {self.rank} on " + ", ".join(str(w) for _, w in self.basis)


def pi_k(M, k, x):
    """The k-th homotopy group at x.  Finite models give a FinGroup; free
    presentations give a FreeGroupInfo for k = 1."""
    if isinstance(M, PresGroupoid):
        if k != 1:
            raise DimOutOfRange("a groupoid has homotopy only in degree 1")
        return FreeGroupInfo(M.pi1_rank(x), tuple(M.free_basis(x)))
    M = _as_model(M)
    if not 1 <= k <= M.level:
        raise DimOutOfRange(f"pi_k needs 1 <= k <= {M.level}")
    X = M.X
    x = X.find(x) if isinstance(x, str) else x
    b = basepoint(M, k, x)
    c = M.op(f"c{k}_{k - 1}")
    if k < M.level:
        cls = _homotopy_classes(M, k)
        elems = sorted({cls[a] for a in M.cells(k) if X.source(a) == b and X.target(a) == b})

        def norm(a):
            return cls[a]
    else:
        elems = [a for a in M.cells(k) if X.source(a) == b and X.target(a) == b]

        def norm(a):
            return a
    idx = {a: n for n, a in enumerate(elems)}
    mul = [[idx[norm(c.table[(a, e)])] for e in elems] for a in elems]
    return from_table([X.label(a) for a in elems], mul, f"pi{k}({X.label(x)})")


def eckmann_hilton_check(M, x):
    """Commutativity of pi_2 at x.  Reads the raw tables so it also runs on broken models."""
    M = _as_model(M)
    if M.level < 2:
        raise DimOutOfRange("pi_2 needs a model of level at least 2")
    X = M.X
    x = X.find(x) if isinstance(x, str) else x
    b = basepoint(M, 2, x)
    c = M.op("c2_1")
    if M.level > 2:
        cls = _homotopy_classes(M, 2)
    else:
        cls = {a: a for a in M.cells(2)}
    elems = sorted({cls[a] for a in M.cells(2) if X.source(a) == b and X.target(a) == b})
    for a in elems:
        for e in elems:
            if cls[c.table[(a, e)]] != cls[c.table[(e, a)]]:
                return {"abelian": False, "basepoint": X.label(x), "witness": [X.label(a), X.label(e)],
                        "order": len(elems)}
    return {"abelian": True, "basepoint": X.label(x), "witness": None, "order": len(elems)}


# -- weak equivalences -----------------------------------------------------------------


@dataclass
class WEReport:
    verdict: str  # "WeakEquivalence" | "Not" | "Unknown"
    evidence: Dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.verdict == "WeakEquivalence"

    def to_dict(self):
        return {"verdict": self.verdict, "evidence": self.evidence}


def is_weak_equivalence(f) -> WEReport:
    if isinstance(f, GroupoidMap):
        f.check()
        f = functor_to_model_map(f)
    if isinstance(f, PresMap):
        return _we_free(f)
    if not isinstance(f, ModelMap):
        raise NotAModelMap(f"not a model map: {type(f).__name__}")
    if f.dom.level != f.cod.level:
        raise LevelMismatch(f"levels {f.dom.level} and {f.cod.level} differ")
    f.check()
    A, B = f.dom, f.cod
    ev = {}
    # pi_0
    ca, cb = pi0(A), pi0(B)
    where_b = {x: i for i, comp in enumerate(cb) for x in comp}
    img = {comp: cb[where_b[B.label(f(A.find(comp[0])))]] for comp in ca}
    table = {comp[0]: img[comp][0] for comp in ca}
    ev["pi0"] = {"map": table, "dom": len(ca), "cod": len(cb)}
    if len(set(img.values())) != len(ca) or len(ca) != len(cb):
        ev["failure"] = "pi0 is not a bijection"
        return WEReport("Not", ev)
    ev["pi_k"] = []
    for x in A.cells(0):
        for k in range(1, A.level + 1):
            G, H = pi_k(A, k, x), pi_k(B, k, f(x))
            hom = _induced(f, k, x, G, H)
            row = {"basepoint": A.label(x), "k": k, "dom_order": G.order, "cod_order": H.order, "map": hom}
            ev["pi_k"].append(row)
            if len(set(hom.values())) != G.order or G.order != H.order:
                ev["failure"] = f"pi_{k} at {A.label(x)} is not an isomorphism"
                return WEReport("Not", ev)
    return WEReport("WeakEquivalence", ev)


def _induced(f, k, x, G, H):
    """Induced map pi_k(A, x) -> pi_k(B, f x) on element labels."""
    A, B = f.dom, f.cod
    if k < B.level:
        cls = _homotopy_classes(B, k)
    else:
        cls = {a: a for a in B.cells(k)}
    out = {}
    for name in G.names:
        out[name] = B.label(cls[f(A.find(name))])
    assert set(out.values()) <= set(H.names)
    return out


def _we_free(f: PresMap) -> WEReport:
    P, Q = f.dom, f.cod
    ev = {}
    cp, cq = P.components(), Q.components()
    where = {x: i for i, c in enumerate(cq) for x in c}
    img = {tuple(c): where[f.obj[c[0]]] for c in cp}
    ev["pi0"] = {"dom": len(cp), "cod": len(cq), "map": {c[0]: cq[i][0] for c, i in img.items()}}
    if len(set(img.values())) != len(cp) or len(cp) != len(cq):
        ev["failure"] = "pi0 is not a bijection"
        return WEReport("Not", ev)
    verdict = "WeakEquivalence"
    ev["pi_1"] = []
    for x in P.objects:
        y = f.obj[x]
        rp, rq = P.pi1_rank(x), Q.pi1_rank(y)
        row = {"basepoint": x, "dom_rank": rp, "cod_rank": rq}
        ev["pi_1"].append(row)
        if rp != rq:
            ev["failure"] = f"pi_1 at {x}: free of rank {rp} vs rank {rq}"
            return WEReport("Not", ev)
        if rp == 0:
            continue
        # the induced map on abelianizations Z^r -> Z^r
        mat = np.zeros((rq, rp), dtype=np.int64)
        images = []
        for j, (_, loop) in enumerate(P.free_basis(x)):
            w = f.word(loop)
            images.append(w)
            mat[:, j] = Q.abelian_coords(y, w)
        det = int(round(np.linalg.det(mat))) if rp else 1
        row["abelianization_det"] = det
        if abs(det) != 1:
            ev["failure"] = f"pi_1 at {x}: abelianized map has determinant {det}"
            return WEReport("Not", ev)
        # a basis sent to a basis up to inverses is an isomorphism
        qb = {}
        for j, (_, w) in enumerate(Q.free_basis(y)):
            qb[w.letters] = qb[Q.inverse(w).letters] = j
        hit = {qb.get(w.letters) for w in images}
        if None not in hit and len(hit) == rp:
            row["basis_to_basis"] = True
        else:
            verdict = "Unknown"
            row["basis_to_basis"] = False
    return WEReport(verdict, ev)
