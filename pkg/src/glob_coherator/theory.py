"""Finitely presented globular theories over Theta_0^op.

A theory is Theta_0^op plus lift generators added in layers.  A lift
``delta_{f,g} : p -> k+1`` fills an admissible pair ``f, g : p -> k`` and comes
with the rewrite rules ``s . delta = f`` and ``t . delta = g``.  Quotient
stages additionally identify admissible pairs at one top height.

Terms into a globe normalize to trees: a leaf is a Base cell of the domain
realization, an inner node is ``comp(gen(delta), tuple(args...))``.
"""

import random
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

from . import theta0
from .globset import enumerate_maps
from .theta0 import Table, Theta0Morphism, all_tables, globe, realization


class TheoryError(ValueError):
    pass


class IllTyped(TheoryError):
    pass


class NotAdmissible(TheoryError):
    pass


class BudgetTooSmall(TheoryError):
    pass


@dataclass(frozen=True)
class Budget:
    max_table_len: int = 5
    max_entry: int = 2
    max_depth: int = 3
    pair_depth: int = 1
    max_model: int = 4
    model_samples: int = 48
    seed: int = 0

    def to_dict(self):
        return {
            "max_table_len": self.max_table_len,
            "max_entry": self.max_entry,
            "max_depth": self.max_depth,
            "pair_depth": self.pair_depth,
            "max_model": self.max_model,
            "model_samples": self.model_samples,
        }


# -- terms ----------------------------------------------------------------------


class Term:
    __slots__ = ()

    def __str__(self):
        return show(self)


def _cached_hash(cls):
    # Terms are deep and hashed often; keep the hash next to the fields.
    fields = cls.__dataclass_fields__

    def __hash__(self):
        h = self.__dict__.get("_h")
        if h is None:
            h = hash((cls.__name__,) + tuple(getattr(self, f) for f in fields))
            object.__setattr__(self, "_h", h)
        return h

    cls.__hash__ = __hash__
    return cls


@_cached_hash
@dataclass(frozen=True, eq=True)
class Base(Term):
    mor: Theta0Morphism


@_cached_hash
@dataclass(frozen=True, eq=True)
class Gen(Term):
    lift: str


@_cached_hash
@dataclass(frozen=True, eq=True)
class Comp(Term):
    outer: Term
    inner: Term


@_cached_hash
@dataclass(frozen=True, eq=True)
class Tup(Term):
    parts: Tuple[Term, ...]
    target: Table


@_cached_hash
@dataclass(frozen=True, eq=True)
class SrcPost(Term):
    term: Term


@_cached_hash
@dataclass(frozen=True, eq=True)
class TgtPost(Term):
    term: Term


_CELL_TERMS: Dict[tuple, Base] = {}


def cell_term(p: Table, cell) -> Base:
    key = (p, cell)
    t = _CELL_TERMS.get(key)
    if t is None:
        t = Base(theta0.cell_morphism(p, cell))
        _CELL_TERMS[key] = t
    return t


def base_cell(t: Base):
    return t.mor.cells[0]


def app(lift_id, args, dom: Table) -> Comp:
    return Comp(Gen(lift_id), Tup(tuple(args), dom))


def is_app(t):
    return isinstance(t, Comp) and isinstance(t.outer, Gen) and isinstance(t.inner, Tup)


def identity_args(p: Table):
    return tuple(cell_term(p, theta0.locate(p, i, "c", q)) for i, q in enumerate(p.peaks))


_ORIGIN: Dict[Table, dict] = {}


def cell_origin(p: Table):
    """cell of realize(p) -> (disk index, kind, dim) of its leftmost occurrence."""
    o = _ORIGIN.get(p)
    if o is None:
        X = realization(p)
        o = {}
        for c in X.cells():
            lab = X.label(c)
            o[c] = (int(lab.split("@")[1]), lab[0], c[0])
        _ORIGIN[p] = o
    return o


def term_depth(t) -> int:
    if isinstance(t, Base):
        return 0
    if isinstance(t, Gen):
        return 1
    if is_app(t):
        return 1 + max(term_depth(a) for a in t.inner.parts)
    if isinstance(t, Tup):
        return max(term_depth(a) for a in t.parts)
    if isinstance(t, Comp):
        return term_depth(t.outer) + term_depth(t.inner)
    return term_depth(t.term)


def show(t, ctx=None) -> str:
    if isinstance(t, Base):
        X = realization(t.mor.dom)
        if len(t.mor.cod) == 1:
            return f"base({X.label(t.mor.cells[0])})"
        return "base(" + str(t.mor.cod) + ":" + ",".join(X.label(c) for c in t.mor.cells) + ")"
    if isinstance(t, Gen):
        return f"gen({t.lift})"
    if isinstance(t, Comp):
        return f"comp({show(t.outer)}, {show(t.inner)})"
    if isinstance(t, Tup):
        return "tuple(" + ", ".join(show(a) for a in t.parts) + ")"
    if isinstance(t, SrcPost):
        return f"s({show(t.term)})"
    if isinstance(t, TgtPost):
        return f"t({show(t.term)})"
    raise TypeError(t)


# -- presentations --------------------------------------------------------------


@dataclass(frozen=True)
class LiftGenerator:
    id: str
    dom: Table
    k: int  # height of the filled pair; the lift lands in globe k+1
    f: Term
    g: Term
    layer: int
    stage: str = ""

    @property
    def cod(self):
        return self.k + 1

    def __str__(self):
        return f"lift {self.id} : {self.dom} -> {self.k + 1} with s={show(self.f)}, t={show(self.g)}"


@dataclass(frozen=True)
class AdmissiblePair:
    dom: Table
    k: int
    f: Term
    g: Term

    def __str__(self):
        return f"{self.dom} -> {self.k}: ({show(self.f)}, {show(self.g)})"


class Layer:
    """One layer of lifts.

    A free layer holds a lift for every admissible height-k pair of ``below``
    within ``budget`` and is materialized table by table on demand.  An
    explicit layer holds user-declared lifts.
    """

    def __init__(self, index, label, k, budget=None, below=None, lifts=()):
        self.index, self.label, self.k = index, label, k
        self.budget, self.below = budget, below
        self.explicit = budget is None
        self._tables: Dict[Table, list] = {}
        self._pairs: Dict[tuple, LiftGenerator] = {}
        self._complete = self.explicit
        for d in lifts:
            self._tables.setdefault(d.dom, []).append(d)
            self._pairs[(d.f, d.g)] = d

    def on_table(self, p: Table):
        got = self._tables.get(p)
        if got is not None or self.explicit:
            return got or []
        out = []
        if p in set(pair_tables(self.below, self.k, self.budget)):
            pairs = enumerate_admissible_pairs(self.below, self.k, self.budget, tables=[p])
            for pr in pairs:
                orient = [(pr.f, pr.g)] if pr.f == pr.g else [(pr.f, pr.g), (pr.g, pr.f)]
                for f, g in orient:
                    d = LiftGenerator(f"L{self.index}:{p}#{len(out)}", p, self.k, f, g, self.index, self.label)
                    out.append(d)
                    self._pairs[(f, g)] = d
        self._tables[p] = out
        return out

    def all(self):
        if not self._complete:
            for p in pair_tables(self.below, self.k, self.budget):
                self.on_table(p)
            self._complete = True
        return [d for p in sorted(self._tables) for d in self._tables[p]] if not self.explicit else \
            [d for ds in self._tables.values() for d in ds]

    def find(self, f, g):
        d = self._pairs.get((f, g))
        if d is None and not self.explicit and not self._complete:
            p = _leaf_dom(f)
            if p not in self._tables:
                self.on_table(p)
                d = self._pairs.get((f, g))
        return d

    def get(self, p, n):
        lst = self.on_table(p)
        return lst[n]


def _leaf_dom(t):
    while not isinstance(t, Base):
        t = t.inner.parts[0]
    return t.mor.dom


@dataclass(frozen=True, eq=False)
class TheoryPresentation:
    layers: Tuple[Layer, ...] = ()
    identifications: Tuple[Tuple[Term, Term], ...] = ()
    max_height: Optional[int] = None  # globes above this are absent (truncated theories)
    quotient_height: Optional[int] = None
    quotient_budget: Optional[Budget] = None
    quotient_all: bool = False  # every parallel pair at quotient_height is identified
    name: str = "Theta_0^op"
    _rep: dict = field(default_factory=dict, repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def lifts(self):
        r = self._cache.get("lifts")
        if r is None:
            r = self._cache["lifts"] = tuple(d for L in self.layers for d in L.all())
        return r

    def _explicit(self):
        r = self._cache.get("explicit")
        if r is None:
            r = self._cache["explicit"] = {d.id: d for L in self.layers if L.explicit for ds in L._tables.values() for d in ds}
        return r

    def lift(self, lift_id) -> LiftGenerator:
        d = self._explicit().get(lift_id)
        if d is not None:
            return d
        try:
            head, n = lift_id.rsplit("#", 1)
            i, tbl = head.split(":", 1)
            L = self.layers[int(i[1:])]
            if L.explicit:
                raise KeyError
            return L.get(theta0.parse_table(tbl), int(n))
        except (ValueError, IndexError, KeyError, theta0.TableError):
            raise IllTyped(f"unknown generator {lift_id!r} in {self.name}") from None

    def has_lift(self, lift_id):
        try:
            self.lift(lift_id)
            return True
        except IllTyped:
            return False

    def find_lift(self, layer, f, g) -> Optional[LiftGenerator]:
        return self.layers[layer].find(f, g)

    def layer_lifts(self, layer):
        return self.layers[layer].all()

    @property
    def meta(self):
        return tuple((L.label, L.k) for L in self.layers)

    def size(self):
        return len(self.lifts)

    def __repr__(self):
        return f"<theory {self.name}: layers {[L.label for L in self.layers]}>"


def base_theory(max_height=None) -> TheoryPresentation:
    name = "Theta_0^op" if max_height is None else f"Theta_0^op<={max_height}"
    return TheoryPresentation(max_height=max_height, name=name)


def _derive(T, **kw):
    args = dict(layers=T.layers, identifications=T.identifications, max_height=T.max_height,
                quotient_height=T.quotient_height, quotient_budget=T.quotient_budget,
                quotient_all=T.quotient_all, name=T.name, _rep=T._rep)
    args.update(kw)
    return TheoryPresentation(**args)


# -- normalization ---------------------------------------------------------------


def _nf_cache(T, kind):
    c = T._cache.get(kind)
    if c is None:
        c = T._cache[kind] = {}
    return c


def dom_of(T, t) -> Table:
    """Domain table of a normal-form term."""
    while not isinstance(t, Base):
        if is_app(t):
            t = t.inner.parts[0]
        elif isinstance(t, Tup):
            t = t.parts[0]
        else:
            raise IllTyped(f"not a normal form: {show(t)}")
    return t.mor.dom


def cod_of(T, t) -> int:
    if isinstance(t, Base):
        return t.mor.cod.entries[0]
    return T.lift(t.outer.lift).cod


def type_of(T, t):
    """(domain table, codomain table) of an arbitrary term, checking well-typedness."""
    if isinstance(t, Base):
        return t.mor.dom, t.mor.cod
    if isinstance(t, Gen):
        d = T.lift(t.lift)
        return d.dom, globe(d.cod)
    if isinstance(t, SrcPost) or isinstance(t, TgtPost):
        p, q = type_of(T, t.term)
        if len(q) != 1 or q.entries[0] == 0:
            raise IllTyped(f"cannot take a face of {show(t.term)}")
        return p, globe(q.entries[0] - 1)
    if isinstance(t, Tup):
        if len(t.parts) != len(t.target.peaks):
            raise IllTyped(f"tuple into {t.target} needs {len(t.target.peaks)} parts")
        doms = set()
        for part, q in zip(t.parts, t.target.peaks):
            p, c = type_of(T, part)
            if c != globe(q):
                raise IllTyped(f"tuple part {show(part)} lands in {c}, expected ({q})")
            doms.add(p)
        if len(doms) != 1:
            raise IllTyped("tuple parts have different domains")
        nf_parts = [normalize(T, a) for a in t.parts]
        for i, v in enumerate(t.target.valleys):
            if face(T, nf_parts[i], "t", v) != face(T, nf_parts[i + 1], "s", v):
                raise IllTyped(f"tuple parts {i} and {i + 1} do not agree on their shared face")
        return doms.pop(), t.target
    if isinstance(t, Comp):
        p, q = type_of(T, t.inner)
        q2, r = type_of(T, t.outer)
        if q != q2:
            raise IllTyped(f"composite mismatch: {q} vs {q2}")
        return p, r
    raise IllTyped(f"not a term: {t!r}")


def boundary(T, t, which):
    """s . t or t . t for a normal form into a globe of positive dimension."""
    cache = _nf_cache(T, "bd" + which)
    r = cache.get(t)
    if r is not None:
        return r
    if isinstance(t, Base):
        p = t.mor.dom
        X = realization(p)
        c = base_cell(t)
        if c[0] == 0:
            raise IllTyped("a 0-cell has no faces")
        r = cell_term(p, X.source(c) if which == "s" else X.target(c))
    else:
        d = T.lift(t.outer.lift)
        r = substitute(T, d.f if which == "s" else d.g, t.inner.parts)
        r = _rewrite_top(T, r)
    cache[t] = r
    return r


def face(T, t, which, dim):
    k = cod_of(T, t)
    if dim == k:
        return t
    while k > dim + 1:
        t = boundary(T, t, "s")
        k -= 1
    return boundary(T, t, which)


def substitute(T, t, args):
    """Precompose a normal form over p with the morphism given by ``args`` (one per disk of p)."""
    if isinstance(t, Base):
        i, kind, d = cell_origin(t.mor.dom)[base_cell(t)]
        a = args[i]
        if kind == "c":
            return a
        return face(T, a, kind, d)
    parts = tuple(substitute(T, a, args) for a in t.inner.parts)
    return Comp(t.outer, Tup(parts, t.inner.target))


def _rewrite_top(T, t):
    if T.quotient_height is None or not T._rep:
        return t
    if isinstance(t, Base):
        return T._rep.get(t, t)
    if cod_of(T, t) == T.quotient_height:
        rep = T._rep.get(t)
        if rep is not None:
            return rep
    return t


def normalize(T, t):
    """Normal form: globe-valued terms become trees, tuple-valued terms tuples of trees."""
    cache = _nf_cache(T, "nf")
    r = cache.get(t)
    if r is not None:
        return r
    if isinstance(t, Base):
        if len(t.mor.cod) == 1:
            r = t
        else:
            r = Tup(tuple(cell_term(t.mor.dom, c) for c in t.mor.cells), t.mor.cod)
    elif isinstance(t, Gen):
        d = T.lift(t.lift)
        r = app(d.id, identity_args(d.dom), d.dom)
    elif isinstance(t, Tup):
        r = Tup(tuple(normalize(T, a) for a in t.parts), t.target)
    elif isinstance(t, SrcPost) or isinstance(t, TgtPost):
        inner = normalize(T, t.term)
        if isinstance(inner, Tup):
            raise IllTyped("face of a tuple-valued term")
        r = boundary(T, inner, "s" if isinstance(t, SrcPost) else "t")
    elif isinstance(t, Comp):
        if is_app(t) and all(_is_nf(T, a) for a in t.inner.parts):
            # arguments may still hold identified subterms
            r = Comp(t.outer, Tup(tuple(normalize(T, a) for a in t.inner.parts), t.inner.target)) if T._rep else t
        else:
            inner = normalize(T, t.inner)
            args = inner.parts if isinstance(inner, Tup) else (inner,)
            outer = normalize(T, t.outer)
            if isinstance(outer, Tup):
                r = Tup(tuple(substitute(T, o, args) for o in outer.parts), outer.target)
            else:
                r = substitute(T, outer, args)
    else:
        raise IllTyped(f"not a term: {t!r}")
    if not isinstance(r, Tup):
        r = _rewrite_top(T, r)
    else:
        r = Tup(tuple(_rewrite_top(T, a) for a in r.parts), r.target)
    cache[t] = r
    return r


def _is_nf(T, t):
    if isinstance(t, Base):
        return len(t.mor.cod) == 1
    return is_app(t) and all(_is_nf(T, a) for a in t.inner.parts)


# -- enumeration -----------------------------------------------------------------


def _lifts_into(T, m):
    c = _nf_cache(T, "into")
    r = c.get(m)
    if r is None:
        r = c[m] = [d for L in T.layers if L.k + 1 == m for d in L.all()]
    return r


def enumerate_terms(T, p: Table, m: int, depth: int):
    """Normal forms p -> m of depth at most ``depth``, in canonical order."""
    cache = _nf_cache(T, "terms")
    key = (p, m, depth)
    r = cache.get(key)
    if r is not None:
        return r
    X = realization(p)
    out = [cell_term(p, c) for c in X.cells(m)] if m <= X.dim else []
    if depth > 0:
        for d in _lifts_into(T, m):
            for args in arg_tuples(T, p, d.dom, depth - 1):
                out.append(Comp(Gen(d.id), Tup(args, d.dom)))
    if T.quotient_height is not None and m == T.quotient_height and T._rep:
        seen, kept = set(), []
        for t in out:
            t = _rewrite_top(T, t)
            if t not in seen:
                seen.add(t)
                kept.append(t)
        out = kept
    cache[key] = out
    return out


def arg_tuples(T, p: Table, r: Table, depth: int):
    """Compatible tuples of normal forms p -> r_i, i.e. morphisms p -> r."""
    peaks, valleys = r.peaks, r.valleys
    cands = [enumerate_terms(T, p, q, depth) for q in peaks]
    out = []

    def go(i, acc):
        if i == len(peaks):
            out.append(tuple(acc))
            return
        for a in cands[i]:
            if i > 0:
                v = valleys[i - 1]
                if face(T, acc[-1], "t", v) != face(T, a, "s", v):
                    continue
            acc.append(a)
            go(i + 1, acc)
            acc.pop()

    go(0, [])
    return out


def pair_tables(T, k, budget: Budget):
    top = k + 1 if T.max_height is None else min(k + 1, T.max_height)
    return all_tables(budget.max_table_len, budget.max_entry, max_height=top)


def enumerate_admissible_pairs(T, k, budget: Budget, tables=None):
    """Unordered admissible pairs (f, g) at height k within the budget, reflexive ones included."""
    if budget.max_table_len < 1 or budget.pair_depth < 0 or budget.max_entry < k:
        raise BudgetTooSmall(f"budget {budget.to_dict()} admits no base terms into ({k})")
    if T.max_height is not None and k > T.max_height:
        return []
    out = []
    for p in (pair_tables(T, k, budget) if tables is None else tables):
        ts = enumerate_terms(T, p, k, budget.pair_depth)
        if k == 0:
            for i, f in enumerate(ts):
                for g in ts[i:]:
                    out.append(AdmissiblePair(p, k, f, g))
            continue
        groups: Dict[tuple, List[int]] = {}
        for i, f in enumerate(ts):
            groups.setdefault((boundary(T, f, "s"), boundary(T, f, "t")), []).append(i)
        pairs = []
        for idx in groups.values():
            for a, i in enumerate(idx):
                for j in idx[a:]:
                    pairs.append((i, j))
        pairs.sort()
        out.extend(AdmissiblePair(p, k, ts[i], ts[j]) for i, j in pairs)
    return out


def is_admissible(T, pair: AdmissiblePair, budget=None):
    try:
        for x in (pair.f, pair.g):
            p, q = type_of(T, x)
            if p != pair.dom or q != globe(pair.k):
                return False
    except TheoryError:
        return False
    if pair.dom.height > pair.k + 1:
        return False
    if T.max_height is not None and pair.k + 1 > T.max_height:
        return False
    if pair.k == 0:
        return True
    f, g = normalize(T, pair.f), normalize(T, pair.g)
    for w in "st":
        v = decide_equal(T, boundary(T, f, w), boundary(T, g, w), budget)
        if not isinstance(v, Equal):
            return False
    return True


def add_lift(T, pair: AdmissiblePair, lift_id=None, stage="user", budget=None):
    """Freely add one lift for ``pair`` in a new layer; its triangles become rewrite rules."""
    if not is_admissible(T, pair, budget):
        raise NotAdmissible(f"not an admissible pair: {pair}")
    f, g = normalize(T, pair.f), normalize(T, pair.g)
    index = len(T.layers)
    lift_id = lift_id or f"U{index}"
    if T.has_lift(lift_id):
        raise TheoryError(f"duplicate generator id {lift_id!r}")
    d = LiftGenerator(lift_id, pair.dom, pair.k, f, g, index, stage)
    return _derive(T, layers=T.layers + (Layer(index, stage, pair.k, lifts=[d]),))


def extend(T, k, budget: Budget, label=None, name=None) -> TheoryPresentation:
    """R_k T: a new layer with a lift for every admissible height-k pair within budget.

    Each unordered pair gets lifts in both directions, so the theory keeps
    its reversal cells (inverses at height 0).
    """
    if budget.max_table_len < 1 or budget.pair_depth < 0 or budget.max_entry < k:
        raise BudgetTooSmall(f"budget {budget.to_dict()} admits no base terms into ({k})")
    label = label or f"R{k}"
    L = Layer(len(T.layers), label, k, budget=budget, below=T)
    return _derive(T, layers=T.layers + (L,), name=name or f"{label}({T.name})")


def quotient_parallel_at_height(T, n, budget: Budget) -> TheoryPresentation:
    """Identify the enumerated admissible pairs at height n, rewriting toward the first term."""
    try:
        pairs = enumerate_admissible_pairs(T, n, budget)
    except BudgetTooSmall:
        pairs = []
    pairs = [pr for pr in pairs if pr.f != pr.g]
    if not pairs:
        return T
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    order = {}
    for pr in pairs:
        for x in (pr.f, pr.g):
            if x not in order:
                order[x] = len(order)
                parent[x] = x
    for pr in pairs:
        a, b = find(pr.f), find(pr.g)
        if a != b:
            if order[a] > order[b]:
                a, b = b, a
            parent[b] = a
    rep = {x: find(x) for x in order if find(x) != x}
    return _derive(T, identifications=tuple((pr.f, pr.g) for pr in pairs), quotient_height=n,
                   quotient_budget=budget, quotient_all=True, name=f"{T.name}/~{n}", _rep=rep)


def identify(T, left, right, n):
    """Install one user-declared identification right -> left at height n."""
    left, right = normalize(T, left), normalize(T, right)
    if cod_of(T, left) != n or cod_of(T, right) != n or dom_of(T, left) != dom_of(T, right):
        raise IllTyped("identifications relate parallel terms at the declared height")
    if T.quotient_height not in (None, n):
        raise IllTyped(f"theory already quotients at height {T.quotient_height}")
    if n > 0:
        for w in "st":
            if boundary(T, left, w) != boundary(T, right, w):
                raise IllTyped("identified terms are not parallel")
    rep = dict(T._rep)
    target = rep.get(left, left)
    rep[right] = target
    for x, y in list(rep.items()):
        if y == right:
            rep[x] = target
    return _derive(T, identifications=T.identifications + ((left, right),), quotient_height=n, _rep=rep,
                   _cache={})


# -- equality ---------------------------------------------------------------------


@dataclass(frozen=True)
class Equal:
    def __str__(self):
        return "Equal"


@dataclass(frozen=True)
class Distinct:
    witness: str

    def __str__(self):
        return f"Distinct({self.witness})"


@dataclass(frozen=True)
class Unknown:
    reason: str

    def __str__(self):
        return f"Unknown({self.reason})"


EqVerdict = (Equal, Distinct, Unknown)


def decide_equal(T, a, b, budget: Optional[Budget] = None):
    """Three-valued equality of two parallel terms.  Equal and Distinct are final."""
    budget = budget or Budget()
    pa, qa = type_of(T, a)
    pb, qb = type_of(T, b)
    if (pa, qa) != (pb, qb):
        raise IllTyped(f"terms are not parallel-typed: {pa}->{qa} vs {pb}->{qb}")
    na, nb = normalize(T, a), normalize(T, b)
    if isinstance(na, Tup):
        verdicts = [_decide_nf(T, x, y, budget) for x, y in zip(na.parts, nb.parts)]
        for v in verdicts:
            if isinstance(v, Distinct):
                return v
        for v in verdicts:
            if isinstance(v, Unknown):
                return v
        return Equal()
    return _decide_nf(T, na, nb, budget)


def _decide_nf(T, a, b, budget):
    if a == b:
        return Equal()
    k = cod_of(T, a)
    faces = []
    if k > 0:
        for w in "st":
            v = _decide_nf(T, boundary(T, a, w), boundary(T, b, w), budget)
            if isinstance(v, Distinct):
                return Distinct(f"{w}-faces differ: {v.witness}")
            faces.append(v)
    top = T.quotient_height is not None and k == T.quotient_height and (T._rep or T.quotient_all)
    if top and T.quotient_all:
        # parallel pairs at the quotient height are identified wholesale
        for v in faces:
            if isinstance(v, Unknown):
                return Unknown(f"faces undecided: {v.reason}")
        return Equal()
    if not top:
        if isinstance(a, Base) and isinstance(b, Base):
            return Distinct(f"base cells {show(a)} != {show(b)}")
        if not isinstance(a, Base) and not isinstance(b, Base):
            return Distinct(f"distinct generator trees {show(a)} != {show(b)}")
    w = separate(T, a, b, budget)
    if w is not None:
        return Distinct(w)
    if top:
        return Unknown(f"parallel at height {k} but outside the identification budget")
    return Unknown(f"no separating model with <= {budget.max_model} cells per dimension")


# -- small interpretations (for separation and testing) ---------------------------


@dataclass
class Interpretation:
    """A globular set with a table for each lift: input tuple of cells -> cell."""

    X: object
    ops: Dict[str, Dict[tuple, tuple]]


def elements(X, p: Table):
    """X(p): compatible tuples of cells, one per disk of p."""
    from .globset import locate

    out = []
    for m in enumerate_maps(realization(p), X):
        out.append(tuple(m(locate(p.entries, i, "c", q)) for i, q in enumerate(p.peaks)))
    return out


def evaluate(T, I: Interpretation, t, x):
    """Value of an arbitrary term at x in I(dom t)."""
    X = I.X
    if isinstance(t, Base):
        vals = tuple(_cell_value(X, t.mor.dom, c, x) for c in t.mor.cells)
        return vals[0] if len(t.mor.cod) == 1 else vals
    if isinstance(t, Gen):
        return I.ops[t.lift][tuple(x)]
    if isinstance(t, Tup):
        return tuple(evaluate(T, I, a, x) for a in t.parts)
    if isinstance(t, Comp):
        y = evaluate(T, I, t.inner, x)
        if not isinstance(t.inner, Tup) and not (isinstance(t.inner, Base) and len(t.inner.mor.cod) > 1):
            y = (y,)
        return evaluate(T, I, t.outer, y)
    c = evaluate(T, I, t.term, x)
    return X.source(c) if isinstance(t, SrcPost) else X.target(c)


def _cell_value(X, p, c, x):
    i, kind, d = cell_origin(p)[c]
    v = x[i]
    if kind == "c":
        return v
    return X.face(v, d, kind)


def complete_globular_set(n0, mult, top):
    """Globular set with n0 objects and ``mult`` cells over every parallel pair, up to ``top``."""
    from .globset import make_globular_set

    labels = [tuple(f"x{i}" for i in range(n0))]
    src, tgt = [], []
    for d in range(1, top + 1):
        prev = len(labels[-1])
        names, s, t = [], [], []
        for a in range(prev):
            for b in range(prev):
                if d >= 2 and (src[-1][a], tgt[-1][a]) != (src[-1][b], tgt[-1][b]):
                    continue
                for r in range(mult):
                    names.append(f"c{d}_{len(names)}")
                    s.append(a)
                    t.append(b)
        labels.append(tuple(names))
        src.append(tuple(s))
        tgt.append(tuple(t))
    return make_globular_set(labels, src, tgt)


def random_interpretation(T, X, rng, lifts=None):
    """Choose every lift operation at random among the cells with the forced faces."""
    ops = {}
    I = Interpretation(X, ops)
    for d in (T.lifts if lifts is None else lifts):
        table = {}
        for x in elements(X, d.dom):
            s = evaluate(T, I, d.f, x)
            t = evaluate(T, I, d.g, x)
            cands = [c for c in X.cells(d.cod) if X.source(c) == s and X.target(c) == t]
            if not cands:
                return None
            table[x] = rng.choice(cands)
        ops[d.id] = table
    return I


def _small_carriers(top, max_model):
    out = []
    for n0 in (1, 2):
        for mult in (1, 2):
            X = complete_globular_set(n0, mult, top)
            if all(len(c) <= max_model for c in X.labels):
                out.append(X)
    return out


def separate(T, a, b, budget: Budget):
    """Search small random models for one where a and b differ; return a witness string.

    Interpretations that break one of T's identifications are not models of T
    and are skipped.
    """
    p = dom_of(T, a)
    used = _lifts_used(T, a) | _lifts_used(T, b)
    for left, right in T.identifications:
        used |= _lifts_used(T, left) | _lifts_used(T, right)
    needed = _close_lifts(T, used)
    top = max([cod_of(T, a)] + [d.cod for d in needed] + [p.height] + [dom_of(T, l).height for l, _ in T.identifications])
    rng = random.Random(budget.seed)
    for X in _small_carriers(top, budget.max_model):
        points = elements(X, p)
        if not points:
            continue
        for trial in range(budget.model_samples):
            I = random_interpretation(T, X, rng, needed)
            if I is None:
                break
            if not _respects(T, I):
                continue
            for x in points:
                va, vb = evaluate(T, I, a, x), evaluate(T, I, b, x)
                if va != vb:
                    return f"model {X.counts} trial {trial} at {[X.label(c) for c in x]}: {X.label(va)} != {X.label(vb)}"
    return None


def _respects(T, I):
    for left, right in T.identifications:
        for x in elements(I.X, dom_of(T, left)):
            if evaluate(T, I, left, x) != evaluate(T, I, right, x):
                return False
    return True


def _lifts_used(T, t):
    out = set()
    stack = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, Gen):
            out.add(x.lift)
        elif isinstance(x, Comp):
            stack += [x.outer, x.inner]
        elif isinstance(x, Tup):
            stack += list(x.parts)
        elif isinstance(x, (SrcPost, TgtPost)):
            stack.append(x.term)
    return out


def _close_lifts(T, ids):
    todo, seen = list(ids), set()
    while todo:
        i = todo.pop()
        if i in seen:
            continue
        seen.add(i)
        d = T.lift(i)
        todo += list(_lifts_used(T, d.f) | _lifts_used(T, d.g))
    return [d for d in T.lifts if d.id in seen]


# -- theory files -------------------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, msg, line=None, col=None):
        self.line, self.col = line, col
        where = f"line {line}, col {col}: " if line is not None else ""
        super().__init__(where + msg)


def parse_term(T, text, dom: Table):
    """Parse term syntax base(<cell>), gen(<id>), comp(a, b), tuple(a, ...), s(a), t(a)."""
    s = text.strip()
    pos = [0]

    def err(msg):
        raise ParseError(msg, None, pos[0] + 1)

    def skip():
        while pos[0] < len(s) and s[pos[0]].isspace():
            pos[0] += 1

    def word():
        skip()
        st = pos[0]
        while pos[0] < len(s) and (s[pos[0]].isalnum() or s[pos[0]] in "_.@"):
            pos[0] += 1
        return s[st:pos[0]]

    def expect(ch):
        skip()
        if pos[0] >= len(s) or s[pos[0]] != ch:
            err(f"expected {ch!r}")
        pos[0] += 1

    def args_until_close():
        # raw text segments at depth 0
        skip()
        st, depth, parts = pos[0], 0, []
        while pos[0] < len(s):
            c = s[pos[0]]
            if c == "(":
                depth += 1
            elif c == ")":
                if depth == 0:
                    parts.append(s[st:pos[0]])
                    pos[0] += 1
                    return [x.strip() for x in parts if x.strip()]
                depth -= 1
            elif c == "," and depth == 0:
                parts.append(s[st:pos[0]])
                st = pos[0] + 1
            pos[0] += 1
        err("unbalanced parentheses")

    def build(src, dom, want=None):
        # want: expected codomain table for tuples
        inner = _Sub(src)
        head = inner.head()
        if head == "base":
            body = inner.body_text().strip()
            if ":" in body:
                tbl, names = body.split(":", 1)
                p = theta0.parse_table(tbl)
                cells = [realization(dom).find(n.strip()) for n in names.split(",")]
                mor = [m for m in theta0.hom_set(dom, p) if list(m.cells) == cells]
                if not mor:
                    raise ParseError(f"no Theta_0 morphism {body}")
                return Base(mor[0])
            try:
                c = realization(dom).find(body)
            except KeyError:
                raise ParseError(f"unknown cell {body!r} of {dom}") from None
            return cell_term(dom, c)
        if head == "gen":
            lid = inner.body_text().strip()
            T.lift(lid)
            return Gen(lid)
        parts = inner.args()
        if head in ("s", "t"):
            if len(parts) != 1:
                raise ParseError(f"{head}(...) takes one term")
            x = build(parts[0], dom)
            return SrcPost(x) if head == "s" else TgtPost(x)
        if head == "comp":
            if len(parts) != 2:
                raise ParseError("comp(outer, inner) takes two terms")
            outer_src, inner_src = parts
            outer_head = _Sub(outer_src).head()
            if outer_head == "gen":
                outer = build(outer_src, dom)
                mid = T.lift(outer.lift).dom
                return Comp(outer, build(inner_src, dom, want=mid))
            inner_t = build(inner_src, dom)
            _, mid = type_of(T, inner_t)
            return Comp(build(outer_src, mid), inner_t)
        if head == "tuple":
            comps = [build(x, dom) for x in parts]
            if want is None:
                raise ParseError("cannot infer the target table of a bare tuple(...)")
            return Tup(tuple(comps), want)
        raise ParseError(f"unknown term constructor {head!r}")

    t = build(s, dom)
    type_of(T, t)
    return t


class _Sub:
    def __init__(self, text):
        self.text = text.strip()
        i = self.text.find("(")
        if i < 0 or not self.text.endswith(")"):
            raise ParseError(f"malformed term {self.text!r}")
        self.i = i

    def head(self):
        return self.text[: self.i].strip()

    def body_text(self):
        return self.text[self.i + 1 : -1]

    def args(self):
        body, depth, st, parts = self.body_text(), 0, 0, []
        for j, c in enumerate(body):
            if c == "(":
                depth += 1
            elif c == ")":
                depth -= 1
            elif c == "," and depth == 0:
                parts.append(body[st:j])
                st = j + 1
        parts.append(body[st:])
        return [p.strip() for p in parts if p.strip()]


def parse_theory(text, T=None) -> TheoryPresentation:
    """Read ``lift`` and ``identify`` declarations on top of ``T`` (default Theta_0^op)."""
    import re

    T = T or base_theory()
    lift_re = re.compile(r"^lift\s+(\S+)\s*:\s*(\([^)]*\))\s*->\s*(\d+)\s+with\s+s\s*=\s*(.+?)\s*,\s*t\s*=\s*(.+)$")
    ident_re = re.compile(r"^identify\s+(.+?)\s*=\s*(.+?)\s*@height\s+(\d+)\s*(?:on\s*(\([^)]*\)))?$")
    for lineno, raw in enumerate(text.splitlines(), 1):
        # comments start at a '#' after whitespace; generated lift ids contain '#'
        line = re.sub(r"(^|\s)#.*$", "", raw).strip()
        if not line:
            continue
        m = lift_re.match(line)
        if m:
            lid, tbl, k, fs, gs = m.groups()
            try:
                dom = theta0.parse_table(tbl)
                k = int(k)
                if k < 1:
                    raise ParseError("a lift lands in a globe of dimension >= 1", lineno, 1)
                f = parse_term(T, fs, dom)
                g = parse_term(T, gs, dom)
                T = add_lift(T, AdmissiblePair(dom, k - 1, f, g), lift_id=lid)
            except ParseError as e:
                raise ParseError(str(e), lineno, 1) from None
            except theta0.TableError as e:
                raise ParseError(str(e), lineno, line.index("(") + 1) from None
            continue
        m = ident_re.match(line)
        if m:
            ls, rs, n, tbl = m.groups()
            dom = theta0.parse_table(tbl) if tbl else None
            if dom is None:
                raise ParseError("identify needs 'on (<table>)' to fix the domain", lineno, 1)
            try:
                T = identify(T, parse_term(T, ls, dom), parse_term(T, rs, dom), int(n))
            except ParseError as e:
                raise ParseError(str(e), lineno, 1) from None
            continue
        raise ParseError(f"cannot read declaration {line!r}", lineno, 1)
    return T


def write_theory(T) -> str:
    lines = [str(d) for d in T.lifts]
    for left, right in T.identifications:
        lines.append(f"identify {show(left)} = {show(right)} @height {T.quotient_height} on {dom_of(T, left)}")
    return "\n".join(lines) + ("\n" if lines else "")
