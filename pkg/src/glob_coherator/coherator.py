"""Bounded inductive coherator: the tower, the truncation chain, the
distributive law lambda^{i,j} and generator-wise checks of its laws.

Every theory here is a stack of budgeted free layers over Theta_0^op.  A
theory arrow is fixed by what it does to lift generators (Base cells go by
the identity or by globe truncation), which is why all laws are checked by
pushing generators and a sample of composites through both sides of a
diagram.
"""

import json
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from . import theory as th
from .theory import (Base, Budget, Comp, Distinct, Equal, Gen, IllTyped, Tup, Unknown,
                     app, cell_term, cod_of, identity_args, is_app, normalize, show, substitute)
from .theta0 import Table, all_tables, realization, truncate_cell, truncate_table


class IndexOrder(ValueError):
    pass


class OutOfBudget(Exception):
    """An arrow needs a lift that the target's enumeration budget did not produce."""


class LevelUnsupported(ValueError):
    pass


# -- stages -------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TowerStage:
    kind: str  # "IC", "IC_trunc" or "IC_quot"
    index: int
    level: Optional[int]
    theory: th.TheoryPresentation
    budget: Budget

    @property
    def label(self):
        if self.kind == "IC":
            return f"IC_{self.index}"
        if self.kind == "IC_trunc":
            return f"IC_{self.level},{self.index}"
        return f"IC_{self.level + 1}^<={self.level}"

    def summary(self):
        return {
            "stage": self.label,
            "layers": [label for label, _ in self.theory.meta],
            "lifts": len(self.theory.lifts),
            "identifications": len(self.theory.identifications),
        }


_R_CACHE: Dict[tuple, tuple] = {}


def R(k, T, budget: Budget):
    """R_k T, memoized so that equal expressions give the same theory object."""
    key = (k, id(T), budget)
    hit = _R_CACHE.get(key)
    if hit is not None and hit[0] is T:
        return hit[1]
    out = th.extend(T, k, budget)
    _R_CACHE[key] = (T, out)
    return out


def R_hat(T, N, budget):
    """The truncated completed monad R_{N-1} ... R_0 T."""
    for k in range(N):
        T = R(k, T, budget)
    return T


_BASE = {}


def base(max_height=None):
    if max_height not in _BASE:
        _BASE[max_height] = th.base_theory(max_height)
    return _BASE[max_height]


def ic(i, budget):
    """IC_i = R_{i-1}(IC_{i-1}), IC_0 = Theta_0^op."""
    T = base()
    for k in range(i):
        T = R(k, T, budget)
    return T


_Q_CACHE = {}


def ic_quotient(n, budget):
    """IC_{n+1}^{<=n}: lifts of height < n over Theta_0^op truncated at n, parallel height-n pairs identified."""
    key = (n, budget)
    if key not in _Q_CACHE:
        T = base(n)
        for k in range(n):
            T = R(k, T, budget)
        _Q_CACHE[key] = th.quotient_parallel_at_height(T, n, budget)
    return _Q_CACHE[key]


def build_tower(depth, budget: Budget = None):
    budget = budget or Budget()
    if depth < 0:
        raise ValueError("depth must be >= 0")
    return [TowerStage("IC", i, None, ic(i, budget), budget) for i in range(depth + 1)]


def build_truncated_chain(n, budget: Budget = None):
    budget = budget or Budget()
    stages = []
    T = base(n)
    for i in range(n + 1):
        if i > 0:
            T = R(i - 1, T, budget)
        stages.append(TowerStage("IC_trunc", i, n, T, budget))
    return stages, TowerStage("IC_quot", n + 1, n, ic_quotient(n, budget), budget)


# -- arrows -------------------------------------------------------------------------


class TheoryArrow:
    """A theory map given on lift generators; Base cells are fixed or truncated at ``trunc``."""

    def __init__(self, dom, cod, name, on_lift: Callable, trunc: Optional[int] = None):
        self.dom, self.cod, self.name = dom, cod, name
        self._on_lift = on_lift
        self.trunc = trunc
        self._lift_img: Dict[str, object] = {}
        self._img: Dict[object, object] = {}

    def __repr__(self):
        return f"<arrow {self.name}: {self.dom.name} -> {self.cod.name}>"

    def table(self, p: Table):
        return p if self.trunc is None else truncate_table(p, self.trunc)[0]

    def lift_image(self, d):
        r = self._lift_img.get(d.id)
        if r is None:
            r = self._on_lift(self, d)
            self._lift_img[d.id] = r
        return r

    def apply(self, t):
        t = normalize(self.dom, t)
        if isinstance(t, Tup):
            parts = tuple(self.apply_nf(a) for a in t.parts)
            return Tup(parts, self.table(t.target))
        return self.apply_nf(t)

    def apply_nf(self, t):
        r = self._img.get(t)
        if r is not None:
            return r
        if isinstance(t, Base):
            if self.trunc is None:
                r = t
            else:
                p = t.mor.dom
                r = cell_term(truncate_table(p, self.trunc)[0], truncate_cell(p, self.trunc, t.mor.cells[0]))
        else:
            d = self.dom.lift(t.outer.lift)
            img = self.lift_image(d)
            args = [self.apply_nf(a) for a in t.inner.parts]
            if self.trunc is not None:
                _, where = truncate_table(d.dom, self.trunc)
                picked = {}
                for i, j in enumerate(where):
                    picked.setdefault(j, args[i])
                args = [picked[j] for j in sorted(picked)]
            r = normalize(self.cod, substitute(self.cod, img, args))
        self._img[t] = r
        return r


class ComposedArrow(TheoryArrow):
    def __init__(self, *arrows):
        # arrows listed in application order: the first is applied first
        self.arrows = arrows
        name = " . ".join(a.name for a in reversed(arrows))
        super().__init__(arrows[0].dom, arrows[-1].cod, name, None)

    def apply_nf(self, t):
        r = self._img.get(t)
        if r is None:
            r = t
            for a in self.arrows:
                r = a.apply_nf(r)
            self._img[t] = r
        return r


def then(*arrows):
    return ComposedArrow(*arrows)


def identity_arrow(T):
    return TheoryArrow(T, T, "1", lambda A, d: app(d.id, identity_args(d.dom), d.dom))


def inclusion(dom, cod, name="incl"):
    """Stage inclusion: every generator of dom is a generator of cod with the same id."""

    def on_lift(A, d):
        if not cod.has_lift(d.id):
            raise IllTyped(f"{d.id} is not a generator of {cod.name}")
        return app(d.id, identity_args(d.dom), d.dom)

    return TheoryArrow(dom, cod, name, on_lift)


def eta(k, C, budget, name=None):
    return inclusion(C, R(k, C, budget), name or f"eta^{k}")


def _lookup(cod, layer, f, g, who):
    e = cod.find_lift(layer, f, g)
    if e is None:
        raise OutOfBudget(f"{who}: no lift for ({show(f)}, {show(g)}) in layer {layer} of {cod.name}")
    return app(e.id, identity_args(e.dom), e.dom)


def functor_R(k, F: TheoryArrow, budget, name=None):
    """R_k F : R_k C -> R_k D, sending delta_{f,g} to delta_{F f, F g}."""
    dom, cod = R(k, F.dom, budget), R(k, F.cod, budget)
    top_dom, top_cod = len(F.dom.layers), len(F.cod.layers)
    nm = name or f"R{k}({F.name})"

    def on_lift(A, d):
        if d.layer < top_dom:
            return F.lift_image(d)
        return _lookup(cod, top_cod, F.apply_nf(d.f), F.apply_nf(d.g), nm)

    return TheoryArrow(dom, cod, nm, on_lift, trunc=F.trunc)


def R_hat_functor(F, N, budget):
    for k in range(N):
        F = functor_R(k, F, budget)
    return F


_LAMBDA_MUTATIONS = ("lambda-drop-eta", "lambda-swap", "lambda-collapse")
_TR_MUTATIONS = ("tr-swap", "tr-early-collapse")
MUTATIONS = _LAMBDA_MUTATIONS + _TR_MUTATIONS


def lam(i, j, C, budget, mutation=None):
    """lambda^{i,j}_C : R_i R_j C -> R_j R_i C.

    Generators of R_j C go along R_j(eta^i_C); an outer height-i lift
    delta_{f,g} goes to delta_{R_j eta^i f, R_j eta^i g}.
    """
    if i >= j:
        raise IndexOrder(f"lambda^{{{i},{j}}} needs i < j")
    dom = R(i, R(j, C, budget), budget)
    cod = R(j, R(i, C, budget), budget)
    G = functor_R(j, eta(i, C, budget), budget)
    Lc = len(C.layers)
    nm = f"lambda^{i},{j}" + (f"[{mutation}]" if mutation else "")

    def on_lift(A, d):
        if d.layer <= Lc:
            if mutation == "lambda-drop-eta" and d.layer == Lc:
                # skip the transport: read the inner generator verbatim in the target
                return app(d.id, identity_args(d.dom), d.dom)
            return G.lift_image(d)
        f, g = G.apply_nf(d.f), G.apply_nf(d.g)
        if mutation == "lambda-swap":
            f, g = g, f
        elif mutation == "lambda-collapse":
            g = f
        return _lookup(cod, Lc, f, g, nm)

    return TheoryArrow(dom, cod, nm, on_lift)


def mu(k, C, budget):
    """mu^k_C : R_k R_k C -> R_k C, folding the outer copy onto the inner one."""
    dom, cod = R(k, R(k, C, budget), budget), R(k, C, budget)
    Lc = len(C.layers)

    def on_lift(A, d):
        if d.layer <= Lc:
            return app(d.id, identity_args(d.dom), d.dom)
        return _lookup(cod, Lc, A.apply_nf(d.f), A.apply_nf(d.g), f"mu^{k}")

    return TheoryArrow(dom, cod, f"mu^{k}", on_lift)


def mu_hat(C, N, budget):
    """mu-hat_C : R^ R^ C -> R^ C, the outer layer of height h folding onto the inner one."""
    inner = R_hat(C, N, budget)
    dom = R_hat(inner, N, budget)
    Lc, Li = len(C.layers), len(inner.layers)

    def on_lift(A, d):
        if d.layer < Li:
            return app(d.id, identity_args(d.dom), d.dom)
        h = d.layer - Li
        return _lookup(inner, Lc + h, A.apply_nf(d.f), A.apply_nf(d.g), "mu^")

    return TheoryArrow(dom, inner, "mu^", on_lift)


def eta_hat(C, N, budget):
    return inclusion(C, R_hat(C, N, budget), "eta^")


def truncation(dom, cod, n, name, mutation=None):
    """Truncation at n: lifts below height n keep their truncated pair, height-n lifts become [f]."""

    def on_lift(A, d):
        if d.k > n:
            raise IllTyped(f"{name} is undefined on the height-{d.k} generator {d.id}")
        f = A.apply_nf(d.f)
        if d.k == n:
            return f
        g = A.apply_nf(d.g)
        if mutation == "tr-swap":
            f, g = g, f
        elif mutation == "tr-early-collapse" and d.k == n - 1:
            g = f
        return _lookup(cod, d.layer, f, g, name)

    return TheoryArrow(dom, cod, name, on_lift, trunc=n)


def tr_n_arrow(n, budget, mutation=None):
    """tr_n : IC_{n+1} -> IC_{n+1}^{<=n}."""
    return truncation(ic(n + 1, budget), ic_quotient(n, budget), n, f"tr_{n}", mutation)


def tr_arrow(n, budget, mutation=None):
    """tr : IC_{n+2}^{<=n+1} -> IC_{n+1}^{<=n}."""
    return truncation(ic_quotient(n + 1, budget), ic_quotient(n, budget), n, "tr", mutation)


def truncate_term(kind, t, n=1, budget=None):
    """Apply ``tr_n`` (from IC_{n+1}) or ``tr`` (from IC_{n+2}^{<=n+1}) to a term."""
    budget = budget or Budget()
    if kind in ("tr_n", "tr_") or kind.startswith("tr_"):
        A = tr_n_arrow(n, budget)
    elif kind == "tr":
        A = tr_arrow(n, budget)
    else:
        raise ValueError(f"unknown truncation {kind!r}")
    return A.apply(t)


def lambda_action(i, j, C, t, budget=None, mutation=None):
    budget = budget or Budget()
    return lam(i, j, C, budget, mutation).apply(t)


# -- law checking -------------------------------------------------------------------


LAWS = (
    "unit-triangle-1",
    "unit-triangle-2",
    "naturality",
    "dist-pentagon-mu-i",
    "dist-pentagon-mu-j",
    "yang-baxter",
    "monad-unit",
    "monad-assoc",
    "truncation-square",
)

DEFAULT_INDICES = {
    "unit-triangle-1": (0, 1),
    "unit-triangle-2": (0, 1),
    "naturality": (0, 1),
    "dist-pentagon-mu-i": (0, 1),
    "dist-pentagon-mu-j": (0, 1),
    "yang-baxter": (0, 1, 2),
    "monad-unit": (2,),
    "monad-assoc": (2,),
    "truncation-square": (0,),
}


@dataclass
class LawReport:
    law: str
    indices: tuple
    budget: Budget
    samples: int = 0
    equal: int = 0
    distinct: int = 0
    unknown: int = 0
    counterexamples: List[dict] = field(default_factory=list)
    unknowns: List[dict] = field(default_factory=list)
    mutation: Optional[str] = None
    routes: tuple = ()

    @property
    def verdict(self):
        if self.distinct:
            return "fail"
        if self.unknown:
            return "unknown"
        return "pass"

    @property
    def passed(self):
        return self.verdict == "pass"

    def to_dict(self):
        return {
            "law": self.law,
            "indices": list(self.indices),
            "mutation": self.mutation,
            "budget": self.budget.to_dict(),
            "routes": list(self.routes),
            "samples": self.samples,
            "counts": {"equal": self.equal, "distinct": self.distinct, "unknown": self.unknown},
            "verdict": self.verdict,
            "counterexamples": self.counterexamples,
            "unknowns": self.unknowns,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _check_indices(law, idx):
    if law in ("unit-triangle-1", "unit-triangle-2", "naturality", "dist-pentagon-mu-i", "dist-pentagon-mu-j"):
        if len(idx) != 2 or not idx[0] < idx[1]:
            raise IndexOrder(f"{law} needs indices i < j, got {idx}")
    elif law == "yang-baxter":
        if len(idx) != 3 or not idx[0] < idx[1] < idx[2]:
            raise IndexOrder(f"yang-baxter needs i < j < k, got {idx}")
    elif law in ("monad-unit", "monad-assoc"):
        if len(idx) != 1 or idx[0] < 1:
            raise IndexOrder(f"{law} needs one truncation level N >= 1, got {idx}")
    elif law == "truncation-square":
        if len(idx) != 1 or idx[0] < 0:
            raise IndexOrder(f"truncation-square needs n >= 0, got {idx}")
    else:
        raise ValueError(f"unknown law {law!r}")


def law_diagram(law, indices, budget, mutation=None, C=None):
    """Both routes of the law's diagram as arrows with the same domain and codomain.

    Returns a list of (left, right) route pairs.
    """
    C = C if C is not None else base()
    lm = mutation if mutation in _LAMBDA_MUTATIONS else None
    tm = mutation if mutation in _TR_MUTATIONS else None
    if law == "unit-triangle-1":
        i, j = indices
        RjC = R(j, C, budget)
        left = then(inclusion(RjC, R(i, RjC, budget), f"eta^{i}_R{j}"), lam(i, j, C, budget, lm))
        right = functor_R(j, eta(i, C, budget), budget)
        return [(left, right)]
    if law == "unit-triangle-2":
        i, j = indices
        RiC = R(i, C, budget)
        left = then(functor_R(i, eta(j, C, budget), budget), lam(i, j, C, budget, lm))
        right = inclusion(RiC, R(j, RiC, budget), f"eta^{j}_R{i}")
        return [(left, right)]
    if law == "naturality":
        i, j = indices
        F = eta(0, C, budget, "F=eta^0")
        D = F.cod
        left = then(lam(i, j, C, budget, lm), functor_R(j, functor_R(i, F, budget), budget))
        right = then(functor_R(i, functor_R(j, F, budget), budget), lam(i, j, D, budget, lm))
        return [(left, right)]
    if law == "dist-pentagon-mu-i":
        i, j = indices
        RjC = R(j, C, budget)
        # lambda . mu^i_{R_j} = R_j mu^i . lambda_{R_i} . R_i lambda
        left = then(mu(i, RjC, budget), lam(i, j, C, budget, lm))
        right = then(functor_R(i, lam(i, j, C, budget, lm), budget),
                     lam(i, j, R(i, C, budget), budget, lm),
                     functor_R(j, mu(i, C, budget), budget))
        return [(left, right)]
    if law == "dist-pentagon-mu-j":
        i, j = indices
        # lambda . R_i mu^j = mu^j_{R_i} . R_j lambda . lambda_{R_j}
        left = then(functor_R(i, mu(j, C, budget), budget), lam(i, j, C, budget, lm))
        right = then(lam(i, j, R(j, C, budget), budget, lm),
                     functor_R(j, lam(i, j, C, budget, lm), budget),
                     mu(j, R(i, C, budget), budget))
        return [(left, right)]
    if law == "yang-baxter":
        i, j, k = indices
        Ri, Rj, Rk = (R(x, C, budget) for x in (i, j, k))
        left = then(lam(i, j, Rk, budget, lm),
                    functor_R(j, lam(i, k, C, budget, lm), budget),
                    lam(j, k, Ri, budget, lm))
        right = then(functor_R(i, lam(j, k, C, budget, lm), budget),
                     lam(i, k, Rj, budget, lm),
                     functor_R(k, lam(i, j, C, budget, lm), budget))
        return [(left, right)]
    if law == "monad-unit":
        (N,) = indices
        RC = R_hat(C, N, budget)
        m = mu_hat(C, N, budget)
        ident = identity_arrow(RC)
        inner = then(inclusion(RC, R_hat(RC, N, budget), "eta^_R^"), m)
        outer = then(R_hat_functor(eta_hat(C, N, budget), N, budget), m)
        return [(inner, ident), (outer, ident)]
    if law == "monad-assoc":
        (N,) = indices
        RC = R_hat(C, N, budget)
        left = then(R_hat_functor(mu_hat(C, N, budget), N, budget), mu_hat(C, N, budget))
        right = then(mu_hat(RC, N, budget), mu_hat(C, N, budget))
        return [(left, right)]
    if law == "truncation-square":
        (n,) = indices
        up = inclusion(ic(n + 1, budget), ic(n + 2, budget), "eta")
        # a corruption goes into tr_n alone so that it cannot cancel against itself
        left = then(up, tr_n_arrow(n + 1, budget), tr_arrow(n, budget))
        right = tr_n_arrow(n, budget, tm)
        return [(left, right)]
    raise ValueError(f"unknown law {law!r}")


def law_samples(S, budget: Budget, composite=200, seed=None):
    """Terms of S to push through a diagram: Base cells, every generator, and seeded depth-2 composites."""
    rng = random.Random(budget.seed if seed is None else seed)
    out = []
    top = S.max_height if S.max_height is not None else budget.max_entry
    for p in all_tables(min(budget.max_table_len, 3), min(budget.max_entry, top)):
        X = realization(p)
        out.extend(cell_term(p, c) for c in X.cells())
    gens = list(S.lifts)
    out.extend(app(d.id, identity_args(d.dom), d.dom) for d in gens)
    # depth-2 composites: replace one identity argument by a lift with the same faces
    tries = 0
    made = 0
    while gens and made < composite and tries < 20 * composite:
        tries += 1
        d = rng.choice(gens)
        args = list(identity_args(d.dom))
        i = rng.randrange(len(args))
        q = d.dom.peaks[i]
        if q == 0:
            continue
        f, g = th.boundary(S, args[i], "s"), th.boundary(S, args[i], "t")
        fillers = []
        for L in S.layers:
            if L.k == q - 1:
                e = L.find(f, g)
                if e is not None:
                    fillers.append(e)
        fillers = [e for e in fillers if e.dom == d.dom]
        if not fillers:
            continue
        e = rng.choice(fillers)
        inner = app(e.id, identity_args(e.dom), e.dom)
        try:
            args[i] = inner
            t = normalize(S, app(d.id, args, d.dom))
            th.type_of(S, t)
        except IllTyped:
            continue
        out.append(t)
        made += 1
    return out


def compare_images(cod, a, b, budget):
    try:
        ta = th.type_of(cod, a)
        tb = th.type_of(cod, b)
    except IllTyped as e:
        return Distinct(f"one route is ill-typed: {e}")
    if ta != tb:
        return Distinct(f"routes land in different types: {ta[0]}->{ta[1]} vs {tb[0]}->{tb[1]}")
    return th.decide_equal(cod, a, b, budget)


def check_law(law, indices=None, budget: Budget = None, mutation=None, composite=200, max_examples=5):
    """Push every sample through both routes of the law's diagram and compare with decide_equal."""
    budget = budget or Budget()
    indices = tuple(indices) if indices is not None else DEFAULT_INDICES[law]
    _check_indices(law, indices)
    if mutation is not None and mutation not in MUTATIONS:
        raise ValueError(f"unknown mutation {mutation!r}")
    routes = law_diagram(law, indices, budget, mutation)
    rep = LawReport(law, indices, budget, mutation=mutation,
                    routes=tuple(f"{l.name} = {r.name}" for l, r in routes))
    S = routes[0][0].dom
    samples = law_samples(S, budget, composite)
    for left, right in routes:
        for t in samples:
            rep.samples += 1
            try:
                a = left.apply_nf(t)
                b = right.apply_nf(t)
            except OutOfBudget as e:
                v = Unknown(str(e))
                a = b = None
            except IllTyped as e:
                v = Distinct(f"a route is undefined here: {e}")
                a = b = None
            else:
                v = compare_images(left.cod, a, b, budget)
            if isinstance(v, Equal):
                rep.equal += 1
            elif isinstance(v, Distinct):
                rep.distinct += 1
                if len(rep.counterexamples) < max_examples:
                    rep.counterexamples.append({
                        "term": show(t), "left": show(a) if a is not None else None,
                        "right": show(b) if b is not None else None, "witness": v.witness})
            else:
                rep.unknown += 1
                if len(rep.unknowns) < max_examples:
                    rep.unknowns.append({"term": show(t), "reason": v.reason})
    return rep


def run_mutations(budget: Budget = None, composite=50):
    """Each corruption against a law it must break."""
    targets = {
        "lambda-drop-eta": ("unit-triangle-1", (0, 1)),
        "lambda-swap": ("unit-triangle-2", (0, 1)),
        "lambda-collapse": ("unit-triangle-2", (0, 1)),
        "tr-swap": ("truncation-square", (1,)),
        "tr-early-collapse": ("truncation-square", (1,)),
    }
    return {m: check_law(law, idx, budget, mutation=m, composite=composite) for m, (law, idx) in targets.items()}


# -- generating cells at each stage --------------------------------------------------


@dataclass
class CellModels:
    stage: str
    k: int
    sphere: object
    disk: object
    j: object  # S^{k-1} -> D^k
    sigma: object  # D^k -> D^{k+1}, onto the source cell
    note: str = ""


def generating_cell_models(stage, k):
    """S^{k-1}, D^k, the boundary inclusion j_k and the source map sigma_k at a stage.

    For Theta_0^op stages these are globular sets.  For the quotient stage at
    level n they are the free n-groupoids on them (n in {0, 1}); above the
    top dimension disks collapse onto D^n, so sigma_k is an identity for k >= n
    and j_{n+1} is the collapse of the two parallel n-cells of S^n.
    """
    from . import globset as gs
    from . import models

    if k < 0:
        raise ValueError("k must be >= 0")
    if isinstance(stage, TowerStage) and stage.kind == "IC_quot":
        n = stage.level
    elif isinstance(stage, TowerStage):
        n = None
    else:
        n = stage
    if n is None:
        sph, dk = gs.sphere(k - 1), gs.disk(k)
        sig = gs.source_inclusion(k)
        return CellModels("Theta_0^op", k, sph, dk, gs.boundary_inclusion(k), sig,
                          f"sigma_{k} is the inclusion of D^{k} as the source of D^{k + 1}")
    if n not in (0, 1):
        raise LevelUnsupported(f"cell models are computed for levels 0 and 1, not {n}")
    sph = models.realize_at_level(gs.sphere(k - 1), n)
    dk = models.realize_at_level(gs.disk(k), n)
    j = models.induced_map(gs.boundary_inclusion(k), n)
    sig = models.induced_map(gs.source_inclusion(k), n)
    notes = []
    if k >= n:
        notes.append(f"sigma_{k} is the identity of D^{n}")
    if k == n + 1:
        notes.append(f"j_{k} is the collapse of S^{n} onto D^{n}")
    elif k > n + 1:
        notes.append(f"j_{k} is the identity of D^{n}")
    note = "; ".join(notes)
    return CellModels(f"level {n}", k, sph, dk, j, sig, note.strip("; "))
