"""Attaching cells to 1-groupoids along D^k -> D^{k+1}, the pushout-condition
sweep, and a bounded check of the free pushout condition.

At level 1 the source inclusion D^0 -> D^1 glues a walking isomorphism onto
the chosen object; for k >= 1 the inclusion D^k -> D^{k+1} is already an
identity of 1-groupoids, so attaching changes nothing.
"""

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional

from .coherator import LevelUnsupported
from .homotopy import is_weak_equivalence, pi0
from .models import (FinGroupoid, FinModel, GroupoidMap, ModelError, NotAModelMap, enumerate_groupoids,
                     groupoid_functors, model_to_groupoid, validate_groupoid, walking_iso)


@dataclass
class AttachmentResult:
    X_plus: FinGroupoid
    p: GroupoidMap
    k: int
    f: str  # the attaching map: an object for k = 0, a morphism for k >= 1
    new_cell: Optional[str] = None  # the attached isomorphism, when k = 0
    new_object: Optional[str] = None


def _fresh(taken, base):
    name = base
    while name in taken:
        name += "'"
    return name


def _as_groupoid(X):
    if isinstance(X, FinModel):
        if X.level == 0:
            return X
        if X.level != 1:
            raise LevelUnsupported(f"exact pushouts are computed at level 1, not level {X.level}")
        return model_to_groupoid(X)
    if isinstance(X, FinGroupoid):
        return X
    raise ModelError(f"cannot attach cells to {type(X).__name__}")


def attaching_maps(X, k):
    """Maps D^k -> X of 1-groupoids: objects for k = 0, morphisms for k >= 1."""
    X = _as_groupoid(X)
    if k == 0:
        return list(X.objects)
    return [m for m, _, _ in X.morphisms]


def attach_cell(X, k, f) -> AttachmentResult:
    X = _as_groupoid(X)
    if isinstance(X, FinModel):
        raise LevelUnsupported("attach cells to a set by viewing it as a discrete groupoid")
    if k < 0:
        raise ValueError("k must be non-negative")
    if k >= 1:
        if f not in {m for m, _, _ in X.morphisms}:
            raise NotAModelMap(f"{f} is not a morphism, so it does not define a map from D^{k}")
        p = GroupoidMap(X, X, {x: x for x in X.objects}, {m: m for m, _, _ in X.morphisms})
        return AttachmentResult(X, p, k, f)
    if f not in X.objects:
        raise NotAModelMap(f"{f} is not an object, so it does not define a map from D^0")
    names = set(X.objects) | {m for m, _, _ in X.morphisms}
    y = _fresh(names, "y")
    e = _fresh(names | {y}, "e")
    ebar = _fresh(names | {y, e}, e + "^-1")
    base = f
    one = X.ident[base]

    # a morphism of X_+ is (pre, m, post): optional e^-1, then m of X, then optional e
    def name(pre, m, post):
        if not pre and not post:
            return m
        if m == one:
            if pre and post:
                return f"1{y}"
            return e if post else ebar
        return (ebar + "." if pre else "") + m + ("." + e if post else "")

    def ends(pre, m, post):
        s, t = X.src(m), X.tgt(m)
        return (y if pre else s), (y if post else t)

    triples = []
    for m, s, t in X.morphisms:
        for pre in (0, 1):
            for post in (0, 1):
                if (pre and s != base) or (post and t != base):
                    continue
                triples.append((pre, m, post))
    objs = X.objects + (y,)
    mors = tuple((name(*tr), *ends(*tr)) for tr in triples)
    comp, inv = {}, {}
    for a in triples:
        for b in triples:
            if ends(*a)[1] != ends(*b)[0]:
                continue
            # a.post and b.pre meet at the same end: e then e^-1 cancels, nothing else can occur
            comp[(name(*a), name(*b))] = name(a[0], X.comp[(a[1], b[1])], b[2])
        inv[name(*a)] = name(a[2], X.inv[a[1]], a[0])
    ident = dict(X.ident)
    ident[y] = f"1{y}"
    Xp = FinGroupoid(objs, mors, comp, ident, inv, f"{X.name}+D1@{f}" if X.name else f"+D1@{f}")
    p = GroupoidMap(X, Xp, {x: x for x in X.objects}, {m: m for m, _, _ in X.morphisms})
    return AttachmentResult(Xp, p, 0, f, new_cell=e, new_object=y)


def check_universal_property(X, k, f, targets):
    """Compare cocones into each target groupoid with maps out of X_+.

    A cocone is a functor g : X -> Z together with a map h : D^{k+1} -> Z
    agreeing on D^k; it must factor through X_+ in exactly one way.  Returns
    the first failure or None.
    """
    res = attach_cell(X, k, f)
    Xp = res.X_plus
    for Z in targets:
        outs = groupoid_functors(Xp, Z)
        for g in groupoid_functors(X, Z):
            if k == 0:
                # h : walking iso -> Z is one morphism out of g(f)
                cones = [m for m, s, _ in Z.morphisms if s == g.obj[f]]
            else:
                # D^{k+1} -> Z agreeing with g on D^k is g(f) itself
                cones = [g.mor[f]]
            for h in cones:
                hits = [u for u in outs
                        if all(u.mor[m] == g.mor[m] for m, _, _ in X.morphisms)
                        and all(u.obj[x] == g.obj[x] for x in X.objects)
                        and (k > 0 or u.mor[res.new_cell] == h)]
                if len(hits) != 1:
                    return {"target": Z.name, "cocone": {"g": g.mor, "h": h}, "factorizations": len(hits)}
    return None


# -- the pushout condition sweep --------------------------------------------------------


def check_pushout_condition(X, ks=(0, 1, 2), name=None):
    X = _as_groupoid(X)
    validate_groupoid(X)
    rows = []
    for k in ks:
        for f in attaching_maps(X, k):
            res = attach_cell(X, k, f)
            we = is_weak_equivalence(res.p)
            rows.append({"X": name or X.name, "k": k, "f": f, "verdict": we.verdict,
                         "evidence": {"objects": len(res.X_plus.objects), "morphisms": len(res.X_plus.morphisms),
                                      **({"failure": we.evidence["failure"]} if "failure" in we.evidence else {})}})
    verdicts = {r["verdict"] for r in rows}
    if "Not" in verdicts:
        verdict = "fail"
    elif "Unknown" in verdicts:
        verdict = "unknown"
    else:
        verdict = "pass"
    return {"rows": rows, "verdict": verdict, "vacuous": not rows}


def pushout_sweep(max_objects=3, max_morphisms=12, ks=(0, 1, 2)):
    rows, vacuous = [], True
    for X in enumerate_groupoids(max_objects, max_morphisms):
        rep = check_pushout_condition(X, ks)
        rows += rep["rows"]
        vacuous &= rep["vacuous"]
    bad = [r for r in rows if r["verdict"] != "WeakEquivalence"]
    verdict = "pass" if not bad else ("fail" if any(r["verdict"] == "Not" for r in bad) else "unknown")
    return {"rows": rows, "verdict": verdict, "vacuous": not rows}


# -- the free pushout condition ------------------------------------------------------------
#
# free(X_+) is the free 2-groupoid on X glued with a free isomorphism e.  Its
# 1-cells are words in the morphisms of X and e, e^-1; its 2-cells are generated
# by the rewrite steps
#     m n -> (m;n)     1_a -> (empty)     e e^-1 -> (empty)     e^-1 e -> (empty)
# and every parallel pair of rewrite paths is filled one level up.  All rules
# shorten words, so when every critical pair is joinable (these live in words of
# length 3) normal forms are unique: pi_1 is read off the normal-form loops and
# pi_2 is trivial because every loop of rewrites is tiled by joined peaks.


@dataclass
class _Rewriting:
    objects: tuple
    letters: Dict[str, tuple]  # letter -> (source, target)
    rules: Dict[tuple, tuple]  # length-1 or length-2 word -> shorter word
    units: set

    def step(self, w):
        """All one-step rewrites of w."""
        out = []
        for i in range(len(w)):
            for n in (1, 2):
                lhs = w[i:i + n]
                if len(lhs) == n and lhs in self.rules:
                    out.append(w[:i] + self.rules[lhs] + w[i + n:])
        return out

    def normal_forms(self, w):
        seen, todo, nfs = {w}, [w], set()
        while todo:
            u = todo.pop()
            nxt = self.step(u)
            if not nxt:
                nfs.add(u)
            for v in nxt:
                if v not in seen:
                    seen.add(v)
                    todo.append(v)
        return nfs

    def words(self, max_len):
        """Composable words (with their endpoints) of length 1..max_len."""
        out = []
        layer = [((l,), s, t) for l, (s, t) in self.letters.items()]
        for _ in range(max_len):
            out += layer
            nxt = []
            for w, s, t in layer:
                for l, (s2, t2) in self.letters.items():
                    if s2 == t:
                        nxt.append((w + (l,), s, t2))
            layer = nxt
        return out, layer


def _free_rewriting(X: FinGroupoid, base=None, drop_inverse=False):
    letters = {m: (s, t) for m, s, t in X.morphisms}
    rules = {}
    for (a, b), c in X.comp.items():
        rules[(a, b)] = () if c in X.ident.values() else (c,)
    for x, one in X.ident.items():
        rules[(one,)] = ()
    objects = X.objects
    if base is not None:
        y = _fresh(set(X.objects), "y")
        objects = objects + (y,)
        letters["<e>"] = (base, y)
        if not drop_inverse:
            letters["<e^-1>"] = (y, base)
            rules[("<e>", "<e^-1>")] = ()
            rules[("<e^-1>", "<e>")] = ()
    return _Rewriting(objects, letters, rules, set(X.ident.values()))


def _scc_pi0(R: _Rewriting):
    """Path components of the directed letter graph: a component needs paths both ways."""
    reach = {x: {x} for x in R.objects}
    changed = True
    while changed:
        changed = False
        for _, (s, t) in R.letters.items():
            for x in R.objects:
                if s in reach[x] and t not in reach[x]:
                    reach[x].add(t)
                    changed = True
    comps = {}
    for x in R.objects:
        key = frozenset(y for y in reach[x] if x in reach[y])
        comps[key] = tuple(sorted(key))
    return sorted(comps.values())


def _saturate(R: _Rewriting, depth):
    words, frontier = R.words(depth)
    ambiguous = []
    nf = {}
    for w, s, t in words:
        forms = R.normal_forms(w)
        if len(forms) > 1:
            ambiguous.append([list(w), sorted(list(f) for f in forms)])
        nf[w] = (min(forms), s, t)
    # every prefix of an irreducible word is irreducible, so if no word one letter past
    # the bound is irreducible then all normal forms have been seen
    long_irreducible = [w for w, s, t in frontier if not R.step(w)]
    return nf, ambiguous, long_irreducible


def check_free_pushout_condition(X, k=0, f=None, sat_depth=3, mutation=None):
    """Bounded evidence for free(p) being a weak equivalence.  Verdicts pass/fail/unknown."""
    level = X.level if isinstance(X, FinModel) else 1
    if level != 1:
        raise LevelUnsupported(f"the free pushout experiment runs on 1-groupoids, not level {level}")
    X = _as_groupoid(X)
    validate_groupoid(X)
    maps = [f] if f is not None else attaching_maps(X, k)
    rows = []
    for g in maps:
        rows.append(_free_row(X, k, g, sat_depth, mutation))
    verdicts = {r["verdict"] for r in rows}
    verdict = "fail" if "fail" in verdicts else "unknown" if "unknown" in verdicts else "pass"
    return {"rows": rows, "verdict": verdict, "vacuous": not rows, "sat_depth": sat_depth,
            "mutation": mutation}


def _free_row(X, k, f, depth, mutation):
    row = {"X": X.name, "k": k, "f": f, "sat_depth": depth}
    if k >= 1:
        # X_+ = X and p is the identity, so free(p) is the identity
        row.update(verdict="pass", evidence={"reason": "attachment along D^k -> D^{k+1} is an identity for k >= 1"})
        return row
    R0 = _free_rewriting(X)
    R1 = _free_rewriting(X, base=f, drop_inverse=(mutation == "drop-inverse"))
    ev = {}
    # pi_0 is decided exactly from the letter graph
    c0, c1 = _scc_pi0(R0), _scc_pi0(R1)
    where = {x: i for i, c in enumerate(c1) for x in c}
    images = {where[c[0]] for c in c0}
    ev["pi0"] = {"dom": [list(c) for c in c0], "cod": [list(c) for c in c1]}
    if len(images) != len(c0) or len(c0) != len(c1):
        missed = [list(c) for i, c in enumerate(c1) if i not in images]
        ev["witness"] = {"invariant": "pi0", "unreached_components": missed}
        row.update(verdict="fail", evidence=ev)
        return row
    nf, ambiguous, long_irr = _saturate(R1, depth)
    ev["words_checked"] = len(nf)
    ev["ambiguous"] = ambiguous[:5]
    if ambiguous:
        row.update(verdict="unknown", evidence=ev)
        ev["reason"] = "a critical pair did not join within the budget"
        return row
    if depth < 3:
        ev["reason"] = "critical pairs of length-2 rules sit in words of length 3; budget too small to certify"
        row.update(verdict="unknown", evidence=ev)
        return row
    if long_irr:
        ev["reason"] = "irreducible words run past the depth bound"
        row.update(verdict="unknown", evidence=ev)
        return row
    # normal forms are unique and all shorter than the bound: pi_1 at x is the set of loops in normal form
    ev["pi_1"] = []
    for x in X.objects:
        loops_x = sorted({m for m, s, t in X.morphisms if s == x and t == x})
        loops_plus = sorted({w for (w, s, t) in nf.values() if s == x and t == x})
        image = sorted({nf[(m,)][0] for m in loops_x})
        cod = set(loops_plus) | {()}
        ev["pi_1"].append({"basepoint": x, "dom": len(loops_x), "cod": len(cod)})
        if set(image) != cod or len(image) != len(loops_x):
            ev["witness"] = {"invariant": "pi_1", "basepoint": x,
                             "unmatched": [list(w) for w in sorted(cod - set(image))]}
            row.update(verdict="fail", evidence=ev)
            return row
    ev["pi_2"] = "every peak of rewrites joins, so all 2-loops are filled"
    row.update(verdict="pass", evidence=ev)
    return row


def corpus():
    """Small named 1-groupoids used by the experiments."""
    from . import groups as grp
    from .models import discrete_groupoid, group_as_groupoid, point

    return [point(), walking_iso(), discrete_groupoid(["p", "q", "r"]), group_as_groupoid(grp.cyclic(2)),
            group_as_groupoid(grp.cyclic(3)), group_as_groupoid(grp.direct_product(grp.cyclic(2), grp.cyclic(2)))]
