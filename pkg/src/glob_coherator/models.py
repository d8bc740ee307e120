"""Finite models of the truncated coherator: n-groupoids for n <= 2 as
carriers plus designated operation tables, finite groupoids, free groupoids
on graphs, and the functors tr, D and U between levels.

Operations are named by the lift they interpret:

* ``c{k}_{j}`` on (k,j,k): composition of k-cells along a j-cell (diagrammatic order),
* ``z{k}`` on (k-1): identity k-cell,
* ``i{k}`` on (k): inverse of a k-cell for ``c{k}_{k-1}``.
"""

import json
import re
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Tuple

from . import groups as grp
from .globset import GlobularSet, GlobularSetError, make_globular_set
from .theta0 import Table, parse_table
from .theory import elements


class ModelError(ValueError):
    pass


class RelationViolation(ModelError):
    def __init__(self, relation, inputs, detail=""):
        self.relation, self.inputs = relation, inputs
        super().__init__(f"relation {relation} fails at {inputs}" + (f": {detail}" if detail else ""))


class NotParallelRespecting(RelationViolation):
    """Two parallel top-dimensional composites that the theory identifies differ."""


class WrongLevel(ModelError):
    pass


class NotAModelMap(ModelError):
    pass


class LevelMismatch(ModelError):
    pass


# -- finite models -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class OpTable:
    name: str
    dom: Table
    cod: int
    table: Dict[tuple, tuple]

    def __call__(self, *cells):
        return self.table[tuple(cells)]


def designated_ops(level):
    """(name, domain table, codomain) for the operations a level-n model carries."""
    out = []
    for k in range(1, level + 1):
        for j in range(k - 1, -1, -1):
            out.append((f"c{k}_{j}", Table((k, j, k)), k))
        out.append((f"z{k}", Table((k - 1,)), k))
        out.append((f"i{k}", Table((k,)), k))
    return out


@dataclass(frozen=True, eq=False)
class FinModel:
    level: int
    X: GlobularSet
    ops: Dict[str, OpTable] = field(default_factory=dict)

    def cells(self, d):
        return list(self.X.cells(d)) if d <= self.X.dim else []

    def label(self, c):
        return self.X.label(c)

    def find(self, name):
        return self.X.find(name)

    def op(self, name):
        try:
            return self.ops[name]
        except KeyError:
            raise ModelError(f"model has no designated operation {name}") from None

    def comp(self, k, j, a, b):
        return self.op(f"c{k}_{j}")(a, b)

    def ident(self, k, a):
        return self.op(f"z{k}")(a)

    def inv(self, k, a):
        return self.op(f"i{k}")(a)

    def signature(self):
        return {"level": self.level, "counts": list(self.X.counts), "ops": sorted(self.ops)}

    def to_raw(self):
        X = self.X
        raw = {"level": self.level, "cells": [list(n) for n in X.labels], "src": {}, "tgt": {}, "ops": {}}
        for d in range(1, X.dim + 1):
            for c in X.cells(d):
                raw["src"][X.label(c)] = X.label(X.source(c))
                raw["tgt"][X.label(c)] = X.label(X.target(c))
        for name, op in sorted(self.ops.items()):
            raw["ops"][name] = {
                "dom": list(op.dom.entries), "cod": op.cod,
                "table": [[[X.label(c) for c in k], X.label(v)] for k, v in sorted(op.table.items())],
            }
        return raw

    def same_tables(self, other):
        return self.to_raw() == other.to_raw()


def _typed(M, name, inputs, out):
    """Faces an operation's output must have (the lift's triangles)."""
    X = M.X
    kind, k = name[0], int(name[1:].split("_")[0])
    if kind == "c":
        a, b = inputs
        j = int(name.split("_")[1])
        if j == k - 1:
            return X.source(a), X.target(b)
        # composing along a lower cell: faces are composites of faces
        sa, sb = X.source(a), X.source(b)
        ta, tb = X.target(a), X.target(b)
        return M.comp(k - 1, j, sa, sb), M.comp(k - 1, j, ta, tb)
    if kind == "z":
        (x,) = inputs
        return x, x
    (a,) = inputs
    return X.target(a), X.source(a)


def validate_model(raw, level=None, budget=None) -> FinModel:
    """Build and check a model from raw tables (dict form or a FinModel)."""
    if isinstance(raw, FinModel):
        M = raw
    else:
        M = _from_raw(raw, level)
    X = M.X
    for name, dom, cod in designated_ops(M.level):
        if name not in M.ops:
            raise ModelError(f"missing designated operation {name} : {dom} -> {cod}")
    # totality and typing, lower operations first so faces of higher ones can be computed
    for name, op in sorted(M.ops.items(), key=lambda kv: (kv[1].cod, kv[0])):
        want = set(elements(X, op.dom)) if op.cod <= X.dim and op.dom.height <= X.dim else set()
        have = set(op.table)
        if want - have:
            missing = sorted(want - have)[0]
            raise ModelError(f"operation {name} is not total: no value at {[X.label(c) for c in missing]}")
        if have - want:
            extra = sorted(have - want)[0]
            raise ModelError(f"operation {name} has an input outside its domain: {[X.label(c) for c in extra]}")
        for inp, out in op.table.items():
            if out[0] != op.cod:
                raise RelationViolation(f"{name}:dim", _lab(X, inp), f"value {X.label(out)} has dimension {out[0]}")
            if op.cod > 0 and name[0] in "czi":
                s, t = _typed(M, name, inp, out)
                if X.source(out) != s or X.target(out) != t:
                    raise RelationViolation(f"{name}:faces", _lab(X, inp),
                                            f"value {X.label(out)} should run {X.label(s)} -> {X.label(t)}")
    _check_top_relations(M)
    if M.level >= 2:
        _check_weak_relations(M)
    return M


def _lab(X, cells):
    return tuple(X.label(c) for c in cells)


def _check_top_relations(M):
    """Strict laws among top cells: parallel composites of top cells are identified."""
    n = M.level
    if n == 0:
        return
    X = M.X
    c = M.ops[f"c{n}_{n - 1}"]
    z = M.ops[f"z{n}"]
    i = M.ops[f"i{n}"]
    top = M.cells(n)
    after = {}
    for a in top:
        after.setdefault(X.source(a), []).append(a)
    for a in top:
        sa, ta = X.source(a), X.target(a)
        if c(z(sa), a) != a or c(a, z(ta)) != a:
            raise NotParallelRespecting("unit", _lab(X, (a,)))
        if c(a, i(a)) != z(sa) or c(i(a), a) != z(ta):
            raise NotParallelRespecting("inverse", _lab(X, (a,)))
        for b in after.get(ta, []):
            ab = c(a, b)
            for d in after.get(X.target(b), []):
                if c(ab, d) != c(a, c(b, d)):
                    raise NotParallelRespecting("associativity", _lab(X, (a, b, d)))
    if n >= 2:
        # interchange of vertical c2_1 with horizontal c2_0
        h = M.ops["c2_0"]
        by_src = {}
        for (a, b) in h.table:
            by_src.setdefault((X.source(a), X.source(b)), []).append((a, b))
        for (a, b) in h.table:
            for (a2, b2) in by_src.get((X.target(a), X.target(b)), []):
                lhs = c(h(a, b), h(a2, b2))
                rhs = h(c(a, a2), c(b, b2))
                if lhs != rhs:
                    raise NotParallelRespecting("interchange", _lab(X, (a, b, a2, b2)))


def _check_weak_relations(M):
    """Laws among 1-cells of a 2-model hold up to a 2-cell."""
    X = M.X
    c, z, i = M.ops["c1_0"], M.ops["z1"], M.ops["i1"]

    def linked(u, v):
        return any(X.source(a) == u and X.target(a) == v for a in M.cells(2))

    ones = M.cells(1)
    after = {}
    for a in ones:
        after.setdefault(X.source(a), []).append(a)
    for a in ones:
        sa, ta = X.source(a), X.target(a)
        if not linked(c(z(sa), a), a) or not linked(c(a, z(ta)), a):
            raise RelationViolation("unit-up-to-2-cell", _lab(X, (a,)))
        if not linked(c(a, i(a)), z(sa)):
            raise RelationViolation("inverse-up-to-2-cell", _lab(X, (a,)))
        for b in after.get(ta, []):
            for d in after.get(X.target(b), []):
                if not linked(c(c(a, b), d), c(a, c(b, d))):
                    raise RelationViolation("associativity-up-to-2-cell", _lab(X, (a, b, d)))


def _from_raw(raw, level=None):
    lvl = raw.get("level", level)
    if lvl is None:
        raise ModelError("model level is not given")
    names = [tuple(d) for d in raw["cells"]]
    while len(names) < lvl + 1:
        names.append(())
    index = {}
    for d, ns in enumerate(names):
        for i, nm in enumerate(ns):
            if nm in index:
                raise ModelError(f"cell name {nm!r} used twice")
            index[nm] = (d, i)
    src, tgt = [], []
    for d in range(1, len(names)):
        s_row, t_row = [], []
        for nm in names[d]:
            try:
                s_row.append(index[raw["src"][nm]][1])
                t_row.append(index[raw["tgt"][nm]][1])
            except KeyError as e:
                raise ModelError(f"cell {nm!r} has no source/target in the model: {e}") from None
        src.append(tuple(s_row))
        tgt.append(tuple(t_row))
    try:
        X = make_globular_set(names, src, tgt)
    except GlobularSetError as e:
        raise ModelError(str(e)) from None
    ops = {}
    for name, spec in raw.get("ops", {}).items():
        dom = Table(tuple(spec["dom"]))
        tab = {}
        for inp, out in spec["table"]:
            try:
                tab[tuple(index[x] for x in inp)] = index[out]
            except KeyError as e:
                raise ModelError(f"operation {name} mentions unknown cell {e}") from None
        ops[name] = OpTable(name, dom, spec["cod"], tab)
    return FinModel(lvl, X, ops)


# -- model files --------------------------------------------------------------------

_OP_RE = re.compile(r"^op\s+(\w+)\s*:\s*(\([^)]*\))\s*->\s*(\d+)\s*=\s*\{(.*)\}\s*$")
_PLAIN = re.compile(r'[^\s,()#"{}]+')


def _quote(name):
    """Cell names with separators in them are written as JSON strings."""
    return name if _PLAIN.fullmatch(name) and "->" not in name else json.dumps(name)


def _split(text, sep):
    """Split on ``sep`` outside quotes and brackets."""
    parts, depth, quoted, buf, i = [], 0, False, "", 0
    while i < len(text):
        ch = text[i]
        if quoted:
            buf += ch
            if ch == "\\":
                buf += text[i + 1]
                i += 1
            elif ch == '"':
                quoted = False
        elif ch == '"':
            quoted = True
            buf += ch
        elif ch in "({":
            depth += 1
            buf += ch
        elif ch in ")}":
            depth -= 1
            buf += ch
        elif depth == 0 and text.startswith(sep, i):
            parts.append(buf)
            buf = ""
            i += len(sep)
            continue
        else:
            buf += ch
        i += 1
    if quoted or depth:
        raise ValueError(f"unbalanced quotes or brackets in {text!r}")
    parts.append(buf)
    return [x.strip() for x in parts]


def _uncomment(line):
    """Drop a '#' comment that starts outside quotes, at the line start or after whitespace."""
    quoted = False
    for i, ch in enumerate(line):
        if ch == '"' and (i == 0 or line[i - 1] != "\\"):
            quoted = not quoted
        elif ch == "#" and not quoted and (i == 0 or line[i - 1].isspace()):
            return line[:i].strip()
    return line.strip()


def _name(tok):
    tok = tok.strip()
    if tok.startswith('"'):
        return json.loads(tok)
    if not tok:
        raise ValueError("empty cell name")
    return tok


def _arrow(item):
    pair = _split(item, "->")
    if len(pair) != 2:
        raise ValueError(f"expected 'a -> b', got {item!r}")
    return pair


def _strip_parens(tok):
    while tok.startswith("(") and tok.endswith(")"):
        tok = tok[1:-1].strip()
    return tok


def parse_model(text) -> dict:
    """Read a model file into raw form.

    level 1
    dim 0: x, y
    dim 1: a, b
    src: a -> x, b -> y
    tgt: a -> y, b -> x
    op c1_0 : (1,0,1) -> 1 = {((a,b)) -> 1x, ...}
    """
    raw = {"level": None, "cells": [], "src": {}, "tgt": {}, "ops": {}}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = _uncomment(line)
        if not line:
            continue
        try:
            if line.startswith("level"):
                raw["level"] = int(line.split()[1])
            elif line.startswith("dim"):
                d, rest = line[3:].split(":", 1)
                d = int(d)
                while len(raw["cells"]) <= d:
                    raw["cells"].append([])
                raw["cells"][d] = [_name(x) for x in _split(rest, ",") if x]
            elif line.startswith("src:") or line.startswith("tgt:"):
                key = line[:3]
                for item in _split(line[4:], ","):
                    if item:
                        a, b = _arrow(item)
                        raw[key][_name(a)] = _name(b)
            elif line.startswith("op"):
                m = _OP_RE.match(line)
                if not m:
                    raise ModelError("malformed op line")
                name, tbl, cod, body = m.groups()
                dom = parse_table(tbl)
                entries = []
                for item in _split(body, ","):
                    if item:
                        inp, out = _arrow(item)
                        entries.append(([_name(x) for x in _split(_strip_parens(inp), ",")], _name(out)))
                raw["ops"][name] = {"dom": list(dom.entries), "cod": int(cod), "table": entries}
            else:
                raise ModelError(f"cannot read {line!r}")
        except (ValueError, IndexError) as e:
            err = ModelError(f"line {lineno}: {e}")
            err.line = lineno
            raise err from None
    if raw["level"] is None:
        raise ModelError("model file has no 'level' line")
    return raw


def write_model(M: FinModel) -> str:
    raw = M.to_raw()
    lines = [f"level {M.level}"]
    for d, names in enumerate(raw["cells"]):
        lines.append(f"dim {d}: " + ", ".join(map(_quote, names)))
    for key in ("src", "tgt"):
        if raw[key]:
            lines.append(f"{key}: " + ", ".join(f"{_quote(a)} -> {_quote(b)}" for a, b in raw[key].items()))
    for name, spec in raw["ops"].items():
        body = ", ".join(f"(({','.join(map(_quote, inp))})) -> {_quote(out)}" for inp, out in spec["table"])
        lines.append(f"op {name} : ({','.join(map(str, spec['dom']))}) -> {spec['cod']} = {{{body}}}")
    return "\n".join(lines) + "\n"


# -- groupoids ----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FinGroupoid:
    objects: Tuple[str, ...]
    morphisms: Tuple[Tuple[str, str, str], ...]  # (name, source, target)
    comp: Dict[Tuple[str, str], str]  # (f, g) -> f then g
    ident: Dict[str, str]
    inv: Dict[str, str]
    name: str = ""

    def src(self, f):
        return self._ends()[f][0]

    def tgt(self, f):
        return self._ends()[f][1]

    def _ends(self):
        e = self.__dict__.get("_e")
        if e is None:
            e = {m: (s, t) for m, s, t in self.morphisms}
            object.__setattr__(self, "_e", e)
        return e

    def hom(self, a, b):
        return [m for m, s, t in self.morphisms if s == a and t == b]

    def __repr__(self):
        return f"<groupoid {self.name or '?'}: {len(self.objects)} objects, {len(self.morphisms)} morphisms>"

    def same_as(self, other):
        return (self.objects == other.objects and self.morphisms == other.morphisms
                and self.comp == other.comp and self.ident == other.ident and self.inv == other.inv)


def validate_groupoid(G: FinGroupoid) -> FinGroupoid:
    ends = {}
    for m, s, t in G.morphisms:
        if m in ends:
            raise ModelError(f"morphism {m} listed twice")
        if s not in G.objects or t not in G.objects:
            raise ModelError(f"morphism {m} has an endpoint outside the objects")
        ends[m] = (s, t)
    for x in G.objects:
        e = G.ident.get(x)
        if e is None or ends.get(e) != (x, x):
            raise ModelError(f"identity of {x} is missing or not a loop")
    for f, (s, t) in ends.items():
        for g, (s2, t2) in ends.items():
            if t != s2:
                continue
            h = G.comp.get((f, g))
            if h is None or ends.get(h) != (s, t2):
                raise RelationViolation("composition", (f, g))
        if G.comp[(G.ident[s], f)] != f or G.comp[(f, G.ident[t])] != f:
            raise RelationViolation("unit", (f,))
        fi = G.inv.get(f)
        if fi is None or G.comp.get((f, fi)) != G.ident[s] or G.comp.get((fi, f)) != G.ident[t]:
            raise RelationViolation("inverse", (f,))
    for (f, g), fg in G.comp.items():
        for h, (s, t) in ends.items():
            if s == ends[g][1] and G.comp[(fg, h)] != G.comp[(f, G.comp[(g, h)])]:
                raise RelationViolation("associativity", (f, g, h))
    return G


def groupoid_to_model(G: FinGroupoid) -> FinModel:
    objs = list(G.objects)
    mors = [m for m, _, _ in G.morphisms]
    oi = {x: i for i, x in enumerate(objs)}
    mi = {m: i for i, m in enumerate(mors)}
    X = make_globular_set([tuple(objs), tuple(mors)],
                          [tuple(oi[s] for _, s, _ in G.morphisms)],
                          [tuple(oi[t] for _, _, t in G.morphisms)])
    c = {((1, mi[f]), (1, mi[g])): (1, mi[h]) for (f, g), h in G.comp.items()}
    z = {((0, oi[x]),): (1, mi[e]) for x, e in G.ident.items()}
    i = {((1, mi[f]),): (1, mi[g]) for f, g in G.inv.items()}
    ops = {"c1_0": OpTable("c1_0", Table((1, 0, 1)), 1, c),
           "z1": OpTable("z1", Table((0,)), 1, z),
           "i1": OpTable("i1", Table((1,)), 1, i)}
    return FinModel(1, X, ops)


def model_to_groupoid(M: FinModel, name="") -> FinGroupoid:
    if M.level != 1:
        raise WrongLevel(f"a groupoid is a level-1 model, this one has level {M.level}")
    X = M.X
    L = X.label
    objs = tuple(L(c) for c in M.cells(0))
    mors = tuple((L(c), L(X.source(c)), L(X.target(c))) for c in M.cells(1))
    comp = {(L(a), L(b)): L(v) for (a, b), v in M.ops["c1_0"].table.items()}
    ident = {L(x): L(v) for (x,), v in M.ops["z1"].table.items()}
    inv = {L(a): L(v) for (a,), v in M.ops["i1"].table.items()}
    return FinGroupoid(objs, mors, comp, ident, inv, name)


def group_as_groupoid(G: grp.FinGroup, obj="*") -> FinGroupoid:
    names = G.names
    mors = tuple((n, obj, obj) for n in names)
    comp = {(names[a], names[b]): names[G.mul[a][b]] for a in range(G.order) for b in range(G.order)}
    return FinGroupoid((obj,), mors, comp, {obj: names[G.identity]},
                       {names[a]: names[G.inverse[a]] for a in range(G.order)}, G.name)


def connected_groupoid(G: grp.FinGroup, objects, tag=""):
    """The connected groupoid objects x objects x G with vertex group G."""
    objs = tuple(objects)
    mors, comp = [], {}

    def nm(i, j, g):
        return f"{objs[i]}>{objs[j]}:{G.names[g]}{tag}"

    for i, j in product(range(len(objs)), repeat=2):
        for g in range(G.order):
            mors.append((nm(i, j, g), objs[i], objs[j]))
    for i, j, k in product(range(len(objs)), repeat=3):
        for g in range(G.order):
            for h in range(G.order):
                comp[(nm(i, j, g), nm(j, k, h))] = nm(i, k, G.mul[g][h])
    ident = {objs[i]: nm(i, i, G.identity) for i in range(len(objs))}
    inv = {nm(i, j, g): nm(j, i, G.inverse[g]) for i, j in product(range(len(objs)), repeat=2) for g in range(G.order)}
    return FinGroupoid(objs, tuple(mors), comp, ident, inv, f"{len(objs)}x{G.name}")


def disjoint_union(parts, name=""):
    objs, mors, comp, ident, inv = [], [], {}, {}, {}
    for P in parts:
        objs += P.objects
        mors += P.morphisms
        comp.update(P.comp)
        ident.update(P.ident)
        inv.update(P.inv)
    return FinGroupoid(tuple(objs), tuple(mors), comp, ident, inv, name)


def walking_iso():
    objs = ("x", "y")
    mors = (("1x", "x", "x"), ("a", "x", "y"), ("a'", "y", "x"), ("1y", "y", "y"))
    comp = {("1x", "1x"): "1x", ("1x", "a"): "a", ("a", "a'"): "1x", ("a", "1y"): "a",
            ("a'", "1x"): "a'", ("a'", "a"): "1y", ("1y", "a'"): "a'", ("1y", "1y"): "1y"}
    return FinGroupoid(objs, mors, comp, {"x": "1x", "y": "1y"}, {"1x": "1x", "a": "a'", "a'": "a", "1y": "1y"},
                       "walking-iso")


def discrete_groupoid(objects):
    objs = tuple(objects)
    mors = tuple((f"1{x}", x, x) for x in objs)
    return FinGroupoid(objs, mors, {(f"1{x}", f"1{x}"): f"1{x}" for x in objs},
                       {x: f"1{x}" for x in objs}, {f"1{x}": f"1{x}" for x in objs}, f"discrete{len(objs)}")


def point():
    return discrete_groupoid(["x"])


def enumerate_groupoids(max_objects=4, max_morphisms=20, max_order=20):
    """Every groupoid with the given bounds, one per isomorphism class.

    A groupoid is a disjoint union of connected ones, and a connected one on
    m objects is fixed by its vertex group, with m*m*|G| morphisms.
    """
    cat = grp.catalogue(max_order)
    kinds = []  # (m, group index key, group)
    for m in range(1, max_objects + 1):
        for n in sorted(cat):
            if m * m * n > max_morphisms:
                continue
            for G in cat[n]:
                kinds.append((m, G))
    out = []

    def go(start, objs_left, mors_left, chosen):
        comps = []
        next_obj = 0
        for idx, (m, G) in enumerate(chosen):
            names = [f"o{next_obj + i}" for i in range(m)]
            next_obj += m
            comps.append(connected_groupoid(G, names, tag=f"#{idx}" if len(chosen) > 1 else ""))
        label = "+".join(f"{m}x{G.name}" for m, G in chosen) or "empty"
        out.append(disjoint_union(comps, label))
        for i in range(start, len(kinds)):
            m, G = kinds[i]
            if m <= objs_left and m * m * G.order <= mors_left:
                go(i, objs_left - m, mors_left - m * m * G.order, chosen + [(m, G)])

    go(0, max_objects, max_morphisms, [])
    return out


# -- free groupoids -----------------------------------------------------------------


@dataclass(frozen=True)
class Word:
    src: str
    tgt: str
    letters: Tuple[Tuple[str, int], ...] = ()

    def __str__(self):
        if not self.letters:
            return f"1{self.src}"
        return ".".join(e if s > 0 else e + "^-1" for e, s in self.letters)


@dataclass(frozen=True, eq=False)
class PresGroupoid:
    """Free groupoid on a graph; morphisms are reduced words in edges and formal inverses."""

    objects: Tuple[str, ...]
    edges: Tuple[Tuple[str, str, str], ...]  # (name, source, target)
    relations: Tuple[Tuple[str, str], ...] = ()  # edges identified before freeing (record only)
    name: str = ""

    def _ends(self):
        e = self.__dict__.get("_e")
        if e is None:
            e = {n: (s, t) for n, s, t in self.edges}
            object.__setattr__(self, "_e", e)
        return e

    def letter_ends(self, letter):
        s, t = self._ends()[letter[0]]
        return (s, t) if letter[1] > 0 else (t, s)

    def word(self, src, letters):
        """Check a letter sequence composes from ``src`` and reduce it."""
        at = src
        for l in letters:
            s, t = self.letter_ends(l)
            if s != at:
                raise ModelError(f"letter {l} does not start at {at}")
            at = t
        return Word(src, at, reduce_word(letters))

    def identity(self, x):
        return Word(x, x, ())

    def generator(self, e):
        s, t = self._ends()[e]
        return Word(s, t, ((e, 1),))

    def compose(self, u: Word, v: Word) -> Word:
        if u.tgt != v.src:
            raise ModelError(f"cannot compose {u} then {v}")
        return Word(u.src, v.tgt, reduce_word(u.letters + v.letters))

    def inverse(self, u: Word) -> Word:
        return Word(u.tgt, u.src, tuple((e, -s) for e, s in reversed(u.letters)))

    def hom(self, a, b, max_len):
        """Reduced words a -> b of length <= max_len."""
        out = []
        letters = [(e, 1) for e, _, _ in self.edges] + [(e, -1) for e, _, _ in self.edges]

        def go(at, acc):
            if at == b:
                out.append(Word(a, b, tuple(acc)))
            if len(acc) == max_len:
                return
            for l in letters:
                s, t = self.letter_ends(l)
                if s != at or (acc and acc[-1] == (l[0], -l[1])):
                    continue
                acc.append(l)
                go(t, acc)
                acc.pop()

        go(a, [])
        return out

    def components(self):
        parent = {x: x for x in self.objects}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for _, s, t in self.edges:
            parent[find(s)] = find(t)
        comps = {}
        for x in self.objects:
            comps.setdefault(find(x), []).append(x)
        return sorted(comps.values())

    def component_of(self, x):
        for c in self.components():
            if x in c:
                return c
        raise ModelError(f"{x} is not an object")

    def pi1_rank(self, x):
        """Rank of the free vertex group at x: edges - vertices + 1 on x's component."""
        comp = set(self.component_of(x))
        e = sum(1 for _, s, _ in self.edges if s in comp)
        return e - len(comp) + 1

    def spanning_tree(self, x):
        comp = self.component_of(x)
        tree, seen, todo = {}, {x}, [x]
        while todo:
            a = todo.pop(0)
            for e, s, t in self.edges:
                for u, v, sign in ((s, t, 1), (t, s, -1)):
                    if u == a and v not in seen:
                        seen.add(v)
                        tree[v] = (e, sign, a)
                        todo.append(v)
        return tree

    def path_from(self, x, v):
        tree = self.spanning_tree(x)
        letters = []
        while v != x:
            e, sign, a = tree[v]
            letters.append((e, sign))
            v = a
        return tuple(reversed(letters))

    def free_basis(self, x):
        """Loops at x, one per edge outside a spanning tree: a basis of pi_1."""
        tree = self.spanning_tree(x)
        used = {(e) for e, _, _ in tree.values()}
        comp = set(self.component_of(x))
        basis = []
        for e, s, t in self.edges:
            if s in comp and e not in used:
                w = self.path_from(x, s) + ((e, 1),) + tuple((f, -g) for f, g in reversed(self.path_from(x, t)))
                basis.append((e, Word(x, x, reduce_word(w))))
        return basis

    def abelian_coords(self, x, w: Word):
        """Coordinates of a loop at x in the abelianization Z^rank of pi_1(x)."""
        basis = [e for e, _ in self.free_basis(x)]
        pos = {e: i for i, e in enumerate(basis)}
        v = [0] * len(basis)
        for e, s in w.letters:
            if e in pos:
                v[pos[e]] += s
        return v

    def is_finite(self):
        return all(self.pi1_rank(c[0]) == 0 for c in self.components())

    def to_fingroupoid(self) -> FinGroupoid:
        """For a forest every hom-set has exactly one reduced word."""
        if not self.is_finite():
            raise ModelError("free groupoid has infinite vertex groups")
        mors, comp, ident, inv = [], {}, {}, {}
        words = {}
        for c in self.components():
            for a in c:
                for b in c:
                    w = self.hom(a, b, len(self.edges) + 1)
                    (u,) = [x for x in w if len(x.letters) == len(reduce_word(x.letters))][:1] or w[:1]
                    words[(a, b)] = u
        names = {k: str(w) for k, w in words.items()}
        for (a, b), w in words.items():
            mors.append((names[(a, b)], a, b))
        for (a, b) in words:
            for (b2, c) in words:
                if b == b2:
                    comp[(names[(a, b)], names[(b, c)])] = names[(a, c)]
            inv[names[(a, b)]] = names[(b, a)]
        for x in self.objects:
            ident[x] = names[(x, x)]
        mors.sort(key=lambda m: (self.objects.index(m[1]), self.objects.index(m[2])))
        return FinGroupoid(self.objects, tuple(mors), comp, ident, inv, self.name)


def reduce_word(letters):
    out = []
    for l in letters:
        if out and out[-1][0] == l[0] and out[-1][1] == -l[1]:
            out.pop()
        else:
            out.append(tuple(l))
    return tuple(out)


def free_groupoid(X: GlobularSet, name="") -> PresGroupoid:
    """Free groupoid on the 1-skeleton of X.  2-cells, if any, identify their boundary edges."""
    return realize_at_level(X, 1, name)


def realize_at_level(X: GlobularSet, n, name=""):
    """The free n-groupoid on a globular set, for n in {0, 1}.

    Level 0: the set of path components.  Level 1: the free groupoid on the
    graph of 0- and 1-cells where each 2-cell identifies its two boundary edges.
    """
    objs = tuple(X.label(c) for c in X.cells(0)) if X.dim >= 0 else ()
    edges = [(X.label(c), X.label(X.source(c)), X.label(X.target(c))) for c in X.cells(1)] if X.dim >= 1 else []
    parent = {e[0]: e[0] for e in edges}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    rels = []
    if X.dim >= 2:
        for c in X.cells(2):
            a, b = X.label(X.source(c)), X.label(X.target(c))
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra
                rels.append((a, b))
    kept = tuple(e for e in edges if find(e[0]) == e[0])
    P = PresGroupoid(objs, kept, tuple(rels), name)
    if n == 1:
        return P
    if n == 0:
        return tuple(tuple(c) for c in P.components())
    raise ModelError(f"free realization is computed at levels 0 and 1, not {n}")


@dataclass(frozen=True, eq=False)
class PresMap:
    """A map of free groupoids: objects to objects, generating edges to words."""

    dom: PresGroupoid
    cod: PresGroupoid
    obj: Dict[str, str]
    edge: Dict[str, Word]

    def word(self, w: Word) -> Word:
        out = self.cod.identity(self.obj[w.src])
        for e, s in w.letters:
            img = self.edge[e]
            out = self.cod.compose(out, img if s > 0 else self.cod.inverse(img))
        return out


def induced_map(f, n):
    """The map of free n-groupoids induced by a globular map (n in {0, 1})."""
    X, Y = f.dom, f.cod
    P, Q = realize_at_level(X, 1), realize_at_level(Y, 1)
    if n == 0:
        comps_y = Q.components()
        which = {x: i for i, c in enumerate(comps_y) for x in c}
        return {tuple(c): tuple(comps_y[which[Y.label(f(X.find(c[0])))]]) for c in P.components()}
    obj = {X.label(c): Y.label(f(c)) for c in X.cells(0)}
    # an edge of Y may have been merged into another by a 2-cell; use its representative
    rep = {}
    for e, _, _ in Q.edges:
        rep[e] = e
    for a, b in Q.relations:
        rep[b] = rep.get(a, a)

    def root(e):
        while rep.get(e, e) != e:
            e = rep[e]
        return e

    edge = {}
    for name, _, _ in P.edges:
        img = Y.label(f(X.find(name)))
        edge[name] = Q.generator(root(img))
    return PresMap(P, Q, obj, edge)


# -- maps of groupoids ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GroupoidMap:
    dom: FinGroupoid
    cod: FinGroupoid
    obj: Dict[str, str]
    mor: Dict[str, str]

    def check(self):
        G, H = self.dom, self.cod
        for m, s, t in G.morphisms:
            img = self.mor.get(m)
            if img is None or (H.src(img), H.tgt(img)) != (self.obj[s], self.obj[t]):
                raise NotAModelMap(f"{m} is not sent to a morphism {self.obj.get(s)} -> {self.obj.get(t)}")
        for (f, g), h in G.comp.items():
            if H.comp[(self.mor[f], self.mor[g])] != self.mor[h]:
                raise NotAModelMap(f"composition of {f} and {g} is not preserved")
        return self

    def is_iso(self):
        return (len(set(self.obj.values())) == len(self.cod.objects) == len(self.dom.objects)
                and len(set(self.mor.values())) == len(self.cod.morphisms) == len(self.dom.morphisms))


def identity_functor(G):
    return GroupoidMap(G, G, {x: x for x in G.objects}, {m: m for m, _, _ in G.morphisms})


def groupoid_functors(G: FinGroupoid, H: FinGroupoid):
    """All functors G -> H (brute force with pruning; for small groupoids)."""
    mors = list(G.morphisms)
    out = []
    for objmap in product(H.objects, repeat=len(G.objects)):
        obj = dict(zip(G.objects, objmap))
        assign = {}

        def go(i):
            if i == len(mors):
                out.append(GroupoidMap(G, H, dict(obj), dict(assign)))
                return
            m, s, t = mors[i]
            for c in H.hom(obj[s], obj[t]):
                assign[m] = c
                ok = True
                for (f, g), h in G.comp.items():
                    if f in assign and g in assign and h in assign:
                        if H.comp[(assign[f], assign[g])] != assign[h]:
                            ok = False
                            break
                if ok:
                    go(i + 1)
                del assign[m]

        go(0)
    return out


# -- functors between levels ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ModelMap:
    dom: FinModel
    cod: FinModel
    cells: Dict[tuple, tuple]

    def __call__(self, c):
        return self.cells[c]

    def check(self):
        X, Y = self.dom.X, self.cod.X
        if self.dom.level != self.cod.level:
            raise LevelMismatch(f"levels {self.dom.level} and {self.cod.level} differ")
        for c in X.cells():
            img = self.cells.get(c)
            if img is None or img[0] != c[0]:
                raise NotAModelMap(f"cell {X.label(c)} has no image of the same dimension")
            if c[0] > 0 and (Y.source(img) != self.cells[X.source(c)] or Y.target(img) != self.cells[X.target(c)]):
                raise NotAModelMap(f"faces of {X.label(c)} are not preserved")
        for name, op in self.dom.ops.items():
            if name not in self.cod.ops:
                continue
            other = self.cod.ops[name]
            for inp, out in op.table.items():
                if other.table.get(tuple(self.cells[x] for x in inp)) != self.cells[out]:
                    raise NotAModelMap(f"operation {name} is not preserved at {_lab(X, inp)}")
        return self


def functor_to_model_map(F: GroupoidMap) -> ModelMap:
    A, B = groupoid_to_model(F.dom), groupoid_to_model(F.cod)
    cells = {}
    for c in A.cells(0):
        cells[c] = B.find(F.obj[A.label(c)])
    for c in A.cells(1):
        cells[c] = B.find(F.mor[A.label(c)])
    return ModelMap(A, B, cells)


def _homotopy_classes(M, k):
    """Union-find classes of k-cells connected by (k+1)-cells."""
    X = M.X
    parent = {c: c for c in M.cells(k)}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in M.cells(k + 1):
        ra, rb = find(X.source(a)), find(X.target(a))
        if ra != rb:
            if ra < rb:
                parent[rb] = ra
            else:
                parent[ra] = rb
    return {c: find(c) for c in M.cells(k)}


def truncate_model(M: FinModel) -> FinModel:
    """Level n+1 -> level n: top cells become classes of n-cells under homotopy."""
    if M.level < 1:
        raise WrongLevel("a level-0 model cannot be truncated further")
    n = M.level - 1
    X = M.X
    cls = _homotopy_classes(M, n)
    reps = sorted(set(cls.values()))
    new_idx = {r: i for i, r in enumerate(reps)}
    labels = [tuple(X.labels[d]) for d in range(n)] + [tuple(X.label(r) for r in reps)]
    src = [tuple(X.src[d]) for d in range(n - 1)] if n >= 1 else []
    tgt = [tuple(X.tgt[d]) for d in range(n - 1)] if n >= 1 else []
    if n >= 1:
        src.append(tuple(X.source(r)[1] for r in reps))
        tgt.append(tuple(X.target(r)[1] for r in reps))
    Y = make_globular_set(labels, src, tgt)

    def down(c):
        if c[0] < n:
            return c
        return (n, new_idx[cls[c]])

    ops = {}
    for name, dom, cod in designated_ops(n):
        op = M.ops[name]
        tab = {}
        for inp, out in op.table.items():
            if any(c[0] == n and cls[c] != c for c in inp):
                continue  # read the operation on class representatives
            tab[tuple(down(c) for c in inp)] = down(out)
        ops[name] = OpTable(name, dom, cod, tab)
    return FinModel(n, Y, ops)


def d_embed(M: FinModel) -> FinModel:
    """Level n -> level n+1 with one identity (n+1)-cell on each n-cell.

    This is the right adjoint of truncation: maps Y -> D(M) are maps
    tr(Y) -> M, and tr(D(M)) = M.
    """
    n = M.level
    X = M.X
    tops = list(M.cells(n))
    labels = list(X.labels[: n + 1]) + [tuple(f"id[{X.label(a)}]" for a in tops)]
    src = list(X.src[:n]) + [tuple(a[1] for a in tops)]
    tgt = list(X.tgt[:n]) + [tuple(a[1] for a in tops)]
    Y = make_globular_set(labels, src, tgt)
    m = n + 1

    def up(a):
        return (m, a[1])

    ops = dict(M.ops)
    ops[f"z{m}"] = OpTable(f"z{m}", Table((n,)), m, {(a,): up(a) for a in tops})
    ops[f"i{m}"] = OpTable(f"i{m}", Table((m,)), m, {(up(a),): up(a) for a in tops})
    ops[f"c{m}_{n}"] = OpTable(f"c{m}_{n}", Table((m, n, m)), m, {(up(a), up(a)): up(a) for a in tops})
    for j in range(n - 1, -1, -1):
        lower = M.ops[f"c{n}_{j}"]
        ops[f"c{m}_{j}"] = OpTable(f"c{m}_{j}", Table((m, j, m)), m,
                                   {(up(a), up(b)): up(v) for (a, b), v in lower.table.items()})
    return FinModel(m, Y, ops)


def forget_model(M: FinModel, keep=None) -> FinModel:
    """Restrict to the operations of an earlier stage (default: none, the underlying globular set)."""
    keep = set(keep or ())
    return FinModel(M.level, M.X, {k: v for k, v in M.ops.items() if k in keep})


def set_model(names) -> FinModel:
    return FinModel(0, make_globular_set([tuple(names)], [], []), {})


def map_d_embed(f: ModelMap) -> ModelMap:
    A, B = d_embed(f.dom), d_embed(f.cod)
    n = f.dom.level
    cells = dict(f.cells)
    for a in f.dom.cells(n):
        cells[(n + 1, a[1])] = (n + 1, f.cells[a][1])
    return ModelMap(A, B, cells)


def two_model(G: FinGroupoid, classes=None, A: Optional[grp.FinGroup] = None, check=True) -> FinModel:
    """A level-2 model on a groupoid: one 2-cell u => v labelled by each a in A
    whenever u and v lie in the same class.

    ``classes`` is a partition of the morphisms that must be a congruence
    (default: singletons), and A the group of 2-loops (default: trivial).
    pi_1 is G modulo the classes and pi_2 is A; A must be abelian for the
    interchange law to hold.
    """
    A = A or grp.trivial()
    mors = [m for m, _, _ in G.morphisms]
    cls_of = {}
    for i, c in enumerate(classes or [[m] for m in mors]):
        for m in c:
            cls_of[m] = i
    if set(cls_of) != set(mors):
        raise ModelError("classes must partition the morphisms")
    objs = list(G.objects)
    oi = {x: n for n, x in enumerate(objs)}
    mi = {m: n for n, m in enumerate(mors)}
    twos = [(u, v, a) for u in mors for v in mors if cls_of[u] == cls_of[v]
            and (G.src(u), G.tgt(u)) == (G.src(v), G.tgt(v)) for a in range(A.order)]
    ti = {c: n for n, c in enumerate(twos)}

    def lab(c):
        u, v, a = c
        return f"{u}=>{v}" + (f"[{A.names[a]}]" if A.order > 1 else "")

    X = make_globular_set([tuple(objs), tuple(mors), tuple(lab(c) for c in twos)],
                          [tuple(oi[G.src(m)] for m in mors), tuple(mi[u] for u, _, _ in twos)],
                          [tuple(oi[G.tgt(m)] for m in mors), tuple(mi[v] for _, v, _ in twos)])
    one = lambda m: (1, mi[m])  # noqa: E731
    two = lambda c: (2, ti[c])  # noqa: E731
    ops = groupoid_to_model(G).ops.copy()
    ops["z2"] = OpTable("z2", Table((1,)), 2, {(one(u),): two((u, u, A.identity)) for u in mors})
    ops["i2"] = OpTable("i2", Table((2,)), 2, {(two(c),): two((c[1], c[0], A.inverse[c[2]])) for c in twos})
    vert, horiz = {}, {}
    for c in twos:
        for d in twos:
            if c[1] == d[0]:
                vert[(two(c), two(d))] = two((c[0], d[1], A.mul[c[2]][d[2]]))
            if G.tgt(c[0]) == G.src(d[0]):
                key = (G.comp[(c[0], d[0])], G.comp[(c[1], d[1])], A.mul[c[2]][d[2]])
                horiz[(two(c), two(d))] = two(key)
    ops["c2_1"] = OpTable("c2_1", Table((2, 1, 2)), 2, vert)
    ops["c2_0"] = OpTable("c2_0", Table((2, 0, 2)), 2, horiz)
    M = FinModel(2, X, ops)
    return validate_model(M) if check else M
