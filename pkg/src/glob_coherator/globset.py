"""Finite globular sets and maps between them.

A globular set is stored dimension by dimension.  Cells are addressed by
``(dim, ordinal)``; every cell also carries a printable label.  For each
dimension ``d >= 1`` the tuples ``src[d-1]`` and ``tgt[d-1]`` give the ordinal
of the source and target cell in dimension ``d - 1``.
"""

from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple


class GlobularSetError(ValueError):
    pass


class RelationViolation(GlobularSetError):
    def __init__(self, dim, cell):
        self.dim = dim
        self.cell = cell
        super().__init__(f"globular relation fails at dimension {dim} for cell {cell!r}")


class DanglingCell(GlobularSetError):
    def __init__(self, dim, cell, ref):
        self.dim = dim
        self.cell = cell
        self.ref = ref
        super().__init__(f"cell {cell!r} in dimension {dim} refers to undeclared cell {ref!r}")


@dataclass(frozen=True)
class GlobularSet:
    labels: Tuple[Tuple[str, ...], ...]
    src: Tuple[Tuple[int, ...], ...]
    tgt: Tuple[Tuple[int, ...], ...]

    @property
    def dim(self):
        """Top nonempty dimension, or -1 for the empty globular set."""
        top = -1
        for d, cells in enumerate(self.labels):
            if cells:
                top = d
        return top

    @property
    def counts(self):
        return tuple(len(c) for c in self.labels[: self.dim + 1])

    def size(self, d):
        return len(self.labels[d]) if d < len(self.labels) else 0

    def cells(self, d=None) -> Iterator[Tuple[int, int]]:
        dims = range(len(self.labels)) if d is None else [d]
        for k in dims:
            for i in range(self.size(k)):
                yield (k, i)

    def label(self, cell):
        return self.labels[cell[0]][cell[1]]

    def find(self, label):
        for d, names in enumerate(self.labels):
            if label in names:
                return (d, names.index(label))
        raise KeyError(label)

    def source(self, cell):
        d, i = cell
        return (d - 1, self.src[d - 1][i])

    def target(self, cell):
        d, i = cell
        return (d - 1, self.tgt[d - 1][i])

    def face(self, cell, d, which):
        """Iterated source ('s') or target ('t') face of ``cell`` in dimension ``d``.

        By the globular identities only the last step matters, so this is
        ``which`` applied once after any chain of sources.
        """
        if d == cell[0]:
            return cell
        c = cell
        while c[0] > d + 1:
            c = self.source(c)
        return self.source(c) if which == "s" else self.target(c)

    def parallel(self, a, b):
        if a[0] != b[0]:
            return False
        if a[0] == 0:
            return True
        return self.source(a) == self.source(b) and self.target(a) == self.target(b)

    def truncate(self, n):
        """The sub-globular set of cells of dimension at most ``n``."""
        n = min(n, len(self.labels) - 1)
        return GlobularSet(self.labels[: n + 1], self.src[: max(n, 0)], self.tgt[: max(n, 0)])

    def to_raw(self):
        raw = {"dims": [list(c) for c in self.labels], "src": [], "tgt": []}
        for d in range(1, len(self.labels)):
            raw["src"].append([[self.labels[d][i], self.labels[d - 1][j]] for i, j in enumerate(self.src[d - 1])])
            raw["tgt"].append([[self.labels[d][i], self.labels[d - 1][j]] for i, j in enumerate(self.tgt[d - 1])])
        return raw

    def __str__(self):
        return "GlobularSet" + str(self.counts)


def _check_relations(labels, src, tgt):
    for d in range(2, len(labels)):
        for i, name in enumerate(labels[d]):
            a, b = src[d - 1][i], tgt[d - 1][i]
            if src[d - 2][a] != src[d - 2][b] or tgt[d - 2][a] != tgt[d - 2][b]:
                raise RelationViolation(d - 1, name)


def make_globular_set(labels, src, tgt):
    labels = tuple(tuple(c) for c in labels)
    src = tuple(tuple(c) for c in src)
    tgt = tuple(tuple(c) for c in tgt)
    _check_relations(labels, src, tgt)
    return GlobularSet(labels, src, tgt)


def validate_globular_set(raw) -> GlobularSet:
    """Build a GlobularSet from named cells and face tables.

    ``raw`` is a mapping with ``dims`` (list of name lists, one per
    dimension) and ``src``/``tgt``, each a list indexed by ``d - 1`` whose
    entries are either dicts ``{cell: face}`` or lists of ``(cell, face)``
    pairs.
    """
    dims = [list(c) for c in raw["dims"]]
    while dims and not dims[-1] and len(dims) > 1:
        dims.pop()
    index = [{name: i for i, name in enumerate(c)} for c in dims]
    for d, c in enumerate(dims):
        if len(index[d]) != len(c):
            raise GlobularSetError(f"duplicate cell name in dimension {d}")

    def table(key):
        out = []
        given = list(raw.get(key, []))
        for d in range(1, len(dims)):
            entry = given[d - 1] if d - 1 < len(given) else {}
            pairs = entry.items() if isinstance(entry, dict) else entry
            faces = {}
            for cell, face in pairs:
                if cell not in index[d]:
                    raise DanglingCell(d, cell, cell)
                if face not in index[d - 1]:
                    raise DanglingCell(d, cell, face)
                faces[cell] = index[d - 1][face]
            row = []
            for name in dims[d]:
                if name not in faces:
                    raise GlobularSetError(f"{key} of {name!r} in dimension {d} is missing")
                row.append(faces[name])
            out.append(row)
        for d in range(len(dims), len(given) + 1):
            if given[d - 1]:
                raise DanglingCell(d, "?", "undeclared dimension")
        return out

    return make_globular_set(dims, table("src"), table("tgt"))


EMPTY = GlobularSet(((),), (), ())


def disk(k) -> GlobularSet:
    """The representable D^k: two cells below k (source, target) and one at k."""
    if k < 0:
        raise ValueError("disk needs k >= 0")
    labels = [(f"s{i}", f"t{i}") for i in range(k)] + [(f"c{k}",)]
    src, tgt = [], []
    for d in range(1, k + 1):
        n = len(labels[d])
        src.append((0,) * n)
        tgt.append((1,) * n)
    return GlobularSet(tuple(labels), tuple(src), tuple(tgt))


def sphere(k) -> GlobularSet:
    """S^k: two cells in each dimension 0..k, S^{-1} being empty."""
    if k < -1:
        raise ValueError("sphere needs k >= -1")
    if k == -1:
        return EMPTY
    labels = tuple((f"s{i}", f"t{i}") for i in range(k + 1))
    src = tuple((0, 0) for _ in range(k))
    tgt = tuple((1, 1) for _ in range(k))
    return GlobularSet(labels, src, tgt)


@dataclass(frozen=True)
class GlobMap:
    dom: GlobularSet
    cod: GlobularSet
    maps: Tuple[Tuple[int, ...], ...]

    def __call__(self, cell):
        d, i = cell
        return (d, self.maps[d][i])

    def key(self):
        return self.maps

    def is_injective(self):
        return all(len(set(m)) == len(m) for m in self.maps)

    def compose(self, other: "GlobMap") -> "GlobMap":
        """``self`` after ``other``."""
        if other.cod != self.dom:
            raise ValueError("maps are not composable")
        maps = tuple(tuple(self.maps[d][j] for j in m) for d, m in enumerate(other.maps))
        return GlobMap(other.dom, self.cod, maps)


def is_glob_map(dom, cod, maps):
    for d in range(1, len(dom.labels)):
        for i in range(dom.size(d)):
            y = maps[d][i]
            if cod.src[d - 1][y] != maps[d - 1][dom.src[d - 1][i]]:
                return False
            if cod.tgt[d - 1][y] != maps[d - 1][dom.tgt[d - 1][i]]:
                return False
    return True


def identity_map(X):
    return GlobMap(X, X, tuple(tuple(range(X.size(d))) for d in range(len(X.labels))))


def enumerate_maps(X: GlobularSet, Y: GlobularSet) -> List[GlobMap]:
    """All globular maps X -> Y, sorted lexicographically by assignment."""
    top = X.dim
    if top > Y.dim:
        return [] if top >= 0 else [GlobMap(X, Y, tuple(() for _ in X.labels))]
    by_faces: Dict[Tuple[int, int, int], List[int]] = {}
    for d in range(1, len(Y.labels)):
        for j in range(Y.size(d)):
            by_faces.setdefault((d, Y.src[d - 1][j], Y.tgt[d - 1][j]), []).append(j)

    order = [c for d in range(top, -1, -1) for c in X.cells(d)]
    assign = [[None] * X.size(d) for d in range(len(X.labels))]
    found = []

    def put(cell, y, trail):
        # Assign cell -> y and push the forced faces down; record for undo.
        d, i = cell
        cur = assign[d][i]
        if cur is not None:
            return cur == y
        assign[d][i] = y
        trail.append(cell)
        if d == 0:
            return True
        return put((d - 1, X.src[d - 1][i]), Y.src[d - 1][y], trail) and put(
            (d - 1, X.tgt[d - 1][i]), Y.tgt[d - 1][y], trail
        )

    def candidates(cell):
        d, i = cell
        if d == 0:
            return range(Y.size(0))
        s = assign[d - 1][X.src[d - 1][i]]
        t = assign[d - 1][X.tgt[d - 1][i]]
        if s is None or t is None:
            return [j for j in range(Y.size(d))
                    if (s is None or Y.src[d - 1][j] == s) and (t is None or Y.tgt[d - 1][j] == t)]
        return by_faces.get((d, s, t), [])

    def step(pos):
        if pos == len(order):
            found.append(tuple(tuple(a) for a in assign))
            return
        cell = order[pos]
        if assign[cell[0]][cell[1]] is not None:
            step(pos + 1)
            return
        for y in list(candidates(cell)):
            trail = []
            if put(cell, y, trail):
                step(pos + 1)
            for d, i in trail:
                assign[d][i] = None

    step(0)
    found.sort()
    return [GlobMap(X, Y, m) for m in found]


def boundary_inclusion(k) -> GlobMap:
    """j_k : S^{k-1} -> D^k."""
    S, D = sphere(k - 1), disk(k)
    maps = tuple((0, 1) for _ in range(k))
    return GlobMap(S, D, maps if k > 0 else ((),))


def source_inclusion(k) -> GlobMap:
    """sigma_k : D^k -> D^{k+1}, onto the source k-cell."""
    D, E = disk(k), disk(k + 1)
    maps = tuple((0, 1) for _ in range(k)) + ((0,),)
    return GlobMap(D, E, maps)


def target_inclusion(k) -> GlobMap:
    D, E = disk(k), disk(k + 1)
    maps = tuple((0, 1) for _ in range(k)) + ((1,),)
    return GlobMap(D, E, maps)


# -- realizations of tables of dimensions ------------------------------------

_KIND_ORDER = {"s": 0, "t": 1, "c": 2}


def _disk_faces(p):
    """Face labels (kind, dim) of D^p in cell order."""
    out = []
    for d in range(p):
        out.append((d, ("s", d)))
        out.append((d, ("t", d)))
    out.append((p, ("c", p)))
    return out


def realize_table(t) -> GlobularSet:
    """The globular sum of disks described by a table of dimensions.

    Labels record provenance as ``<kind><dim>@<disk>``: ``c`` marks the top
    cell of a disk, ``s``/``t`` its source/target faces.  A glued cell takes
    the label of its leftmost occurrence.
    """
    entries = tuple(getattr(t, "entries", t))
    peaks = entries[0::2]
    valleys = entries[1::2]
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            lo, hi = sorted((ra, rb), key=_sort_key)
            parent[hi] = lo

    for i, p in enumerate(peaks):
        for d, face in _disk_faces(p):
            parent[(i, face)] = (i, face)
    for i, v in enumerate(valleys):
        # target face of disk i glued to source face of disk i+1 along D^v
        for d in range(v):
            union((i, ("s", d)), (i + 1, ("s", d)))
            union((i, ("t", d)), (i + 1, ("t", d)))
        union((i, ("t", v)), (i + 1, ("s", v)))

    classes: Dict[int, List] = {}
    for x in parent:
        if find(x) == x:
            classes.setdefault(x[1][1], []).append(x)
    top = max(peaks)
    labels, where = [], {}
    for d in range(top + 1):
        reps = sorted(classes.get(d, []), key=_sort_key)
        labels.append(tuple(f"{r[1][0]}{d}@{r[0]}" for r in reps))
        for j, r in enumerate(reps):
            where[r] = j

    def faces_of(x, which):
        i, (kind, d) = x
        return where[find((i, (which, d - 1)))]

    src, tgt = [], []
    for d in range(1, top + 1):
        reps = sorted(classes.get(d, []), key=_sort_key)
        src.append(tuple(faces_of(r, "s") for r in reps))
        tgt.append(tuple(faces_of(r, "t") for r in reps))
    return GlobularSet(tuple(labels), tuple(src), tuple(tgt))


def _sort_key(x):
    i, (kind, d) = x
    return (i, _KIND_ORDER[kind], d)


def locate(t, disk_index, kind, d):
    """The cell of realize_table(t) coming from face ``kind``/``d`` of a disk."""
    return _realize_index(tuple(getattr(t, "entries", t)))[(disk_index, kind, d)]


_INDEX_CACHE: Dict[tuple, dict] = {}


def _realize_index(entries):
    idx = _INDEX_CACHE.get(entries)
    if idx is not None:
        return idx
    X = realize_table(entries)
    peaks = entries[0::2]
    valleys = entries[1::2]
    idx = {}
    # Walk every disk face and find the class it lands in by replaying the gluing.
    for i, p in enumerate(peaks):
        for d, (kind, _) in _disk_faces(p):
            idx[(i, kind, d)] = _resolve(entries, i, kind, d, X)
    _INDEX_CACHE[entries] = idx
    return idx


def _resolve(entries, i, kind, d, X):
    peaks = entries[0::2]
    valleys = entries[1::2]
    # Move left while the face is shared with the previous disk.
    while i > 0:
        v = valleys[i - 1]
        if d < v and kind in ("s", "t"):
            i -= 1
        elif d == v and kind == "s":
            i, kind = i - 1, "t"
        else:
            break
    return X.find(f"{kind}{d}@{i}")
