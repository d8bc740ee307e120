"""Tables of dimensions and the category Theta_0^op.

A morphism ``p -> q`` of Theta_0^op is a globular map
``realize(q) -> realize(p)``.  Because ``realize(q)`` is glued from disks, such
a map is fixed by where it sends the top cell of each disk, so morphisms carry
that tuple of cells (``cells``) next to the full underlying map.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Tuple

from .globset import GlobMap, enumerate_maps, locate, realize_table


class TableError(ValueError):
    pass


class EvenLength(TableError):
    def __init__(self, entries):
        self.entries = entries
        super().__init__(f"table {entries} has even length")


class ZigZagViolation(TableError):
    def __init__(self, index, entries=None):
        self.index = index
        self.entries = entries
        super().__init__(f"zig-zag fails at index {index} of {entries}: valleys must sit strictly below both peaks")


class DomainMismatch(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Table:
    entries: Tuple[int, ...]

    @property
    def peaks(self):
        return self.entries[0::2]

    @property
    def valleys(self):
        return self.entries[1::2]

    @property
    def height(self):
        return max(self.entries)

    def __len__(self):
        return len(self.entries)

    def __str__(self):
        return "(" + ",".join(map(str, self.entries)) + ")"

    __repr__ = __str__


def validate_table(raw) -> Table:
    entries = tuple(int(x) for x in getattr(raw, "entries", raw))
    if not entries:
        raise TableError("empty table")
    if any(x < 0 for x in entries):
        raise TableError(f"negative entry in {entries}")
    if len(entries) % 2 == 0:
        raise EvenLength(entries)
    for j in range(1, len(entries), 2):
        if not (entries[j] < entries[j - 1] and entries[j] < entries[j + 1]):
            # 1-based position of the offending valley
            raise ZigZagViolation(j + 1, entries)
    return Table(entries)


def globe(k) -> Table:
    return Table((k,))


def height(t: Table) -> int:
    return t.height


def parse_table(text) -> Table:
    body = text.strip()
    if not (body.startswith("(") and body.endswith(")")):
        raise TableError(f"table must be written as (n1,...,nk): {text!r}")
    inner = body[1:-1].strip()
    parts = [x.strip() for x in inner.split(",") if x.strip()]
    try:
        return validate_table(tuple(int(x) for x in parts))
    except ValueError as e:
        if isinstance(e, TableError):
            raise
        raise TableError(f"bad table {text!r}") from e


def all_tables(max_len=5, max_entry=2, max_height=None):
    """Every valid table within the bounds, in a fixed order (length, entries)."""
    out = []
    top = max_entry if max_height is None else min(max_entry, max_height)
    for n in range(1, max_len + 1, 2):
        for entries in product(range(top + 1), repeat=n):
            try:
                out.append(validate_table(entries))
            except TableError:
                pass
    return out


@lru_cache(maxsize=None)
def realization(t: Table):
    return realize_table(t.entries)


@dataclass(frozen=True)
class Theta0Morphism:
    dom: Table
    cod: Table
    cells: Tuple[Tuple[int, int], ...]
    underlying: GlobMap = field(compare=False, repr=False, default=None)

    @property
    def is_globe(self):
        return len(self.cod) == 1

    def __str__(self):
        X = realization(self.dom)
        names = ",".join(X.label(c) for c in self.cells)
        return f"{self.dom}->{self.cod}[{names}]"


def _top_cells(t: Table, m: GlobMap):
    return tuple(m(locate(t, i, "c", p)) for i, p in enumerate(t.peaks))


@lru_cache(maxsize=None)
def hom_set(dom: Table, cod: Table):
    """All Theta_0^op morphisms dom -> cod, i.e. maps realize(cod) -> realize(dom)."""
    maps = enumerate_maps(realization(cod), realization(dom))
    return tuple(Theta0Morphism(dom, cod, _top_cells(cod, m), m) for m in maps)


def identity(t: Table) -> Theta0Morphism:
    cells = tuple(locate(t, i, "c", p) for i, p in enumerate(t.peaks))
    for m in hom_set(t, t):
        if m.cells == cells:
            return m
    raise AssertionError("identity missing")


def cell_morphism(t: Table, cell) -> Theta0Morphism:
    """The morphism t -> (k) picking a k-cell of realize(t)."""
    for m in hom_set(t, globe(cell[0])):
        if m.cells == (tuple(cell),):
            return m
    raise ValueError(f"{cell} is not a cell of {t}")


def compose(g: Theta0Morphism, f: Theta0Morphism) -> Theta0Morphism:
    """g after f in Theta_0^op (f : p -> q, g : q -> r)."""
    if f.cod != g.dom:
        raise DomainMismatch(f"cannot compose {g} after {f}: {f.cod} != {g.dom}")
    # underlying maps go the other way: realize(r) -> realize(q) -> realize(p)
    m = f.underlying.compose(g.underlying)
    return Theta0Morphism(f.dom, g.cod, _top_cells(g.cod, m), m)


# -- truncation of the globe category ------------------------------------------


def truncate_table(t: Table, n: int):
    """Apply i -> min(i, n) and collapse the gluings that became trivial.

    Returns the new table and, for each disk of ``t``, the disk of the result
    it lands in.
    """
    entries = [min(x, n) for x in t.entries]
    peaks = entries[0::2]
    valleys = entries[1::2]
    kept_peaks = [peaks[0]]
    kept_valleys = []
    where = [0]
    for i, v in enumerate(valleys):
        right = peaks[i + 1]
        left = kept_peaks[-1]
        if v == right or v == left:
            # both neighbours were cut down to n and are glued along all of D^n
            kept_peaks[-1] = max(left, right)
            where.append(len(kept_peaks) - 1)
        else:
            kept_valleys.append(v)
            kept_peaks.append(right)
            where.append(len(kept_peaks) - 1)
    out = [kept_peaks[0]]
    for v, p in zip(kept_valleys, kept_peaks[1:]):
        out += [v, p]
    return Table(tuple(out)), tuple(where)


def truncate_cell(t: Table, n: int, cell):
    """Image of a cell of realize(t) in realize(tr_n t)."""
    new, where = truncate_table(t, n)
    label = realization(t).label(cell)
    kind, disk_index = label[0], int(label.split("@")[1])
    j = where[disk_index]
    top = new.peaks[j]
    if cell[0] >= top:
        return locate(new, j, "c", top)
    return locate(new, j, kind, cell[0])
