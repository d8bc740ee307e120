"""Independent brute-force oracles.  None of these call the code under test
beyond reading plain data (cell labels, face tables)."""

from itertools import product


def globe_hom(i, k):
    """Arrows i -> k of the globe category: words in s, t modulo the coglobular relations.

    A word lists the generators applied starting from dimension i.  The
    relations say that after the first letter any later letter may be
    swapped (s s = t s and s t = t t one dimension up), so two words are
    equal iff they are connected by such swaps.  Classes are found by
    closing each word under the swaps.
    """
    if k < i:
        return 0
    n = k - i
    words = list(product("st", repeat=n))
    seen, classes = set(), 0
    for w in words:
        if w in seen:
            continue
        classes += 1
        todo = [w]
        seen.add(w)
        while todo:
            u = todo.pop()
            for j in range(1, n):
                v = u[:j] + ("t" if u[j] == "s" else "s",) + u[j + 1:]
                if v not in seen:
                    seen.add(v)
                    todo.append(v)
    return classes


def naive_maps(X, Y):
    """All face-preserving assignments X -> Y by brute force over every dimension."""
    dims = range(len(X.labels))
    per_dim = []
    for d in dims:
        n = len(X.labels[d])
        m = len(Y.labels[d]) if d < len(Y.labels) else 0
        per_dim.append(list(product(range(m), repeat=n)))
    out = []
    for choice in product(*per_dim):
        ok = True
        for d in range(1, len(choice)):
            for i, y in enumerate(choice[d]):
                if Y.src[d - 1][y] != choice[d - 1][X.src[d - 1][i]] or \
                        Y.tgt[d - 1][y] != choice[d - 1][X.tgt[d - 1][i]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(tuple(tuple(c) for c in choice))
    return sorted(out)


def iterated_face(X, cell, d, which):
    """Face in dimension d by walking source maps, then one final ``which`` step."""
    c = cell
    while c[0] > d + 1:
        c = (c[0] - 1, X.src[c[0] - 1][c[1]])
    if c[0] == d:
        return c
    table = X.src if which == "s" else X.tgt
    return (c[0] - 1, table[c[0] - 1][c[1]])


def limit_hom_count(Xp, cod_entries):
    """|Theta_0(cod, dom)| via the limit decomposition of the codomain table.

    A morphism dom -> cod is a tuple of cells of realize(dom), one per peak of
    cod with the peak's dimension, with consecutive cells agreeing on the
    face of the valley's dimension (target of the left, source of the right).
    """
    peaks, valleys = cod_entries[0::2], cod_entries[1::2]
    cells = [[(p, i) for i in range(len(Xp.labels[p]))] if p < len(Xp.labels) else [] for p in peaks]
    count = 0
    for tup in product(*cells):
        if all(iterated_face(Xp, tup[i], v, "t") == iterated_face(Xp, tup[i + 1], v, "s")
               for i, v in enumerate(valleys)):
            count += 1
    return count


def glued_cell_counts(entries):
    """Cell counts of a globular sum, by explicit gluing of disk cells.

    Disk i contributes s_d, t_d for d below its peak and one top cell; a valley
    v glues s_d, t_d for d < v and t_v of the left disk to s_v of the right.
    """
    peaks, valleys = entries[0::2], entries[1::2]
    parent = {}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for i, p in enumerate(peaks):
        for d in range(p):
            parent[(i, "s", d)] = (i, "s", d)
            parent[(i, "t", d)] = (i, "t", d)
        parent[(i, "c", p)] = (i, "c", p)
    for i, v in enumerate(valleys):
        pairs = [((i, "s", d), (i + 1, "s", d)) for d in range(v)]
        pairs += [((i, "t", d), (i + 1, "t", d)) for d in range(v)]
        pairs.append(((i, "t", v), (i + 1, "s", v)))
        for a, b in pairs:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra
    top = max(peaks)
    counts = [0] * (top + 1)
    for x in parent:
        if find(x) == x:
            counts[x[2]] += 1
    return tuple(counts)


def reduce_by_stack(letters):
    """Free reduction of a word of (edge, +-1) letters."""
    out = []
    for l in letters:
        if out and out[-1] == (l[0], -l[1]):
            out.pop()
        else:
            out.append(l)
    return tuple(out)


def reduced_words(edges, a, b, max_len):
    """Reduced edge paths a -> b of length <= max_len, by exhaustive generation and filtering."""
    letters = [(e, 1, s, t) for e, s, t in edges] + [(e, -1, t, s) for e, s, t in edges]
    out = []
    for n in range(max_len + 1):
        for w in product(letters, repeat=n):
            at, ok = a, True
            for _, _, s, t in w:
                if s != at:
                    ok = False
                    break
                at = t
            if not ok or at != b:
                continue
            ls = tuple((e, sg) for e, sg, _, _ in w)
            if reduce_by_stack(ls) == ls:
                out.append(ls)
    return out


def is_group_table(mul):
    n = len(mul)
    rng = range(n)
    ids = [e for e in rng if all(mul[e][a] == a == mul[a][e] for a in rng)]
    if len(ids) != 1:
        return False
    e = ids[0]
    if not all(any(mul[a][b] == e for b in rng) for a in rng):
        return False
    return all(mul[mul[a][b]][c] == mul[a][mul[b][c]] for a in rng for b in rng for c in rng)


def groupoid_axioms(objs, mors, comp, ident, inv):
    """Category axioms plus invertibility, checked from the raw tables."""
    ends = {m: (s, t) for m, s, t in mors}
    for x in objs:
        if ends.get(ident[x]) != (x, x):
            return False
    for f, (s, t) in ends.items():
        if comp[(ident[s], f)] != f or comp[(f, ident[t])] != f:
            return False
        if comp[(f, inv[f])] != ident[s] or comp[(inv[f], f)] != ident[t]:
            return False
        for g, (s2, t2) in ends.items():
            if s2 != t:
                continue
            if ends[comp[(f, g)]] != (s, t2):
                return False
            for h, (s3, _) in ends.items():
                if s3 == t2 and comp[(comp[(f, g)], h)] != comp[(f, comp[(g, h)])]:
                    return False
    return True


def is_equivalence_of_groupoids(G, H, obj, mor):
    """Fully faithful and essentially surjective, checked on hom-sets directly."""
    for a in G.objects:
        for b in G.objects:
            src = [m for m, s, t in G.morphisms if s == a and t == b]
            dst = {m for m, s, t in H.morphisms if s == obj[a] and t == obj[b]}
            if {mor[m] for m in src} != dst or len(src) != len(dst):
                return False
    hit = set(obj.values())
    return all(any(s == y and t in hit for _, s, t in H.morphisms) for y in H.objects)
