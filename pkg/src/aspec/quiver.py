"""Path algebras of quivers modulo admissible relations.

Paths compose left to right: p*q traverses p, then q, and needs
target(p) == source(q).  A noncommutative rewriting system (Bergman's
diamond lemma, degree-lexicographic order on arrow words) turns the
surviving paths into the algebra basis.
"""

from __future__ import annotations

from .algebra import Algebra
from .errors import InfiniteDimensionalError, InputError, ValidationError
from .fields import QQ
from .linalg import unit_vec


class QuiverPresentation:
    """vertices: names; arrows: (name, source, target); relations:
    lists of (coeff, [arrow names]) over parallel composable paths."""

    def __init__(self, vertices, arrows, relations=()):
        self.vertices = list(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise InputError("duplicate vertex names")
        self.arrows = [tuple(a) for a in arrows]
        names = [a[0] for a in self.arrows]
        if len(set(names)) != len(names):
            raise InputError("duplicate arrow names")
        vset = set(self.vertices)
        for name, src, tgt in self.arrows:
            if src not in vset or tgt not in vset:
                raise InputError(f"arrow {name!r} references unknown vertex")
        self.relations = [list(terms) for terms in relations]
        self._arrow_index = {a[0]: i for i, a in enumerate(self.arrows)}
        self._check_relations()
        # filled by from_quiver
        self.arrow_ideal_basis = None
        self.vertex_idempotents = None

    def _check_relations(self):
        for terms in self.relations:
            if not terms:
                raise InputError("empty relation")
            ends = None
            for coeff, path in terms:
                if len(path) < 2:
                    raise ValidationError(
                        "relation term of length < 2; relations must lie in "
                        "the square of the arrow ideal")
                prev_tgt = None
                for name in path:
                    if name not in self._arrow_index:
                        raise InputError(f"relation uses unknown arrow {name!r}")
                    _, src, tgt = self.arrows[self._arrow_index[name]]
                    if prev_tgt is not None and src != prev_tgt:
                        raise ValidationError(
                            f"non-composable relation term {'.'.join(path)}")
                    prev_tgt = tgt
                src0 = self.arrows[self._arrow_index[path[0]]][1]
                tgt0 = prev_tgt
                if ends is None:
                    ends = (src0, tgt0)
                elif ends != (src0, tgt0):
                    raise ValidationError("relation terms are not parallel")

    def word_of(self, path_names):
        return tuple(self._arrow_index[n] for n in path_names)


def _word_key(word):
    return (len(word), word)


class _Rewriter:
    """Degree-lex rewriting system on composable arrow words."""

    def __init__(self, field, arrows):
        self.field = field
        self.arrows = arrows         # (name, src, tgt)
        self.rules = {}              # lead word -> tail poly {word: coeff}

    def word_source(self, w):
        return self.arrows[w[0]][1]

    def word_target(self, w):
        return self.arrows[w[-1]][2]

    def reduce(self, poly):
        f = self.field
        poly = {w: c for w, c in poly.items() if not f.is_zero(c)}
        changed = True
        while changed:
            changed = False
            for w in sorted(poly, key=_word_key, reverse=True):
                c = poly.get(w)
                if c is None or f.is_zero(c):
                    continue
                hit = self._find_occurrence(w)
                if hit is None:
                    continue
                lead, pos = hit
                tail = self.rules[lead]
                del poly[w]
                u, v = w[:pos], w[pos + len(lead):]
                for tw, tc in tail.items():
                    nw = u + tw + v
                    poly[nw] = f.add(poly.get(nw, f.zero), f.mul(c, tc))
                poly = {ww: cc for ww, cc in poly.items() if not f.is_zero(cc)}
                changed = True
                break
        return poly

    def _find_occurrence(self, w):
        for lead in self.rules:
            L = len(lead)
            if L > len(w):
                continue
            for pos in range(len(w) - L + 1):
                if w[pos:pos + L] == lead:
                    return lead, pos
        return None

    def add_relation(self, poly):
        poly = self.reduce(poly)
        if not poly:
            return False
        f = self.field
        lead = max(poly, key=_word_key)
        inv = f.neg(f.inv(poly[lead]))
        tail = {w: f.mul(inv, c) for w, c in poly.items() if w != lead}
        self.rules[lead] = tail
        return True

    def complete(self, max_degree):
        """Resolve all overlap/inclusion ambiguities up to max_degree."""
        f = self.field
        done = set()
        progress = True
        while progress:
            progress = False
            leads = sorted(self.rules, key=_word_key)
            for w1 in leads:
                for w2 in leads:
                    if w1 not in self.rules or w2 not in self.rules:
                        continue
                    # overlap: proper suffix of w1 == proper prefix of w2
                    for k in range(1, min(len(w1), len(w2))):
                        if w1[-k:] != w2[:k]:
                            continue
                        amb = w1 + w2[k:]
                        if len(amb) > max_degree or (w1, w2, k) in done:
                            continue
                        done.add((w1, w2, k))
                        left = {}   # apply rule w1 at position 0
                        for tw, tc in self.rules[w1].items():
                            left[tw + w2[k:]] = f.add(
                                left.get(tw + w2[k:], f.zero), tc)
                        right = {}  # apply rule w2 at the end
                        for tw, tc in self.rules[w2].items():
                            right[w1[:-k] + tw] = f.add(
                                right.get(w1[:-k] + tw, f.zero), tc)
                        spoly = dict(left)
                        for ww, cc in right.items():
                            spoly[ww] = f.sub(spoly.get(ww, f.zero), cc)
                        if self.add_relation(spoly):
                            progress = True
                    # inclusion: w2 proper factor of w1
                    if len(w2) < len(w1):
                        for pos in range(len(w1) - len(w2) + 1):
                            if w1[pos:pos + len(w2)] != w2:
                                continue
                            if (w1, w2, "inc", pos) in done:
                                continue
                            done.add((w1, w2, "inc", pos))
                            left = dict(self.rules[w1])
                            right = {}
                            u, v = w1[:pos], w1[pos + len(w2):]
                            for tw, tc in self.rules[w2].items():
                                nw = u + tw + v
                                right[nw] = f.add(right.get(nw, f.zero), tc)
                            spoly = dict(left)
                            for ww, cc in right.items():
                                spoly[ww] = f.sub(spoly.get(ww, f.zero), cc)
                            if self.add_relation(spoly):
                                progress = True

    def irreducible_words(self, upto):
        """Irreducible composable words by length, as {length: [words]}."""
        out = {0: [()]}
        current = [(i,) for i in range(len(self.arrows))]
        length = 1
        while current and length <= upto:
            good = [w for w in current if self._find_occurrence(w) is None]
            out[length] = good
            nxt = []
            for w in good:
                tgt = self.word_target(w)
                for i, (_, src, _t) in enumerate(self.arrows):
                    if src == tgt:
                        nxt.append(w + (i,))
            current = nxt
            length += 1
        return out


def from_quiver(presentation, field=QQ, max_degree=24, validate=True):
    """Algebra of the quiver modulo its relations.

    Detects (rather than assumes) finite-dimensionality; the error names
    the degree at which irreducible paths persist.
    """
    q = presentation
    rw = _Rewriter(field, q.arrows)
    for terms in q.relations:
        poly = {}
        for coeff, path in terms:
            w = q.word_of(path)
            c = coeff if not isinstance(coeff, (int, str)) else field.parse(str(coeff))
            poly[w] = field.add(poly.get(w, field.zero), c)
        rw.add_relation(poly)

    # grow the certified degree until the irreducible words die out and
    # all ambiguities relevant to their products are resolved
    degree_cap = max([4] + [2 * len(w) for w in rw.rules])
    while True:
        rw.complete(degree_cap)
        words_by_len = rw.irreducible_words(degree_cap)
        empty_at = None
        for length in range(1, degree_cap + 1):
            if not words_by_len.get(length):
                empty_at = length
                break
        if empty_at is None:
            if degree_cap >= max_degree:
                raise InfiniteDimensionalError(
                    "path algebra quotient is not finite-dimensional by "
                    f"degree {degree_cap}: irreducible paths of that length "
                    "remain", degree=degree_cap)
            degree_cap = min(max_degree, degree_cap * 2)
            continue
        needed = 2 * max(empty_at - 1, 1)
        if needed <= degree_cap:
            break
        degree_cap = needed

    # assemble the basis: trivial paths first (vertex order), then words
    basis_words = []          # ('e', vertex_index) or ('w', word)
    labels = []
    for vi, v in enumerate(q.vertices):
        basis_words.append(("e", vi))
        labels.append(f"e_{v}")
    for length in range(1, empty_at):
        for w in sorted(words_by_len[length]):
            basis_words.append(("w", w))
            labels.append(".".join(q.arrows[i][0] for i in w))
    index = {bw: i for i, bw in enumerate(basis_words)}
    dim = len(basis_words)

    def ends(bw):
        kind, val = bw
        if kind == "e":
            v = q.vertices[val]
            return v, v
        return rw.word_source(val), rw.word_target(val)

    def poly_to_vec(poly):
        vec = [field.zero] * dim
        for w, c in poly.items():
            key = ("w", w) if w else None
            if key is None:
                raise ValidationError("empty word in reduction")
            vec[index[key]] = field.add(vec[index[key]], c)
        return vec

    table = []
    for bi in basis_words:
        row = []
        si, ti = ends(bi)
        for bj in basis_words:
            sj, tj = ends(bj)
            if ti != sj:
                row.append([field.zero] * dim)
                continue
            if bi[0] == "e" and bj[0] == "e":
                row.append(list(unit_vec(field, dim, index[bj])))
            elif bi[0] == "e":
                row.append(list(unit_vec(field, dim, index[bj])))
            elif bj[0] == "e":
                row.append(list(unit_vec(field, dim, index[bi])))
            else:
                concat = bi[1] + bj[1]
                reduced = rw.reduce({concat: field.one})
                row.append(poly_to_vec(reduced))
        table.append(row)
    unit = [field.zero] * dim
    for vi in range(len(q.vertices)):
        unit[index[("e", vi)]] = field.one
    idempotents = [unit_vec(field, dim, index[("e", vi)])
                   for vi in range(len(q.vertices))]

    q.vertex_idempotents = idempotents
    q.arrow_ideal_basis = [unit_vec(field, dim, i)
                           for i, bw in enumerate(basis_words) if bw[0] == "w"]
    q.basis_words = basis_words
    q.vertex_of_basis = [ends(bw) for bw in basis_words]

    alg = Algebra(field, labels, table, unit, idempotents=idempotents,
                  presentation=q, validate=validate)

    # admissibility: the arrow ideal must be nilpotent in the quotient
    arrow_basis = q.arrow_ideal_basis
    power = [list(v) for v in arrow_basis]
    from .linalg import row_space_basis
    steps = 0
    while power:
        steps += 1
        if steps > dim + 1:
            raise ValidationError(
                "relations are not admissible: the arrow ideal is not "
                "nilpotent in the quotient")
        nxt = []
        for v in power:
            for w in arrow_basis:
                nxt.append(alg.mul(v, w))
        power = row_space_basis(field, nxt, length=dim)
    return alg
