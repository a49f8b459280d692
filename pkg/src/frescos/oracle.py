"""Independent cross-check: exact truncated matrices for a and b.

A rank-k module truncated at depth M becomes a k*M dimensional vector
space over the rationals with basis b^m e_j (m < M, j = 1..k).  The
action of a and b is stored as explicit sparse columns, so everything
downstream is plain exact linear algebra with no series machinery
involved.  Both a and b only ever raise the b-level m, which is why
coordinates below the truncation stay exact.
"""

from fractions import Fraction

from .algebra import AbElement
from .errors import DegenerateTruncation, TruncationTooSmall
from .fresco import AdaptedModel, validate_presentation
from .series import SeriesB


class TruncatedRep:
    """Sparse exact matrices of a and b on the basis b^m e_j, m < M."""

    __slots__ = ("k", "M", "source", "acols", "bcols")

    def __init__(self, k, M, source, acols, bcols):
        self.k = k
        self.M = M
        self.source = source
        self.acols = acols
        self.bcols = bcols

    @property
    def dim(self):
        return self.k * self.M

    def idx(self, j, m):
        """Index of b^m e_j (j is 1-based)."""
        return (j - 1) * self.M + m

    def label(self, idx):
        return (idx // self.M + 1, idx % self.M)

    def level(self, idx):
        """The b-level m of a basis index."""
        return idx % self.M

    def key(self, idx):
        """Pivot order: lowest b-level first, then chain position."""
        return (idx % self.M, idx // self.M)

    def apply_a(self, vec):
        return _matvec(self.acols, vec)

    def apply_b(self, vec):
        return _matvec(self.bcols, vec)

    def embed(self, x):
        """Coordinates of an adapted-model element in this basis."""
        out = {}
        for j, c in enumerate(x.coords, start=1):
            for m in range(min(c.order, self.M - 1) + 1):
                if c.coeffs[m]:
                    out[self.idx(j, m)] = c.coeffs[m]
        return out

    def basis_vector(self, j, m=0):
        return {self.idx(j, m): Fraction(1)}


def _matvec(cols, vec):
    out = {}
    for i, x in vec.items():
        col = cols.get(i)
        if not col:
            continue
        for r, y in col.items():
            v = out.get(r, Fraction(0)) + x * y
            if v:
                out[r] = v
            elif r in out:
                del out[r]
    return out


def truncate_rep(p, M):
    """Exact a/b matrices for a presentation, truncated at depth M >= 4."""
    if M < 4:
        raise ValueError("truncation depth must be at least 4")
    p = validate_presentation(p)
    model = AdaptedModel(p, order=max(M, 4))
    k = p.rank
    acols = {}
    bcols = {}
    rep = TruncatedRep(k, M, p, acols, bcols)
    for j in range(1, k + 1):
        d = model.diag[j - 1]
        s = model.sub[j - 1]
        for m in range(M):
            i = rep.idx(j, m)
            if m + 1 < M:
                bcols[i] = {rep.idx(j, m + 1): Fraction(1)}
            col = {}
            # b^m d_j e_j plus the m b^{m+1} e_j crossing term
            for t in range(1, M - m):
                if d.coeffs[t]:
                    col[rep.idx(j, m + t)] = d.coeffs[t]
            if m + 1 < M:
                r = rep.idx(j, m + 1)
                col[r] = col.get(r, Fraction(0)) + m
                if col[r] == 0:
                    del col[r]
            if j > 1:
                for t in range(M - m):
                    if s.coeffs[t]:
                        col[rep.idx(j - 1, m + t)] = s.coeffs[t]
            acols[i] = col
    return rep


def rep_apply(rep, u, vec):
    """Apply a normal-ordered operator through the truncated matrices.

    Computes sum_m A^m (c_m(B) vec).  Coefficient series shorter than
    the depth simply contribute nothing beyond their order, so callers
    who care about high levels should pass operators of order >= M.
    """
    out = {}
    for m in range(u.degree + 1):
        c = u.coeff_series(m)
        cur = {}
        for t in range(min(c.order, rep.M - 1) + 1):
            if c.coeffs[t]:
                for r, x in _shift(rep, vec, t).items():
                    w = cur.get(r, Fraction(0)) + c.coeffs[t] * x
                    if w:
                        cur[r] = w
                    elif r in cur:
                        del cur[r]
        for _ in range(m):
            cur = rep.apply_a(cur)
        for r, x in cur.items():
            w = out.get(r, Fraction(0)) + x
            if w:
                out[r] = w
            elif r in out:
                del out[r]
    return out


def commutation_defect(rep):
    """Columns of AB - BA - B^2; exact zero on levels below M-1."""
    defects = {}
    for i in range(rep.dim):
        v = {i: Fraction(1)}
        d = _sub(_sub(rep.apply_a(rep.apply_b(v)), rep.apply_b(rep.apply_a(v))),
                 rep.apply_b(rep.apply_b(v)))
        d = {r: x for r, x in d.items() if rep.level(r) < rep.M - 1}
        if d:
            defects[i] = d
    return defects


def _sub(u, v):
    out = dict(u)
    for r, x in v.items():
        w = out.get(r, Fraction(0)) - x
        if w:
            out[r] = w
        elif r in out:
            del out[r]
    return out


def minimal_annihilator(rep, x, dmax=None):
    """Monic operator of least a-degree killing x, modulo b^(M-d-v).

    The unknown is  a^d + sum_m a^m c_m(b)  in normal order, so the
    series act before the a-powers.  Writing c_m = sum_i c_{m,i} b^i,
    the level v+t rows of the equation involve c_{m,i} only for i <= t
    (v is the b-valuation of x), and the i = t block is independent of
    t because a^m b^t = b^t (a + t b)^m.  Degrees are tried from 1 up;
    a degenerate constant block raises DegenerateTruncation.
    """
    if not x:
        raise ValueError("zero vector has no minimal annihilator")
    if dmax is None:
        dmax = rep.k
    v = min(rep.level(i) for i in x)
    for d in range(1, dmax + 1):
        got = _solve_layers(rep, x, d, v)
        if got is not None:
            ordc = rep.M - d - v
            return AbElement(
                [SeriesB(cs, ordc) for cs in got] + [SeriesB.one(ordc)]
            )
    raise DegenerateTruncation(
        "no monic annihilator of degree <= %d at depth %d" % (dmax, rep.M)
    )


def _shift(rep, vec, i):
    """Coordinates of b^i x; b is an exact shift of the level."""
    out = {}
    for r, c in vec.items():
        j, m = rep.label(r)
        if m + i < rep.M:
            out[rep.idx(j, m + i)] = c
    return out


def _solve_layers(rep, x, d, v):
    """Forward solve for the series slices; None if inconsistent."""
    M = rep.M
    ordc = M - d - v
    if ordc < 2:
        raise DegenerateTruncation(
            "depth %d leaves no room for a degree-%d annihilator" % (M, d)
        )
    # w[i][m] = a^m b^i x for each unknown slot
    w = []
    for i in range(ordc + 1):
        chain = [_shift(rep, x, i)]
        for _ in range(d - 1):
            chain.append(rep.apply_a(chain[-1]))
        w.append(chain)
    top = rep.apply_a(w[0][d - 1])
    # the constant block: level-v entries of x, ax, ..., a^{d-1} x;
    # a^m b^t = b^t (a + t b)^m makes every later layer reuse it
    g = [[w[0][m].get(rep.idx(j, v), Fraction(0)) for m in range(d)]
         for j in range(1, rep.k + 1)]
    if _rank(g) < d:
        raise DegenerateTruncation(
            "level-%d block has rank < %d at depth %d" % (v, d, M)
        )
    coeffs = [[] for _ in range(d)]
    for t in range(ordc + 1):
        rhs = []
        for j in range(1, rep.k + 1):
            acc = -top.get(rep.idx(j, v + t), Fraction(0))
            for m in range(d):
                for i in range(t):
                    if coeffs[m][i]:
                        acc -= coeffs[m][i] * w[i][m].get(
                            rep.idx(j, v + t), Fraction(0))
            rhs.append(acc)
        gt = [[w[t][m].get(rep.idx(j, v + t), Fraction(0))
               for m in range(d)] for j in range(1, rep.k + 1)]
        sol = _solve_exact(gt, rhs)
        if sol is None:
            return None
        for m in range(d):
            coeffs[m].append(sol[m])
    return coeffs


def _rank(g):
    work = [list(row) for row in g]
    rows = len(work)
    cols = len(work[0]) if rows else 0
    r = 0
    for c in range(cols):
        sel = next((rr for rr in range(r, rows) if work[rr][c]), None)
        if sel is None:
            continue
        work[r], work[sel] = work[sel], work[r]
        inv = 1 / work[r][c]
        work[r] = [x * inv for x in work[r]]
        for rr in range(rows):
            if rr != r and work[rr][c]:
                f = work[rr][c]
                work[rr] = [x - f * y for x, y in zip(work[rr], work[r])]
        r += 1
        if r == rows:
            break
    return r


class _Echelon:
    """Reduced echelon span of sparse vectors, pivots in rep.key order."""

    def __init__(self, rep):
        self.rep = rep
        self.pivots = {}

    def _lead(self, vec):
        return min(vec, key=self.rep.key)

    def reduce(self, vec):
        vec = dict(vec)
        while vec:
            lead = self._lead(vec)
            hit = self.pivots.get(lead)
            if hit is None:
                return vec
            f = vec[lead]
            for r, y in hit.items():
                w = vec.get(r, Fraction(0)) - f * y
                if w:
                    vec[r] = w
                elif r in vec:
                    del vec[r]
        return vec

    def insert(self, vec):
        """Reduce and insert; returns the new pivot index or None."""
        vec = self.reduce(vec)
        if not vec:
            return None
        lead = self._lead(vec)
        inv = 1 / vec[lead]
        vec = {r: x * inv for r, x in vec.items()}
        for piv, old in self.pivots.items():
            if lead in old:
                f = old[lead]
                for r, y in vec.items():
                    w = old.get(r, Fraction(0)) - f * y
                    if w:
                        old[r] = w
                    elif r in old:
                        del old[r]
        self.pivots[lead] = vec
        return lead

    def vectors(self):
        return [self.pivots[i] for i in sorted(self.pivots, key=self.rep.key)]


def span_closure(rep, gens):
    """Smallest truncated subspace containing gens and stable under a, b."""
    ech = _Echelon(rep)
    queue = []
    for g in gens:
        piv = ech.insert(g)
        if piv is not None:
            queue.append(ech.pivots[piv])
    while queue:
        v = queue.pop()
        for img in (rep.apply_a(v), rep.apply_b(v)):
            if img:
                piv = ech.insert(img)
                if piv is not None:
                    queue.append(ech.pivots[piv])
    return ech


def _stable_rank(rep, ech):
    """Pivot count per b-level must plateau; the plateau is the rank."""
    per_level = [0] * rep.M
    for piv in ech.pivots:
        per_level[rep.level(piv)] += 1
    rank = per_level[rep.M - 1]
    if rank == 0:
        raise TruncationTooSmall("empty top level at depth %d" % rep.M)
    # the count grows while new chain directions surface and then sits
    # at the rank; demand the last growth happens early enough that a
    # straggler direction would still have been visible
    last_growth = 0
    prev = 0
    for m in range(rep.M):
        if per_level[m] > prev:
            last_growth = m
        prev = per_level[m]
    if last_growth > rep.M - rank - 2:
        raise TruncationTooSmall(
            "pivot count per level has not stabilised at depth %d" % rep.M
        )
    return rank


def submodule_analysis(rep, gens):
    """Rank, normality and codimension of the span closure of gens.

    Returns a dict with keys rank, normal, codim, dim.  Normality is
    the condition span(F) meet b E = b F, tested on levels below M-1
    where the truncated image of b is faithful.
    """
    ech = span_closure(rep, gens)
    rank = _stable_rank(rep, ech)
    dim = len(ech.pivots)
    bf = _Echelon(rep)
    for v in ech.vectors():
        img = rep.apply_b(v)
        if img:
            bf.insert(img)
    normal = True
    for piv, v in ech.pivots.items():
        if rep.level(piv) == 0:
            continue
        # pivots at level >= 1 span exactly F meet bE
        res = bf.reduce(v)
        if any(rep.level(r) < rep.M - 1 for r in res):
            normal = False
            break
    return {
        "rank": rank,
        "normal": normal,
        "dim": dim,
        "codim": rep.dim - dim,
    }


def dump_rep(rep):
    """Human-readable listing of both matrices, column by column."""
    def fmt(col):
        parts = []
        for r, x in sorted(col.items()):
            rj, rm = rep.label(r)
            parts.append("%s (e%d, m=%d)" % (x, rj, rm))
        return " + ".join(parts) or "0"

    lines = []
    for i in range(rep.dim):
        j, m = rep.label(i)
        lines.append("(e%d, m=%d): a -> %s | b -> %s" % (
            j, m, fmt(rep.acols.get(i, {})), fmt(rep.bcols.get(i, {}))))
    return "\n".join(lines)


def _solve_exact(g, rhs):
    """Unique solution of g z = rhs, or None when inconsistent.

    g is known to have full column rank, so the tiny elimination here
    never has to branch on free variables.
    """
    rows = len(g)
    d = len(g[0]) if rows else 0
    aug = [list(row) + [b] for row, b in zip(g, rhs)]
    r = 0
    pivots = []
    for c in range(d):
        sel = next((rr for rr in range(r, rows) if aug[rr][c]), None)
        if sel is None:
            continue
        aug[r], aug[sel] = aug[sel], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for rr in range(rows):
            if rr != r and aug[rr][c]:
                f = aug[rr][c]
                aug[rr] = [x - f * y for x, y in zip(aug[rr], aug[r])]
        pivots.append(c)
        r += 1
    for row in aug[r:]:
        if row[d]:
            return None
    sol = [Fraction(0)] * d
    for i, c in enumerate(pivots):
        sol[c] = aug[i][d]
    return sol
