"""Presentations of frescos and the adapted module model.

A fresco of rank k is presented by a product

    (a - l_1 b) S_1^-1 (a - l_2 b) S_2^-1 ... (a - l_k b) S_k^-1

with rational exponents l_j and unit series S_j, S_j(0) = 1.  The
geometric condition l_j + j > k makes every root of the Bernstein
polynomial a negative rational.  The adapted model realizes the module
concretely on a basis e_1..e_k with

    a e_j = (l_j b + b^2 S_j'/S_j) e_j + S_j e_{j-1},      e_0 = 0,

which is just the chain e_{j-1} = (a - l_j b) S_j^-1 e_j unrolled.
"""

from fractions import Fraction

from .algebra import AbElement, expand_factor_form, initial_form
from .errors import (
    IndexOutOfRange,
    MixedPrimitiveClasses,
    NonUnitSeries,
    NotAGenerator,
    NotGeometric,
    OrderUnderflow,
    SemanticError,
)
from .series import SeriesB, rat


class Presentation:
    """An ordered list of (exponent, unit) factors defining a fresco."""

    __slots__ = ("factors",)

    def __init__(self, factors):
        self.factors = tuple((rat(l), u) for l, u in factors)

    @property
    def rank(self):
        return len(self.factors)

    @property
    def lambdas(self):
        return tuple(l for l, _ in self.factors)

    @property
    def units(self):
        return tuple(u for _, u in self.factors)

    def p_values(self):
        """p_j = l_{j+1} - l_j + 1 for j = 1..k-1."""
        ls = self.lambdas
        return tuple(ls[j + 1] - ls[j] + 1 for j in range(len(ls) - 1))

    def mu(self):
        return sum(self.lambdas, Fraction(0))

    def is_primitive(self):
        """All exponents in one class mod 1."""
        ls = self.lambdas
        return all((l - ls[0]).denominator == 1 for l in ls)

    def is_principal(self):
        """l_j + j non decreasing, i.e. every p_j >= 0 an integer."""
        return all(p >= 0 and p.denominator == 1 for p in self.p_values())

    def __eq__(self, other):
        if not isinstance(other, Presentation):
            return NotImplemented
        return self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    def __repr__(self):
        return "Presentation(%s)" % ", ".join(
            "(%s | %s)" % (l, u) for l, u in self.factors
        )


def validate_presentation(factors):
    """Check the geometric condition and the unit normalization.

    Returns a Presentation.  Exponents must be rational with
    l_j + j > k; units must be series with constant term exactly 1.
    Non-primitive exponent lists are allowed here (the flag is queried
    where it matters), so only the two fatal conditions raise.
    """
    p = factors if isinstance(factors, Presentation) else Presentation(factors)
    k = p.rank
    if k == 0:
        raise SemanticError("a presentation needs at least one factor")
    for j, (lam, unit) in enumerate(p.factors, start=1):
        if lam + j <= k:
            raise NotGeometric(
                "exponent %s at position %d violates lambda_j + j > %d" % (lam, j, k)
            )
        if not isinstance(unit, SeriesB) or unit.constant() != 1:
            raise NonUnitSeries("unit at position %d must have constant term 1" % j)
    return p


def trivial_units(lambdas, order=8):
    """Presentation with all units 1 (used for Bernstein elements)."""
    return Presentation([(l, SeriesB.one(order)) for l in lambdas])


class BernsteinData:
    """Initial form of a presentation: factors, roots, and mu."""

    __slots__ = ("element", "roots", "mu")

    def __init__(self, element, roots, mu):
        self.element = element
        self.roots = roots
        self.mu = mu


def bernstein(p):
    """Bernstein element of a geometric presentation.

    The element is the product of the trivialized factors
    (a - l_1 b)...(a - l_k b); the roots of the Bernstein polynomial are
    -(l_j + j - k), all negative by the geometric condition.  The
    expansion consistency initial_form(expand(p), k) == expand(element)
    is asserted on the way.
    """
    p = validate_presentation(p)
    k = p.rank
    avail = min(u.order for u in p.units)
    # the initial form reads b-coefficients up to b^k, so k is a hard floor
    order = max(k, min(max(2 * k, 4), avail))
    elem = trivial_units(p.lambdas, order=order)
    full = expand_factor_form(p.factors, order)
    flat = expand_factor_form(elem.factors, order)
    if not initial_form(full, k).same_upto(flat, k):
        raise AssertionError("initial form disagrees with the trivialized product")
    roots = tuple(sorted(-(l + j + 1 - k) for j, l in enumerate(p.lambdas)))
    return BernsteinData(elem, roots, p.mu())


def fundamental_invariants(exponents):
    """Principal exponents from any Jordan-Hoelder exponent list.

    Sorts m_i + i into non decreasing order and subtracts the position
    back out; (7/2, 3/2) becomes (5/2, 5/2).
    """
    ms = [rat(x) for x in exponents]
    if any((m - ms[0]).denominator != 1 for m in ms):
        raise MixedPrimitiveClasses("exponents span several classes mod 1")
    shifted = sorted(m + i for i, m in enumerate(ms, start=1))
    return tuple(s - i for i, s in enumerate(shifted, start=1))


def default_model_order(p):
    """Enough room for the alpha pipeline: 2k + sum(max(p_j,1)) + 8."""
    k = p.rank
    budget = 2 * k + sum(max(pj, 1) for pj in p.p_values()) + 8
    budget = rat(budget)
    return -(-budget.numerator // budget.denominator)


class ModuleElement:
    """Element of an adapted model: coordinate series against e_1..e_k."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        coords = list(coords)
        n = min(c.order for c in coords)
        self.coords = tuple(c if c.order == n else c.truncate(n) for c in coords)

    @property
    def order(self):
        return self.coords[0].order

    @property
    def rank(self):
        return len(self.coords)

    def coord(self, j):
        """1-based coordinate against e_j."""
        return self.coords[j - 1]

    def scale(self, s):
        return ModuleElement([s * c for c in self.coords])

    def __add__(self, other):
        return ModuleElement([x + y for x, y in zip(self.coords, other.coords)])

    def __sub__(self, other):
        return ModuleElement([x - y for x, y in zip(self.coords, other.coords)])

    def is_zero(self):
        return all(c.valuation() is None for c in self.coords)

    def __repr__(self):
        return "ModuleElement(%s)" % ", ".join(str(c) for c in self.coords)


class AdaptedModel:
    """The concrete C[[b]]-module attached to a presentation."""

    def __init__(self, presentation, order=None):
        p = validate_presentation(presentation)
        if order is None:
            order = default_model_order(p)
        self.presentation = p
        self.order = order
        self.diag = []
        self.sub = []
        for lam, unit in p.factors:
            u = _at_order(unit, order)
            # d_j = lambda_j b + b^2 S_j'/S_j
            d = SeriesB.monomial(lam, 1, order) + \
                (u.derive().shift(2) * u.invert()).truncate(order)
            self.diag.append(d)
            self.sub.append(u)

    @property
    def rank(self):
        return self.presentation.rank

    def basis(self, j):
        """e_j as a module element."""
        k = self.rank
        return ModuleElement(
            [SeriesB.one(self.order) if i == j else SeriesB.zero(self.order)
             for i in range(1, k + 1)]
        )

    def element(self, coords):
        if len(coords) != self.rank:
            raise ValueError("expected %d coordinates" % self.rank)
        return ModuleElement(coords)

    def apply_a(self, x):
        """Coordinatewise: (a x)_j = d_j G_j + b^2 G_j' + S_{j+1} G_{j+1}."""
        if x.order < 1:
            raise OrderUnderflow("coordinates known only to order 0")
        k = self.rank
        out = []
        for j in range(1, k + 1):
            g = x.coord(j)
            acc = self.diag[j - 1] * g + g.derive().shift(2)
            if j < k:
                acc = acc + self.sub[j] * x.coord(j + 1)
            out.append(acc)
        return ModuleElement(out)

    def apply_b(self, x):
        return ModuleElement([c.shift(1) for c in x.coords])

    def apply_op(self, u, x):
        """Act by a normal form sum a^m c_m(b): each term is a^m (c_m x)."""
        out = None
        for m in range(u.degree + 1):
            c = u.coeff_series(m)
            if c.valuation() is None:
                continue
            t = x.scale(c)
            for _ in range(m):
                t = self.apply_a(t)
            out = t if out is None else out + t
        if out is None:
            return x.scale(SeriesB.zero(x.order))
        return out


def _at_order(s, order):
    if s.order >= order:
        return s.truncate(order)
    # units are almost always polynomials given at modest order; extending
    # them silently would be dishonest, so demand enough coefficients
    raise OrderUnderflow(
        "unit known to order %d, model needs %d" % (s.order, order)
    )


def regenerate_presentation(model, g):
    """Read a presentation off a generator of an adapted model.

    Walks stages m = k..1.  At each stage the new unit is
    Sigma_m = S_m G_m / G_m(0); the next generator is
    (a - l_m b)(Sigma_m^-1 g) which lands in the span of e_1..e_{m-1}
    exactly.  A vanishing constant term G_m(0) means g fails to
    generate and raises NotAGenerator.
    """
    p = model.presentation
    k = p.rank
    coords = list(g.coords)
    if len(coords) != k:
        raise ValueError("generator has %d coordinates, model rank is %d"
                         % (len(coords), k))
    new_units = [None] * k
    for m in range(k, 0, -1):
        gm = coords[m - 1]
        c0 = gm.constant()
        if c0 == 0:
            raise NotAGenerator("coordinate %d has no constant term" % m)
        sigma = model.sub[m - 1] * gm * (1 / c0)
        new_units[m - 1] = sigma
        if m == 1:
            break
        t = sigma.invert()
        x = ModuleElement([t * c for c in coords[:m]] +
                          [SeriesB.zero(t.order)] * (k - m))
        y = _apply_linear(model, p.lambdas[m - 1], x)
        top = y.coord(m)
        if top.valuation() is not None:
            raise AssertionError("stage %d residue should vanish, got %s"
                                 % (m, top))
        coords = list(y.coords[: m - 1])
    order = min(u.order for u in new_units)
    return validate_presentation(
        [(lam, u.truncate(order)) for lam, u in zip(p.lambdas, new_units)]
    )


def _apply_linear(model, lam, x):
    """(a - lam b) x inside the model."""
    return model.apply_a(x) - model.apply_b(x).scale(
        SeriesB.monomial(lam, 0, x.order)
    )


def sub_quotient(p, i, j):
    """Factors i..j of a principal presentation, as F_j / F_{i-1}.

    Geometric automatically: l_m + m > k >= j keeps every exponent
    above the smaller rank.
    """
    p = validate_presentation(p)
    if not p.is_principal():
        raise SemanticError("sub-quotients are cut from the principal order")
    if not (1 <= i <= j <= p.rank):
        raise IndexOutOfRange("need 1 <= i <= j <= %d" % p.rank)
    return validate_presentation(p.factors[i - 1: j])


def twist(p, delta):
    """Shift every exponent by delta; revalidates the geometric bound."""
    p = validate_presentation(p)
    d = rat(delta)
    return validate_presentation([(l + d, u) for l, u in p.factors])


def normalize_last_unit(p):
    """Equivalent presentation of the same module with S_k = 1.

    Uses the generator S_k^-1 e, whose annihilator ends in the bare
    factor (a - l_k b).
    """
    p = validate_presentation(p)
    fs = list(p.factors)
    lam, unit = fs[-1]
    fs[-1] = (lam, SeriesB.one(unit.order))
    return Presentation(fs)
