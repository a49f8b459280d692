"""Noncommutative operator algebra with the relation a b - b a = b^2.

Elements are kept in the canonical normal order sum_m a^m c_m(b) with
the a-powers on the left and the series coefficients on the right.
Pushing a series left past a power of a uses the rule

    S a = a S - b^2 S'

iterated into  S a^n = sum_i (-1)^i C(n,i) a^{n-i} D^i(S)  where
D(S) = b^2 S'.  D raises the known order by one, so normal ordering
never erodes series precision.
"""

from fractions import Fraction
from math import comb

from .errors import NonMonicDivisor, OrderUnderflow
from .series import SeriesB, rat


def _D(s):
    """b^2 d/db, the correction picked up when a series crosses one a."""
    if s.order == 0:
        raise OrderUnderflow("series known only to order 0 cannot cross a")
    return s.derive().shift(2)


def _is_zero(s):
    return s.valuation() is None


class AbElement:
    """A finite sum a^m c_m(b) in canonical normal order.

    The coefficient of the top a-power is nonzero (as far as its
    truncation shows) unless the element has degree 0.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = list(coeffs)
        if not cs:
            cs = [SeriesB.zero(0)]
        while len(cs) > 1 and _is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    # --- constructors ---

    @classmethod
    def zero(cls, order=0):
        return cls([SeriesB.zero(order)])

    @classmethod
    def from_series(cls, s):
        """Embed a series as a degree-0 element."""
        return cls([s])

    @classmethod
    def linear(cls, lam, order):
        """The factor a - lam*b."""
        return cls([SeriesB.monomial(-rat(lam), 1, order), SeriesB.one(order)])

    # --- access ---

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def coeff_series(self, m):
        """Coefficient of a^m; exact zero past the degree."""
        if m > self.degree:
            return SeriesB.zero(self.coeffs[0].order)
        return self.coeffs[m]

    def is_zero(self):
        return all(_is_zero(c) for c in self.coeffs)

    # --- ring operations ---

    def _zip(self, other):
        n = max(self.degree, other.degree)
        return ((self.coeff_series(m), other.coeff_series(m)) for m in range(n + 1))

    def __add__(self, other):
        if not isinstance(other, AbElement):
            return NotImplemented
        return AbElement([x + y for x, y in self._zip(other)])

    def __sub__(self, other):
        if not isinstance(other, AbElement):
            return NotImplemented
        return AbElement([x - y for x, y in self._zip(other)])

    def __neg__(self):
        return AbElement([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, SeriesB):
            other = AbElement.from_series(other)
        if not isinstance(other, AbElement):
            return NotImplemented
        return normal_form_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, SeriesB):
            return normal_form_mul(AbElement.from_series(other), self)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, AbElement):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def same_upto(self, other, n):
        """Slotwise agreement of all coefficients of b^0..b^n."""
        top = max(self.degree, other.degree)
        return all(
            self.coeff_series(m).same_upto(other.coeff_series(m), n)
            for m in range(top + 1)
        )

    def __str__(self):
        return format_ab(self)

    def __repr__(self):
        return "AbElement<deg %d>" % self.degree


def normal_form_mul(u, v):
    """Product of two normal forms, again in normal order."""
    out = [None] * (u.degree + v.degree + 1)
    for m, c in enumerate(u.coeffs):
        if _is_zero(c):
            continue
        for n, d in enumerate(v.coeffs):
            if _is_zero(d):
                continue
            dic = c
            for i in range(n + 1):
                term = dic * d
                if i % 2:
                    term = -term
                if comb(n, i) != 1:
                    term = term * comb(n, i)
                k = m + n - i
                out[k] = term if out[k] is None else out[k] + term
                if i < n:
                    dic = _D(dic)
    order0 = min(c.order for c in u.coeffs + v.coeffs)
    return AbElement([SeriesB.zero(order0) if c is None else c for c in out])


def expand_factor_form(factors, order):
    """Multiply out (a - l_1 b) S_1^-1 ... (a - l_k b) S_k^-1.

    factors is a sequence of (lambda, unit) pairs; each unit must be
    invertible at its constant term.  The result has a-degree k with a
    unit top coefficient (not monic in general).
    """
    acc = AbElement.from_series(SeriesB.one(order))
    for lam, unit in factors:
        acc = acc * AbElement.linear(lam, order)
        inv = _fit(unit, order).invert()
        acc = acc * AbElement.from_series(inv)
    return acc


def _fit(s, order):
    """View s at exactly the requested order."""
    if s.order == order:
        return s
    if s.order > order:
        return s.truncate(order)
    raise OrderUnderflow(
        "series known to order %d, need %d" % (s.order, order)
    )


def left_divide(u, p):
    """Division u = q p + r with deg_a r < deg_a p.

    The divisor's top coefficient must be a unit series; otherwise the
    leading term of u cannot be cancelled and NonMonicDivisor is raised.
    """
    d = p.degree
    top = p.coeff_series(d)
    if not top.is_unit():
        raise NonMonicDivisor("leading coefficient is not a unit")
    top_inv = top.invert()
    q = AbElement.zero(top.order)
    r = u
    while r.degree >= d and not r.is_zero():
        m = r.degree
        t = r.coeff_series(m) * top_inv
        if _is_zero(t):
            # stray known-zero head; drop it and move on
            r = AbElement(list(r.coeffs[:m]))
            continue
        qterm = AbElement([SeriesB.zero(t.order)] * (m - d) + [t])
        q = q + qterm
        r = r - qterm * p
        # the top slot cancels exactly; strip it so the degree drops
        r = AbElement(list(r.coeffs[:m]))
    return q, r


def monicize(u):
    """Left-multiply by the inverse of the unit top coefficient.

    The result generates the same left ideal and has leading term a^d
    with coefficient exactly 1.
    """
    top = u.coeff_series(u.degree)
    if not top.is_unit():
        raise NonMonicDivisor("leading coefficient is not a unit")
    return AbElement.from_series(top.invert()) * u


def initial_form(u, k):
    """The (a,b)-homogeneous part of total degree k.

    Picks the b^(k-m) coefficient out of each a^m slot.  For the
    expansion of a geometric presentation of rank k this is its
    Bernstein element.
    """
    slots = []
    for m in range(min(u.degree, k) + 1):
        c = u.coeff_series(m).coeff(k - m) if k - m >= 0 else Fraction(0)
        slots.append(SeriesB.monomial(c, k - m, k) if c else SeriesB.zero(k))
    return AbElement(slots)


def format_ab(u):
    """Render like 'a^2 - 6 a b + 45/4 b^2' (a-degree descending)."""
    parts = []
    for m in range(u.degree, -1, -1):
        c = u.coeff_series(m)
        for nu in range(c.order + 1):
            x = c.coeffs[nu]
            if x == 0:
                continue
            mag = abs(x)
            bits = []
            if mag != 1 or (m == 0 and nu == 0):
                bits.append(str(mag))
            if m == 1:
                bits.append("a")
            elif m > 1:
                bits.append("a^%d" % m)
            if nu == 1:
                bits.append("b")
            elif nu > 1:
                bits.append("b^%d" % nu)
            body = " ".join(bits)
            if not parts:
                parts.append(body if x > 0 else "-" + body)
            else:
                parts.append(("+ " if x > 0 else "- ") + body)
    return " ".join(parts) if parts else "0"


# --- the commuting identities ---
#
# These are checked, not assumed: the callers report pass/fail.

def check_exchange(x, y, order=16):
    """(a - x b)(a - y b) = (a - (y+1) b)(a - (x-1) b), any x, y."""
    x, y = rat(x), rat(y)
    lhs = AbElement.linear(x, order) * AbElement.linear(y, order)
    rhs = AbElement.linear(y + 1, order) * AbElement.linear(x - 1, order)
    return lhs.same_upto(rhs, order)


def check_unit_exchange(lam1, p1, rho, order=24):
    """The exchange with U = 1 + rho b^p1 across (a - l1 b)(a - l2 b).

    l2 = l1 + p1 - 1.  Claims
    (a - l1 b)(a - l2 b) = U^-1 (a - (l2+1) b) U^2 (a - (l1-1) b) U^-1.
    """
    lam1, rho = rat(lam1), rat(rho)
    lam2 = lam1 + p1 - 1
    u = SeriesB.one(order) + SeriesB.monomial(rho, p1, order)
    ui = AbElement.from_series(u.invert())
    u2 = AbElement.from_series(u * u)
    lhs = AbElement.linear(lam1, order) * AbElement.linear(lam2, order)
    rhs = ui * AbElement.linear(lam2 + 1, order) * u2 \
        * AbElement.linear(lam1 - 1, order) * ui
    n = order - 2  # two inversions cost nothing, D costs nothing; keep slack
    return lhs.same_upto(rhs, n)


def check_middle_unit_exchange(lam1, p1, p2, alpha, order=24):
    """The exchange across a sandwiched unit 1 + alpha b^p2.

    With l2 = l1 + p1 - 1, l3 = l2 + p2 - 1, W = 1 + alpha b^p2 and
    V = 1 + beta b^p2 for beta = (1 + p2/p1) alpha, claims

    (a - (l1-1) b) W^-1 (a - l3 b)
        = V^-1 (a - (l3+1) b) V^2 W^-1 (a - (l1-2) b) V^-1.
    """
    lam1, alpha = rat(lam1), rat(alpha)
    lam3 = lam1 + p1 + p2 - 2
    beta = (1 + Fraction(p2, p1)) * alpha
    w_inv = AbElement.from_series(
        (SeriesB.one(order) + SeriesB.monomial(alpha, p2, order)).invert()
    )
    v = SeriesB.one(order) + SeriesB.monomial(beta, p2, order)
    vi = AbElement.from_series(v.invert())
    v2 = AbElement.from_series(v * v)
    lhs = AbElement.linear(lam1 - 1, order) * w_inv * AbElement.linear(lam3, order)
    rhs = vi * AbElement.linear(lam3 + 1, order) * v2 * w_inv \
        * AbElement.linear(lam1 - 2, order) * vi
    return lhs.same_upto(rhs, order - 2)
