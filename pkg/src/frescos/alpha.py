"""Classification layer: rank-2 classes, the alpha invariant, splitting.

The central quantity is a single rational alpha attached to a
presentation whose p-steps p_j = l_{j+1} - l_j + 1 are all positive
integers.  Rank 2 reads it straight off the first unit; higher ranks
shrink by one through a reduction that trades the last two factors for
one factor (l_k + 1, 1), at the price of solving one resonant ODE in b.
The module is semi-simple exactly when alpha and all the nested alphas
vanish.
"""

from fractions import Fraction

from .errors import (
    AlphaZero,
    NotInF0,
    NotPrimitive,
    PValueZero,
    ResonantObstruction,
    SemanticError,
    WrongRank,
)
from .fresco import (
    AdaptedModel,
    ModuleElement,
    Presentation,
    _apply_linear,
    default_model_order,
    regenerate_presentation,
    sub_quotient,
    validate_presentation,
)
from .series import SeriesB, rat, solve_resonant_ode


class Rank2Class:
    """Isomorphism class of a rank-2 fresco: exponents, step, alpha."""

    __slots__ = ("lam1", "lam2", "p", "alpha", "theme")

    def __init__(self, lam1, lam2, p, alpha, theme):
        self.lam1 = lam1
        self.lam2 = lam2
        self.p = p
        self.alpha = alpha
        self.theme = theme

    def __eq__(self, other):
        if not isinstance(other, Rank2Class):
            return NotImplemented
        return (self.lam1, self.lam2, self.p, self.alpha, self.theme) == \
            (other.lam1, other.lam2, other.p, other.alpha, other.theme)

    def __repr__(self):
        kind = "theme" if self.theme else "semi-simple"
        return "Rank2Class(%s, %s, p=%s, alpha=%s, %s)" % (
            self.lam1, self.lam2, self.p, self.alpha, kind)


class ThemeClass:
    """A rank-2 theme up to isomorphism: two exponents and a parameter.

    The exponents always satisfy high = low + p - 1.
    """

    __slots__ = ("low", "high", "p", "parameter")

    def __init__(self, low, high, p, parameter):
        low, high, p = rat(low), rat(high), rat(p)
        if high != low + p - 1:
            raise SemanticError(
                "theme exponents must satisfy high = low + p - 1"
            )
        self.low = low
        self.high = high
        self.p = p
        self.parameter = rat(parameter)

    def __eq__(self, other):
        if not isinstance(other, ThemeClass):
            return NotImplemented
        return (self.low, self.high, self.p, self.parameter) == \
            (other.low, other.high, other.p, other.parameter)

    def __repr__(self):
        return "ThemeClass(low=%s, high=%s, p=%s, parameter=%s)" % (
            self.low, self.high, self.p, self.parameter)


def _require_positive_steps(p):
    if not p.is_primitive():
        raise NotPrimitive("exponents differ by non integers")
    for j, pj in enumerate(p.p_values(), start=1):
        if pj.denominator != 1 or pj < 0:
            raise SemanticError(
                "p_%d = %s: factors are not in principal order" % (j, pj)
            )
        if pj == 0:
            raise PValueZero("p_%d = 0" % j)


def classify_rank2(p):
    """Full isomorphism class of a rank-2 presentation.

    After normalizing the second unit to 1 (same module, generator
    S_2^-1 e) the class is decided by the b^p coefficient of S_1:
    nonzero gives the theme with that parameter, zero splits.  The
    borderline p = 0 has a single class, a theme by convention written
    with parameter 1.
    """
    p = validate_presentation(p)
    if p.rank != 2:
        raise WrongRank("rank-2 classification got rank %d" % p.rank)
    if not p.is_primitive():
        raise NotPrimitive("exponents differ by a non integer")
    lam1, lam2 = p.lambdas
    step = p.p_values()[0]
    if step < 0:
        raise SemanticError(
            "p_1 = %s: factors are not in principal order" % step
        )
    if step == 0:
        return Rank2Class(lam1, lam2, step, Fraction(1), True)
    alpha = p.units[0].coeff(int(step))
    return Rank2Class(lam1, lam2, step, alpha, alpha != 0)


def alpha_reduce_step(p, tau=0, order=None):
    """Trade rank k >= 3 for rank k-1 without moving alpha.

    With S_k normalized away, pick X with b^2 X' - (p_{k-1} - 1) b X =
    1 - S_{k-1} and set  e~ = e_k + X S_{k-1}^-1 e_{k-1}.  Then
    (a - l_{k-1} b)(a - l_k b) e~ lands in the span of e_1..e_{k-2}
    exactly, with constant coordinate 1, so it generates that
    submodule; reading its presentation off and appending (l_k + 1, 1)
    gives the reduced fresco.  The ODE solution is unique up to
    tau b^(p_{k-1}-1); alpha does not depend on tau precisely on the
    class where it is defined.
    """
    p = validate_presentation(p)
    k = p.rank
    if k < 3:
        raise WrongRank("reduction needs rank >= 3, got %d" % k)
    _require_positive_steps(p)
    if order is None:
        order = min(default_model_order(p), min(u.order for u in p.units))
    # same module, last unit 1: replaces the generator by S_k^-1 e
    fs = list(p.factors)
    fs[-1] = (fs[-1][0], SeriesB.one(order))
    model = AdaptedModel(Presentation(fs), order=order)
    lam = p.lambdas
    pk1 = p.p_values()[k - 2]
    s = model.sub[k - 2]
    try:
        x = solve_resonant_ode("B", pk1 - 1, SeriesB.one(order) - s)
    except ResonantObstruction as exc:
        raise NotInF0(
            "unit S_%d obstructs the reduction: %s" % (k - 1, exc)
        ) from exc
    if tau:
        x = x + SeriesB.monomial(rat(tau), int(pk1) - 1, x.order)
    coords = [SeriesB.zero(x.order) for _ in range(k)]
    coords[k - 1] = SeriesB.one(x.order)
    coords[k - 2] = x * s.invert().truncate(x.order)
    e_tilde = ModuleElement(coords)
    g = _apply_linear(model, lam[k - 1], e_tilde)
    g = _apply_linear(model, lam[k - 2], g)
    for j in (k, k - 1):
        if g.coord(j).valuation() is not None:
            raise AssertionError(
                "coordinate %d should vanish after the reduction" % j
            )
    sub = AdaptedModel(Presentation(p.factors[: k - 2]), order=order)
    gsub = ModuleElement([c.truncate(sub.order) if c.order > sub.order
                          else c for c in g.coords[: k - 2]])
    reduced = regenerate_presentation(sub, gsub)
    tail_order = min(u.order for u in reduced.units)
    return validate_presentation(
        list(reduced.factors) + [(lam[k - 1] + 1, SeriesB.one(tail_order))]
    )


def rank3_alpha_formula(p):
    """Closed form for alpha in rank 3, bypassing the reduction.

    Normalizing S_3 to 1, solve b T' - p_2 T = -p_2 S_2 for V with
    V(0) = 1 and read off the b^(p_1+p_2) coefficient of V S_1.  The
    resonance of the ODE at p_2 is the S_2 obstruction; the S_1
    obstruction is checked separately since this route never trips
    over it.
    """
    p = validate_presentation(p)
    if p.rank != 3:
        raise WrongRank("closed formula is rank 3 only, got %d" % p.rank)
    _require_positive_steps(p)
    p1, p2 = (int(x) for x in p.p_values())
    s1, s2 = p.units[0], p.units[1]
    if s1.coeff(p1) != 0:
        raise ResonantObstruction(
            "unit S_1 has a nonzero b^%d coefficient" % p1
        )
    v = solve_resonant_ode("A", p2, -p2 * s2)
    return (v * s1).coeff(p1 + p2)


def alpha_invariant(p, tau=0):
    """The alpha invariant of a presentation with positive p-steps.

    Rank 2 is the base case; higher ranks go through alpha_reduce_step,
    which fails with NotInF0 outside the class where alpha is defined.
    The nested rank-2 sub-quotients must split for the value to be a
    true invariant, so that is checked up front.
    """
    p = validate_presentation(p)
    if p.rank < 2:
        raise WrongRank("alpha needs rank >= 2, got %d" % p.rank)
    _require_positive_steps(p)
    while p.rank > 2:
        steps = p.p_values()
        for j in range(p.rank - 1):
            if p.units[j].coeff(int(steps[j])) != 0:
                raise NotInF0(
                    "adjacent sub-quotient %d does not split: "
                    "S_%d has a nonzero b^%s coefficient"
                    % (j + 1, j + 1, steps[j])
                )
        p = alpha_reduce_step(p, tau=tau)
    return classify_rank2(p).alpha


def is_semisimple(p, _memo=None):
    """Whether the module splits into rank-1 pieces.

    Rank at most 1 always does.  A zero p-step pins a rank-2 theme
    inside, so the answer is no.  Otherwise the module is semi-simple
    exactly when alpha vanishes and both rank k-1 edges are
    semi-simple; NotInF0 already certifies a non-split sub-quotient.
    """
    p = validate_presentation(p)
    if _memo is None:
        _memo = {}
    if p in _memo:
        return _memo[p]
    k = p.rank
    if k <= 1:
        return True
    if not p.is_primitive():
        raise NotPrimitive("exponents differ by non integers")
    if not p.is_principal():
        raise SemanticError("semi-simplicity test needs principal order")
    out = True
    if any(pj == 0 for pj in p.p_values()):
        out = False
    elif k == 2:
        out = classify_rank2(p).alpha == 0
    else:
        try:
            out = alpha_invariant(p) == 0
        except NotInF0:
            out = False
        if out:
            out = is_semisimple(sub_quotient(p, 1, k - 1), _memo) and \
                is_semisimple(sub_quotient(p, 2, k), _memo)
    _memo[p] = out
    return out


def subtheme_class(p):
    """Class of the maximal subtheme pinned by a nonzero alpha.

    Its exponents are l_1 and l_k + k - 2, its step is the total
    p(E) = sum p_j, and its parameter is alpha itself.
    """
    p = validate_presentation(p)
    if p.rank < 2:
        raise WrongRank("subtheme needs rank >= 2, got %d" % p.rank)
    a = alpha_invariant(p)
    if a == 0:
        raise AlphaZero("alpha vanishes, no subtheme of full step")
    total = sum(p.p_values())
    return ThemeClass(p.lambdas[0], p.lambdas[-1] + p.rank - 2, total, a)


def quotient_theme_class(p):
    """Class of the maximal quotient theme; parameter scaled from alpha.

    The scale is (-1)^k times the ratio of the two cumulative p
    products, prefix over suffix; for k = 2 it is alpha itself.
    """
    p = validate_presentation(p)
    k = p.rank
    if k < 2:
        raise WrongRank("quotient theme needs rank >= 2, got %d" % k)
    a = alpha_invariant(p)
    if a == 0:
        raise AlphaZero("alpha vanishes, no quotient theme of full step")
    steps = p.p_values()
    num = Fraction(1)
    den = Fraction(1)
    for i in range(k - 2):
        num *= sum(steps[: i + 1])
        den *= sum(steps[i + 1:])
    beta = (-1) ** k * a * num / den
    total = sum(steps)
    return ThemeClass(p.lambdas[0] - k + 2, p.lambdas[-1], total, beta)


def dual_twist_rank2(t, delta):
    """Image of a rank-2 theme class under the twisted duality at delta.

    Exponents reflect through delta and swap; the parameter flips sign.
    """
    if not isinstance(t, ThemeClass):
        raise TypeError("expected a ThemeClass")
    d = rat(delta)
    return ThemeClass(d - t.high, d - t.low, t.p, -t.parameter)
