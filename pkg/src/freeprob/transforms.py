"""Moment/cumulant calculus, free convolutions, the S-transform, and a
word-moment evaluator driven directly by the definition of freeness.

Every major identity here is computable along two independent routes
(enumeration over non-crossing partitions vs. formal series equations);
ops expose a route argument so tests can assert exact agreement.
"""

from __future__ import annotations

from fractions import Fraction

from . import incidence, ncpart, series
from .errors import RouteMismatchError, ValidationError
from .sequences import RationalSequence
from .series import PowerSeries, PuiseuxSeries

# ---------------------------------------------------------------------------
# moment <-> cumulant


def cumulants_to_moments(cum: RationalSequence, order: int | None = None,
                         route: str = "series") -> RationalSequence:
    """m_n = sum over pi in NC(n) of kappa_pi.

    route "series" solves M(z) = C(z M(z)); route "enumeration" convolves
    with the zeta family; "both" runs the two and insists they agree.
    """
    if order is None:
        order = cum.order
    if cum.order < order:
        raise ValidationError("cumulant sequence too short")

    def by_series() -> RationalSequence:
        c = PowerSeries.from_sequence_with_unit(cum, order)
        m = series.solve_A_given_B(c, 1, order)
        return RationalSequence(m.tail_sequence())

    def by_enum() -> RationalSequence:
        return incidence.conv(cum.prefix(order), incidence.zeta_family(order), order)

    return _route_pick(route, by_series, by_enum, "cumulants_to_moments")


def moments_to_cumulants(mom: RationalSequence, order: int | None = None,
                         route: str = "series") -> RationalSequence:
    """Inverse of cumulants_to_moments; kappa = m * moebius."""
    if order is None:
        order = mom.order
    if mom.order < order:
        raise ValidationError("moment sequence too short")

    def by_series() -> RationalSequence:
        m = PowerSeries.from_sequence_with_unit(mom, order)
        c = series.solve_B_given_A(m)
        return RationalSequence(c.tail_sequence())

    def by_moebius() -> RationalSequence:
        return incidence.conv(mom.prefix(order), incidence.moebius_family(order), order)

    return _route_pick(route, by_series, by_moebius, "moments_to_cumulants")


def _route_pick(route, primary, secondary, name) -> RationalSequence:
    if route == "series":
        return primary()
    if route in ("enumeration", "moebius"):
        return secondary()
    if route == "both":
        a, b = primary(), secondary()
        if a != b:
            raise RouteMismatchError(f"{name} routes disagree")
        return a
    raise ValidationError(f"unknown route {route!r}")


# ---------------------------------------------------------------------------
# free convolutions at sequence level


def free_add_convolve(c1: RationalSequence, c2: RationalSequence) -> RationalSequence:
    return c1.add(c2)


def free_add_power(cum: RationalSequence, t) -> RationalSequence:
    t = Fraction(t)
    if t <= 0:
        raise ValidationError("free additive power needs t > 0")
    return cum.scale(t)


def free_mult_convolve(c1: RationalSequence, c2: RationalSequence,
                       order: int | None = None) -> RationalSequence:
    """kappa_n(ab) = sum over NC(n) of kappa_pi(a) kappa_{Kr(pi)}(b)."""
    return incidence.conv(c1, c2, order)


def product_moments(cum_a: RationalSequence, mom_b: RationalSequence,
                    order: int | None = None) -> RationalSequence:
    """phi((ab)^n) = sum over NC(n) of kappa_pi(a) m_{Kr(pi)}(b)."""
    return incidence.conv(cum_a, mom_b, order)


def products_as_arguments(cum: RationalSequence, grouping) -> Fraction:
    """Joint cumulant of consecutive products, as a sum over partitions
    joining the grouping's interval partition up to the full block."""
    sizes = list(grouping)
    n = sum(sizes)
    if any(s < 1 for s in sizes) or n < 1:
        raise ValidationError(f"invalid grouping {grouping!r}")
    if cum.order < n:
        raise ValidationError("cumulant sequence too short for grouping")
    anchor = ncpart.interval_partition(sizes)
    full = ncpart.one_partition(n)
    total = Fraction(0)
    for p in ncpart.iter_nc(n):
        if ncpart.join(p, anchor) == full:
            total += incidence.extend(cum, p)
    return total


# ---------------------------------------------------------------------------
# cumulants of the k-th power of a k-divisible element


def kdiv_power_cumulants(alpha: RationalSequence, k: int, order: int,
                         route: str = "enumeration") -> RationalSequence:
    """Cumulants of x^k for a k-divisible x with determining sequence
    alpha_n = kappa_{kn}(x).

    Three equivalent routes:
    * "enumeration": kappa_n(x^k) = sum over NC((k-1)n) of the
      (k-1)-dilated alpha, i.e. a sum over (k-1)-divisible partitions;
    * "two-stage": the same with one zeta factor peeled off, summing a
      (k-2)-stage sequence over NC(n);
    * "zeta": alpha convolved with zeta (k-1) times.
    """
    if k < 1:
        raise ValidationError("k must be >= 1")
    if k == 1:
        return alpha.prefix(order)
    if alpha.order < order:
        raise ValidationError("determining sequence too short")

    def dilated_sum(seq: RationalSequence, j: int, n: int) -> Fraction:
        # sum over NC(jn) of the j-dilation of seq = sum over j-divisible
        # partitions of [jn] of seq_{|V|/j}; walks the cached type
        # histogram instead of the partitions themselves
        total = Fraction(0)
        for (sizes, _kr), cnt in incidence.kdivisible_pair_stats(j, n).items():
            term = Fraction(cnt)
            for s in sizes:
                term *= seq[s // j]
            total += term
        return total

    if route == "enumeration":
        return RationalSequence(
            [dilated_sum(alpha, k - 1, n) for n in range(1, order + 1)]
        )
    if route == "two-stage":
        if k == 2:
            beta = alpha.prefix(order)
        else:
            beta = RationalSequence(
                [dilated_sum(alpha, k - 2, m) for m in range(1, order + 1)]
            )
        return cumulants_to_moments(beta, order, route="enumeration")
    if route == "zeta":
        return incidence.zeta_power_conv(alpha.prefix(order), k - 1, order)
    raise ValidationError(f"unknown route {route!r}")


# ---------------------------------------------------------------------------
# S-transform


def s_transform(mom: RationalSequence, order: int | None = None):
    """S(z) = chi(z) (1+z)/z with chi the compositional inverse of the
    moment series psi(z) = sum m_n z^n.

    Returns a PowerSeries when m_1 != 0 and a PuiseuxSeries in z^(1/k)
    when the first nonzero moment sits at k >= 2 (which must then be
    positive, and its k-th root rational).
    """
    if order is None:
        order = mom.order
    if mom.order < order:
        raise ValidationError("moment sequence too short")
    k = next((n for n in range(1, order + 1) if mom[n] != 0), None)
    if k is None:
        raise ValidationError("S-transform needs a nonzero moment")
    psi = PowerSeries([Fraction(0)] + [mom[n] for n in range(1, order + 1)])
    if k == 1:
        chi = series.comp_inverse(psi)
        # chi/z * (1+z), an ordinary series of order N-1
        shifted = PowerSeries(chi.coeffs[1:])
        return series.mul(shifted, PowerSeries([1, 1] + [0] * (order - 2)), order - 1) \
            if order >= 2 else shifted
    if mom[k] < 0:
        raise ValidationError(
            f"first nonzero moment m_{k} = {mom[k]} must be positive for the principal branch"
        )
    chi = series.frac_inverse(psi, k)
    one_plus_z = PuiseuxSeries(k, 0, [1] + [0] * (k - 1) + [1])
    out = puiseux_prefactor_mul(chi, one_plus_z)
    return out.shift(-k)


def puiseux_prefactor_mul(a: PuiseuxSeries, poly: PuiseuxSeries) -> PuiseuxSeries:
    """Multiply by an exact Laurent polynomial without losing window."""
    ram = a.ram
    poly = poly.reindex(ram) if poly.ram != ram else poly
    lo = a.lo + poly.lo
    hi = a.hi + poly.lo
    out = [Fraction(0)] * (hi - lo + 1)
    for j, cp in enumerate(poly.coeffs):
        if cp == 0:
            continue
        for i, ca in enumerate(a.coeffs):
            e = a.lo + i + poly.lo + j
            if lo <= e <= hi:
                out[e - lo] += ca * cp
    return PuiseuxSeries(ram, lo, out)


def _as_puiseux(s) -> PuiseuxSeries:
    if isinstance(s, PuiseuxSeries):
        return s
    return PuiseuxSeries.from_power_series(s, 1)


def s_multiplicativity_check(mom_x: RationalSequence, mom_y: RationalSequence,
                             order: int, min_window: int = 4) -> bool:
    """S_{xy} = S_x S_y for free x, y, with the product moments taken
    from the partition-sum formula (so the two sides are computed along
    independent routes)."""
    if mom_y[1] == 0:
        raise ValidationError("the second factor needs a nonzero mean")
    cum_x = moments_to_cumulants(mom_x.prefix(order))
    mom_xy = product_moments(cum_x, mom_y.prefix(order), order)
    s_xy = _as_puiseux(s_transform(mom_xy, order))
    s_x = _as_puiseux(s_transform(mom_x, order))
    s_y = _as_puiseux(s_transform(mom_y, order))
    return series.puiseux_agree(s_xy, series.puiseux_mul(s_x, s_y), min_window)


def s_power_relation_check(mom: RationalSequence, k: int, order: int,
                           min_window: int = 4) -> bool:
    """S_{x^k}(z) = S_x(z)^k (z/(1+z))^(k-1) for a k-divisible x."""
    for n in range(1, order + 1):
        if n % k and mom[n] != 0:
            raise ValidationError(f"moment {n} nonzero, variable is not {k}-divisible")
    s_x = _as_puiseux(s_transform(mom, order))
    undil = RationalSequence([mom[k * n] for n in range(1, order // k + 1)])
    s_xk = _as_puiseux(s_transform(undil, undil.order))
    if k == 1:
        return series.puiseux_agree(s_x, s_xk, min_window)
    lhs = s_xk
    # (z/(1+z))^(k-1) = z^(k-1) * (1+z)^-(k-1), computed to a generous order
    aux_order = max(order, s_x.hi - k * (1 - k) + k) * 2
    recip = series.reciprocal(
        PowerSeries([1, 1] + [0] * (aux_order - 1)), aux_order
    )
    factor = series.power(recip, k - 1, aux_order)
    rhs = series.puiseux_mul(series.puiseux_pow(s_x, k),
                             PuiseuxSeries.from_power_series(factor, k).shift(k * (k - 1)))
    return series.puiseux_agree(lhs, rhs, min_window)


def rescale_to_monic(mom: RationalSequence, k: int) -> tuple:
    """Dilation (t, m') with m'_n = t^n m_n and m'_k = 1.

    Needs m_k to be a positive perfect k-th power in the rationals;
    raises IrrationalRootError otherwise.
    """
    if mom[k] <= 0:
        raise ValidationError("leading moment must be positive")
    t = 1 / series.rational_root(mom[k], k)
    return t, RationalSequence([t ** n * mom[n] for n in range(1, mom.order + 1)])


# ---------------------------------------------------------------------------
# Hankel positivity


def _det(rows) -> Fraction:
    # fraction-exact Gaussian elimination with partial support for zeros
    m = [list(r) for r in rows]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            factor = m[r][col] * inv
            if factor:
                for c in range(col, n):
                    m[r][c] -= factor * m[col][c]
    return det


def hankel_check(mom: RationalSequence, stieltjes: bool = False) -> bool:
    """Non-strict Hankel positivity of (1, m_1, m_2, ...).

    det(m_{i+j}) >= 0 for all sizes the sequence supports; with
    stieltjes also the shifted determinants det(m_{i+j+1}) >= 0, the
    certificate for support in [0, infinity).
    """
    full = [Fraction(1)] + list(mom)

    def moment(i: int) -> Fraction:
        return full[i]

    max_plain = (len(full) - 1) // 2
    for r in range(max_plain + 1):
        rows = [[moment(i + j) for j in range(r + 1)] for i in range(r + 1)]
        if _det(rows) < 0:
            return False
    if stieltjes:
        max_shift = (len(full) - 2) // 2
        for r in range(max_shift + 1):
            rows = [[moment(i + j + 1) for j in range(r + 1)] for i in range(r + 1)]
            if _det(rows) < 0:
                return False
    return True


# ---------------------------------------------------------------------------
# standard moment sequences


def point_mass_moments(c, order: int) -> RationalSequence:
    c = Fraction(c)
    return RationalSequence([c ** n for n in range(1, order + 1)])


def free_poisson_moments(order: int) -> RationalSequence:
    """Marchenko-Pastur with rate 1: m_n = Catalan(n)."""
    return RationalSequence([ncpart.catalan(n) for n in range(1, order + 1)])


def semicircle_moments(order: int) -> RationalSequence:
    """Standard semicircle: m_{2n} = Catalan(n), odd moments vanish."""
    vals = []
    for n in range(1, order + 1):
        vals.append(Fraction(ncpart.catalan(n // 2)) if n % 2 == 0 else Fraction(0))
    return RationalSequence(vals)


def atomic_moments(atoms, order: int) -> RationalSequence:
    """Moments of a finitely atomic measure given as (location, weight)
    pairs; weights must be positive and sum to 1."""
    pairs = [(Fraction(x), Fraction(w)) for x, w in atoms]
    if any(w <= 0 for _, w in pairs) or sum(w for _, w in pairs) != 1:
        raise ValidationError("weights must be positive and sum to 1")
    return RationalSequence(
        [sum(w * x ** n for x, w in pairs) for n in range(1, order + 1)]
    )


# ---------------------------------------------------------------------------
# word moments of free variables


class FreeVariable:
    """A random variable known through its moment sequence.

    A declared period p asserts x^p = 1, makes moments depend only on
    the exponent mod p, and lets negative exponents stand for inverse
    powers.  Variables without a period reject negative exponents.
    """

    __slots__ = ("label", "moments", "period")

    def __init__(self, label: str, moments: RationalSequence, period: int | None = None):
        self.label = label
        self.moments = moments
        if period is not None:
            if period < 1:
                raise ValidationError("period must be >= 1")
            if moments.order < period - 1 and period > 1:
                raise ValidationError("periodic variable needs moments up to period-1")
            for j in range(1, moments.order + 1):
                r = j % period
                ref = Fraction(1) if r == 0 else moments[r]
                if moments[j] != ref:
                    raise ValidationError(
                        f"moments of {label!r} are not {period}-periodic at index {j}"
                    )
        self.period = period

    def moment(self, e: int) -> Fraction:
        if self.period is not None:
            e %= self.period
            if e == 0:
                return Fraction(1)
        if e < 1:
            raise ValidationError(
                f"negative power of {self.label!r} needs a declared period"
            )
        if e > self.moments.order:
            raise ValidationError(f"moment {e} of {self.label!r} not available")
        return self.moments[e]


class WordMomentEvaluator:
    """Evaluates phi(words) in free variables by the centering expansion.

    Each letter a splits as (a - phi(a)) + phi(a); a fully centered
    alternating product has vanishing trace, so expanding over the
    letters with nonzero mean expresses phi(word) through strictly
    shorter words.  Results are memoized on the reduced word.
    """

    def __init__(self, variables):
        self.vars = {v.label: v for v in variables}
        if len(self.vars) != len(list(variables)):
            raise ValidationError("duplicate variable labels")
        self._memo: dict = {}

    def reduce(self, word) -> tuple:
        out: list = []
        for lab, e in word:
            if lab not in self.vars:
                raise ValidationError(f"unknown variable {lab!r}")
            v = self.vars[lab]
            if v.period is not None:
                e %= v.period
            elif e < 0:
                raise ValidationError(
                    f"negative power of {lab!r} needs a declared period"
                )
            if e == 0:
                continue
            out.append((lab, e))
            while len(out) >= 2 and out[-1][0] == out[-2][0]:
                lab2, e2 = out.pop()
                lab1, e1 = out.pop()
                e12 = e1 + e2
                v = self.vars[lab1]
                if v.period is not None:
                    e12 %= v.period
                if e12 != 0:
                    out.append((lab1, e12))
        return tuple(out)

    def phi(self, word) -> Fraction:
        return self._phi(self.reduce(word))

    def _phi(self, word: tuple) -> Fraction:
        if not word:
            return Fraction(1)
        if len(word) == 1:
            lab, e = word[0]
            return self.vars[lab].moment(e)
        hit = self._memo.get(word)
        if hit is not None:
            return hit
        means = [self.vars[lab].moment(e) for lab, e in word]
        live = [i for i, m in enumerate(means) if m != 0]
        total = Fraction(0)
        # phi(prod of centered letters) = 0, expanded over subsets of the
        # letters with nonzero mean (centered letters equal themselves).
        for mask in range(1, 1 << len(live)):
            coeff = Fraction(1)
            drop = []
            for bit, idx in enumerate(live):
                if mask >> bit & 1:
                    coeff *= means[idx]
                    drop.append(idx)
            sub = self.reduce(
                tuple(l for i, l in enumerate(word) if i not in drop)
            )
            sign = -1 if len(drop) % 2 == 0 else 1
            total += sign * coeff * self._phi(sub)
        self._memo[word] = total
        return total


def free_word_moment(variables, word) -> Fraction:
    """phi of a word in free variables, e.g. [("x", 1), ("y", 2)]."""
    return WordMomentEvaluator(variables).phi(word)


def sum_moments_by_words(var_a: FreeVariable, var_b: FreeVariable, order: int) -> RationalSequence:
    """Moments of a+b for free a, b evaluated letter by letter; oracle
    for cumulant additivity."""
    ev = WordMomentEvaluator([var_a, var_b])
    out = []
    for n in range(1, order + 1):
        total = Fraction(0)
        for mask in range(1 << n):
            word = tuple(
                (var_a.label, 1) if mask >> i & 1 else (var_b.label, 1)
                for i in range(n)
            )
            total += ev.phi(word)
        out.append(total)
    return RationalSequence(out)


def freeness_moment_check(variables, a_label: str, h_word, max_letters: int) -> bool:
    """True iff all alternating centered moments of (h, a) vanish up to
    words of max_letters letters, with h given as a word in the other
    variables.  This is the moment-level content of 'h and a are free'."""
    ev = WordMomentEvaluator(variables)
    h_word = tuple(h_word)
    mean_h = ev.phi(h_word)
    mean_a = ev.phi(((a_label, 1),))

    def phi_pattern(pattern, centered_mask) -> Fraction:
        # pattern entries: "h" or "a"; centered letters expand as
        # (letter - mean); expand the product by linearity
        total = Fraction(0)
        idx = [i for i in range(len(pattern)) if centered_mask >> i & 1]
        for mask in range(1 << len(idx)):
            coeff = Fraction(1)
            skip = set()
            for bit, i in enumerate(idx):
                if mask >> bit & 1:
                    coeff *= -(mean_h if pattern[i] == "h" else mean_a)
                    skip.add(i)
            word: list = []
            for i, sym in enumerate(pattern):
                if i in skip:
                    continue
                word.extend(h_word if sym == "h" else [(a_label, 1)])
            total += coeff * ev.phi(tuple(word))
        return total

    for m in range(2, max_letters + 1):
        for start in ("h", "a"):
            pattern = tuple(("h", "a")[(i + (start == "a")) % 2] for i in range(m))
            if phi_pattern(pattern, (1 << m) - 1) != 0:
                return False
    return True
