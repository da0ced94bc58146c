"""Truncated formal power series and Puiseux series over the rationals.

A PowerSeries of order N carries exact coefficients c_0..c_N of
sum c_i z^i; everything beyond z^N is unknown, and operations track how
far their result stays valid.  A PuiseuxSeries is a truncated Laurent
series in w = z^(1/ram) whose exponents may be negative; it carries the
window [lo, hi] of w-exponents on which its coefficients are exact.

Truncation order is always explicit.  No operation guesses precision
and no floating point appears anywhere.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import IrrationalRootError, ValidationError


def _coerce(values) -> tuple:
    return tuple(Fraction(v) for v in values)


class PowerSeries:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = _coerce(coeffs)
        if not c:
            raise ValidationError("a series needs at least the constant term")
        self.coeffs = c

    @classmethod
    def zero(cls, order: int) -> "PowerSeries":
        return cls([0] * (order + 1))

    @classmethod
    def one(cls, order: int) -> "PowerSeries":
        return cls([1] + [0] * order)

    @classmethod
    def identity(cls, order: int) -> "PowerSeries":
        """The series z."""
        c = [Fraction(0)] * (order + 1)
        if order >= 1:
            c[1] = Fraction(1)
        return cls(c)

    @classmethod
    def from_sequence_with_unit(cls, seq, order: int) -> "PowerSeries":
        """1 + a_1 z + ... + a_order z^order from a 1-based sequence."""
        return cls([Fraction(1)] + [Fraction(seq[n]) for n in range(1, order + 1)])

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i <= self.order else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, PowerSeries):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"PowerSeries({[str(c) for c in self.coeffs]})"

    def truncate(self, order: int) -> "PowerSeries":
        if order > self.order:
            raise ValidationError("cannot extend a truncated series")
        return PowerSeries(self.coeffs[: order + 1])

    def tail_sequence(self):
        """Coefficients c_1..c_N as a 1-based list (drops the constant)."""
        return list(self.coeffs[1:])


def add(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    n = min(a.order, b.order)
    return PowerSeries([a[i] + b[i] for i in range(n + 1)])


def sub(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    n = min(a.order, b.order)
    return PowerSeries([a[i] - b[i] for i in range(n + 1)])


def scale(a: PowerSeries, t) -> PowerSeries:
    t = Fraction(t)
    return PowerSeries([t * c for c in a.coeffs])


def mul(a: PowerSeries, b: PowerSeries, order: int | None = None) -> PowerSeries:
    if order is None:
        order = min(a.order, b.order)
    out = [Fraction(0)] * (order + 1)
    for i, ca in enumerate(a.coeffs):
        if i > order:
            break
        if ca == 0:
            continue
        top = min(order - i, b.order)
        for j in range(top + 1):
            out[i + j] += ca * b.coeffs[j]
    return PowerSeries(out)


def reciprocal(a: PowerSeries, order: int | None = None) -> PowerSeries:
    if a[0] == 0:
        raise ValidationError("reciprocal needs a nonzero constant term")
    if order is None:
        order = a.order
    inv0 = 1 / a[0]
    out = [inv0] + [Fraction(0)] * order
    for n in range(1, order + 1):
        acc = Fraction(0)
        for i in range(1, min(n, a.order) + 1):
            acc += a[i] * out[n - i]
        out[n] = -inv0 * acc
    return PowerSeries(out)


def compose(a: PowerSeries, b: PowerSeries, order: int | None = None) -> PowerSeries:
    """a(b(z)); b must have zero constant term."""
    if b[0] != 0:
        raise ValidationError("composition needs the inner series to vanish at 0")
    if order is None:
        order = min(a.order, b.order)
    # Horner from the top coefficient down.
    out = PowerSeries([a[min(a.order, order)]] + [0] * order)
    for i in range(min(a.order, order) - 1, -1, -1):
        out = mul(out, b, order)
        out = PowerSeries([out[0] + a[i]] + list(out.coeffs[1:]))
    return out


def power(a: PowerSeries, e: int, order: int | None = None) -> PowerSeries:
    if e < 0:
        raise ValidationError("negative series powers are not defined here")
    if order is None:
        order = a.order
    out = PowerSeries.one(order)
    for _ in range(e):
        out = mul(out, a, order)
    return out


def comp_inverse(p: PowerSeries) -> PowerSeries:
    """Compositional inverse: q with p(q(z)) = z + O(z^(N+1))."""
    if p[0] != 0 or p[1] == 0:
        raise ValidationError("compositional inverse needs c_0 = 0 and c_1 != 0")
    order = p.order
    q = [Fraction(0), 1 / p[1]] + [Fraction(0)] * (order - 1)
    for n in range(2, order + 1):
        cur = compose(p, PowerSeries(q[: n + 1]), n)
        q[n] = -cur[n] / p[1]
    return PowerSeries(q)


def nth_root_int(x: int, k: int) -> int | None:
    """Exact integer k-th root of x >= 0, or None if there is none."""
    if x < 0:
        return None
    if x in (0, 1) or k == 1:
        return x
    r = 1 << (-(-x.bit_length() // k))  # upper bound for the root
    while True:
        nxt = ((k - 1) * r + x // r ** (k - 1)) // k
        if nxt >= r:
            break
        r = nxt
    return r if r ** k == x else None


def rational_root(x: Fraction, k: int) -> Fraction:
    """Positive rational k-th root of x > 0, or IrrationalRootError."""
    x = Fraction(x)
    if x <= 0:
        raise ValidationError("rational_root needs a positive argument")
    p = nth_root_int(x.numerator, k)
    q = nth_root_int(x.denominator, k)
    if p is None or q is None:
        raise IrrationalRootError(f"{x} has no rational {k}-th root")
    return Fraction(p, q)


class PuiseuxSeries:
    """Truncated Laurent series in w = z^(1/ram), exact on w^lo..w^hi."""

    __slots__ = ("ram", "lo", "coeffs")

    def __init__(self, ram: int, lo: int, coeffs):
        if ram < 1:
            raise ValidationError("ramification must be >= 1")
        self.ram = ram
        self.lo = lo
        self.coeffs = _coerce(coeffs)
        if not self.coeffs:
            raise ValidationError("empty coefficient window")

    @property
    def hi(self) -> int:
        return self.lo + len(self.coeffs) - 1

    def coeff(self, e: int) -> Fraction:
        """Coefficient of w^e; e must lie in the valid window."""
        if not self.lo <= e <= self.hi:
            raise ValidationError(f"w-exponent {e} outside window {self.lo}..{self.hi}")
        return self.coeffs[e - self.lo]

    def __repr__(self):
        return f"PuiseuxSeries(ram={self.ram}, lo={self.lo}, {[str(c) for c in self.coeffs]})"

    def reindex(self, ram: int) -> "PuiseuxSeries":
        """Re-express with a coarser ramification (ram must be a multiple)."""
        if ram % self.ram:
            raise ValidationError("new ramification must be a multiple of the old")
        f = ram // self.ram
        if f == 1:
            return self
        coeffs = [Fraction(0)] * ((len(self.coeffs) - 1) * f + 1)
        for i, c in enumerate(self.coeffs):
            coeffs[i * f] = c
        return PuiseuxSeries(ram, self.lo * f, coeffs)

    def shift(self, e: int) -> "PuiseuxSeries":
        """Multiply by w^e."""
        return PuiseuxSeries(self.ram, self.lo + e, self.coeffs)

    def scale(self, t) -> "PuiseuxSeries":
        t = Fraction(t)
        return PuiseuxSeries(self.ram, self.lo, [t * c for c in self.coeffs])

    def truncate_hi(self, hi: int) -> "PuiseuxSeries":
        if hi < self.lo:
            raise ValidationError("truncation would empty the window")
        return PuiseuxSeries(self.ram, self.lo, self.coeffs[: hi - self.lo + 1])

    def strip_leading_zeros(self) -> "PuiseuxSeries":
        i = 0
        while i < len(self.coeffs) - 1 and self.coeffs[i] == 0:
            i += 1
        return PuiseuxSeries(self.ram, self.lo + i, self.coeffs[i:])

    @classmethod
    def from_power_series(cls, p: PowerSeries, ram: int = 1) -> "PuiseuxSeries":
        coeffs = [Fraction(0)] * (p.order * ram + 1)
        for i, c in enumerate(p.coeffs):
            coeffs[i * ram] = c
        # z^(order+1) is the first unknown, so w-exponents through
        # ram*(order+1)-1 are exact.
        pad = ram - 1
        return cls(ram, 0, coeffs + [Fraction(0)] * pad)


def puiseux_mul(a: PuiseuxSeries, b: PuiseuxSeries) -> PuiseuxSeries:
    ram = _lcm(a.ram, b.ram)
    a, b = a.reindex(ram), b.reindex(ram)
    lo = a.lo + b.lo
    hi = min(a.hi + b.lo, b.hi + a.lo)
    out = [Fraction(0)] * (hi - lo + 1)
    for i, ca in enumerate(a.coeffs):
        if ca == 0:
            continue
        ea = a.lo + i
        for j, cb in enumerate(b.coeffs):
            e = ea + b.lo + j
            if e > hi:
                break
            if cb != 0:
                out[e - lo] += ca * cb
    return PuiseuxSeries(ram, lo, out)


def puiseux_pow(a: PuiseuxSeries, e: int) -> PuiseuxSeries:
    if e < 1:
        raise ValidationError("puiseux_pow needs e >= 1")
    out = a
    for _ in range(e - 1):
        out = puiseux_mul(out, a)
    return out


def puiseux_agree(a: PuiseuxSeries, b: PuiseuxSeries, min_window: int = 1) -> bool:
    """Exact coefficient equality over the common validity window.

    The window must contain at least min_window exponents, otherwise the
    comparison is considered vacuous and fails.
    """
    ram = _lcm(a.ram, b.ram)
    a, b = a.reindex(ram), b.reindex(ram)
    lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
    if hi - lo + 1 < min_window:
        return False
    return all(a.coeff(e) == b.coeff(e) for e in range(lo, hi + 1))


def _lcm(a: int, b: int) -> int:
    import math

    return a * b // math.gcd(a, b)


def frac_inverse(p: PowerSeries, k: int, leading_root: Fraction | None = None) -> PuiseuxSeries:
    """Principal inverse of p(z) = c_k z^k + ... under composition.

    Returns chi(z) = sum b_i z^(i/k) with b_1 = c_k^(-1/k) > 0 and
    p(chi(z)) = z to truncation.  The other k-1 formal branches differ
    by a k-th root of unity in b_1 and are not produced; passing an
    explicit leading_root (any rational with c_k * root^k = 1) selects a
    non-principal rational branch, which only exists for even k.
    """
    if k < 1:
        raise ValidationError("k must be >= 1")
    if any(p[i] != 0 for i in range(min(k, p.order + 1))):
        raise ValidationError(f"coefficients below z^{k} must vanish")
    if p.order < k:
        raise ValidationError("series order too small")
    ck = p[k]
    if ck <= 0:
        raise ValidationError(f"leading coefficient c_{k} = {ck} must be positive")
    if leading_root is None:
        b1 = rational_root(1 / ck, k)
    else:
        b1 = Fraction(leading_root)
        if ck * b1 ** k != 1:
            raise ValidationError("leading_root does not satisfy c_k * r^k = 1")
    # Solve p(V(w)) = w^k for V(w) = sum b_i w^i, coefficient by
    # coefficient: matching w^(k+j-1) determines b_j.
    top = p.order - k + 1  # highest solvable index
    b = [Fraction(0), b1] + [Fraction(0)] * (top - 1)
    dk = k * ck * b1 ** (k - 1)
    for j in range(2, top + 1):
        m = k + j - 1
        v = PowerSeries(b[: m + 1])
        resid = Fraction(0)
        vpow = PowerSeries.one(m)
        for n in range(1, min(p.order, m) + 1):
            vpow = mul(vpow, v, m)
            if p[n] != 0:
                resid += p[n] * vpow[m]
        if m == k:
            resid -= 1
        b[j] = -resid / dk
    return PuiseuxSeries(k, 1, b[1:])


def solve_A_given_B(b: PowerSeries, k: int, order: int) -> PowerSeries:
    """Unique A with constant term 1 and A(z) = B(z A(z)^k) to order."""
    if b[0] != 1:
        raise ValidationError("B must have constant term 1")
    if k < 0:
        raise ValidationError("k must be >= 0")
    a = PowerSeries.one(order)
    for _ in range(order):
        inner = mul(PowerSeries.identity(order), power(a, k, order), order)
        a = compose(b, inner, order)
    if a[0] != 1:
        raise ValidationError("functional equation solver diverged")
    return a


def solve_B_given_A(a: PowerSeries, order: int | None = None) -> PowerSeries:
    """Unique B with constant term 1 and A(z) = B(z A(z)) to order.

    This peels one zeta-convolution off at the series level: if A is
    the generating series of f = g * zeta then B generates g.
    """
    if a[0] != 1:
        raise ValidationError("A must have constant term 1")
    if order is None:
        order = a.order
    # a_n = sum_j b_j [z^(n-j)] A^j, triangular in b.
    apow = [PowerSeries.one(order)]
    for j in range(1, order + 1):
        apow.append(mul(apow[-1], a, order))
    b = [Fraction(1)] + [Fraction(0)] * order
    for n in range(1, order + 1):
        acc = a[n]
        for j in range(1, n):
            acc -= b[j] * apow[j][n - j]
        b[n] = acc
    return PowerSeries(b)


def check_pair(a: PowerSeries, b: PowerSeries, mode: str, k: int,
               order: int | None = None) -> bool:
    """Verify one leg of the three-way functional-equation equivalence.

    Given series A and B with constant term 1, let M be built from the
    other two identities and test the selected one:

    * mode "i":   M solves M = A(z M^k); test M = B(z M).
    * mode "ii":  M solves M = B(z M);   test M = A(z M^k).
    * mode "iii": test B = A(z B^(k-1)) directly.
    """
    if a[0] != 1 or b[0] != 1:
        raise ValidationError("check_pair needs constant term 1 on both series")
    if order is None:
        order = min(a.order, b.order)
    ident = PowerSeries.identity(order)
    if mode == "iii":
        rhs = compose(a, mul(ident, power(b, k - 1, order), order), order)
        return b.truncate(order) == rhs
    if mode == "i":
        m = _solve_inner(a, k, order)
        rhs = compose(b, mul(ident, m, order), order)
        return m == rhs
    if mode == "ii":
        m = _solve_inner(b, 1, order)
        rhs = compose(a, mul(ident, power(m, k, order), order), order)
        return m == rhs
    raise ValidationError(f"unknown mode {mode!r}")


def _solve_inner(base: PowerSeries, k: int, order: int) -> PowerSeries:
    return solve_A_given_B(base.truncate(min(base.order, order)), k, order)


def geometric(order: int) -> PowerSeries:
    """1/(1-z) truncated."""
    return PowerSeries([1] * (order + 1))
