"""Multiplicative families on NC(n) and the combinatorial convolution.

A sequence (a_n) extends multiplicatively to partitions by
a_pi = prod over blocks V of a_{|V|}.  The convolution of two families
is (f*g)_n = sum over pi in NC(n) of f_pi g_{Kr(pi)}; the all-ones zeta
family and its inverse, the Moebius family, are the distinguished
elements.

The convolution never walks NC(n) twice: a per-n histogram keyed by the
pair (block sizes of pi, block sizes of Kr(pi)) is built once by
enumeration and cached, collapsing the Catalan-sized sum to a sum over
partition-type pairs with integer multiplicities.
"""

from __future__ import annotations

import threading
from fractions import Fraction

from . import ncpart
from .errors import RouteMismatchError, ValidationError
from .ncpart import kreweras
from .sequences import RationalSequence

_stats_lock = threading.Lock()
_pair_stats: dict = {}


def _sizes(blocks) -> tuple:
    return tuple(sorted((len(b) for b in blocks), reverse=True))


def kdivisible_pair_stats(k: int, n: int, max_n: int | None = None) -> dict:
    """Histogram {(sizes(pi), sizes(Kr(pi))): count} over the k-divisible
    non-crossing partitions of [kn] (all of NC(n) when k = 1).

    Built once by enumeration and cached; every convolution-type sum in
    this package reduces to a walk over these partition-type pairs with
    integer multiplicities.
    """
    hit = _pair_stats.get((k, n))
    if hit is not None:
        return hit
    with _stats_lock:
        hit = _pair_stats.get((k, n))
        if hit is not None:
            return hit
        hist: dict = {}
        for blocks in ncpart.iter_kdivisible_blocks(k, n, max_n):
            key = (_sizes(blocks), _sizes(kreweras(ncpart._wrap(k * n, blocks)).blocks))
            hist[key] = hist.get(key, 0) + 1
        _pair_stats[(k, n)] = hist
        return hist


def _conv_stats(n: int, max_n: int | None = None) -> dict:
    return kdivisible_pair_stats(1, n, max_n)


def extend(a: RationalSequence, p: ncpart.Partition) -> Fraction:
    """Multiplicative extension a_pi = prod over blocks of a_{|V|}."""
    out = Fraction(1)
    for b in p.blocks:
        if len(b) > a.order:
            raise ValidationError(
                f"block of size {len(b)} exceeds sequence order {a.order}"
            )
        out *= a[len(b)]
    return out


def _extend_sizes(a: RationalSequence, sizes) -> Fraction:
    out = Fraction(1)
    for s in sizes:
        out *= a[s]
    return out


def zeta_family(order: int) -> RationalSequence:
    return RationalSequence.constant(1, order)


def delta_family(order: int) -> RationalSequence:
    """Unit of the convolution: (1, 0, 0, ...)."""
    return RationalSequence.unit_vector(1, order)


def moebius_family(order: int) -> RationalSequence:
    """Inverse of zeta under the convolution: ((-1)^(n-1) Catalan(n-1))_n."""
    return RationalSequence(
        [Fraction((-1) ** (n - 1) * ncpart.catalan(n - 1)) for n in range(1, order + 1)]
    )


def conv(f: RationalSequence, g: RationalSequence, order: int | None = None,
         max_n: int | None = None) -> RationalSequence:
    """(f*g)_n = sum over pi in NC(n) of f_pi g_{Kr(pi)}, n = 1..order."""
    if order is None:
        order = min(f.order, g.order)
    if f.order < order or g.order < order:
        raise ValidationError("operand order too small for requested convolution order")
    out = []
    for n in range(1, order + 1):
        total = Fraction(0)
        for (spi, skr), cnt in _conv_stats(n, max_n).items():
            total += cnt * _extend_sizes(f, spi) * _extend_sizes(g, skr)
        out.append(total)
    return RationalSequence(out)


def dilate(a: RationalSequence, k: int) -> RationalSequence:
    """k-dilation: value a_n moves to position kn, zeros elsewhere."""
    if k < 1:
        raise ValidationError("dilation factor must be >= 1")
    vals = [Fraction(0)] * (k * a.order)
    for n in range(1, a.order + 1):
        vals[k * n - 1] = a[n]
    return RationalSequence(vals)


def undilate(a: RationalSequence, k: int) -> RationalSequence:
    """Inverse of dilate; rejects sequences with mass off the k-lattice."""
    if k < 1:
        raise ValidationError("dilation factor must be >= 1")
    for m in range(1, a.order + 1):
        if m % k and a[m] != 0:
            raise ValidationError(f"entry {m} is nonzero, sequence is not {k}-dilated")
    if a.order < k:
        raise ValidationError("sequence too short to undilate")
    return RationalSequence([a[k * n] for n in range(1, a.order // k + 1)])


def zeta_power_conv(g: RationalSequence, k: int, order: int,
                    route: str = "both", max_n: int | None = None) -> RationalSequence:
    """g * zeta * ... * zeta (k convolutions with the all-ones family).

    Two routes are available and must agree: "iterated" convolves k
    times at order n, "dilated" convolves the k-dilated sequence with
    zeta once at order kn and undilates.  The default computes both and
    raises RouteMismatchError on disagreement.
    """
    if k < 0:
        raise ValidationError("zeta power must be >= 0")
    if g.order < order:
        raise ValidationError("operand order too small")
    if k == 0:
        return g.prefix(order)

    def iterated() -> RationalSequence:
        z = zeta_family(order)
        out = g.prefix(order)
        for _ in range(k):
            out = conv(out, z, order, max_n)
        return out

    def dilated() -> RationalSequence:
        lifted = dilate(g.prefix(order), k)
        once = conv(lifted, zeta_family(k * order), k * order, max_n)
        return undilate(once, k)

    if route == "iterated":
        return iterated()
    if route == "dilated":
        return dilated()
    if route == "both":
        a, b = iterated(), dilated()
        if a != b:
            raise RouteMismatchError("zeta_power_conv routes disagree")
        return a
    raise ValidationError(f"unknown route {route!r}")


def multichain_count_enumerated(length: int, n: int, max_n: int | None = None) -> int:
    """Count weakly increasing `length`-tuples in NC(n) straight from the
    order relation (dynamic programming over the poset); test oracle for
    the closed form and the zeta-power identities."""
    if length < 1:
        raise ValidationError("multichain length must be >= 1")
    elems = ncpart.enumerate_nc(n, max_n)
    below = [
        [i for i, p in enumerate(elems) if ncpart.leq(p, q)] for q in elems
    ]
    ways = [1] * len(elems)
    for _ in range(length - 1):
        ways = [sum(ways[i] for i in below[j]) for j in range(len(elems))]
    return sum(ways)


def catalan_by_recurrence(n: int) -> int:
    """Independent Catalan oracle: C_0 = 1, C_n = sum C_i C_{n-1-i}."""
    cs = [1]
    for m in range(1, n + 1):
        cs.append(sum(cs[i] * cs[m - 1 - i] for i in range(m)))
    return cs[n]

