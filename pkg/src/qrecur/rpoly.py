"""Construction of the interpolation polynomials attached to compositions.

For a composition I of size s the polynomial r_I has degree 2s-1 and is
pinned down by three kinds of conditions:

* prescribed zeros at the negative integers -1, ..., -s except at
  -I_last;
* a constancy condition on the half-integer window S(s) = {1/2-s, ...,
  -1/2, 1/2}: r_I plus a fixed lower-order combination of polynomials of
  proper suffixes (weighted by subdivision sums of proper prefixes) must
  take one single, a-priori unknown value K on all of S(s);
* a multiplicative pin for the constant term, r_(J,k)(0) =
  -r_J(k) * r_(k)(0), which fixes K.

Because Lagrange interpolation is linear in the prescribed values, the
polynomial is affine in K; the constant-term pin then determines K by a
single division.  The same mechanism builds, at marginal cost, the sums
of r_I over all compositions of a given size with a fixed final entry
(all summands share one zero set, one window and one linear pin), which
is what makes exact coefficient-layer checks feasible far beyond the
range where enumerating individual compositions is practical.

All data are exact rationals; every identity checked here is an
equality, never an approximation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .compositions import (
    Composition,
    enumerate_compositions,
    prefix_splits,
    split_last,
    subdivisions,
)
from .exact import (
    HALF,
    ONE,
    UniPoly,
    double_factorial,
    lagrange_interpolate,
    pochhammer,
    poly_evaluate,
)
from .report import CheckReport


class RPolyError(ValueError):
    """Raised when the interpolation data fail to close up."""


@dataclass(frozen=True)
class HalfIntegerSet:
    """The k+1 half-integers {1/2-k, ..., -1/2, 1/2}."""

    k: int

    def __post_init__(self) -> None:
        if self.k < 0:
            raise ValueError("window index must be >= 0")

    @property
    def points(self) -> list[Fraction]:
        return [HALF - i for i in range(self.k, -1, -1)]


@dataclass(frozen=True)
class RPolynomial:
    """A built polynomial with its cached derived values."""

    index: Composition
    poly: UniPoly
    value_at_half: Fraction
    script_R: Fraction


def base_constant_term(k: int) -> Fraction:
    """Constant term of the single-entry polynomial, (-1)^(k-1) (2k-3)!!/k!."""
    return Fraction((-1) ** (k - 1)) * double_factorial(2 * k - 3) / math.factorial(k)


def base_window_value(k: int) -> Fraction:
    """Common value of the single-entry polynomial on its window,
    (-2)^-(k-1) (1/2)_(k-1) / (k-1)!."""
    return (
        Fraction(1, (-2) ** (k - 1))
        * pochhammer(HALF, k - 1)
        / math.factorial(k - 1)
    )


def sigma_window_value(k: int, j: int) -> Fraction:
    """Predicted window value of the average with leading entry k, size j."""
    return (
        Fraction(1, (-2) ** (j - 1))
        * pochhammer(HALF, k - 1)
        * pochhammer(HALF + j, j - k)
        / (math.factorial(k - 1) * math.factorial(j - k))
    )


def standard_interp(M: int, N: int) -> UniPoly:
    """Degree-(2N-1) polynomial equal to 1 on {1/2-i, i=0..N} and 0 at
    -M-1, ..., -M-(N-1)."""
    if not (N - 1 >= M >= 0):
        raise ValueError(f"require N-1 >= M >= 0, got M={M}, N={N}")
    nodes = [(HALF - i, ONE) for i in range(N + 1)]
    nodes += [(Fraction(-M - i), Fraction(0)) for i in range(1, N)]
    return lagrange_interpolate(nodes)


def _pinned_interpolation(
    zero_points: list[Fraction],
    window: list[Fraction],
    lower_on_window: list[Fraction],
    pinned_constant: Fraction,
    subject: str,
) -> tuple[UniPoly, Fraction]:
    """Solve the affine interpolation problem described in the module
    docstring and return (polynomial, window constant K)."""
    zero_nodes = [(x, Fraction(0)) for x in zero_points]
    p0 = lagrange_interpolate(
        zero_nodes + [(x, -v) for x, v in zip(window, lower_on_window)]
    )
    p1 = lagrange_interpolate(zero_nodes + [(x, ONE) for x in window])
    p1_at_zero = poly_evaluate(p1, 0)
    if p1_at_zero == 0:
        raise RPolyError(f"inconsistent interpolation data for {subject}")
    K = (pinned_constant - poly_evaluate(p0, 0)) / p1_at_zero
    return p0 + p1.scale(K), K


class RPolyFamily:
    """Memoized builder for the polynomial family and its derived sums.

    A single instance owns all caches; independent instances never share
    state, so rebuilding from a cold store is just a fresh instance.
    Reads and idempotent inserts are the only cache operations, which
    keeps concurrent use safe; single-threaded use is the reference
    mode.
    """

    def __init__(self) -> None:
        self._polys: dict[Composition, RPolynomial] = {}
        self._sum_by_last: dict[tuple[int, int], UniPoly] = {}
        self._sum_total: dict[int, UniPoly] = {}
        self._subdiv_total: dict[int, Fraction] = {}

    # -- single compositions -------------------------------------------------

    def build_base(self, k: int) -> RPolynomial:
        """The unique single-entry polynomial of degree 2k-1 (degree 0
        for k=1): zeros at -1..-(k-1) and one common value on the
        window of k+1 half-integers."""
        if k < 1:
            raise ValueError(f"entry must be >= 1, got {k}")
        comp = Composition.of(k)
        cached = self._polys.get(comp)
        if cached is not None:
            return cached
        value = base_window_value(k)
        nodes = [(Fraction(-i), Fraction(0)) for i in range(1, k)]
        nodes += [(x, value) for x in HalfIntegerSet(k).points]
        poly = lagrange_interpolate(nodes)
        expected_degree = 0 if k == 1 else 2 * k - 1
        if poly.degree != expected_degree:
            raise RPolyError(f"inconsistent interpolation data for {comp}")
        if poly_evaluate(poly, 0) != base_constant_term(k):
            raise RPolyError(f"constant-term identity fails for {comp}")
        built = RPolynomial(comp, poly, value, value)
        self._polys[comp] = built
        return built

    def build_r(self, comp: Composition) -> RPolynomial:
        """Build (memoized) the polynomial for an arbitrary composition."""
        cached = self._polys.get(comp)
        if cached is not None:
            return cached
        if comp.length == 1:
            return self.build_base(comp.entries[0])

        s = comp.size
        window = HalfIntegerSet(s).points
        lower = UniPoly.zero()
        for prefix, suffix in prefix_splits(comp):
            lower = lower + self.build_r(suffix).poly.scale(self.script_R(prefix))
        head, k = split_last(comp)
        assert head is not None
        pinned = -poly_evaluate(self.build_r(head).poly, k) * base_constant_term(k)
        zeros = [Fraction(-i) for i in range(1, s + 1) if i != comp.last]
        poly, _K = _pinned_interpolation(
            zeros, window, [poly_evaluate(lower, x) for x in window], pinned, str(comp)
        )
        if poly.degree != 2 * s - 1:
            raise RPolyError(f"inconsistent interpolation data for {comp}")
        self._verify_build(comp, poly, lower, pinned, zeros, window)

        value_at_half = poly_evaluate(poly, HALF)
        script_r = value_at_half
        for prefix, suffix in prefix_splits(comp):
            script_r += poly_evaluate(self.build_r(prefix).poly, HALF) * self.script_R(
                suffix
            )
        built = RPolynomial(comp, poly, value_at_half, script_r)
        self._polys[comp] = built
        return built

    def _verify_build(
        self,
        comp: Composition,
        poly: UniPoly,
        lower: UniPoly,
        pinned: Fraction,
        zeros: list[Fraction],
        window: list[Fraction],
    ) -> None:
        # Re-check the defining conditions on the finished polynomial.
        if any(poly_evaluate(poly, x) != 0 for x in zeros):
            raise RPolyError(f"zero conditions fail for {comp}")
        if poly_evaluate(poly, 0) != pinned:
            raise RPolyError(f"constant-term pin fails for {comp}")
        combined = {poly_evaluate(poly + lower, x) for x in window}
        if len(combined) != 1:
            raise RPolyError(f"window constancy fails for {comp}")

    def poly(self, comp: Composition) -> UniPoly:
        return self.build_r(comp).poly

    def value(self, comp: Composition, x0) -> Fraction:
        return poly_evaluate(self.build_r(comp).poly, x0)

    def script_R(self, comp: Composition) -> Fraction:
        """Sum over all subdivisions of the products of the blocks'
        values at 1/2."""
        return self.build_r(comp).script_R

    def script_R_bruteforce(self, comp: Composition) -> Fraction:
        """Same value by direct enumeration of subdivisions (test oracle)."""
        total = Fraction(0)
        for blocks in subdivisions(comp):
            product = ONE
            for block in blocks:
                product *= self.build_r(block).value_at_half
            total += product
        return total

    def s_poly(self, comp: Composition) -> UniPoly:
        """The polynomial recentred by its value at 1/2."""
        built = self.build_r(comp)
        return built.poly - UniPoly.constant(built.value_at_half)

    def curly_C(self, comp: Composition) -> UniPoly:
        """The combination that is constant on the half-integer window:
        r_I plus the prefix-weighted suffix polynomials."""
        total = self.build_r(comp).poly
        for prefix, suffix in prefix_splits(comp):
            total = total + self.build_r(suffix).poly.scale(self.script_R(prefix))
        return total

    def sigma(self, k: int, j: int) -> UniPoly:
        """Average over all compositions of size j with leading entry k."""
        if not (1 <= k <= j):
            raise ValueError(f"require 1 <= k <= j, got k={k}, j={j}")
        if k == j:
            return self.build_base(j).poly
        total = UniPoly.zero()
        for tail in enumerate_compositions(j - k):
            total = total + self.build_r(Composition((k,) + tail.entries)).poly
        return total

    # -- aggregated sums ------------------------------------------------------

    def subdivision_sum_total(self, size: int) -> Fraction:
        """Sum of the subdivision-product values over every composition
        of the given size.

        Equals the sum over all block sequences of total size ``size``
        of the products of the blocks' summed values at 1/2, computed by
        the convolution recursion on the first block.
        """
        if size == 0:
            return ONE
        cached = self._subdiv_total.get(size)
        if cached is not None:
            return cached
        total = Fraction(0)
        for c in range(1, size + 1):
            rho = poly_evaluate(self.sum_r(c), HALF)
            total += rho * self.subdivision_sum_total(size - c)
        self._subdiv_total[size] = total
        return total

    def sum_r_by_last(self, k: int, size: int) -> UniPoly:
        """Sum of the polynomials over all compositions of ``size`` whose
        final entry is ``k``, built without enumerating them.

        Every summand shares the zero set, the half-integer window and
        the form of the constant-term pin, and interpolation is linear
        in the prescribed data, so the sum satisfies the aggregated
        version of the single-composition problem.
        """
        if not (1 <= k <= size):
            raise ValueError(f"require 1 <= k <= size, got k={k}, size={size}")
        if k == size:
            return self.build_base(k).poly
        cached = self._sum_by_last.get((k, size))
        if cached is not None:
            return cached
        window = HalfIntegerSet(size).points
        lower = UniPoly.zero()
        for a in range(1, size - k + 1):
            lower = lower + self.sum_r_by_last(k, size - a).scale(
                self.subdivision_sum_total(a)
            )
        pinned = -poly_evaluate(self.sum_r(size - k), k) * base_constant_term(k)
        zeros = [Fraction(-i) for i in range(1, size + 1) if i != k]
        poly, _K = _pinned_interpolation(
            zeros,
            window,
            [poly_evaluate(lower, x) for x in window],
            pinned,
            f"sum(last={k}, size={size})",
        )
        self._sum_by_last[(k, size)] = poly
        return poly

    def sum_r(self, size: int) -> UniPoly:
        """Sum of the polynomials over all compositions of ``size``."""
        if size < 1:
            raise ValueError(f"size must be >= 1, got {size}")
        cached = self._sum_total.get(size)
        if cached is not None:
            return cached
        total = UniPoly.zero()
        for k in range(1, size + 1):
            total = total + self.sum_r_by_last(k, size)
        self._sum_total[size] = total
        return total

    def sum_r_bruteforce(self, size: int) -> UniPoly:
        """Sum by direct enumeration (test oracle for the aggregation)."""
        total = UniPoly.zero()
        for comp in enumerate_compositions(size):
            total = total + self.build_r(comp).poly
        return total

    # -- conjectural identities ----------------------------------------------

    def check_conjectural_identities(self, max_size: int) -> CheckReport:
        """Evaluate the unproven identities over all compositions of
        size <= max_size and report pass/fail per instance.

        These are never used as construction inputs; a failure here is a
        finding about the polynomial family, not an engine error.
        """
        if max_size < 2:
            raise ValueError("max_size must be >= 2")
        report = CheckReport(f"conjectural identities up to size {max_size}")

        for j in range(2, max_size + 1):
            expected = UniPoly.constant(
                Fraction((-1) ** (j - 1)) * double_factorial(2 * j - 1) / math.factorial(j)
            )
            actual = self.sum_r_bruteforce(j)
            report.add(
                "size-sum constant",
                f"size {j}",
                actual == expected,
                f"difference {actual - expected}",
            )

        for j in range(1, max_size + 1):
            for k in range(1, j + 1):
                sig = self.sigma(k, j)
                value = sigma_window_value(k, j)
                window_ok = all(
                    poly_evaluate(sig, x) == value for x in HalfIntegerSet(j).points
                )
                report.add(
                    "average window value",
                    f"(k={k}, j={j})",
                    window_ok,
                    f"values {[str(poly_evaluate(sig, x)) for x in HalfIntegerSet(j).points]}",
                )
                zeros_ok = all(
                    poly_evaluate(sig, -(j - k) - i) == 0 for i in range(1, j)
                )
                report.add("average shifted zeros", f"(k={k}, j={j})", zeros_ok)
                proportional = sig == standard_interp(j - k, j).scale(value)
                report.add(
                    "average proportionality", f"(k={k}, j={j})", proportional
                )

        for size in range(2, max_size + 1):
            for comp in enumerate_compositions(size):
                head, k = split_last(comp)
                if head is not None and k >= 2:
                    lhs = poly_evaluate(self.s_poly(comp), -HALF - k)
                    rhs = -self.build_r(head).value_at_half * poly_evaluate(
                        self.s_poly(Composition.of(k)), -HALF - k
                    )
                    report.add(
                        "largest-half-integer value",
                        str(comp),
                        lhs == rhs,
                        f"{lhs} != {rhs}",
                    )
                if comp.length >= 3:
                    j = comp.entries[-1]
                    k2 = comp.entries[-2]
                    head2 = Composition(comp.entries[:-2])
                    lhs = self.value(comp, -j)
                    rhs = -self.value(head2, k2) * self.value(
                        Composition.of(k2, j), -j
                    )
                    report.add(
                        "last-entry multiplicative value",
                        str(comp),
                        lhs == rhs,
                        f"{lhs} != {rhs}",
                    )
                shifted = self.s_poly(comp)
                for prefix, suffix in prefix_splits(comp):
                    shifted = shifted + self.s_poly(suffix).scale(self.script_R(prefix))
                vanishes = all(
                    poly_evaluate(shifted, x) == 0
                    for x in HalfIntegerSet(size).points
                )
                report.add("recentred window vanishing", str(comp), vanishes)

        return report


_DEFAULT_FAMILY: Optional[RPolyFamily] = None


def default_family() -> RPolyFamily:
    """Shared family instance used by the convenience wrappers."""
    global _DEFAULT_FAMILY
    if _DEFAULT_FAMILY is None:
        _DEFAULT_FAMILY = RPolyFamily()
    return _DEFAULT_FAMILY


def build_base(k: int) -> RPolynomial:
    return default_family().build_base(k)


def build_r(comp: Composition) -> RPolynomial:
    return default_family().build_r(comp)


def script_R(comp: Composition) -> Fraction:
    return default_family().script_R(comp)


def s_poly(comp: Composition) -> UniPoly:
    return default_family().s_poly(comp)


def curly_C(comp: Composition) -> UniPoly:
    return default_family().curly_C(comp)


def sigma(k: int, j: int) -> UniPoly:
    return default_family().sigma(k, j)


def check_conjectural_identities(max_size: int) -> CheckReport:
    return default_family().check_conjectural_identities(max_size)
