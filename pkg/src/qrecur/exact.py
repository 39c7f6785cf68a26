"""Exact scalars and dense univariate polynomials.

Every number in this package is a ``fractions.Fraction``; floating point
never appears.  ``Fraction`` already guarantees the invariants we need
(lowest terms, positive denominator, zero stored as 0/1), so it serves
directly as the rational scalar type.  On top of it this module supplies
dense univariate polynomials, exact Lagrange interpolation, and the
double-factorial / Pochhammer helpers that the coefficient formulas use
at boundary indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

#: Exact rational scalar used throughout the package.
Rational = Fraction

Scalar = Union[Rational, int]

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` (or the integer shortcut ``"p"``) into a Fraction."""
    return Fraction(text.strip())


def format_rational(value: Rational) -> str:
    """Render a rational in lowest terms with positive denominator."""
    return str(Fraction(value))


def sign_pow(exponent: int) -> int:
    """(-1) raised to an arbitrary (possibly negative) integer exponent."""
    return -1 if exponent % 2 else 1


def double_factorial(k: int) -> Fraction:
    """Return k!! with the conventions (-1)!! = 0!! = 1.

    Raises ValueError for k < -1.
    """
    if k < -1:
        raise ValueError(f"double factorial undefined for {k} < -1")
    result = 1
    while k > 1:
        result *= k
        k -= 2
    return Fraction(result)


def pochhammer(a: Scalar, n: int) -> Fraction:
    """Rising factorial (a)_n = a (a+1) ... (a+n-1), with (a)_0 = 1."""
    if n < 0:
        raise ValueError(f"pochhammer undefined for n = {n} < 0")
    a = Fraction(a)
    result = ONE
    for i in range(n):
        result *= a + i
    return result


def binomial(n: int, k: int) -> Fraction:
    """Binomial coefficient as an exact rational (0 outside the range)."""
    if k < 0 or k > n:
        return ZERO
    result = ONE
    for i in range(k):
        result = result * (n - i) / (i + 1)
    return result


def _trim(coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    n = len(coeffs)
    while n > 0 and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


@dataclass(frozen=True)
class UniPoly:
    """Dense univariate polynomial over the rationals.

    ``coeffs[i]`` is the coefficient of the i-th power; the sequence is
    kept trimmed so the leading coefficient of a nonzero polynomial is
    nonzero.  ``var`` is a display tag only (typically "x", "lambda",
    "m" or "r"); arithmetic never inspects it.
    """

    coeffs: tuple[Fraction, ...]
    var: str = "x"

    @staticmethod
    def from_coeffs(coeffs: Iterable[Scalar], var: str = "x") -> "UniPoly":
        return UniPoly(_trim([Fraction(c) for c in coeffs]), var)

    @staticmethod
    def zero(var: str = "x") -> "UniPoly":
        return UniPoly((), var)

    @staticmethod
    def constant(value: Scalar, var: str = "x") -> "UniPoly":
        return UniPoly.from_coeffs([Fraction(value)], var)

    @staticmethod
    def variable(var: str = "x") -> "UniPoly":
        return UniPoly((ZERO, ONE), var)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def coefficient(self, power: int) -> Fraction:
        if 0 <= power < len(self.coeffs):
            return self.coeffs[power]
        return ZERO

    def __call__(self, x0: Scalar) -> Fraction:
        x0 = Fraction(x0)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x0 + c
        return acc

    def __add__(self, other: "UniPoly") -> "UniPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPoly(_trim(out), self.var)

    def __neg__(self) -> "UniPoly":
        return UniPoly(tuple(-c for c in self.coeffs), self.var)

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other: "UniPoly | Scalar") -> "UniPoly":
        if isinstance(other, (Fraction, int)):
            return self.scale(other)
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs))
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(_trim(out), self.var)

    __rmul__ = __mul__

    def scale(self, factor: Scalar) -> "UniPoly":
        factor = Fraction(factor)
        if factor == 0:
            return UniPoly((), self.var)
        return UniPoly(tuple(c * factor for c in self.coeffs), self.var)

    def shift_up(self, k: int) -> "UniPoly":
        """Multiply by the k-th power of the variable."""
        if self.is_zero:
            return self
        return UniPoly((ZERO,) * k + self.coeffs, self.var)

    def derivative(self) -> "UniPoly":
        return UniPoly(
            _trim([i * c for i, c in enumerate(self.coeffs)][1:]), self.var
        )

    def divide_out_root(self, root: Scalar) -> "UniPoly":
        """Exact synthetic division by (x - root); the root must be exact."""
        root = Fraction(root)
        out: list[Fraction] = []
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * root + c
            out.append(acc)
        remainder = out.pop() if out else ZERO
        if remainder != 0:
            raise ValueError(f"{root} is not a root")
        return UniPoly(_trim(tuple(reversed(out))), self.var)

    def with_var(self, var: str) -> "UniPoly":
        return UniPoly(self.coeffs, var)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*{self.var}" if c != 1 else self.var)
            else:
                parts.append(
                    f"{c}*{self.var}^{i}" if c != 1 else f"{self.var}^{i}"
                )
        return " + ".join(parts).replace("+ -", "- ")


def poly_evaluate(p: UniPoly, x0: Scalar) -> Fraction:
    """Exact value p(x0)."""
    return p(x0)


def lagrange_basis(abscissas: Sequence[Scalar], var: str = "x") -> list[UniPoly]:
    """Normalized Lagrange basis for the given pairwise-distinct abscissas.

    The i-th returned polynomial takes the value 1 at ``abscissas[i]``
    and 0 at every other abscissa.  Raises ValueError("degenerate node
    set") on duplicates.
    """
    xs = [Fraction(x) for x in abscissas]
    if len(set(xs)) != len(xs):
        raise ValueError("degenerate node set")
    if not xs:
        raise ValueError("empty node set")
    full = UniPoly.constant(1, var)
    for x in xs:
        full = full * UniPoly.from_coeffs([-x, ONE], var)
    basis = []
    for x in xs:
        q = full.divide_out_root(x)
        basis.append(q.scale(ONE / q(x)))
    return basis


def lagrange_interpolate(
    nodes: Sequence[tuple[Scalar, Scalar]], var: str = "x"
) -> UniPoly:
    """Unique polynomial of degree < len(nodes) through the given points.

    All arithmetic is exact; duplicate abscissas raise
    ValueError("degenerate node set").
    """
    xs = [x for x, _ in nodes]
    ys = [Fraction(y) for _, y in nodes]
    result = UniPoly.zero(var)
    for ell, y in zip(lagrange_basis(xs, var), ys):
        if y != 0:
            result = result + ell.scale(y)
    return result
