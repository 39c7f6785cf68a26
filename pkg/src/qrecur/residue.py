"""Residue-family route to the recursive formulae.

The order-2N family is a polynomial of degree N in a spectral parameter
with operator-word coefficients.  Its N+1 values at the abscissas

    {-n/2 + N, ..., -n/2 + 2N - 1}  and  -(n-1)/2

factor through lower-order families (composed with a boundary operator
on the left at the integer abscissas, with one bulk Yamabe factor on
the right at the half-integer one), so exact Lagrange interpolation in
the parameter reconstructs the family from the recursion alone.  Two
extraction rules then produce recursive formulae:

* critical route: at n = 2N, the parameter derivative at 0 of the
  family applied to 1 yields the order-2N quantity directly; lower-order
  universal formulae eliminate the intermediate bulk powers.
* vanishing route: for large even n the family applied to 1 and
  evaluated at parameter 0 vanishes identically; after eliminating the
  intermediate bulk powers, solving that identity for the top-order
  quantity reproduces the same universal formula, with an overall
  multiplier proportional to (n-1)/(2N-1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .coeffs import RecursiveFormula
from .exact import UniPoly, lagrange_basis, sign_pow
from .opalgebra import (
    OpExpr,
    Word,
    apply_to_one,
    compose,
    substitute_universal,
    value_to_formula,
)
from .report import CheckReport


@dataclass(frozen=True)
class ResidueFamily:
    """An interpolated family: its nodes and the expanded polynomial."""

    N: int
    n: Fraction
    nodes: tuple[tuple[Fraction, OpExpr], ...]
    expanded: OpExpr

    def value_at(self, lam) -> OpExpr:
        return self.expanded.evaluated_at(lam)


@dataclass(frozen=True)
class QresPolynomial:
    """The family applied to 1, as a function of the parameter: exact
    value expressions for each parameter power, with the sign
    -(-1)^N attached."""

    N: int
    n: Fraction
    coefficients: tuple  # tuple[ValueExpr], index = parameter power


class ResidueEngine:
    """Memoized builder for residue families and the formulae they yield."""

    def __init__(self) -> None:
        self._families: dict[tuple[int, Fraction], ResidueFamily] = {}
        self._critical: dict[int, RecursiveFormula] = {}

    def residue_family(self, N: int, n) -> ResidueFamily:
        n = Fraction(n)
        if N < 0:
            raise ValueError(f"order index must be >= 0, got {N}")
        cached = self._families.get((N, n))
        if cached is not None:
            return cached
        if N == 0:
            expanded = OpExpr.single(n, Word.restriction_word())
            family = ResidueFamily(0, n, (), expanded)
        else:
            nodes = []
            for j in range(1, N + 1):
                lam = -n / 2 + 2 * N - j
                lower = self.residue_family(N - j, n).value_at(lam)
                value = compose(
                    OpExpr.single(n, Word.boundary_word(j)), lower
                )
                nodes.append((lam, value))
            lam_bar = -(n - 1) / 2
            lower = self.residue_family(N - 1, n).value_at(-(n + 3) / 2)
            nodes.append(
                (lam_bar, compose(lower, OpExpr.single(n, Word.bulk_word())))
            )
            abscissas = [lam for lam, _ in nodes]
            if len(set(abscissas)) != len(abscissas):
                raise ValueError(
                    f"dimension too small for interpolation: nodes {abscissas}"
                )
            expanded = OpExpr(n)
            for (_, value), basis in zip(nodes, lagrange_basis(abscissas, "lambda")):
                expanded = expanded + value.scale(basis)
            family = ResidueFamily(N, n, tuple(nodes), expanded)
            for lam, value in nodes:
                if family.value_at(lam).as_dict() != value.as_dict():
                    raise ValueError(
                        f"interpolated family misses its node at {lam}"
                    )
        self._families[(N, n)] = family
        return family

    def _known_formulae(self, top: int) -> dict[int, RecursiveFormula]:
        return {K: self.critical_formula(K) for K in range(2, top)}

    def critical_formula(self, N: int) -> RecursiveFormula:
        """Formula for the order-2N quantity from the critical family at
        n = 2N, via the parameter derivative at 0."""
        if N < 2:
            raise ValueError(f"order index must be >= 2, got {N}")
        cached = self._critical.get(N)
        if cached is not None:
            return cached
        n = Fraction(2 * N)
        family = self.residue_family(N, n)
        constant_part = apply_to_one(family.value_at(0))
        if not constant_part.is_zero:
            raise ValueError(
                f"critical family value at 0 applied to 1 is nonzero: {constant_part}"
            )
        derivative = apply_to_one(family.expanded.coefficient_slice(1))
        substituted = substitute_universal(derivative, self._known_formulae(N))
        formula = value_to_formula(
            substituted.scaled(Fraction(-sign_pow(N))), N, "residue"
        )
        self._critical[N] = formula
        return formula

    def universality_residual(self, N: int, n) -> RecursiveFormula:
        """Formula recovered from the vanishing of the subcritical family
        applied to 1 at parameter 0, for even n >= 4N.

        The multiplier of the top-order quantity in the vanishing
        identity is asserted against its closed form
        (-1)^N (n-1)/(2N-1) * prod_{j=N}^{2N-1} (n/2 - j) / (N-1)!.
        """
        n = Fraction(n)
        if N < 2:
            raise ValueError(f"order index must be >= 2, got {N}")
        if n.denominator != 1 or n.numerator % 2 != 0:
            raise ValueError(f"dimension must be an even integer, got {n}")
        if n < 4 * N:
            raise ValueError(
                f"dimension {n} too small for the vanishing argument (need >= {4 * N})"
            )
        family = self.residue_family(N, n)
        at_zero = apply_to_one(family.value_at(0))
        substituted = substitute_universal(at_zero, self._known_formulae(N))
        residual = substituted.scaled(Fraction(-sign_pow(N)))

        m = n / 2
        multiplier = residual.q_terms.pop(((), 2 * N), Fraction(0))
        if multiplier == 0:
            raise ValueError("degenerate normalization")
        expected = Fraction(sign_pow(N)) * (n - 1) / (2 * N - 1)
        for j in range(N, 2 * N):
            expected *= m - j
        expected /= math.factorial(N - 1)
        if multiplier != expected:
            raise ValueError(
                f"unexpected normalization {multiplier}, expected {expected}"
            )
        solved = residual.scaled(Fraction(-1) / multiplier)
        return value_to_formula(solved, N, "residue")

    def cross_check(self, N_max: int, assemble) -> CheckReport:
        """Compare the two routes as coefficient maps for 2 <= N <= N_max.

        ``assemble`` maps N to the polynomial-route formula.
        """
        if N_max < 2:
            raise ValueError("N_max must be >= 2")
        report = CheckReport(f"two-algorithm comparison up to N = {N_max}")
        for N in range(2, N_max + 1):
            mine = self.critical_formula(N)
            theirs = assemble(N)
            same = mine.same_formula(theirs)
            detail = "" if same else "; ".join(mine.diff_lines(theirs))
            report.add("formula equality", f"N={N}", same, detail)
        return report


_DEFAULT_ENGINE: Optional[ResidueEngine] = None


def default_engine() -> ResidueEngine:
    global _DEFAULT_ENGINE
    if _DEFAULT_ENGINE is None:
        _DEFAULT_ENGINE = ResidueEngine()
    return _DEFAULT_ENGINE


def residue_family(N: int, n) -> ResidueFamily:
    return default_engine().residue_family(N, n)


def critical_formula(N: int) -> RecursiveFormula:
    return default_engine().critical_formula(N)


def universality_residual(N: int, n) -> RecursiveFormula:
    return default_engine().universality_residual(N, n)
