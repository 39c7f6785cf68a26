"""Coefficient layer: from the polynomial family to full recursive formulae.

A recursive formula for the order-2N curvature quantity is a list of
rational multiples of operator words acting on lower-order quantities,
plus a single bulk term.  The coefficient of the word indexed by a
composition I is a product of rational factors times the value of the
polynomial r_I at the integer N - |I|; the bulk coefficient has the
closed form (-1)^(N-1) (2N-2)!!/(2N-3)!!.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .compositions import Composition, enumerate_compositions
from .exact import (
    HALF,
    UniPoly,
    double_factorial,
    format_rational,
    parse_rational,
    pochhammer,
    poly_evaluate,
    sign_pow,
)
from .report import CheckReport
from .rpoly import RPolyFamily, default_family


@dataclass(frozen=True)
class FormulaTerm:
    """One summand: coefficient * P_{2I}(Q_{target_order})."""

    coefficient: Fraction
    word: Composition
    target_order: int

    @property
    def expected_sign(self) -> int:
        return (-1) ** (self.word.size + self.word.length - 1)

    def sign_law_holds(self) -> bool:
        return self.coefficient != 0 and (
            (self.coefficient > 0) == (self.expected_sign > 0)
        )


@dataclass(frozen=True)
class RecursiveFormula:
    """Universal recursive formula for the order-2N quantity.

    Terms are kept in canonical composition order (ascending size, then
    length, then lexicographic).  ``source`` records which algorithm
    produced the formula.
    """

    N: int
    terms: tuple[FormulaTerm, ...]
    bar_coefficient: Fraction
    source: str = "rpoly"

    @property
    def bar_power(self) -> int:
        return self.N - 1

    def coefficient_map(self) -> dict[tuple[tuple[int, ...], int], Fraction]:
        return {(t.word.entries, t.target_order): t.coefficient for t in self.terms}

    def same_formula(self, other: "RecursiveFormula") -> bool:
        """Equality as a formula: N, coefficient map and bar term agree."""
        return (
            self.N == other.N
            and self.coefficient_map() == other.coefficient_map()
            and self.bar_coefficient == other.bar_coefficient
        )

    def diff_lines(self, other: "RecursiveFormula") -> list[str]:
        lines = []
        if self.N != other.N:
            return [f"order mismatch: {self.N} vs {other.N}"]
        mine, theirs = self.coefficient_map(), other.coefficient_map()
        for key in sorted(set(mine) | set(theirs)):
            a, b = mine.get(key), theirs.get(key)
            if a != b:
                word, order = key
                lines.append(f"word {word} on Q_{order}: {a} vs {b}")
        if self.bar_coefficient != other.bar_coefficient:
            lines.append(f"bar: {self.bar_coefficient} vs {other.bar_coefficient}")
        return lines


def sorted_terms(terms) -> tuple[FormulaTerm, ...]:
    return tuple(sorted(terms, key=lambda t: t.word.canonical_key()))


def coeff_a(
    comp: Composition, N: int, family: Optional[RPolyFamily] = None
) -> Fraction:
    """Coefficient of the word indexed by ``comp`` in the order-2N formula."""
    size = comp.size
    if N <= size:
        raise ValueError(
            f"coefficient undefined below threshold: N={N} <= |I|={size}"
        )
    family = family or default_family()
    product = Fraction(1)
    for i in range(1, size + 1):
        product *= Fraction(N - i, 2 * N - 2 * i - 1)
    return product * family.value(comp, N - size)


def bar_coefficient(N: int) -> Fraction:
    """Coefficient of the bulk term, (-1)^(N-1) (2N-2)!!/(2N-3)!!."""
    if N < 1:
        raise ValueError(f"order index must be >= 1, got {N}")
    return (
        Fraction((-1) ** (N - 1))
        * double_factorial(2 * N - 2)
        / double_factorial(2 * N - 3)
    )


def assemble_formula(
    N: int, family: Optional[RPolyFamily] = None, source: str = "rpoly"
) -> RecursiveFormula:
    """Full formula with all 2^(N-1) - 1 word terms plus the bulk term."""
    if N < 1:
        raise ValueError(f"order index must be >= 1, got {N}")
    family = family or default_family()
    terms = []
    for size in range(1, N):
        for comp in enumerate_compositions(size):
            terms.append(
                FormulaTerm(coeff_a(comp, N, family), comp, 2 * N - 2 * size)
            )
    return RecursiveFormula(N, sorted_terms(terms), bar_coefficient(N), source)


# -- the coefficient sums over fixed word size ---------------------------------


def _product_prefactor(j: int, N: int) -> Fraction:
    product = Fraction(1)
    for i in range(1, j + 1):
        product *= Fraction(N - i, 2 * N - 2 * i - 1)
    return product


def alpha(
    j: int,
    N: int,
    family: Optional[RPolyFamily] = None,
    method: str = "auto",
) -> Fraction:
    """Sum of the coefficients over all words of size j (with the
    convention that the j=0 stratum contributes -1).

    ``method`` picks how the sum over the 2^(j-1) compositions is
    evaluated: "enumerate" builds every polynomial, "aggregate" uses the
    fixed-last-entry aggregated sums, "auto" switches to aggregation for
    large j.  All routes are exact and agree (tested).
    """
    if not (0 <= j <= N - 1):
        raise ValueError(f"require 0 <= j <= N-1, got j={j}, N={N}")
    if j == 0:
        return Fraction(-1)
    family = family or default_family()
    if method == "auto":
        method = "enumerate" if j <= 8 else "aggregate"
    if method == "enumerate":
        total = sum(
            (coeff_a(comp, N, family) for comp in enumerate_compositions(j)),
            Fraction(0),
        )
        return total
    if method == "aggregate":
        return _product_prefactor(j, N) * poly_evaluate(family.sum_r(j), N - j)
    raise ValueError(f"unknown method {method!r}")


def beta(j: int, N: int) -> Fraction:
    """Closed-form counterpart of alpha:
    (-1)^(j-1) C(N-1, j) (2j-1)!! (2N-2j-3)!! / (2N-3)!!."""
    if not (0 <= j <= N - 1):
        raise ValueError(f"require 0 <= j <= N-1, got j={j}, N={N}")
    return (
        Fraction(sign_pow(j - 1))
        * math.comb(N - 1, j)
        * double_factorial(2 * j - 1)
        * double_factorial(2 * N - 2 * j - 3)
        / double_factorial(2 * N - 3)
    )


def check_alpha_layer(
    N_max: int, family: Optional[RPolyFamily] = None
) -> CheckReport:
    """Report the conjectural coefficient-sum identities for N <= N_max:
    the closed form, the symmetry, the alternating sum, and the
    two-variable generating-function identity to total degree N_max - 1.
    """
    if N_max < 2:
        raise ValueError("N_max must be >= 2")
    family = family or default_family()
    report = CheckReport(f"coefficient-sum identities up to N = {N_max}")
    alphas: dict[tuple[int, int], Fraction] = {}
    for N in range(2, N_max + 1):
        for j in range(N):
            alphas[(j, N)] = alpha(j, N, family)
    for N in range(2, N_max + 1):
        row = [alphas[(j, N)] for j in range(N)]
        closed = all(row[j] == beta(j, N) for j in range(N))
        report.add(
            "closed form",
            f"N={N}",
            closed,
            f"row {[str(v) for v in row]}",
        )
        symmetric = all(
            row[j] == sign_pow(N - 1) * row[N - 1 - j] for j in range(N)
        )
        report.add("symmetry", f"N={N}", symmetric)
        alternating = sum(sign_pow(j - 1) * row[j] for j in range(N))
        expected = double_factorial(2 * N - 2) / double_factorial(2 * N - 3)
        report.add(
            "alternating sum",
            f"N={N}",
            alternating == expected,
            f"{alternating} != {expected}",
        )
    # Coefficients of the product of the two binomial series
    # (1-z)^(-1/2) (1-w)^(-1/2), compared degree by degree.
    for total in range(N_max):
        ok = True
        detail = ""
        for j in range(total + 1):
            b = total - j
            N = total + 1
            series = (
                pochhammer(HALF, j)
                * pochhammer(HALF, b)
                / (math.factorial(j) * math.factorial(b))
            )
            lhs = (
                (alphas[(j, N)] if N >= 2 else Fraction(-1))
                * double_factorial(2 * N - 3)
                / double_factorial(2 * N - 2)
                * sign_pow(j - 1)
            )
            if lhs != series:
                ok = False
                detail = f"monomial z^{j} w^{b}: {lhs} != {series}"
                break
        report.add("generating function", f"total degree {total}", ok, detail)
    return report


def closed_form_check(
    N_max: int, family: Optional[RPolyFamily] = None
) -> CheckReport:
    """Check the closed forms of the two extreme coefficients:
    the single-unit word gives (N-1)/(2N-3) and the single maximal word
    gives (-1)^(N-1) (N-1)(2N-5)/(2N-3)."""
    if N_max < 2:
        raise ValueError("N_max must be >= 2")
    family = family or default_family()
    report = CheckReport(f"extreme-coefficient closed forms up to N = {N_max}")
    for N in range(2, N_max + 1):
        first = coeff_a(Composition.of(1), N, family)
        report.add(
            "leading word",
            f"N={N}",
            first == Fraction(N - 1, 2 * N - 3),
            f"{first}",
        )
        last = coeff_a(Composition.of(N - 1), N, family)
        expected = Fraction((-1) ** (N - 1) * (N - 1) * (2 * N - 5), 2 * N - 3)
        report.add("maximal word", f"N={N}", last == expected, f"{last}")
    return report


def q_series(
    words: list[Composition],
    y_order: int,
    family: Optional[RPolyFamily] = None,
) -> dict[tuple[tuple[int, ...], int], Fraction]:
    """Coefficients of the refined two-variable series: for each requested
    word I and the given y-exponent, the value (2N-3)!!/(2N-2)!! * a_I^(N)
    with N = |I| + y_order + 1.  An empty request never includes the
    size-0 stratum; its convention (-1) enters the diagonal check."""
    if y_order < 0:
        raise ValueError("y exponent must be >= 0")
    family = family or default_family()
    out = {}
    for comp in words:
        N = comp.size + y_order + 1
        weight = double_factorial(2 * N - 3) / double_factorial(2 * N - 2)
        out[(comp.entries, y_order)] = weight * coeff_a(comp, N, family)
    return out


def q_series_diagonal_check(
    max_total_degree: int, family: Optional[RPolyFamily] = None
) -> CheckReport:
    """Check that collapsing the refined series to one variable matches
    the closed two-variable generating function with the sign flip."""
    family = family or default_family()
    report = CheckReport(
        f"refined series diagonal up to total degree {max_total_degree}"
    )
    for total in range(max_total_degree + 1):
        ok = True
        detail = ""
        for j in range(total + 1):
            b = total - j
            N = total + 1
            weight = double_factorial(2 * N - 3) / double_factorial(2 * N - 2)
            if j == 0:
                diag = -weight
            else:
                diag = weight * sum(
                    (coeff_a(comp, N, family) for comp in enumerate_compositions(j)),
                    Fraction(0),
                )
            series = (
                pochhammer(HALF, j)
                * pochhammer(HALF, b)
                / (math.factorial(j) * math.factorial(b))
            )
            if diag != -sign_pow(j) * series:
                ok = False
                detail = f"monomial x^{j} y^{b}: {diag} vs {-sign_pow(j) * series}"
                break
        report.add("diagonal identity", f"total degree {total}", ok, detail)
    return report


# -- serialization --------------------------------------------------------------


def formula_to_json_dict(formula: RecursiveFormula) -> dict:
    return {
        "N": formula.N,
        "source": formula.source,
        "terms": [
            {
                "coeff": format_rational(t.coefficient),
                "word": list(t.word.entries),
                "q_order": t.target_order,
            }
            for t in formula.terms
        ],
        "bar": {
            "coeff": format_rational(formula.bar_coefficient),
            "power": formula.bar_power,
        },
    }


def emit_formula_json(formula: RecursiveFormula) -> str:
    return json.dumps(formula_to_json_dict(formula), indent=2)


def formula_from_json_dict(data: dict) -> RecursiveFormula:
    N = int(data["N"])
    terms = [
        FormulaTerm(
            parse_rational(t["coeff"]),
            Composition(tuple(int(e) for e in t["word"])),
            int(t["q_order"]),
        )
        for t in data["terms"]
    ]
    bar = data["bar"]
    if int(bar["power"]) != N - 1:
        raise ValueError(f"bar power {bar['power']} inconsistent with N={N}")
    return RecursiveFormula(
        N,
        sorted_terms(terms),
        parse_rational(bar["coeff"]),
        str(data.get("source", "rpoly")),
    )


def parse_formula_json(text: str) -> RecursiveFormula:
    return formula_from_json_dict(json.loads(text))


def _latex_frac(value: Fraction) -> str:
    sign = "-" if value < 0 else ""
    value = abs(value)
    if value.denominator == 1:
        return f"{sign}{value.numerator}"
    return f"{sign}\\frac{{{value.numerator}}}{{{value.denominator}}}"


def _latex_word(word: Composition) -> str:
    parts = []
    run_entry, run_len = None, 0
    for entry in word.entries + (0,):
        if entry == run_entry:
            run_len += 1
            continue
        if run_entry is not None:
            op = f"P_{{{2 * run_entry}}}" if 2 * run_entry >= 10 else f"P_{2 * run_entry}"
            parts.append(op if run_len == 1 else f"{op}^{run_len}")
        run_entry, run_len = entry, 1
    return " ".join(parts)


def format_formula_latex(formula: RecursiveFormula) -> str:
    """Render with the operator notation used in the bulk-boundary setting."""
    pieces = [f"Q_{{{2 * formula.N}}} ="]
    first = True
    for t in formula.terms:
        coeff = _latex_frac(t.coefficient)
        joiner = "" if first else ("+ " if t.coefficient >= 0 else "")
        first = False
        pieces.append(f"{joiner}{coeff} {_latex_word(t.word)} (Q_{{{t.target_order}}})")
    bar = _latex_frac(formula.bar_coefficient)
    joiner = "+ " if formula.bar_coefficient >= 0 and not first else ""
    power = f"^{{{formula.bar_power}}}" if formula.bar_power != 1 else ""
    pieces.append(f"{joiner}{bar} i^* \\bar{{P}}_2{power} (\\bar{{Q}}_2)")
    return " ".join(pieces)


def format_formula_text(formula: RecursiveFormula) -> str:
    lines = [f"Q_{2 * formula.N} ="]
    for t in formula.terms:
        word = " ".join(f"P{2 * e}" for e in t.word.entries)
        lines.append(f"  {format_rational(t.coefficient):>12}  {word} (Q_{t.target_order})")
    lines.append(
        f"  {format_rational(formula.bar_coefficient):>12}  i* Pbar2^{formula.bar_power} (Qbar2)"
    )
    return "\n".join(lines)
