"""Free noncommutative operator words with polynomial coefficients.

Words are built from three kinds of symbols and must read, left to
right, as: zero or more boundary operators P_{2j}, at most one
restriction i*, zero or more bulk Yamabe factors.  Composition applies
the rightmost factor first.  The word algebra is strictly free on the
boundary symbols: no commutation and no simplification ever happens, so
distinct orderings of boundary factors stay distinct.

Expressions carry an exact ambient dimension n; combining expressions
with different n is an error.  Coefficients are univariate polynomials
in the spectral parameter (constants are degree-0 polynomials).

``apply_to_one`` rewrites the action of a lambda-free expression on the
constant function 1 into a linear combination of curvature targets:

* a trailing boundary factor P_{2j} acting on 1 contributes the factor
  (-1)^j (n/2 - j) and turns into the order-2j curvature target (at the
  critical order n = 2j the term vanishes);
* a trailing bulk run i* Pbar^k (k >= 1) contributes -(n-1)/2 and drops
  one bulk power, leaving the bar target i* Pbar^{k-1}(Qbar); the factor
  comes from the bulk Yamabe operator being the order-2 operator of an
  (n+1)-dimensional metric;
* a bare i* passes the constant through (a unit target).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .coeffs import FormulaTerm, RecursiveFormula, sorted_terms
from .compositions import Composition
from .exact import UniPoly, sign_pow


class WordGrammarError(ValueError):
    """Raised when concatenation would break the word grammar."""


@dataclass(frozen=True)
class Word:
    """One well-formed operator word.

    ``boundary`` lists the half-orders j of the boundary factors P_{2j}
    in composition order (leftmost first); ``restriction`` marks the
    presence of i*; ``bar_power`` counts trailing bulk Yamabe factors.
    """

    boundary: tuple[int, ...] = ()
    restriction: bool = False
    bar_power: int = 0

    def __post_init__(self) -> None:
        if any(j < 1 for j in self.boundary):
            raise ValueError(f"boundary orders must be >= 1: {self.boundary}")
        if self.bar_power < 0:
            raise ValueError("bar power must be >= 0")

    @staticmethod
    def identity() -> "Word":
        return Word()

    @staticmethod
    def restriction_word() -> "Word":
        return Word((), True, 0)

    @staticmethod
    def boundary_word(*orders: int) -> "Word":
        return Word(tuple(orders), False, 0)

    @staticmethod
    def bulk_word(power: int = 1) -> "Word":
        return Word((), False, power)

    @property
    def is_identity(self) -> bool:
        return not self.boundary and not self.restriction and self.bar_power == 0

    def concat(self, other: "Word") -> "Word":
        """Concatenate self (acting later) with other (acting first)."""
        if (self.restriction or self.bar_power > 0) and (
            other.boundary or other.restriction
        ):
            raise WordGrammarError(f"word grammar violation: {self} * {other}")
        return Word(
            self.boundary + other.boundary,
            self.restriction or other.restriction,
            self.bar_power + other.bar_power,
        )

    def __str__(self) -> str:
        parts = [f"P{2 * j}" for j in self.boundary]
        if self.restriction:
            parts.append("i*")
        parts.extend(["Pbar2"] * self.bar_power)
        return " ".join(parts) if parts else "1"


@dataclass(frozen=True)
class OpExpr:
    """Linear combination of words with polynomial coefficients and a
    fixed exact ambient dimension."""

    n: Fraction
    terms: tuple[tuple[Word, UniPoly], ...] = ()

    @staticmethod
    def from_dict(n: Fraction, data: dict[Word, UniPoly]) -> "OpExpr":
        items = tuple(
            sorted(
                ((w, c) for w, c in data.items() if not c.is_zero),
                key=lambda item: (
                    item[0].boundary,
                    item[0].restriction,
                    item[0].bar_power,
                ),
            )
        )
        return OpExpr(Fraction(n), items)

    @staticmethod
    def single(n: Fraction, word: Word, coefficient=1) -> "OpExpr":
        if isinstance(coefficient, UniPoly):
            poly = coefficient
        else:
            poly = UniPoly.constant(coefficient, "lambda")
        return OpExpr.from_dict(Fraction(n), {word: poly})

    def as_dict(self) -> dict[Word, UniPoly]:
        return dict(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def _require_same_n(self, other: "OpExpr") -> None:
        if self.n != other.n:
            raise ValueError(
                f"mixing expressions with different dimensions {self.n} and {other.n}"
            )

    def __add__(self, other: "OpExpr") -> "OpExpr":
        self._require_same_n(other)
        data = self.as_dict()
        for word, coeff in other.terms:
            data[word] = data.get(word, UniPoly.zero("lambda")) + coeff
        return OpExpr.from_dict(self.n, data)

    def scale(self, factor) -> "OpExpr":
        if isinstance(factor, UniPoly):
            return OpExpr.from_dict(
                self.n, {w: c * factor for w, c in self.terms}
            )
        return OpExpr.from_dict(self.n, {w: c.scale(factor) for w, c in self.terms})

    def __neg__(self) -> "OpExpr":
        return self.scale(Fraction(-1))

    def __sub__(self, other: "OpExpr") -> "OpExpr":
        return self + (-other)

    def evaluated_at(self, lam) -> "OpExpr":
        """Evaluate every coefficient polynomial at a parameter value."""
        return OpExpr.from_dict(
            self.n,
            {w: UniPoly.constant(c(lam), "lambda") for w, c in self.terms},
        )

    def coefficient_slice(self, power: int) -> "OpExpr":
        """Expression whose coefficients are the given lambda-power
        coefficients of this one (lambda-free result)."""
        return OpExpr.from_dict(
            self.n,
            {
                w: UniPoly.constant(c.coefficient(power), "lambda")
                for w, c in self.terms
            },
        )

    def lambda_degree(self) -> int:
        return max((c.degree for _, c in self.terms), default=-1)

    def is_lambda_free(self) -> bool:
        return all(c.degree <= 0 for _, c in self.terms)

    def constant_coefficients(self) -> dict[Word, Fraction]:
        if not self.is_lambda_free():
            raise ValueError("expression still depends on the parameter")
        return {w: c.coefficient(0) for w, c in self.terms}

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        return " + ".join(f"({c}) {w}" for w, c in self.terms)


def compose(a: OpExpr, b: OpExpr) -> OpExpr:
    """Bilinear extension of word concatenation; coefficients multiply."""
    a._require_same_n(b)
    data: dict[Word, UniPoly] = {}
    for wa, ca in a.terms:
        for wb, cb in b.terms:
            word = wa.concat(wb)
            product = ca * cb
            data[word] = data.get(word, UniPoly.zero("lambda")) + product
    return OpExpr.from_dict(a.n, data)


@dataclass
class ValueExpr:
    """Result of letting an operator expression act on the constant 1.

    ``q_terms`` maps (boundary word entries, curvature order 2t) to the
    rational coefficient of P_{2I}(Q_{2t}); ``bar_terms`` maps (boundary
    word entries, bulk power k) to the coefficient of
    P_{2I}(i* Pbar^k(Qbar)); ``unit_terms`` collects coefficients of
    plain restricted constants.  Zero coefficients are pruned.
    """

    n: Fraction
    q_terms: dict[tuple[tuple[int, ...], int], Fraction] = field(default_factory=dict)
    bar_terms: dict[tuple[tuple[int, ...], int], Fraction] = field(default_factory=dict)
    unit_terms: dict[tuple[int, ...], Fraction] = field(default_factory=dict)

    def _add(self, table: dict, key, value: Fraction) -> None:
        total = table.get(key, Fraction(0)) + value
        if total == 0:
            table.pop(key, None)
        else:
            table[key] = total

    def add_q(self, word: tuple[int, ...], order: int, value: Fraction) -> None:
        self._add(self.q_terms, (word, order), value)

    def add_bar(self, word: tuple[int, ...], power: int, value: Fraction) -> None:
        self._add(self.bar_terms, (word, power), value)

    def add_unit(self, word: tuple[int, ...], value: Fraction) -> None:
        self._add(self.unit_terms, word, value)

    @property
    def is_zero(self) -> bool:
        return not self.q_terms and not self.bar_terms and not self.unit_terms

    def scaled(self, factor: Fraction) -> "ValueExpr":
        if factor == 0:
            return ValueExpr(self.n)
        return ValueExpr(
            self.n,
            {k: v * factor for k, v in self.q_terms.items()},
            {k: v * factor for k, v in self.bar_terms.items()},
            {k: v * factor for k, v in self.unit_terms.items()},
        )

    def __str__(self) -> str:
        parts = [
            f"({v}) P{list(w)}(Q_{t})" for (w, t), v in sorted(self.q_terms.items())
        ]
        parts += [
            f"({v}) P{list(w)} bar^{k}" for (w, k), v in sorted(self.bar_terms.items())
        ]
        parts += [f"({v}) unit{list(w)}" for w, v in sorted(self.unit_terms.items())]
        return " + ".join(parts) if parts else "0"


def apply_to_one(expr: OpExpr, n: Optional[Fraction] = None) -> ValueExpr:
    """Rewrite a lambda-free expression acting on the constant function 1."""
    if n is not None and Fraction(n) != expr.n:
        raise ValueError(f"dimension mismatch: {n} != {expr.n}")
    n = expr.n
    out = ValueExpr(n)
    for word, coeff in expr.constant_coefficients().items():
        if coeff == 0:
            continue
        if word.bar_power > 0:
            if not word.restriction:
                raise WordGrammarError(
                    f"bulk factors without restriction cannot act on the boundary: {word}"
                )
            out.add_bar(
                word.boundary, word.bar_power - 1, coeff * (-(n - 1) / 2)
            )
        elif word.restriction:
            if not word.boundary:
                out.add_unit((), coeff)
            else:
                j = word.boundary[-1]
                factor = sign_pow(j) * (n / 2 - j)
                if factor != 0:
                    out.add_q(word.boundary[:-1], 2 * j, coeff * factor)
        else:
            raise WordGrammarError(
                f"purely boundary word has no action on the bulk constant: {word}"
            )
    return out


def substitute_universal(
    value: ValueExpr,
    known: dict[int, RecursiveFormula],
    n: Optional[Fraction] = None,
) -> ValueExpr:
    """Eliminate intermediate bar targets using known lower formulae.

    A bar target of power k is rewritten through the formula for the
    order-2(k+1) quantity solved for its bulk term; the boundary word
    prefix distributes over the replacement.  Power 0 is the order-2
    quantity itself.  Bar powers with no matching formula are kept, and
    it is an error if more than one distinct bar power would remain.
    """
    if n is not None and Fraction(n) != value.n:
        raise ValueError(f"dimension mismatch: {n} != {value.n}")
    out = ValueExpr(value.n)
    out.q_terms = dict(value.q_terms)
    out.unit_terms = dict(value.unit_terms)
    pending = dict(value.bar_terms)
    remaining: dict[tuple[tuple[int, ...], int], Fraction] = {}
    while pending:
        (word, power), coeff = pending.popitem()
        if power == 0:
            out.add_q(word, 2, coeff)
            continue
        formula = known.get(power + 1)
        if formula is None:
            remaining[(word, power)] = (
                remaining.get((word, power), Fraction(0)) + coeff
            )
            continue
        inverse = 1 / formula.bar_coefficient
        out.add_q(word, 2 * formula.N, coeff * inverse)
        for term in formula.terms:
            out.add_q(
                word + term.word.entries,
                term.target_order,
                -coeff * inverse * term.coefficient,
            )
    kept_powers = {power for (_, power) in remaining}
    if len(kept_powers) > 1:
        raise ValueError(
            f"universality input incomplete: bar powers {sorted(kept_powers)} remain"
        )
    out.bar_terms = remaining
    return out


def value_to_formula(
    value: ValueExpr, N: int, source: str
) -> RecursiveFormula:
    """Interpret a fully substituted value expression as a recursive
    formula for the order-2N quantity (it must have exactly the shape
    of one: matching word/target orders and a single pure bar term)."""
    if value.unit_terms:
        raise ValueError(f"unresolved unit terms: {value.unit_terms}")
    terms = []
    for (word, order), coeff in value.q_terms.items():
        comp = Composition(word)
        if order != 2 * (N - comp.size):
            raise ValueError(
                f"term {word} on Q_{order} does not fit an order-{2 * N} formula"
            )
        terms.append(FormulaTerm(coeff, comp, order))
    if set(value.bar_terms) != {((), N - 1)}:
        raise ValueError(f"unexpected bar terms: {sorted(value.bar_terms)}")
    return RecursiveFormula(
        N, sorted_terms(terms), value.bar_terms[((), N - 1)], source
    )
