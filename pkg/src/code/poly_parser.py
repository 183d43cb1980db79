"""多项式表达式的递归下降解析器。

文法::

    expr   := ('+'|'-')? term (('+'|'-') term)*
    term   := factor (('*')? factor)*        # 并置即乘法，如 x^2y
    factor := base ('^' nat | superscript)?
    base   := rational | 'x' | 'y' | '(' expr ')'

接受表格写法 ``(x²+y³)²+xy⁴`` 与 Unicode 减号 ``−``。
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from src.code.errors import InstantonInputError
from src.code.polycore import X, Y, BiPoly

SUPERSCRIPTS = {ch: str(d) for d, ch in enumerate("⁰¹²³⁴⁵⁶⁷⁸⁹")}
_ALIASES = {"−": "-", "·": "*", "×": "*"}


def _is_digit(ch: str) -> bool:
    """只认 ASCII 数字；上标数字只能出现在因子之后。"""
    return "0" <= ch <= "9"


class PolySyntaxError(InstantonInputError):
    """解析失败，``position`` 为出错字符的下标。"""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class Literal:
    value: Fraction

    def evaluate(self) -> BiPoly:
        return BiPoly.constant(self.value)


@dataclass(frozen=True)
class Variable:
    name: str

    def evaluate(self) -> BiPoly:
        return X if self.name == "x" else Y


@dataclass(frozen=True)
class Power:
    base: "PolyExpr"
    exponent: int

    def evaluate(self) -> BiPoly:
        return self.base.evaluate() ** self.exponent


@dataclass(frozen=True)
class Product:
    factors: tuple["PolyExpr", ...]

    def evaluate(self) -> BiPoly:
        result = BiPoly.constant(1)
        for factor in self.factors:
            result = result * factor.evaluate()
        return result


@dataclass(frozen=True)
class Sum:
    """带符号的项之和；``terms`` 中每一项为 (sign, expr)，sign 取 +1/-1。"""

    terms: tuple[tuple[int, "PolyExpr"], ...]

    def evaluate(self) -> BiPoly:
        result = BiPoly.zero()
        for sign, term in self.terms:
            value = term.evaluate()
            result = result + value if sign > 0 else result - value
        return result


PolyExpr = Union[Literal, Variable, Power, Product, Sum]


class PolyParser:
    def __init__(self, text: str) -> None:
        self.text = "".join(_ALIASES.get(ch, ch) for ch in text)
        self.pos = 0
        self.length = len(self.text)

    def skip_whitespace(self) -> None:
        while self.pos < self.length and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_whitespace()
        return self.text[self.pos] if self.pos < self.length else ""

    def match(self, terminal: str) -> bool:
        self.skip_whitespace()
        if self.text.startswith(terminal, self.pos):
            self.pos += len(terminal)
            return True
        return False

    def error(self, message: str) -> PolySyntaxError:
        return PolySyntaxError(message, self.pos)

    def parse(self) -> PolyExpr:
        self.pos = 0
        if not self.peek():
            raise self.error("empty expression")
        result = self.parse_expr()
        if self.peek():
            raise self.error(f"unexpected {self.text[self.pos]!r}")
        return result

    def parse_expr(self) -> PolyExpr:
        sign = 1
        if self.match("-"):
            sign = -1
        else:
            self.match("+")
        terms = [(sign, self.parse_term())]
        while True:
            if self.match("+"):
                terms.append((1, self.parse_term()))
            elif self.match("-"):
                terms.append((-1, self.parse_term()))
            else:
                break
        if len(terms) == 1 and terms[0][0] == 1:
            return terms[0][1]
        return Sum(tuple(terms))

    def parse_term(self) -> PolyExpr:
        factors = [self.parse_factor()]
        while True:
            if self.match("*"):
                factors.append(self.parse_factor())
            elif self._starts_base():
                factors.append(self.parse_factor())
            else:
                break
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def _starts_base(self) -> bool:
        ch = self.peek()
        return _is_digit(ch) or (bool(ch) and ch in "xy(")

    def parse_factor(self) -> PolyExpr:
        base = self.parse_base()
        if self.match("^"):
            return Power(base, self.parse_exponent())
        if self.pos < self.length and self.text[self.pos] in SUPERSCRIPTS:
            digits = ""
            while self.pos < self.length and self.text[self.pos] in SUPERSCRIPTS:
                digits += SUPERSCRIPTS[self.text[self.pos]]
                self.pos += 1
            return Power(base, int(digits))
        return base

    def parse_exponent(self) -> int:
        wrapped = self.match("(")
        self.skip_whitespace()
        start = self.pos
        while self.pos < self.length and _is_digit(self.text[self.pos]):
            self.pos += 1
        if self.pos == start:
            self.pos = start
            raise self.error("exponent must be a non-negative integer")
        value = int(self.text[start:self.pos])
        if wrapped and not self.match(")"):
            raise self.error("expected ')'")
        return value

    def parse_base(self) -> PolyExpr:
        ch = self.peek()
        if ch in ("x", "y"):
            self.pos += 1
            return Variable(ch)
        if ch == "(":
            self.pos += 1
            inner = self.parse_expr()
            if not self.match(")"):
                raise self.error("expected ')'")
            return inner
        if _is_digit(ch):
            return Literal(self.parse_rational())
        if not ch:
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected {ch!r}")

    def parse_rational(self) -> Fraction:
        numerator = self._digits()
        if self.text.startswith("/", self.pos):
            self.pos += 1
            if not (self.pos < self.length and _is_digit(self.text[self.pos])):
                raise self.error("expected denominator")
            start = self.pos
            denominator = self._digits()
            if denominator == 0:
                raise PolySyntaxError("zero denominator", start)
            return Fraction(numerator, denominator)
        return Fraction(numerator)

    def _digits(self) -> int:
        start = self.pos
        while self.pos < self.length and _is_digit(self.text[self.pos]):
            self.pos += 1
        return int(self.text[start:self.pos])


def parse_poly(src: str) -> PolyExpr:
    return PolyParser(src).parse()


def parse_bipoly(src: str) -> BiPoly:
    """解析并求值为 BiPoly。"""
    return parse_poly(src).evaluate()
