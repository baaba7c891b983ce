"""Parser and canonical printer for interaction potentials"""

from functools import lru_cache

import sympy as sp
from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput, UnexpectedToken, VisitError
from sympy.printing.precedence import PRECEDENCE
from sympy.printing.str import StrPrinter

from ..models import ExpressionSyntaxError, Variable

# ^ binds tighter than unary minus, which binds tighter than * and /
POTENTIAL_GRAMMAR = r"""
    ?start: sum

    ?sum: product
        | sum "+" product      -> add
        | sum "-" product      -> sub

    ?product: unary
        | product "*" unary    -> mul
        | product "/" unary    -> div

    ?unary: power
        | "-" unary            -> neg

    ?power: atom
        | atom "^" exponent    -> pow

    exponent: SIGNED_INT ("^" exponent)?

    ?atom: NUMBER              -> number
        | variable
        | FUNC "(" sum ")"     -> call
        | "(" sum ")"

    variable: "x" "(" IDENT "," INT ")"

    FUNC: "sin" | "cos" | "exp" | "log"
    IDENT: /[A-Za-z_][A-Za-z0-9_]*/

    %import common.NUMBER
    %import common.INT
    %import common.SIGNED_INT
    %import common.WS
    %ignore WS
"""

_FUNCTIONS = {"sin": sp.sin, "cos": sp.cos, "exp": sp.exp, "log": sp.log}


@v_args(inline=True)
class _SympyBuilder(Transformer):
    """Turn the parse tree into a sympy expression"""

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a / b

    def neg(self, a):
        return -a

    def pow(self, base, exponent):
        return base ** sp.Integer(exponent)

    def exponent(self, value, rest=None):
        # right-associative integer tower
        if rest is None:
            return int(value)
        if rest < 0:
            raise ValueError("Exponent tower must evaluate to an integer")
        return int(value) ** rest

    def number(self, token):
        text = str(token)
        if text.isdigit():
            return sp.Integer(int(text))
        return sp.Float(float(text))

    def variable(self, vertex, index):
        return Variable(str(vertex), int(index)).symbol

    def call(self, name, argument):
        return _FUNCTIONS[str(name)](argument)


@lru_cache(maxsize=1)
def _parser() -> Lark:
    return Lark(POTENTIAL_GRAMMAR, parser="lalr")


def _error_offset(text: str, exc: UnexpectedInput) -> int:
    position = getattr(exc, "pos_in_stream", None)
    if isinstance(exc, UnexpectedToken) and exc.token.type == "$END":
        position = len(text)
    if position is None or position < 0:
        position = len(text)
    return len(text[:position].encode("utf-8"))


def parse(text: str) -> sp.Expr:
    """Parse a potential written in the expression grammar

    Args:
        text: Expression such as "0.5*(x(v1,0)-x(v0,0))^2"

    Returns:
        Immutable sympy expression over coordinate symbols x(v,i)

    Raises:
        ExpressionSyntaxError: with byte offset and the expected tokens
    """
    try:
        tree = _parser().parse(text)
    except UnexpectedInput as exc:
        expected = getattr(exc, "expected", None) or getattr(exc, "allowed", None) or ()
        raise ExpressionSyntaxError(text, _error_offset(text, exc), expected) from None
    try:
        return sp.sympify(_SympyBuilder().transform(tree))
    except VisitError as exc:
        raise ExpressionSyntaxError(text, len(text.encode("utf-8")), ()) from exc.orig_exc


class PotentialPrinter(StrPrinter):
    """Print sympy expressions back in the potential grammar"""

    def _print_Symbol(self, expr):
        return expr.name

    def _print_Float(self, expr):
        return repr(float(expr))

    def _print_Exp1(self, expr):
        return "exp(1)"

    def _print_Pow(self, expr, rational=False):
        base, exp = expr.as_base_exp()
        if not exp.is_Integer:
            raise ValueError(f"Exponent {exp} is not an integer")
        if exp.is_negative:
            positive = sp.Pow(base, -exp, evaluate=False)
            return "1/" + self.parenthesize(positive, PRECEDENCE["Mul"], strict=True)
        if exp == 1:
            return self._print(base)
        return f"{self.parenthesize(base, PRECEDENCE['Pow'], strict=True)}^{exp}"


def to_text(expr: sp.Expr) -> str:
    """Canonical text form; parse(to_text(e)) evaluates equal to e"""
    return PotentialPrinter().doprint(expr)
