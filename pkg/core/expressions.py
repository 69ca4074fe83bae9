"""
Textual syntax for free Leibniz and free dialgebra elements.

Grammar (whitespace ignored)::

    expr    := ['+' | '-'] product (('+' | '-') product)*
    product := factor (('-|' | '|-') factor)*
    factor  := NUMBER '*' factor | primary
    primary := '[' expr ',' expr ']' | '(' expr ')' | NAME

``NUMBER`` is an integer or ``num/den``. ``NAME`` is a generator such as
``x3`` (index 2) or one of the explicitly supplied names. The dialgebra
products ``-|`` and ``|-`` are only accepted in dialgebra mode; there
``[u, v]`` means ``u -| v - v |- u``.
"""

import re
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Union

from .config import FREE_DEGREE_CAP, GENERATOR_PREFIX
from .dialgebra import DialgElement, dialg_bracket, dprod_left, dprod_right
from .errors import ParseError, UsageError
from .free_leibniz import FreeElement, free_bracket
from .scalars import Field

Parsed = Union[FreeElement, DialgElement]

_TOKEN = re.compile(
    r"\s*(?:(?P<dleft>-\|)|(?P<dright>\|-)|(?P<number>\d+(?:/\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<punct>[\[\](),+*-]))"
)
_GENERATOR = re.compile(rf"{re.escape(GENERATOR_PREFIX)}([1-9][0-9]*)")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if not match:
            offset = len(text[pos:]) - len(text[pos:].lstrip())
            bad = pos + offset
            raise ParseError(f"Unexpected character '{text[bad]}'", bad)
        kind = match.lastgroup or "punct"
        start = match.start(kind)
        tokens.append(Token(kind, match.group(kind), start))
        pos = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class ExpressionParser:
    """Recursive-descent parser producing normal-form elements."""

    def __init__(
        self,
        field: Field,
        names: Optional[Sequence[str]] = None,
        dialgebra: bool = False,
        generators: Optional[int] = None,
        degree_cap: Optional[int] = FREE_DEGREE_CAP,
    ):
        self.field = field
        self.dialgebra = dialgebra
        self.generators = generators
        self.degree_cap = degree_cap
        self._names: Dict[str, int] = {name: i for i, name in enumerate(names or ())}
        self._tokens: List[Token] = []
        self._index = 0

    # Element constructors for the active mode

    def _letter(self, i: int) -> Parsed:
        if self.dialgebra:
            return DialgElement.letter(self.field, i)
        return FreeElement.generator(self.field, i)

    def _bracket(self, u: Parsed, v: Parsed) -> Parsed:
        if self.dialgebra:
            return dialg_bracket(u, v)  # type: ignore[arg-type]
        try:
            return free_bracket(u, v, self.degree_cap)  # type: ignore[arg-type]
        except UsageError as e:
            raise ParseError(str(e), self._peek().position)

    # Token stream

    def _peek(self) -> Token:
        return self._tokens[self._index]

    def _next(self) -> Token:
        token = self._tokens[self._index]
        self._index += 1
        return token

    def _expect(self, text: str) -> Token:
        token = self._next()
        if token.text != text:
            found = token.text or "end of input"
            raise ParseError(f"Expected '{text}' but found '{found}'", token.position)
        return token

    def parse(self, text: str) -> Parsed:
        self._tokens = tokenize(text)
        self._index = 0
        if self._peek().kind == "end":
            raise ParseError("Empty expression", 0)
        result = self._expr()
        token = self._peek()
        if token.kind != "end":
            raise ParseError(f"Unexpected '{token.text}'", token.position)
        return result

    def _expr(self) -> Parsed:
        negate = False
        if self._peek().text in ("+", "-"):
            negate = self._next().text == "-"
        result = self._product()
        if negate:
            result = -result
        while self._peek().text in ("+", "-"):
            op = self._next().text
            term = self._product()
            result = result + term if op == "+" else result - term
        return result

    def _product(self) -> Parsed:
        result = self._factor()
        while self._peek().kind in ("dleft", "dright"):
            token = self._next()
            if not self.dialgebra:
                raise ParseError(
                    f"Dialgebra product '{token.text}' in a Leibniz expression",
                    token.position,
                )
            op: Callable = dprod_left if token.kind == "dleft" else dprod_right
            result = op(result, self._factor())
        return result

    def _factor(self) -> Parsed:
        token = self._peek()
        if token.kind == "number":
            self._next()
            self._expect("*")
            return self._factor().scale(self.field.parse_scalar(token.text))
        return self._primary()

    def _primary(self) -> Parsed:
        token = self._next()
        if token.text == "[":
            left = self._expr()
            self._expect(",")
            right = self._expr()
            self._expect("]")
            return self._bracket(left, right)
        if token.text == "(":
            inner = self._expr()
            self._expect(")")
            return inner
        if token.kind == "name":
            return self._letter(self._resolve(token))
        found = token.text or "end of input"
        raise ParseError(
            f"Expected a generator, '[' or '(' but found '{found}'", token.position
        )

    def _resolve(self, token: Token) -> int:
        if token.text in self._names:
            return self._names[token.text]
        match = _GENERATOR.fullmatch(token.text)
        if not match or self._names:
            raise ParseError(f"Unknown generator '{token.text}'", token.position)
        index = int(match.group(1)) - 1
        if self.generators is not None and index >= self.generators:
            raise ParseError(
                f"Generator '{token.text}' outside x1..x{self.generators}",
                token.position,
            )
        return index


def parse_free(
    text: str,
    field: Field,
    names: Optional[Sequence[str]] = None,
    generators: Optional[int] = None,
    degree_cap: Optional[int] = FREE_DEGREE_CAP,
) -> FreeElement:
    result = ExpressionParser(field, names, False, generators, degree_cap).parse(text)
    assert isinstance(result, FreeElement)
    return result


def parse_dialgebra(
    text: str, field: Field, names: Optional[Sequence[str]] = None
) -> DialgElement:
    result = ExpressionParser(field, names, dialgebra=True).parse(text)
    assert isinstance(result, DialgElement)
    return result
