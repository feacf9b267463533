"""
Identity DSL and variety files.

    variety binary-perm {
        (a,b,c) + (a,c,b) = 0;
        (a*b)*c + (c*b)*a = (a*c)*b + (c*a)*b;
    }

Products need an explicit '*' and nested products need parentheses, so "a*b*c" is
rejected. Sugar: (a,b,c) associator, [a,b] commutator, {a,b} anti-commutator,
J(a,b,c) or J[a,b,c] Jacobian. A chain "A = B = C" yields A-B and B-C.

In derived mode the bracket of the chosen sign denotes the algebra product itself, which
is how identities of commutator and anti-commutator algebras are written.
"""

import re
from dataclasses import dataclass

import lark
from lark.exceptions import UnexpectedInput, VisitError

from .core import Polynomial, Sign, as_coefficient, multidegree
from .errors import NasError, ParseError, RegistryError


GRAMMAR = r'''
file: block+
block: "variety" NAME "{" body "}"
body: "free"             -> free_body
    | (chain ";")*       -> identity_body

chain: expr ("=" expr)+

expr: signed (ADDOP term)*
signed: ADDOP? term
?term: scalar | scaled | prod
scalar: RATIONAL
scaled: RATIONAL "*"? prod
prod: factor ("*" factor)?
?factor: VAR                                 -> var
       | "(" expr ")"
       | "(" expr "," expr "," expr ")"      -> associator
       | "[" expr "," expr "]"               -> commutator
       | "{" expr "," expr "}"               -> anticommutator
       | "J(" expr "," expr "," expr ")"     -> jacobian
       | "J[" expr "," expr "," expr "]"     -> jacobian

ADDOP: "+" | "-"
RATIONAL: /\d+(\/\d+)?/
VAR: /[a-z][a-z0-9_]*/
NAME: /[A-Za-z][A-Za-z0-9_\-]*/
COMMENT: /#[^\n]*/

%import common.WS
%ignore WS
%ignore COMMENT
'''

_parser = lark.Lark(GRAMMAR, parser='lalr', start=['chain', 'expr', 'file'],
                    propagate_positions=True)

_GENERATOR = re.compile(r'x(\d+)$')


@dataclass(frozen=True)
class Identity:
    """An identity stored in "= 0" form over variables 1..k (in order of appearance)."""
    poly: Polynomial
    variables: tuple
    text: str = ''

    @property
    def multilinear(self):
        target = (1,) * len(self.variables)
        return all(multidegree(m) == target for m in self.poly.terms)

    @property
    def degree(self):
        if not self.poly:
            return 0
        return max(sum(multidegree(m)) for m in self.poly.terms)

    def render(self):
        return f"{self.poly.render(self.variables)} = 0"


@dataclass(frozen=True)
class VarietyDef:
    name: str
    identities: tuple
    free: bool = False


class _ToPolynomial(lark.Transformer):

    def __init__(self, mode=None, generators=False):
        super().__init__()
        self.mode = Sign(mode) if mode else None
        self.generators = generators
        self.names = []

    # -- leaves

    def var(self, children):
        name = str(children[0])
        if self.generators:
            match = _GENERATOR.match(name)
            if not match or int(match.group(1)) < 1:
                raise ParseError(f"unknown symbol {name!r}, expected a generator x<k>",
                                 children[0].line, children[0].column)
            return Polynomial.monomial(int(match.group(1)))
        if name not in self.names:
            self.names.append(name)
        return Polynomial.monomial(self.names.index(name) + 1)

    # -- products and sugar

    def prod(self, children):
        if len(children) == 1:
            return children[0]
        return children[0] * children[1]

    def _bracket(self, a, b):
        if self.mode is Sign.MINUS:
            return a * b
        return a * b - b * a

    def _brace(self, a, b):
        if self.mode is Sign.PLUS:
            return a * b
        return a * b + b * a

    def associator(self, children):
        a, b, c = children
        return (a * b) * c - a * (b * c)

    def commutator(self, children):
        return self._bracket(*children)

    def anticommutator(self, children):
        return self._brace(*children)

    def jacobian(self, children):
        a, b, c = children
        br = self._bracket
        return br(br(a, b), c) + br(br(b, c), a) + br(br(c, a), b)

    # -- linear structure

    def scalar(self, children):
        token = children[0]
        if as_coefficient(str(token)):
            raise ParseError("constant terms are not allowed", token.line, token.column)
        return Polynomial()

    def scaled(self, children):
        token, p = children
        return p.scale(as_coefficient(str(token)))

    def signed(self, children):
        if len(children) == 2:
            return -children[1] if str(children[0]) == '-' else children[1]
        return children[0]

    def expr(self, children):
        out = children[0]
        for op, p in zip(children[1::2], children[2::2]):
            out = out - p if str(op) == '-' else out + p
        return out

    def chain(self, children):
        return [children[k] - children[k + 1] for k in range(len(children) - 1)]


def _parse_tree(text, start):
    try:
        return _parser.parse(text, start=start)
    except UnexpectedInput as exc:
        raise ParseError(f"syntax error near {_excerpt(text, exc)!r}",
                         getattr(exc, 'line', None), getattr(exc, 'column', None))


def _transform(tree, mode=None, generators=False):
    transformer = _ToPolynomial(mode, generators)
    try:
        result = transformer.transform(tree)
    except VisitError as exc:
        if isinstance(exc.orig_exc, NasError):
            raise exc.orig_exc
        raise
    return result, tuple(transformer.names)


def _run(text, start, mode=None, generators=False):
    return _transform(_parse_tree(text, start), mode, generators)


def _excerpt(text, exc):
    pos = getattr(exc, 'pos_in_stream', None)
    if pos is None:
        return text[:20]
    return text[pos:pos + 12] or '<end of input>'


# ---------------------------------------------------------------------------
# Public entry points
# ---------------------------------------------------------------------------

def parse_expression(text, mode=None, generators=False):
    """Parse one expression into a Polynomial; variables become generators 1..k."""
    poly, _ = _run(text, 'expr', mode, generators)
    return poly


def parse_identities(text, mode=None):
    """Parse "A = B [= C ...]" into one Identity per consecutive difference."""
    polys, names = _run(text, 'chain', mode)
    return [Identity(p, names, text.strip()) for p in polys]


def parse_identity(text, mode=None):
    identities = parse_identities(text, mode)
    if len(identities) != 1:
        raise ParseError(f"expected a single '=' in {text.strip()!r}")
    return identities[0]


def parse_variety_file(text):
    """Parse variety blocks; each identity keeps its own variable scope."""
    tree = _parse_tree(text, 'file')
    seen = {}
    for block in tree.children:
        name_token, body = block.children
        name = str(name_token)
        if name in seen:
            raise RegistryError(f"duplicate variety name {name!r} (line {name_token.line})")
        if body.data == 'free_body':
            seen[name] = VarietyDef(name, (), free=True)
            continue
        if not body.children:
            raise RegistryError(f"variety {name!r} has an empty body; write 'free' for the free magma")
        identities = []
        for chain in body.children:
            polys, names = _transform(chain)
            source = text[chain.meta.start_pos:chain.meta.end_pos]
            identities.extend(Identity(p, names, source) for p in polys)
        seen[name] = VarietyDef(name, tuple(identities))
    return list(seen.values())
