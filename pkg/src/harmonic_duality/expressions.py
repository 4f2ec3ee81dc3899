"""A small, safe expression language for maps and boundary data.

Grammar (a subset of Python expression syntax)::

    expr    := expr ('+' | '-' | '*' | '/' | '**') expr
             | ('+' | '-') expr
             | NAME '(' expr ')'
             | NAME | NUMBER | '(' expr ')'

NUMBER may be an imaginary literal such as ``2j``.  Names are the declared
variables (``z`` by default) plus the constants ``pi``, ``e`` and ``i``
(imaginary unit).  Functions: ``sqrt exp log sin cos tan sinh cosh tanh
abs re im conj arg``.  Everything evaluates with complex NumPy arithmetic,
so ``sqrt`` and ``log`` are principal branches.

Expressions are compared and round-tripped through their canonical text
(``str(expr)``), which is what :func:`ast.unparse` prints for the parsed
tree.
"""

from __future__ import annotations

import ast
import math
from typing import Callable, Sequence

import numpy as np

from .errors import SchemaError

FUNCTIONS: dict[str, Callable] = {
    "sqrt": np.sqrt,
    "exp": np.exp,
    "log": np.log,
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "tanh": np.tanh,
    "abs": np.abs,
    "re": np.real,
    "im": np.imag,
    "conj": np.conj,
    "arg": np.angle,
}

CONSTANTS = {"pi": math.pi, "e": math.e, "i": 1j}

_BINOPS = {
    ast.Add: np.add,
    ast.Sub: np.subtract,
    ast.Mult: np.multiply,
    ast.Div: np.divide,
    ast.Pow: np.power,
}
_UNARY = {ast.UAdd: lambda x: x, ast.USub: np.negative}


class Expression:
    """A parsed expression in a fixed set of variables.

    >>> f = Expression("2*z + 1")
    >>> complex(f(1j))
    (1+2j)
    """

    def __init__(self, text: str, variables: Sequence[str] = ("z",)):
        if not isinstance(text, str):
            text = repr(text) if isinstance(text, (int, float)) else text
        if not isinstance(text, str) or not text.strip():
            raise SchemaError("expression must be a non-empty string")
        self.variables = tuple(variables)
        try:
            tree = ast.parse(text.strip(), mode="eval")
        except SyntaxError as exc:
            raise SchemaError(f"cannot parse expression {text!r}: {exc.msg}") from exc
        self._check(tree.body)
        self._tree = tree
        self.text = ast.unparse(tree)
        self._fn = self._compile(tree.body)

    def _check(self, node):
        if isinstance(node, ast.BinOp):
            if type(node.op) not in _BINOPS:
                raise SchemaError(f"operator {type(node.op).__name__} not allowed")
            self._check(node.left)
            self._check(node.right)
        elif isinstance(node, ast.UnaryOp):
            if type(node.op) not in _UNARY:
                raise SchemaError(f"operator {type(node.op).__name__} not allowed")
            self._check(node.operand)
        elif isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.func.id not in FUNCTIONS:
                name = getattr(node.func, "id", "?")
                raise SchemaError(f"unknown function {name!r}")
            if len(node.args) != 1 or node.keywords:
                raise SchemaError(f"{node.func.id} takes exactly one argument")
            self._check(node.args[0])
        elif isinstance(node, ast.Name):
            if node.id not in self.variables and node.id not in CONSTANTS:
                raise SchemaError(f"unknown name {node.id!r} (variables: {self.variables})")
        elif isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, (int, float, complex)):
                raise SchemaError(f"literal {node.value!r} not allowed")
        else:
            raise SchemaError(f"syntax element {type(node).__name__} not allowed")

    def _compile(self, node) -> Callable[[dict], np.ndarray]:
        if isinstance(node, ast.BinOp):
            op = _BINOPS[type(node.op)]
            left, right = self._compile(node.left), self._compile(node.right)
            return lambda env: op(left(env), right(env))
        if isinstance(node, ast.UnaryOp):
            op = _UNARY[type(node.op)]
            inner = self._compile(node.operand)
            return lambda env: op(inner(env))
        if isinstance(node, ast.Call):
            fn = FUNCTIONS[node.func.id]
            arg = self._compile(node.args[0])
            return lambda env: fn(arg(env))
        if isinstance(node, ast.Name):
            name = node.id
            if name in self.variables:
                return lambda env: env[name]
            value = CONSTANTS[name]
            return lambda env: value
        value = complex(node.value) if isinstance(node.value, complex) else float(node.value)
        return lambda env: value

    def __call__(self, *args, **kwargs):
        env = dict(zip(self.variables, args))
        env.update(kwargs)
        missing = set(self.variables) - set(env)
        if missing:
            raise TypeError(f"missing variables {sorted(missing)}")
        env = {k: np.asarray(v, dtype=complex) for k, v in env.items()}
        shape = np.broadcast_shapes(*(v.shape for v in env.values())) if env else ()
        with np.errstate(all="ignore"):
            out = self._fn(env)
        return np.broadcast_to(np.asarray(out, dtype=complex), shape).copy()

    def __str__(self):
        return self.text

    def __repr__(self):
        return f"Expression({self.text!r}, variables={self.variables!r})"

    def __eq__(self, other):
        return isinstance(other, Expression) and (self.text, self.variables) == (
            other.text,
            other.variables,
        )

    def __hash__(self):
        return hash((self.text, self.variables))


def real_function_of_point(text: str) -> Callable[[np.ndarray], np.ndarray]:
    """Boundary datum given as an expression in ``x``, ``y`` and/or ``z``.

    Returns ``f(z) -> real array`` (the real part of the expression).
    """
    expr = Expression(text, ("x", "y", "z"))

    def f(z):
        z = np.asarray(z, dtype=complex)
        return expr(x=z.real, y=z.imag, z=z).real

    f.expression = expr
    return f
