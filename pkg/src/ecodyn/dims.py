"""Dimension-tagged expression checking over the base dimensions money and time.

A stock is measured in money ($), a flow in money per time ($/s).
Relations that equate a stock to a flow, or add the two, are exactly the
dimensional contradictions this module makes machine-detectable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import StructuralError

_BINARY_OPS = {"add", "sub", "mul", "div"}
_UNARY_OPS = {"integrate_dt", "differentiate_dt"}


@dataclass(frozen=True)
class Dimension:
    """Integer exponent vector over the base dimensions (money, time)."""

    money_exp: int
    time_exp: int

    def __mul__(self, other: "Dimension") -> "Dimension":
        return Dimension(self.money_exp + other.money_exp, self.time_exp + other.time_exp)

    def __truediv__(self, other: "Dimension") -> "Dimension":
        return Dimension(self.money_exp - other.money_exp, self.time_exp - other.time_exp)

    def integrated_dt(self) -> "Dimension":
        return Dimension(self.money_exp, self.time_exp + 1)

    def differentiated_dt(self) -> "Dimension":
        return Dimension(self.money_exp, self.time_exp - 1)

    def render(self) -> str:
        """Human-readable form such as "$", "s", "1" or "$·s^-1"."""
        parts = []
        for symbol, exp in (("$", self.money_exp), ("s", self.time_exp)):
            if exp == 0:
                continue
            parts.append(symbol if exp == 1 else f"{symbol}^{exp}")
        return "·".join(parts) if parts else "1"

    def __str__(self) -> str:
        return self.render()


MONEY = Dimension(1, 0)
TIME = Dimension(0, 1)
DIMENSIONLESS = Dimension(0, 0)
FLOW = Dimension(1, -1)


@dataclass(frozen=True)
class DimExpr:
    """Expression tree over dimension-tagged named quantities.

    Leaves carry (name, Dimension); interior nodes are one of
    add/sub/mul/div and the time-integral / time-derivative unaries.
    Build leaves with :func:`var` and combine with ``+ - * /``,
    ``.integral_dt()`` and ``.derivative_dt()``.
    """

    op: str
    name: str | None = None
    dim: Dimension | None = None
    children: tuple["DimExpr", ...] = ()

    def __post_init__(self):
        if self.op == "leaf":
            if self.name is None or self.dim is None or self.children:
                raise StructuralError("leaf nodes need a name and a dimension, no children")
        elif self.op in _BINARY_OPS:
            if len(self.children) != 2:
                raise StructuralError(f"{self.op} node needs exactly two children")
        elif self.op in _UNARY_OPS:
            if len(self.children) != 1:
                raise StructuralError(f"{self.op} node needs exactly one child")
        else:
            raise StructuralError(f"unknown operation {self.op!r}")

    def __add__(self, other: "DimExpr") -> "DimExpr":
        return DimExpr("add", children=(self, _as_expr(other)))

    def __sub__(self, other: "DimExpr") -> "DimExpr":
        return DimExpr("sub", children=(self, _as_expr(other)))

    def __mul__(self, other: "DimExpr") -> "DimExpr":
        return DimExpr("mul", children=(self, _as_expr(other)))

    def __truediv__(self, other: "DimExpr") -> "DimExpr":
        return DimExpr("div", children=(self, _as_expr(other)))

    def integral_dt(self) -> "DimExpr":
        return DimExpr("integrate_dt", children=(self,))

    def derivative_dt(self) -> "DimExpr":
        return DimExpr("differentiate_dt", children=(self,))

    def render(self) -> str:
        if self.op == "leaf":
            return self.name  # type: ignore[return-value]
        if self.op in _UNARY_OPS:
            inner = self.children[0].render()
            return f"int({inner})dt" if self.op == "integrate_dt" else f"d({inner})/dt"
        symbol = {"add": " + ", "sub": " - ", "mul": "*", "div": "/"}[self.op]
        left, right = self.children
        ls, rs = left.render(), right.render()
        if self.op in {"mul", "div"}:
            if left.op in {"add", "sub"}:
                ls = f"({ls})"
            if right.op in {"add", "sub", "mul", "div"}:
                rs = f"({rs})"
        return f"{ls}{symbol}{rs}"

    def __str__(self) -> str:
        return self.render()


def var(name: str, dim: Dimension) -> DimExpr:
    """Leaf quantity with the given name and dimension."""
    return DimExpr("leaf", name=name, dim=dim)


def _as_expr(value) -> DimExpr:
    if isinstance(value, DimExpr):
        return value
    raise StructuralError(f"expected a DimExpr, got {type(value).__name__}")


@dataclass(frozen=True)
class Violation:
    """First inhomogeneous add/sub node found during an audit."""

    side: str  # "lhs" or "rhs"
    path: tuple[int, ...]
    expr: str
    left_dim: Dimension
    right_dim: Dimension

    def __str__(self) -> str:
        where = "/".join(str(i) for i in self.path) or "root"
        return (
            f"{self.side}@{where}: {self.expr} mixes "
            f"{self.left_dim.render()} with {self.right_dim.render()}"
        )


@dataclass(frozen=True)
class ConsistencyReport:
    consistent: bool
    lhs_dim: Dimension
    rhs_dim: Dimension
    first_violation: Violation | None

    def render(self) -> str:
        verdict = "consistent" if self.consistent else "inconsistent"
        line = f"{verdict}: lhs {self.lhs_dim.render()} vs rhs {self.rhs_dim.render()}"
        if self.first_violation is not None:
            line += f" ({self.first_violation})"
        return line


def _evaluate(expr: DimExpr, side: str, path: tuple[int, ...], violations: list[Violation]) -> Dimension:
    if expr.op == "leaf":
        return expr.dim  # type: ignore[return-value]
    if expr.op in _UNARY_OPS:
        inner = _evaluate(expr.children[0], side, path + (0,), violations)
        return inner.integrated_dt() if expr.op == "integrate_dt" else inner.differentiated_dt()
    left = _evaluate(expr.children[0], side, path + (0,), violations)
    right = _evaluate(expr.children[1], side, path + (1,), violations)
    if expr.op == "mul":
        return left * right
    if expr.op == "div":
        return left / right
    # add/sub must be homogeneous; propagate the left dimension either way
    if left != right:
        violations.append(Violation(side, path, expr.render(), left, right))
    return left


def check_relation(lhs: DimExpr, rhs: DimExpr) -> ConsistencyReport:
    """Audit the relation lhs = rhs.

    Consistent iff every add/sub node on both sides is homogeneous and
    the two sides carry the same dimension.  The first offending node
    (leftmost, depth-first) is reported when there is one.
    """
    violations: list[Violation] = []
    lhs_dim = _evaluate(_as_expr(lhs), "lhs", (), violations)
    rhs_dim = _evaluate(_as_expr(rhs), "rhs", (), violations)
    first = violations[0] if violations else None
    if first is None and lhs_dim != rhs_dim:
        first = Violation("relation", (), f"{lhs.render()} = {rhs.render()}", lhs_dim, rhs_dim)
    return ConsistencyReport(
        consistent=first is None,
        lhs_dim=lhs_dim,
        rhs_dim=rhs_dim,
        first_violation=first,
    )
