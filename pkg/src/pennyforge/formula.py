"""ETR-INV formulas: parsing, evaluation and a small grid-search solver.

The source language is a conjunction of constraints over variables ranged
in [1/2, 2].  Two constraint forms exist: ``x + y = z`` and ``x * y = 1``.
The concrete syntax is line oriented::

    vars x, y, z;
    x + y = z;
    x * y = 1;

Whitespace is insignificant and statements are separated by ``;``.  A JSON
form is also accepted (see :func:`from_json` / :func:`to_json`).
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field

from .geom import DEFAULT_TOL, Tolerance

__all__ = [
    "VAR_LO",
    "VAR_HI",
    "Constraint",
    "Add",
    "Inv",
    "Formula",
    "ParseError",
    "parse",
    "print_formula",
    "from_json",
    "to_json",
    "evaluate",
    "constraint_residual",
    "brute_solve",
]

VAR_LO = 0.5
VAR_HI = 2.0

_NAME = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*$")


class ParseError(ValueError):
    """Malformed formula text; carries a 1-based line/column position."""

    def __init__(self, message, line, col):
        super().__init__("line %d, col %d: %s" % (line, col, message))
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Constraint:
    """Either Add(x, y, z) meaning x + y = z, or Inv(x, y) meaning x*y = 1."""

    kind: str  # "add" | "inv"
    args: tuple

    def __post_init__(self):
        if self.kind not in ("add", "inv"):
            raise ValueError("unknown constraint kind %r" % (self.kind,))
        n = 3 if self.kind == "add" else 2
        if len(self.args) != n:
            raise ValueError("%s constraint takes %d operands" % (self.kind, n))

    def variables(self):
        return self.args

    def __str__(self):
        if self.kind == "add":
            return "%s + %s = %s" % self.args
        return "%s * %s = 1" % self.args


def Add(x, y, z):
    return Constraint("add", (x, y, z))


def Inv(x, y):
    return Constraint("inv", (x, y))


@dataclass(frozen=True)
class Formula:
    variables: tuple
    constraints: tuple = field(default_factory=tuple)

    def __post_init__(self):
        seen = set()
        for v in self.variables:
            if not _NAME.match(v):
                raise ValueError("bad variable name %r" % (v,))
            if v in seen:
                raise ValueError("duplicate variable %r" % (v,))
            seen.add(v)
        for c in self.constraints:
            for v in c.variables():
                if v not in seen:
                    raise ValueError("constraint references undeclared %r" % (v,))

    def __str__(self):
        return print_formula(self)


def _pos(text, offset):
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


_STMT = re.compile(
    r"""^\s*(?:
        (?P<vars>vars\s+(?P<names>[^;]+))
      | (?P<add>(?P<a1>\w+)\s*\+\s*(?P<a2>\w+)\s*=\s*(?P<a3>\w+))
      | (?P<inv>(?P<i1>\w+)\s*\*\s*(?P<i2>\w+)\s*=\s*1)
    )\s*$""",
    re.VERBOSE,
)


def parse(text):
    """Parse formula text into a :class:`Formula`.

    Raises :class:`ParseError` with position info for undeclared variables,
    duplicate declarations and malformed statements.
    """
    variables = []
    declared = set()
    constraints = []
    offset = 0
    for raw in text.split(";"):
        stmt = raw.strip()
        start = offset + (len(raw) - len(raw.lstrip()))
        offset += len(raw) + 1
        if not stmt:
            continue
        m = _STMT.match(stmt)
        line, col = _pos(text, start)
        if not m:
            raise ParseError("cannot parse statement %r" % stmt, line, col)
        if m.group("vars"):
            for name in m.group("names").split(","):
                name = name.strip()
                if not _NAME.match(name):
                    raise ParseError("bad variable name %r" % name, line, col)
                if name in declared:
                    raise ParseError("duplicate declaration of %r" % name, line, col)
                declared.add(name)
                variables.append(name)
        elif m.group("add"):
            ops = (m.group("a1"), m.group("a2"), m.group("a3"))
            for v in ops:
                if v not in declared:
                    raise ParseError("undeclared variable %r" % v, line, col)
            constraints.append(Add(*ops))
        else:
            ops = (m.group("i1"), m.group("i2"))
            for v in ops:
                if v not in declared:
                    raise ParseError("undeclared variable %r" % v, line, col)
            constraints.append(Inv(*ops))
    return Formula(tuple(variables), tuple(constraints))


def print_formula(f):
    """Canonical text form; parse(print_formula(f)) round-trips."""
    parts = []
    if f.variables:
        parts.append("vars " + ", ".join(f.variables) + ";")
    for c in f.constraints:
        parts.append(str(c) + ";")
    return "\n".join(parts) + ("\n" if parts else "")


def to_json(f):
    return json.dumps({
        "variables": list(f.variables),
        "constraints": [{"op": c.kind, "args": list(c.args)} for c in f.constraints],
    }, indent=2)


def from_json(text):
    data = json.loads(text) if isinstance(text, str) else text
    cons = tuple(Constraint(c["op"], tuple(c["args"])) for c in data.get("constraints", []))
    return Formula(tuple(data["variables"]), cons)


def load(text):
    """Accept either the line grammar or the JSON form."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return from_json(text)
    return parse(text)


def constraint_residual(c, assignment):
    """Signed defect of one constraint under an assignment."""
    if c.kind == "add":
        x, y, z = (assignment[v] for v in c.args)
        return x + y - z
    x, y = (assignment[v] for v in c.args)
    return x * y - 1.0


def evaluate(f, assignment, tol=DEFAULT_TOL):
    """True iff all variables are in [1/2, 2] and every constraint holds within eq_tol."""
    for v in f.variables:
        if v not in assignment:
            raise KeyError("assignment missing variable %r" % v)
        value = assignment[v]
        if not (VAR_LO - tol.eq_tol <= value <= VAR_HI + tol.eq_tol):
            return False
    for c in f.constraints:
        if abs(constraint_residual(c, assignment)) > tol.eq_tol:
            return False
    return True


def _total_residual(f, vals):
    assignment = dict(zip(f.variables, vals))
    return sum(constraint_residual(c, assignment) ** 2 for c in f.constraints)


def brute_solve(f, grid_step=0.05, tol=DEFAULT_TOL, max_vars=4):
    """Grid search over [1/2, 2]^k followed by coordinate-descent refinement.

    Returns a satisfying assignment or None.  A None result is *evidence*
    of unsatisfiability, not a proof: the grid plus local refinement can in
    principle miss isolated solution components, although on the smooth
    low-dimensional constraints of this language it does not in practice.
    """
    k = len(f.variables)
    if k > max_vars:
        raise ValueError("brute_solve limited to %d variables" % max_vars)
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    if k == 0:
        return {}

    n = max(2, int(round((VAR_HI - VAR_LO) / grid_step)) + 1)
    axis = [VAR_LO + (VAR_HI - VAR_LO) * i / (n - 1) for i in range(n)]

    best = None
    best_res = math.inf
    idx = [0] * k
    while True:
        vals = [axis[i] for i in idx]
        r = _total_residual(f, vals)
        if r < best_res:
            best_res = r
            best = list(vals)
        for pos in range(k):
            idx[pos] += 1
            if idx[pos] < n:
                break
            idx[pos] = 0
        else:
            break

    # Coordinate descent with shrinking step from the best grid cell.
    vals = best
    step = grid_step
    while step > 1e-13:
        improved = False
        for i in range(k):
            for delta in (-step, step):
                cand = list(vals)
                cand[i] = min(VAR_HI, max(VAR_LO, cand[i] + delta))
                r = _total_residual(f, cand)
                if r < best_res - 1e-18:
                    best_res = r
                    vals = cand
                    improved = True
        if not improved:
            step *= 0.5

    assignment = dict(zip(f.variables, vals))
    if evaluate(f, assignment, tol):
        return assignment
    return None
