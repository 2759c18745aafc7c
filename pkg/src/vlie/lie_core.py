"""Finite-dimensional Lie algebras by structure constants, invariant forms,
and the Poisson bracket they induce on polynomial algebras."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .formal_calc import rat, rat_str


class SymPoly:
    """Polynomial in a fixed ordered set of symbols, Fraction coefficients.

    Exponents are nonnegative; terms are kept in a map from exponent tuples
    to nonzero coefficients, listed graded-lexicographically.
    """

    __slots__ = ("vars", "coeffs")

    def __init__(self, variables: Iterable[str], coeffs: Mapping[tuple, object] | None = None):
        self.vars = tuple(variables)
        clean: dict[tuple, Fraction] = {}
        if coeffs:
            for exps, c in coeffs.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != len(self.vars):
                    raise ValueError("exponent arity does not match variable set")
                if any(e < 0 for e in exps):
                    raise ValueError("polynomial exponents must be nonnegative")
                c = rat(c)
                if c:
                    clean[exps] = clean.get(exps, Fraction(0)) + c
                    if not clean[exps]:
                        del clean[exps]
        self.coeffs = clean

    @classmethod
    def zero(cls, variables) -> "SymPoly":
        return cls(variables)

    @classmethod
    def constant(cls, variables, c) -> "SymPoly":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): rat(c)})

    @classmethod
    def generator(cls, variables, name, c=1) -> "SymPoly":
        variables = tuple(variables)
        i = variables.index(name)
        e = [0] * len(variables)
        e[i] = 1
        return cls(variables, {tuple(e): rat(c)})

    def is_zero(self) -> bool:
        return not self.coeffs

    def total_degree(self) -> int:
        return max((sum(e) for e in self.coeffs), default=0)

    def terms(self):
        """Graded-lex order, leading (highest) terms first."""
        return sorted(self.coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def _check(self, other: "SymPoly"):
        if self.vars != other.vars:
            raise ValueError("variable sets differ")

    def __add__(self, other: "SymPoly") -> "SymPoly":
        self._check(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, Fraction(0)) + c
        return SymPoly(self.vars, out)

    def __neg__(self) -> "SymPoly":
        return SymPoly(self.vars, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "SymPoly") -> "SymPoly":
        return self + (-other)

    def scale(self, c) -> "SymPoly":
        c = rat(c)
        return SymPoly(self.vars, {e: c * v for e, v in self.coeffs.items()})

    def __mul__(self, other: "SymPoly") -> "SymPoly":
        self._check(other)
        out: dict[tuple, Fraction] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return SymPoly(self.vars, out)

    def partial(self, name: str) -> "SymPoly":
        i = self.vars.index(name)
        out: dict[tuple, Fraction] = {}
        for e, c in self.coeffs.items():
            if e[i] == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            out[tuple(ne)] = out.get(tuple(ne), Fraction(0)) + c * e[i]
        return SymPoly(self.vars, out)

    def substitute(self, values: Mapping[str, object]) -> "SymPoly":
        """Evaluate some variables at rational values; keeps the var set."""
        vals = {self.vars.index(n): rat(v) for n, v in values.items()}
        out: dict[tuple, Fraction] = {}
        for e, c in self.coeffs.items():
            for i, v in vals.items():
                if e[i]:
                    c = c * v ** e[i]
            ne = tuple(0 if i in vals else x for i, x in enumerate(e))
            out[ne] = out.get(ne, Fraction(0)) + c
        return SymPoly(self.vars, out)

    def rename(self, variables: Iterable[str]) -> "SymPoly":
        return SymPoly(variables, self.coeffs)

    def __eq__(self, other) -> bool:
        return (isinstance(other, SymPoly)
                and self.vars == other.vars and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.vars, frozenset(self.coeffs.items())))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for exps, c in self.terms():
            mono = "*".join(
                f"{v}^{e}" if e > 1 else v
                for v, e in zip(self.vars, exps) if e
            )
            if not mono:
                bits.append(rat_str(c))
            elif c == 1:
                bits.append(mono)
            elif c == -1:
                bits.append(f"-{mono}")
            else:
                bits.append(f"{rat_str(c)}*{mono}")
        return " + ".join(bits).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# Lie algebras
# ---------------------------------------------------------------------------

def _normalize_table(names, table) -> dict[tuple[int, int], dict[int, Fraction]]:
    """Index a {(i, j) or (name, name): {k or name: coeff}} table by position."""
    idx = {n: i for i, n in enumerate(names)}

    def pos(x):
        return idx[x] if isinstance(x, str) else int(x)

    out: dict[tuple[int, int], dict[int, Fraction]] = {}
    for (a, b), val in table.items():
        entry: dict[int, Fraction] = {}
        for k, c in val.items():
            c = rat(c)
            if c:
                entry[pos(k)] = entry.get(pos(k), Fraction(0)) + c
        out[(pos(a), pos(b))] = {k: c for k, c in entry.items() if c}
    return out


def _complete_table(names, table):
    """Fill the unstated orientation of each pair by antisymmetry.

    Pairs stated in both orientations are checked for consistency; stated
    diagonal brackets must vanish.  Returns (full table, problems).
    """
    names = tuple(names)
    t = _normalize_table(names, table)
    problems = []
    full: dict[tuple[int, int], dict[int, Fraction]] = {}
    for (i, j), entry in t.items():
        if i == j and entry:
            problems.append(f"nonzero self-bracket [{names[i]},{names[i]}]")
            continue
        full[(i, j)] = entry
    for (i, j), entry in list(full.items()):
        if (j, i) in t:
            other = t[(j, i)]
            for k in set(entry) | set(other):
                if entry.get(k, Fraction(0)) + other.get(k, Fraction(0)) != 0:
                    problems.append(
                        f"antisymmetry fails on ([{names[i]},{names[j]}], {names[k]})"
                    )
                    break
        else:
            full[(j, i)] = {k: -c for k, c in entry.items()}
    return full, problems


def check_lie_axioms(names, table) -> list[str]:
    """Report antisymmetry and Jacobi violations of a raw bracket table.

    The table maps ordered basis pairs to coordinate dicts; a pair given in
    one orientation only is completed by antisymmetry, and missing pairs
    are zero brackets.  Violations are data, not exceptions.
    """
    names = tuple(names)
    r = len(names)
    t, problems = _complete_table(names, table)

    def bk(i, j):
        return t.get((i, j), {})

    def bk_vec(vec: dict[int, Fraction], j: int) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for i, c in vec.items():
            for k, v in bk(i, j).items():
                out[k] = out.get(k, Fraction(0)) + c * v
        return out

    for i in range(r):
        for j in range(i + 1, r):
            for k in range(j + 1, r):
                acc: dict[int, Fraction] = {}
                for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
                    for p, v in bk_vec(bk(a, b), c).items():
                        acc[p] = acc.get(p, Fraction(0)) + v
                if any(acc.values()):
                    problems.append(
                        f"Jacobi fails on ({names[i]},{names[j]},{names[k]})"
                    )
    return problems


class FiniteLieAlgebra:
    """Lie algebra given by structure constants on an ordered basis.

    Construction validates antisymmetry and the Jacobi identity eagerly;
    invalid data only exists as raw tables fed to check_lie_axioms.
    """

    __slots__ = ("names", "table")

    def __init__(self, names, table):
        self.names = tuple(names)
        problems = check_lie_axioms(self.names, table)
        if problems:
            raise ValueError("not a Lie algebra: " + "; ".join(problems[:3]))
        full, _ = _complete_table(self.names, table)
        self.table = {pair: entry for pair, entry in full.items() if entry}

    @property
    def dim(self) -> int:
        return len(self.names)

    def bracket_basis(self, i: int, j: int) -> dict[int, Fraction]:
        return self.table.get((i, j), {})

    def bracket_poly(self, i: int, j: int) -> SymPoly:
        return SymPoly(self.names, {
            tuple(1 if p == k else 0 for p in range(self.dim)): c
            for k, c in self.bracket_basis(i, j).items()
        })

    def generator(self, name: str) -> SymPoly:
        return SymPoly.generator(self.names, name)


class BilinearForm:
    """Symmetric bilinear form as a matrix over a Lie algebra basis."""

    __slots__ = ("matrix",)

    def __init__(self, matrix, require_symmetric: bool = True):
        self.matrix = tuple(tuple(rat(c) for c in row) for row in matrix)
        n = len(self.matrix)
        if any(len(row) != n for row in self.matrix):
            raise ValueError("form matrix must be square")
        if require_symmetric:
            for i in range(n):
                for j in range(n):
                    if self.matrix[i][j] != self.matrix[j][i]:
                        raise ValueError("form matrix must be symmetric")

    def value(self, i: int, j: int) -> Fraction:
        return self.matrix[i][j]

    def determinant(self) -> Fraction:
        m = [list(row) for row in self.matrix]
        n = len(m)
        det = Fraction(1)
        for col in range(n):
            piv = next((r for r in range(col, n) if m[r][col]), None)
            if piv is None:
                return Fraction(0)
            if piv != col:
                m[col], m[piv] = m[piv], m[col]
                det = -det
            det *= m[col][col]
            inv = 1 / m[col][col]
            for r in range(col + 1, n):
                f = m[r][col] * inv
                if f:
                    for c2 in range(col, n):
                        m[r][c2] -= f * m[col][c2]
        return det

    def is_nondegenerate(self) -> bool:
        return self.determinant() != 0


def check_invariance(g: FiniteLieAlgebra, form: BilinearForm) -> list[str]:
    """List basis triples violating ([a,b]|c) = (a|[b,c])."""
    r = g.dim
    if len(form.matrix) != r:
        raise ValueError("form dimension does not match the algebra")
    problems = []
    for i in range(r):
        for j in range(r):
            for k in range(r):
                lhs = sum(
                    (c * form.value(p, k) for p, c in g.bracket_basis(i, j).items()),
                    Fraction(0),
                )
                rhs = sum(
                    (c * form.value(i, p) for p, c in g.bracket_basis(j, k).items()),
                    Fraction(0),
                )
                if lhs != rhs:
                    problems.append(
                        f"invariance fails on ({g.names[i]},{g.names[j]},{g.names[k]})"
                    )
    return problems


def sym_poisson(g: FiniteLieAlgebra, f: SymPoly, h: SymPoly) -> SymPoly:
    """{f, h} = sum_{i,j} (df/du_i)(dh/du_j) [u_i, u_j] on the symmetric algebra."""
    if f.vars != g.names or h.vars != g.names:
        raise ValueError("polynomials must live on the algebra's basis symbols")
    out = SymPoly.zero(g.names)
    partials_f = {i: f.partial(n) for i, n in enumerate(g.names)}
    partials_h = {j: h.partial(n) for j, n in enumerate(g.names)}
    for i, pf in partials_f.items():
        if pf.is_zero():
            continue
        for j, ph in partials_h.items():
            if ph.is_zero() or not g.bracket_basis(i, j):
                continue
            out = out + pf * ph * g.bracket_poly(i, j)
    return out


# ---------------------------------------------------------------------------
# Stock algebras
# ---------------------------------------------------------------------------

def sl2() -> FiniteLieAlgebra:
    """sl2 with [h,e] = 2e, [h,f] = -2f, [e,f] = h."""
    return FiniteLieAlgebra(
        ("e", "h", "f"),
        {("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}, ("e", "f"): {"h": 1}},
    )


def sl2_form() -> BilinearForm:
    """The invariant form with (e|f) = 1, (h|h) = 2."""
    return BilinearForm([[0, 0, 1], [0, 2, 0], [1, 0, 0]])


def heis3() -> FiniteLieAlgebra:
    """Two-step nilpotent algebra [x,y] = z."""
    return FiniteLieAlgebra(("x", "y", "z"), {("x", "y"): {"z": 1}})


def abelian(n: int) -> FiniteLieAlgebra:
    return FiniteLieAlgebra(tuple(f"a{i}" for i in range(1, n + 1)), {})
