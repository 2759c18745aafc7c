"""Finite Poisson algebras attached to positive definite even lattices.

From a Gram matrix this module enumerates the finite set of lattice vectors
alpha with <alpha - beta, beta> <= 0 for all beta, fixes a bimultiplicative
sign cocycle, and builds the finitely presented commutative algebra on
symbols Z_i (basis coordinates) and X_beta (surviving group-algebra
classes), together with its Poisson bracket.  Vanishing of a monomial
Z^m X_beta is decided by exact linear algebra in the polynomial ring
modulo powers of the linear forms attached to the relations.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .formal_calc import rat, rat_str
from .lie_core import SymPoly

Vec = tuple[int, ...]


class EvenLattice:
    """Integer lattice given by a symmetric Gram matrix with even diagonal."""

    def __init__(self, gram):
        self.gram = tuple(tuple(int(x) for x in row) for row in gram)
        r = len(self.gram)
        if any(len(row) != r for row in self.gram):
            raise ValueError("Gram matrix must be square")
        for i in range(r):
            if self.gram[i][i] % 2:
                raise ValueError("diagonal entries must be even")
            for j in range(r):
                if self.gram[i][j] != self.gram[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
        self.rank = r

    def pair(self, a: Vec, b: Vec) -> int:
        return sum(a[i] * self.gram[i][j] * b[j]
                   for i in range(self.rank) for j in range(self.rank))

    def norm(self, a: Vec) -> int:
        return self.pair(a, a)

    def minors(self) -> list[Fraction]:
        """Leading principal minors, exact."""
        out = []
        for k in range(1, self.rank + 1):
            sub = [[Fraction(self.gram[i][j]) for j in range(k)] for i in range(k)]
            det = Fraction(1)
            ok = True
            for col in range(k):
                piv = next((r for r in range(col, k) if sub[r][col]), None)
                if piv is None:
                    det = Fraction(0)
                    ok = False
                    break
                if piv != col:
                    sub[col], sub[piv] = sub[piv], sub[col]
                    det = -det
                det *= sub[col][col]
                inv = 1 / sub[col][col]
                for r2 in range(col + 1, k):
                    f = sub[r2][col] * inv
                    if f:
                        for c2 in range(col, k):
                            sub[r2][c2] -= f * sub[col][c2]
            out.append(det if ok else Fraction(0))
        return out

    def is_positive_definite(self) -> bool:
        return all(m > 0 for m in self.minors())

    def is_degenerate(self) -> bool:
        return self.minors()[-1] == 0 if self.rank else False

    def inverse_gram(self) -> list[list[Fraction]]:
        r = self.rank
        aug = [[Fraction(self.gram[i][j]) for j in range(r)]
               + [Fraction(1 if i == j else 0) for j in range(r)] for i in range(r)]
        for col in range(r):
            piv = next((rr for rr in range(col, r) if aug[rr][col]), None)
            if piv is None:
                raise ValueError("degenerate Gram matrix")
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = 1 / aug[col][col]
            aug[col] = [x * inv for x in aug[col]]
            for rr in range(r):
                if rr != col and aug[rr][col]:
                    f = aug[rr][col]
                    aug[rr] = [x - f * y for x, y in zip(aug[rr], aug[col])]
        return [row[r:] for row in aug]

    def dual_exponent(self) -> int:
        """Smallest k >= 1 with k * gram^{-1} integral."""
        inv = self.inverse_gram()
        k = 1
        for row in inv:
            for x in row:
                k = k * x.denominator // math.gcd(k, x.denominator)
        return k

    def vectors_with_norm_at_most(self, bound: int) -> list[Vec]:
        """All lattice vectors of norm <= bound (positive definite only)."""
        if not self.is_positive_definite():
            raise ValueError("short-vector enumeration needs positive definiteness")
        inv = self.inverse_gram()
        boxes = []
        for i in range(self.rank):
            # |b_i| = |<v, dual_i>| <= sqrt(norm * (G^-1)_ii)
            limit_sq = Fraction(bound) * inv[i][i]
            lim = int(math.isqrt(int(limit_sq))) + 1
            while Fraction(lim * lim) > limit_sq:
                lim -= 1
            boxes.append(range(-lim, lim + 1))
        out = []
        for v in itertools.product(*boxes):
            if self.norm(v) <= bound:
                out.append(v)
        return out


def negative_norm_witness(lattice: EvenLattice, radius: int = 6) -> Vec | None:
    """Search a coordinate box for a vector of negative norm."""
    for v in itertools.product(range(-radius, radius + 1), repeat=lattice.rank):
        if lattice.norm(v) < 0:
            return v
    return None


def detect_indefinite(lattice: EvenLattice) -> dict:
    """Classify the Gram matrix; non positive definite means a zero algebra.

    Degenerate lattices are rejected as out of scope.
    """
    if lattice.is_degenerate():
        raise ValueError("degenerate Gram matrix is out of scope")
    if lattice.is_positive_definite():
        return {"positive_definite": True, "zero_algebra": False, "witness": None}
    witness = negative_norm_witness(lattice)
    return {
        "positive_definite": False,
        "zero_algebra": True,
        "witness": list(witness) if witness is not None else None,
        "reason": "a class of negative norm multiplies against its inverse "
                  "down to the unit, forcing the whole quotient to collapse",
    }


def enumerate_c2(lattice: EvenLattice) -> list[Vec]:
    """The finite set {alpha : <alpha - beta, beta> <= 0 for all beta}.

    Candidates range over the dual-coordinate box |a_i| <= k (G^-1)_ii with
    k the dual exponent; each candidate is tested against the finitely many
    beta of norm up to |alpha|^2 (a violating beta is strictly shorter than
    alpha by Cauchy-Schwarz).
    """
    if not lattice.is_positive_definite():
        raise ValueError("the survivor set needs a positive definite lattice")
    k = lattice.dual_exponent()
    inv = lattice.inverse_gram()
    boxes = []
    for i in range(lattice.rank):
        lim_f = Fraction(k) * inv[i][i]
        lim = int(lim_f)  # k * (G^-1)_ii is a nonnegative integer here
        boxes.append(range(-lim, lim + 1))
    out = []
    for alpha in itertools.product(*boxes):
        norm_a = lattice.norm(alpha)
        ok = True
        for beta in lattice.vectors_with_norm_at_most(norm_a):
            if lattice.pair(alpha, beta) - lattice.norm(beta) > 0:
                ok = False
                break
        if ok:
            out.append(alpha)
    return sorted(out)


class Cocycle:
    """Bimultiplicative sign cocycle with the standard upper-triangular gauge.

    On basis vectors: eps(a_i, a_j) = (-1)^{<a_i,a_j>} for i > j and 1 for
    i <= j; extended bimultiplicatively.  The commutator identity
    eps(a,b) eps(b,a) = (-1)^{<a,b>} follows from evenness of the diagonal.
    """

    def __init__(self, lattice: EvenLattice):
        self.lattice = lattice

    def value(self, a: Vec, b: Vec) -> int:
        g = self.lattice.gram
        total = 0
        for i in range(self.lattice.rank):
            for j in range(self.lattice.rank):
                if i > j:
                    total += a[i] * b[j] * g[i][j]
        return -1 if total % 2 else 1

    def commutator_identity_problems(self, vectors: Iterable[Vec]) -> list[str]:
        problems = []
        vectors = list(vectors)
        for a in vectors:
            for b in vectors:
                lhs = self.value(a, b) * self.value(b, a)
                rhs = -1 if self.lattice.pair(a, b) % 2 else 1
                if lhs != rhs:
                    problems.append(f"cocycle identity fails at {a}, {b}")
        return problems


def build_cocycle(lattice: EvenLattice) -> Cocycle:
    eps = Cocycle(lattice)
    problems = eps.commutator_identity_problems(enumerate_c2(lattice))
    if problems:
        raise AssertionError("; ".join(problems[:3]))
    return eps


# ---------------------------------------------------------------------------
# Graded ideal reducers
# ---------------------------------------------------------------------------

def power_of_linear(rank: int, alpha: Vec, e: int) -> dict[tuple, Fraction]:
    """(alpha . Z)^e as an exponent-tuple coefficient dict."""
    out = {(0,) * rank: Fraction(1)}
    lin = {tuple(1 if t == i else 0 for t in range(rank)): Fraction(alpha[i])
           for i in range(rank) if alpha[i]}
    for _ in range(e):
        nxt: dict[tuple, Fraction] = {}
        for m1, c1 in out.items():
            for m2, c2 in lin.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                nxt[m] = nxt.get(m, Fraction(0)) + c1 * c2
        out = {m: c for m, c in nxt.items() if c}
    return out


class PowerIdealReducer:
    """Normal forms in Q[Z_1..Z_r] modulo powers of linear forms.

    The ideal is generated by (sum_i alpha_i Z_i)^(e_alpha); per total
    degree a row echelon basis of the ideal's span is prepared and
    polynomials are reduced against it.  Once a graded piece fills up, all
    higher degrees vanish.
    """

    def __init__(self, rank: int, generators: Sequence[tuple[Vec, int]]):
        self.rank = rank
        self.generators = list(generators)
        self._echelon: dict[int, dict[tuple, dict]] = {}
        self._basis: dict[int, list[tuple]] = {}
        self._max_degree: int | None = None

    def _monomials(self, degree: int) -> list[tuple]:
        def rec(slots, left):
            if slots == 1:
                yield (left,)
                return
            for e in range(left + 1):
                for rest in rec(slots - 1, left - e):
                    yield (e,) + rest
        return sorted(rec(self.rank, degree), reverse=True)

    def _prepare(self, degree: int):
        if degree in self._echelon:
            return
        echelon: dict[tuple, dict] = {}

        def insert(vec: dict):
            vec = dict(vec)
            while vec:
                lead = max(vec)
                row = echelon.get(lead)
                if row is None:
                    lv = vec[lead]
                    echelon[lead] = {m: c / lv for m, c in vec.items()}
                    return
                f = vec[lead]
                for m, c in row.items():
                    v = vec.get(m, Fraction(0)) - f * c
                    if v:
                        vec[m] = v
                    else:
                        vec.pop(m, None)

        for alpha, e in self.generators:
            if e > degree:
                continue
            base = power_of_linear(self.rank, alpha, e)
            pad = degree - e
            for mono in self._monomials(pad):
                shifted = {
                    tuple(x + y for x, y in zip(m, mono)): c
                    for m, c in base.items()
                }
                insert(shifted)
        self._echelon[degree] = echelon
        self._basis[degree] = [m for m in self._monomials(degree) if m not in echelon]

    def basis(self, degree: int) -> list[tuple]:
        self._prepare(degree)
        return self._basis[degree]

    def max_degree(self) -> int:
        """Largest degree with a nonzero graded piece."""
        if self._max_degree is None:
            d = 0
            while self.basis(d):
                d += 1
            self._max_degree = d - 1
        return self._max_degree

    def reduce(self, coeffs: Mapping[tuple, Fraction]) -> dict[tuple, Fraction]:
        """Normal form of an arbitrary (graded-split) polynomial."""
        by_degree: dict[int, dict] = {}
        for m, c in coeffs.items():
            if c:
                part = by_degree.setdefault(sum(m), {})
                part[m] = part.get(m, Fraction(0)) + c
        out: dict[tuple, Fraction] = {}
        for degree, part in by_degree.items():
            if degree > self.max_degree():
                continue
            self._prepare(degree)
            echelon = self._echelon[degree]
            vec = {m: c for m, c in part.items() if c}
            while vec:
                lead = max(vec)
                row = echelon.get(lead)
                if row is None:
                    out[lead] = out.get(lead, Fraction(0)) + vec.pop(lead)
                    continue
                f = vec[lead]
                for m, c in row.items():
                    v = vec.get(m, Fraction(0)) - f * c
                    if v:
                        vec[m] = v
                    else:
                        vec.pop(m, None)
        return {m: c for m, c in out.items() if c}


# ---------------------------------------------------------------------------
# The finite presented algebra
# ---------------------------------------------------------------------------

class PLAlgebra:
    """Finite-dimensional commutative algebra spanned by Z^m and Z^m X_beta.

    Elements are dicts keyed by (sector, monomial): sector () for the pure
    polynomial part, sector beta for the X_beta component.  Multiplication
    folds the X-sector relations and reduces each sector by its power
    ideal; the Poisson bracket extends the generator table as a
    biderivation and is verified exhaustively together with associativity.
    """

    def __init__(self, lattice: EvenLattice):
        info = detect_indefinite(lattice)
        self.lattice = lattice
        self.zero_algebra = info["zero_algebra"]
        self.indefinite_info = info
        if self.zero_algebra:
            self.c2 = []
            self.sectors = {}
            self.basis: list[tuple] = []
            self.eps = None
            return
        self.c2 = enumerate_c2(lattice)
        self.eps = build_cocycle(lattice)
        self.nonzero_c2 = [a for a in self.c2 if any(a)]
        r = lattice.rank
        zero_gens = [
            (alpha, 1 + lattice.norm(alpha)) for alpha in self.nonzero_c2
        ]
        self.sectors: dict[tuple, PowerIdealReducer] = {(): PowerIdealReducer(r, zero_gens)}
        for beta in self.nonzero_c2:
            gens = []
            for alpha in self.nonzero_c2:
                diff = tuple(b - a for a, b in zip(alpha, beta))
                e = 1 - lattice.pair(diff, alpha)
                gens.append((alpha, e))
            self.sectors[beta] = PowerIdealReducer(r, gens)
        self.basis = []
        for sector, reducer in self._sorted_sectors():
            for d in range(reducer.max_degree() + 1):
                for mono in reducer.basis(d):
                    self.basis.append((sector, mono))
        self._mult_table: dict | None = None
        self._bracket_table: dict | None = None

    def _sorted_sectors(self):
        return [((), self.sectors[()])] + [
            (b, self.sectors[b]) for b in self.nonzero_c2
        ]

    @property
    def dim(self) -> int:
        return len(self.basis)

    # -- element helpers ------------------------------------------------------

    def element(self, items) -> dict:
        out: dict = {}
        for (sector, mono), c in dict(items).items():
            c = rat(c)
            if c:
                out[(sector, mono)] = out.get((sector, mono), Fraction(0)) + c
        return {k: v for k, v in out.items() if v}

    def z_gen(self, i: int) -> dict:
        mono = tuple(1 if t == i else 0 for t in range(self.lattice.rank))
        return self.reduce({((), mono): Fraction(1)})

    def z_of(self, alpha: Vec) -> dict:
        out: dict = {}
        for i, a in enumerate(alpha):
            if a:
                mono = tuple(1 if t == i else 0 for t in range(self.lattice.rank))
                out[((), mono)] = out.get(((), mono), Fraction(0)) + a
        return self.reduce(out)

    def x_gen(self, beta: Vec) -> dict:
        beta = tuple(beta)
        if not any(beta):
            return self.one()
        if beta not in self.sectors:
            raise KeyError(f"{beta} does not label a surviving class")
        return self.reduce({(beta, (0,) * self.lattice.rank): Fraction(1)})

    def one(self) -> dict:
        return {((), (0,) * self.lattice.rank): Fraction(1)}

    def reduce(self, element: Mapping) -> dict:
        out: dict = {}
        by_sector: dict[tuple, dict] = {}
        for (sector, mono), c in element.items():
            by_sector.setdefault(sector, {})[mono] = (
                by_sector.setdefault(sector, {}).get(mono, Fraction(0)) + c
            )
        for sector, coeffs in by_sector.items():
            red = self.sectors[sector].reduce(coeffs)
            for mono, c in red.items():
                out[(sector, mono)] = c
        return out

    # -- multiplication ----------------------------------------------------------

    def _mono_mul(self, m1: tuple, m2: tuple) -> tuple:
        return tuple(x + y for x, y in zip(m1, m2))

    def _power_of_linear(self, alpha: Vec, e: int) -> dict[tuple, Fraction]:
        return power_of_linear(self.lattice.rank, alpha, e)

    def multiply(self, a: Mapping, b: Mapping) -> dict:
        if self.zero_algebra:
            return {}
        out: dict = {}
        for (s1, m1), c1 in a.items():
            for (s2, m2), c2 in b.items():
                c = c1 * c2
                m = self._mono_mul(m1, m2)
                if s1 == () or s2 == ():
                    sector = s2 if s1 == () else s1
                    out[(sector, m)] = out.get((sector, m), Fraction(0)) + c
                    continue
                alpha, beta = s1, s2
                target = tuple(x + y for x, y in zip(alpha, beta))
                if tuple(target) not in self.sectors and any(target):
                    continue  # product of classes falls out of the survivor set
                pairing = self.lattice.pair(alpha, beta)
                n = -pairing
                fact = math.factorial(n)
                sign = self.eps.value(alpha, beta)
                power = self._power_of_linear(alpha, n)
                sector = target if any(target) else ()
                for pm, pc in power.items():
                    mono = self._mono_mul(m, pm)
                    out[(sector, mono)] = out.get((sector, mono), Fraction(0)) + (
                        c * pc * Fraction(sign, fact)
                    )
        return self.reduce(out)

    # -- the Poisson bracket --------------------------------------------------------

    def _gen_bracket(self, g1: tuple, g2: tuple) -> dict:
        """Bracket of generators; generators are ('z', i) or ('x', beta)."""
        lat = self.lattice
        if g1[0] == "z" and g2[0] == "z":
            return {}
        if g1[0] == "z" and g2[0] == "x":
            i, beta = g1[1], g2[1]
            unit = tuple(1 if t == i else 0 for t in range(lat.rank))
            return self.element({(beta, (0,) * lat.rank): lat.pair(unit, beta)})
        if g1[0] == "x" and g2[0] == "z":
            out = self._gen_bracket(g2, g1)
            return {k: -v for k, v in out.items()}
        alpha, beta = g1[1], g2[1]
        pairing = lat.pair(alpha, beta)
        if pairing >= 0:
            return {}
        target = tuple(x + y for x, y in zip(alpha, beta))
        if any(target) and target not in self.sectors:
            return {}
        n = -pairing - 1
        sign = self.eps.value(alpha, beta)
        power = self._power_of_linear(alpha, n)
        sector = target if any(target) else ()
        out: dict = {}
        for pm, pc in power.items():
            out[(sector, pm)] = out.get((sector, pm), Fraction(0)) + (
                pc * Fraction(sign, math.factorial(n))
            )
        return self.reduce(out)

    def _basis_factors(self, key: tuple) -> list[tuple]:
        """A basis monomial as a list of generators."""
        sector, mono = key
        factors = []
        for i, e in enumerate(mono):
            factors.extend([("z", i)] * e)
        if any(sector):
            factors.append(("x", sector))
        return factors

    def bracket(self, a: Mapping, b: Mapping) -> dict:
        """Biderivation extension over basis monomial factors."""
        if self.zero_algebra:
            return {}
        out: dict = {}
        for ka, ca in a.items():
            for kb, cb in b.items():
                fa = self._basis_factors(ka)
                fb = self._basis_factors(kb)
                for i, gi in enumerate(fa):
                    rest_a = fa[:i] + fa[i + 1:]
                    for j, gj in enumerate(fb):
                        rest_b = fb[:j] + fb[j + 1:]
                        core = self._gen_bracket(gi, gj)
                        if not core:
                            continue
                        prod = core
                        for g in rest_a + rest_b:
                            prod = self.multiply(prod, self._gen_element(g))
                        for k, v in prod.items():
                            nv = out.get(k, Fraction(0)) + ca * cb * v
                            if nv:
                                out[k] = nv
                            else:
                                del out[k]
        return self.reduce(out)

    def _gen_element(self, g: tuple) -> dict:
        if g[0] == "z":
            return self.z_gen(g[1])
        return self.x_gen(g[1])

    # -- tables and verification ------------------------------------------------------

    def multiplication_table(self) -> dict:
        if self._mult_table is None:
            table = {}
            for i, ka in enumerate(self.basis):
                for j, kb in enumerate(self.basis):
                    if j < i:
                        continue
                    table[(i, j)] = self.multiply({ka: Fraction(1)}, {kb: Fraction(1)})
                    table[(j, i)] = table[(i, j)]
            self._mult_table = table
        return self._mult_table

    def bracket_table(self) -> dict:
        if self._bracket_table is None:
            table = {}
            for i, ka in enumerate(self.basis):
                for j, kb in enumerate(self.basis):
                    if j < i:
                        continue
                    val = self.bracket({ka: Fraction(1)}, {kb: Fraction(1)})
                    table[(i, j)] = val
                    table[(j, i)] = {k: -v for k, v in val.items()}
            self._bracket_table = table
        return self._bracket_table

    def _as_vector(self, element: Mapping) -> dict[int, Fraction]:
        index = {key: i for i, key in enumerate(self.basis)}
        out = {}
        for key, c in element.items():
            if c:
                out[index[key]] = c
        return out

    def table_mult(self, i: int, j: int) -> dict[int, Fraction]:
        return self._as_vector(self.multiplication_table()[(i, j)])

    def table_bracket(self, i: int, j: int) -> dict[int, Fraction]:
        return self._as_vector(self.bracket_table()[(i, j)])

    def _combine(self, vec: dict[int, Fraction], table) -> dict:
        out: dict = {}
        for i, c in vec.items():
            for k, v in table(i).items():
                nv = out.get(k, Fraction(0)) + c * v
                if nv:
                    out[k] = nv
                else:
                    del out[k]
        return out

    def verify_axioms(self) -> list[str]:
        """Exhaustive associativity, commutativity, skew, Leibniz and Jacobi
        over the finite basis."""
        if self.zero_algebra:
            return []
        problems = []
        mult = self.table_mult
        br = self.table_bracket
        n = self.dim

        def mul_vec(vec, j):
            return self._combine(vec, lambda i: mult(i, j))

        def br_vec(vec, j):
            return self._combine(vec, lambda i: br(i, j))

        for i in range(n):
            for j in range(n):
                if mult(i, j) != mult(j, i):
                    problems.append(f"commutativity fails at ({i},{j})")
                anti = br(i, j)
                other = br(j, i)
                keys = set(anti) | set(other)
                if any(anti.get(k, Fraction(0)) + other.get(k, Fraction(0)) for k in keys):
                    problems.append(f"skew fails at ({i},{j})")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if mul_vec(mult(i, j), k) != mul_vec(mult(j, k), i):
                        problems.append(f"associativity fails at ({i},{j},{k})")
                    # Leibniz: {i, jk} = {i,j}k + {i,k}j
                    lhs = self._combine(mult(j, k), lambda t: br(i, t))
                    rhs: dict = {}
                    for kk, v in mul_vec(br(i, j), k).items():
                        rhs[kk] = rhs.get(kk, Fraction(0)) + v
                    for kk, v in mul_vec(br(i, k), j).items():
                        rhs[kk] = rhs.get(kk, Fraction(0)) + v
                    rhs = {kk: v for kk, v in rhs.items() if v}
                    if lhs != rhs:
                        problems.append(f"Leibniz fails at ({i},{j},{k})")
                    # Jacobi
                    acc: dict = {}
                    for kk, v in br_vec(br(i, j), k).items():
                        acc[kk] = acc.get(kk, Fraction(0)) + v
                    for kk, v in br_vec(br(j, k), i).items():
                        acc[kk] = acc.get(kk, Fraction(0)) + v
                    for kk, v in br_vec(br(k, i), j).items():
                        acc[kk] = acc.get(kk, Fraction(0)) + v
                    if any(acc.values()):
                        problems.append(f"Jacobi fails at ({i},{j},{k})")
                    if len(problems) >= 10:
                        return problems
        return problems

    def format_key(self, key: tuple) -> str:
        sector, mono = key
        bits = []
        for i, e in enumerate(mono):
            if e == 1:
                bits.append(f"Z{i + 1}")
            elif e > 1:
                bits.append(f"Z{i + 1}^{e}")
        if any(sector):
            bits.append("X[" + ",".join(str(x) for x in sector) + "]")
        return "*".join(bits) if bits else "1"

    def format_element(self, element: Mapping) -> str:
        element = {k: v for k, v in element.items() if v}
        if not element:
            return "0"
        bits = []
        for key in sorted(element):
            c = element[key]
            body = self.format_key(key)
            if c == 1 and body != "1":
                bits.append(body)
            elif body == "1":
                bits.append(rat_str(c))
            elif c == -1:
                bits.append(f"-{body}")
            else:
                bits.append(f"{rat_str(c)}*{body}")
        return " + ".join(bits).replace("+ -", "- ")


def build_pl_algebra(lattice: EvenLattice) -> PLAlgebra:
    """Construct the quotient algebra and insist on exhaustive consistency."""
    alg = PLAlgebra(lattice)
    if not alg.zero_algebra:
        problems = alg.verify_axioms()
        if problems:
            raise AssertionError(
                "presented algebra is inconsistent (implementation bug): "
                + "; ".join(problems[:3])
            )
    return alg


def poisson_table(alg: PLAlgebra) -> dict:
    """Materialize the full bracket table and insist on the Poisson axioms.

    The generator bracket extends to every basis monomial as a
    biderivation; skew-symmetry, Jacobi and the Leibniz rule are verified
    exhaustively over the finite basis, and a violation aborts with the
    witness triple (an implementation bug, not valid data).
    """
    problems = alg.verify_axioms()
    if problems:
        raise AssertionError("Poisson axioms fail: " + "; ".join(problems[:3]))
    return alg.bracket_table()


def relation_consistency_problems(alg: PLAlgebra) -> list[str]:
    """Commutativity of the class product against the two reduction routes:
    eps(a,b) Z_a^m X_{a+b} must equal eps(b,a) Z_b^m X_{a+b} with
    m = -<a,b>, using that the target class is killed by its own line."""
    if alg.zero_algebra:
        return []
    problems = []
    lat = alg.lattice
    for alpha in alg.nonzero_c2:
        for beta in alg.nonzero_c2:
            target = tuple(x + y for x, y in zip(alpha, beta))
            if not any(target) or target not in alg.sectors:
                continue
            m = -lat.pair(alpha, beta)
            if m < 0:
                continue
            pa = alg._power_of_linear(alpha, m)
            pb = alg._power_of_linear(beta, m)
            ea = alg.eps.value(alpha, beta)
            eb = alg.eps.value(beta, alpha)
            lhs = alg.reduce({(target, mono): c * ea for mono, c in pa.items()})
            rhs = alg.reduce({(target, mono): c * eb for mono, c in pb.items()})
            if lhs != rhs:
                problems.append(f"relation consistency fails at {alpha}, {beta}")
    return problems


# ---------------------------------------------------------------------------
# Rank-one yardsticks
# ---------------------------------------------------------------------------

class BkAlgebra:
    """The explicit rank-one quotient: basis 1, Z..Z^{2k}, X, Y with
    X^2 = Y^2 = XZ = YZ = 0, XY = Z^{2k}/(2k)!, and bracket
    {Z,X} = 2kX, {Z,Y} = -2kY, {X,Y} = Z^{2k-1}/(2k-1)!."""

    def __init__(self, k: int):
        if k < 1:
            raise ValueError("k must be positive")
        self.k = k
        self.basis = [("Z", d) for d in range(2 * k + 1)] + [("X", 0), ("Y", 0)]

    @property
    def dim(self) -> int:
        return 2 * self.k + 3

    def _zpow(self, d: int) -> dict:
        return {("Z", d): Fraction(1)} if d <= 2 * self.k else {}

    def multiply_basis(self, a: tuple, b: tuple) -> dict:
        k = self.k
        if a[0] == "Z" and b[0] == "Z":
            return self._zpow(a[1] + b[1])
        if a[0] == "Z" and b[0] in ("X", "Y"):
            return {(b[0], 0): Fraction(1)} if a[1] == 0 else {}
        if b[0] == "Z":
            return self.multiply_basis(b, a)
        if a[0] == b[0]:
            return {}
        out = self._zpow(2 * k)
        return {key: c / math.factorial(2 * k) for key, c in out.items()}

    def bracket_basis(self, a: tuple, b: tuple) -> dict:
        k = self.k
        if a[0] == "Z" and b[0] == "Z":
            return {}
        if a[0] == "Z" and b[0] in ("X", "Y"):
            # {Z^d, X} = d Z^{d-1} {Z,X} = 2k d Z^{d-1} X; X Z = 0 kills d > 1
            d = a[1]
            if d == 0:
                return {}
            if d == 1:
                sign = 2 * k if b[0] == "X" else -2 * k
                return {(b[0], 0): Fraction(sign)}
            return {}
        if b[0] == "Z":
            return {key: -c for key, c in self.bracket_basis(b, a).items()}
        if a[0] == b[0]:
            return {}
        sign = 1 if (a[0], b[0]) == ("X", "Y") else -1
        d = 2 * k - 1
        return {("Z", d): Fraction(sign, math.factorial(d))}


def bk_compare(k: int) -> dict:
    """Certify the generator correspondence between the rank-one lattice
    algebra with norm 2k and the explicit presentation above."""
    lattice = EvenLattice([[2 * k]])
    alg = build_pl_algebra(lattice)
    bk = BkAlgebra(k)
    report = {
        "k": k,
        "c2": alg.c2,
        "dim_lattice": alg.dim,
        "dim_reference": bk.dim,
        "problems": [],
    }
    problems = report["problems"]
    if sorted(alg.c2) != sorted([(-1,), (0,), (1,)]):
        problems.append(f"survivor set is {alg.c2}")
        return report
    if alg.dim != bk.dim:
        problems.append(f"dimension {alg.dim} differs from {bk.dim}")
        return report

    # correspondence: Z^d -> Z_alpha^d, X -> X_alpha, Y -> X_{-alpha}
    def to_lattice(key: tuple) -> dict:
        if key[0] == "Z":
            out = alg.one()
            for _ in range(key[1]):
                out = alg.multiply(out, alg.z_gen(0))
            return out
        return alg.x_gen((1,)) if key[0] == "X" else alg.x_gen((-1,))

    def map_element(el: dict) -> dict:
        out: dict = {}
        for key, c in el.items():
            img = to_lattice(key)
            for kk, v in img.items():
                nv = out.get(kk, Fraction(0)) + c * v
                if nv:
                    out[kk] = nv
                else:
                    del out[kk]
        return alg.reduce(out)

    images = {key: map_element({key: Fraction(1)}) for key in bk.basis}
    seen = set()
    for key, img in images.items():
        flat = tuple(sorted((kk, c) for kk, c in img.items()))
        if not flat or flat in seen:
            problems.append(f"correspondence not injective at {key}")
            return report
        seen.add(flat)

    for a in bk.basis:
        for b in bk.basis:
            want = map_element(bk.multiply_basis(a, b))
            got = alg.multiply(images[a], images[b])
            if want != got:
                problems.append(f"product mismatch at {a} * {b}")
            want_br = map_element(bk.bracket_basis(a, b))
            got_br = alg.bracket(images[a], images[b])
            if want_br != got_br:
                problems.append(f"bracket mismatch at {{{a},{b}}}")
            if len(problems) >= 5:
                return report
    return report
