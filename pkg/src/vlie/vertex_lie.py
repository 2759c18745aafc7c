"""Vertex Lie algebra structures: graded base space, partial operator d,
delta-expansion bracket tables, component brackets and axiom verification.

A structure packages an ordered base-space basis u_1..u_r, optional integer
degrees, a partially defined linear map d given on a designated subspace,
and for each ordered basis pair a finite list of bracket terms (f, k, l)
encoding

    [u_a(x), u_b(y)] = sum_i  f_i^{(k_i)}(y) Delta^(l_i)(x, y).

Modes u(n) are reduced modulo (du)(m) = -m u(m-1), so canonical mode
coordinates live on a complement basis: ker-d vectors frozen at mode -1
(central) plus a complement of ker d + im d at every integer mode.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .formal_calc import Rational, gen_binomial, rat, rat_str
from .lie_core import BilinearForm, FiniteLieAlgebra, SymPoly, check_invariance

Vector = dict[int, Fraction]  # sparse coordinates over the base-space basis

_MAX_D_RECURSION = 64


def _vec(items=()) -> Vector:
    out: Vector = {}
    for i, c in dict(items).items():
        c = rat(c)
        if c:
            out[i] = c
    return out


def _vec_add(a: Vector, b: Vector, scale: Fraction = Fraction(1)) -> Vector:
    out = dict(a)
    for i, c in b.items():
        v = out.get(i, Fraction(0)) + scale * c
        if v:
            out[i] = v
        else:
            out.pop(i, None)
    return out


class ModeElement:
    """Rational linear combination of canonical mode symbols.

    Keys are ("z", j) for the j-th ker-d complement vector at mode -1 and
    ("u", i, n) for the i-th complement-basis vector at mode n.  Zero terms
    are never stored.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple, object] | None = None):
        clean: dict[tuple, Fraction] = {}
        if terms:
            for key, c in terms.items():
                c = rat(c)
                if c:
                    clean[key] = clean.get(key, Fraction(0)) + c
                    if not clean[key]:
                        del clean[key]
        self.terms = clean

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "ModeElement") -> "ModeElement":
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, Fraction(0)) + c
            if v:
                out[k] = v
            else:
                del out[k]
        return ModeElement(out)

    def __neg__(self) -> "ModeElement":
        return ModeElement({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "ModeElement") -> "ModeElement":
        return self + (-other)

    def scale(self, c) -> "ModeElement":
        c = rat(c)
        if not c:
            return ModeElement()
        return ModeElement({k: c * v for k, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, ModeElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def sorted_terms(self, structure: "VLStructure"):
        def key(item):
            tag = item[0]
            if tag[0] == "u":
                return (0, tag[1], tag[2])
            return (1, tag[1], -1)
        return sorted(self.terms.items(), key=key)

    def format(self, structure: "VLStructure") -> str:
        if not self.terms:
            return "0"
        bits = []
        for tag, c in self.sorted_terms(structure):
            if tag[0] == "u":
                name = structure.u_prime_names[tag[1]]
                mode = tag[2]
            else:
                name = structure.u0_prime_names[tag[1]]
                mode = -1
            sym = f"{name}({mode})"
            if c == 1:
                text = sym
            elif c == -1:
                text = f"-{sym}"
            else:
                text = f"{rat_str(c)}*{sym}"
            bits.append(text)
        return " + ".join(bits).replace("+ -", "- ")

    def __repr__(self):
        return f"ModeElement({self.terms!r})"


class VLStructure:
    """A vertex Lie algebra presented by basis, degrees, d, and a bracket table.

    Structures are immutable after construction.  ``certify()`` runs the
    skew-symmetry and Jacobi window checks; builders return certified
    structures, while ``from_table(..., certify=False)`` admits invalid
    data for exercising the failure paths.
    """

    def __init__(
        self,
        basis: Sequence[str],
        degrees: Sequence[int] | None,
        d_domain: Sequence[str],
        d_matrix: Mapping[str, Mapping[str, object]] | None,
        table: Mapping[tuple[str, str], Iterable[tuple]],
        u_prime: Sequence[str] | None = None,
        u0_prime: Sequence[str] | None = None,
        name: str = "custom",
        meta: dict | None = None,
    ):
        self.name = name
        self.basis = tuple(basis)
        if len(set(self.basis)) != len(self.basis):
            raise ValueError("duplicate basis names")
        self.index = {n: i for i, n in enumerate(self.basis)}
        self.degrees = tuple(int(d) for d in degrees) if degrees is not None else None
        self.meta = dict(meta or {})

        self.d_domain = tuple(d_domain)
        for n in self.d_domain:
            if n not in self.index:
                raise ValueError(f"d-domain name {n!r} not in basis")
        self.d_map: dict[int, Vector] = {}
        for n in self.d_domain:
            img = (d_matrix or {}).get(n, {})
            self.d_map[self.index[n]] = _vec({self.index[m]: c for m, c in img.items()})

        self._table: dict[tuple[int, int], tuple] = {}
        for (a, b), terms in table.items():
            ia, ib = self.index[a], self.index[b]
            packed = []
            for f, k, l in terms:
                k, l = int(k), int(l)
                if k < 0 or l < 0:
                    raise ValueError("derivative and delta orders are nonnegative")
                fv = _vec({self.index[m]: c for m, c in dict(f).items()})
                if fv:
                    packed.append((fv, k, l))
            self._table[(ia, ib)] = tuple(packed)

        self._setup_complements(u_prime, u0_prime)
        self._graded_check()
        self._bracket_cache: dict[tuple, ModeElement] = {}
        self.certified = False

    # -- linear algebra over the base space ---------------------------------

    def _setup_complements(self, u_prime, u0_prime):
        r = len(self.basis)
        # ker d: restricted to the domain; spanned here by domain basis
        # vectors with zero image (the in-scope structures all have d = 0).
        k_basis = [i for i in sorted(self.d_map) if not self.d_map[i]]
        im_basis = [self.d_map[i] for i in sorted(self.d_map) if self.d_map[i]]
        self.u0_indices = tuple(k_basis)

        def greedy_extend(span_vectors, candidates):
            """Lowest-index standard vectors extending the span, by row reduction."""
            by_pivot: dict[int, Vector] = {}

            def reduce_against(vec):
                vec = dict(vec)
                while vec:
                    lead = min(vec)
                    row = by_pivot.get(lead)
                    if row is None:
                        return vec
                    f = vec[lead] / row[lead]
                    for c2, v2 in row.items():
                        nv = vec.get(c2, Fraction(0)) - f * v2
                        if nv:
                            vec[c2] = nv
                        else:
                            vec.pop(c2, None)
                return vec

            for v in span_vectors:
                red = reduce_against(v)
                if red:
                    by_pivot[min(red)] = red
            chosen = []
            for cand in candidates:
                red = reduce_against(cand)
                if red:
                    chosen.append(cand)
                    by_pivot[min(red)] = red
            return chosen

        if u_prime is not None:
            self.u_prime_vectors = [
                _vec({self.index[n]: 1}) for n in u_prime
            ]
            self.u_prime_names = tuple(u_prime)
        else:
            base_span = [_vec({i: 1}) for i in k_basis] + list(im_basis)
            cands = [_vec({i: 1}) for i in range(r)]
            chosen = greedy_extend(base_span, cands)
            self.u_prime_vectors = chosen
            self.u_prime_names = tuple(self.basis[min(v)] for v in chosen)

        if u0_prime is not None:
            self.u0_prime_vectors = [_vec({self.index[n]: 1}) for n in u0_prime]
            self.u0_prime_names = tuple(u0_prime)
        else:
            chosen = greedy_extend(list(im_basis), [_vec({i: 1}) for i in k_basis])
            self.u0_prime_vectors = chosen
            self.u0_prime_names = tuple(self.basis[min(v)] for v in chosen)

        # decomposition matrix: columns are u0' vectors, im-d generators
        # (with their preimages), then u' vectors
        self._im_preimages = [
            (i, self.d_map[i]) for i in sorted(self.d_map) if self.d_map[i]
        ]
        cols: list[Vector] = (
            list(self.u0_prime_vectors)
            + [v for _, v in self._im_preimages]
            + list(self.u_prime_vectors)
        )
        self._decomp_cols = cols
        n_cols = len(cols)
        if n_cols != r:
            raise ValueError(
                "complement choice does not decompose the base space "
                f"({n_cols} columns vs dimension {r})"
            )
        # dense LU-style inverse via Gaussian elimination
        mat = [[cols[j].get(i, Fraction(0)) for j in range(r)] for i in range(r)]
        aug = [row[:] + [Fraction(1) if i == j else Fraction(0) for j in range(r)]
               for i, row in enumerate(mat)]
        for col in range(r):
            piv = next((rr for rr in range(col, r) if aug[rr][col]), None)
            if piv is None:
                raise ValueError("complement vectors are linearly dependent")
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = 1 / aug[col][col]
            aug[col] = [x * inv for x in aug[col]]
            for rr in range(r):
                if rr != col and aug[rr][col]:
                    f = aug[rr][col]
                    aug[rr] = [x - f * y for x, y in zip(aug[rr], aug[col])]
        self._decomp_inv = [row[r:] for row in aug]

    def decompose_vector(self, vec: Vector):
        """Split u = (ker-d complement part) + d(preimage) + (U' part)."""
        r = len(self.basis)
        coords = [Fraction(0)] * r
        for i, c in vec.items():
            for j in range(r):
                coords[j] += self._decomp_inv[j][i] * c
        n0 = len(self.u0_prime_vectors)
        nim = len(self._im_preimages)
        z_part = coords[:n0]
        im_part = coords[n0:n0 + nim]
        up_part = coords[n0 + nim:]
        return z_part, im_part, up_part

    def _graded_check(self):
        if self.degrees is None:
            return
        for (ia, ib), terms in self._table.items():
            want = self.degrees[ia] + self.degrees[ib]
            for fv, k, l in terms:
                for i in fv:
                    if self.degrees[i] != want - k - l - 1:
                        raise ValueError(
                            f"graded table term violates degree bookkeeping: "
                            f"[{self.basis[ia]},{self.basis[ib]}] term "
                            f"({self.basis[i]}, k={k}, l={l})"
                        )

    # -- modes ----------------------------------------------------------------

    def mode(self, vec_or_name, n: int, _depth: int = 0) -> ModeElement:
        """Canonical form of u(n) for a base-space vector u."""
        if _depth > _MAX_D_RECURSION:
            raise ValueError("mode reduction does not terminate; pathological d")
        if isinstance(vec_or_name, str):
            vec = _vec({self.index[vec_or_name]: 1})
        else:
            vec = _vec(vec_or_name)
        z_part, im_part, up_part = self.decompose_vector(vec)
        out = ModeElement()
        if n == -1:
            out = out + ModeElement({("z", j): c for j, c in enumerate(z_part) if c})
        # ker-d vectors vanish at every other mode
        for t, c in enumerate(im_part):
            if c and n != 0:
                # (dw)(n) = -n w(n-1) with w the domain basis preimage
                dom_idx, _ = self._im_preimages[t]
                out = out + self.mode(_vec({dom_idx: 1}), n - 1, _depth + 1).scale(-n * c)
        out = out + ModeElement(
            {("u", i, n): c for i, c in enumerate(up_part) if c}
        )
        return out

    def canonical_vector(self, tag) -> Vector:
        """Base-space vector behind a canonical mode symbol."""
        if tag[0] == "z":
            return self.u0_prime_vectors[tag[1]]
        return self.u_prime_vectors[tag[1]]

    # -- brackets ---------------------------------------------------------------

    def table_terms(self, ia: int, ib: int):
        return self._table.get((ia, ib), ())

    def component_bracket(self, a, m: int, b, n: int) -> ModeElement:
        """[u_a(m), u_b(n)] reduced to canonical modes.

        Per table term (f, k, l) the component is
        binom(m,l) binom(m+n-l,k) (-1)^{l+k} l! k! f(m+n-l-k).
        """
        if isinstance(a, str):
            ia = self.index[a]
        else:
            ia = int(a)
        if isinstance(b, str):
            ib = self.index[b]
        else:
            ib = int(b)
        if not (0 <= ia < len(self.basis) and 0 <= ib < len(self.basis)):
            raise KeyError("unknown basis index")
        key = (ia, m, ib, n)
        cached = self._bracket_cache.get(key)
        if cached is not None:
            return cached
        out = ModeElement()
        for fv, k, l in self.table_terms(ia, ib):
            c = gen_binomial(m, l) * gen_binomial(m + n - l, k)
            if not c:
                continue
            fact = 1
            for t in range(1, l + 1):
                fact *= t
            for t in range(1, k + 1):
                fact *= t
            if (l + k) % 2:
                fact = -fact
            out = out + self.mode(fv, m + n - l - k).scale(c * fact)
        self._bracket_cache[key] = out
        return out

    def bracket_vectors(self, va: Vector, m: int, vb: Vector, n: int) -> ModeElement:
        out = ModeElement()
        for ia, ca in va.items():
            for ib, cb in vb.items():
                out = out + self.component_bracket(ia, m, ib, n).scale(ca * cb)
        return out

    def bracket_elements(self, x: ModeElement, y: ModeElement) -> ModeElement:
        out = ModeElement()
        for tag_x, cx in x.terms.items():
            vx = self.canonical_vector(tag_x)
            mx = -1 if tag_x[0] == "z" else tag_x[2]
            for tag_y, cy in y.terms.items():
                vy = self.canonical_vector(tag_y)
                my = -1 if tag_y[0] == "z" else tag_y[2]
                out = out + self.bracket_vectors(vx, mx, vy, my).scale(cx * cy)
        return out

    # -- verification -------------------------------------------------------------

    def verify_skew_symmetry(self, window: int = 4) -> list[str]:
        problems = []
        r = len(self.basis)
        for ia in range(r):
            for ib in range(ia, r):
                for m in range(-window, window + 1):
                    for n in range(-window, window + 1):
                        lhs = self.component_bracket(ia, m, ib, n)
                        rhs = self.component_bracket(ib, n, ia, m)
                        if not (lhs + rhs).is_zero():
                            problems.append(
                                f"skew fails at [{self.basis[ia]}({m}),{self.basis[ib]}({n})]: "
                                f"{lhs.format(self)} vs -({rhs.format(self)})"
                            )
                            if len(problems) >= 20:
                                return problems
        return problems

    def verify_jacobi(self, window: int = 4, ordered: bool = False) -> list[str]:
        """Window check of [[x,y],z] + [[y,z],x] + [[z,x],y] = 0.

        With ``ordered`` False only sorted basis triples are scanned, which
        together with skew-symmetry covers all triples; pass True for
        candidate tables that may not even be skew.
        """
        problems = []
        r = len(self.basis)
        if ordered:
            triples = [(i, j, k) for i in range(r) for j in range(r) for k in range(r)]
        else:
            triples = [
                (i, j, k)
                for i in range(r) for j in range(i, r) for k in range(j, r)
            ]
        modes = range(-window, window + 1)
        for (i, j, k) in triples:
            vi, vj, vk = (_vec({t: 1}) for t in (i, j, k))
            for m in modes:
                for n in modes:
                    xy = self.bracket_vectors(vi, m, vj, n)
                    for p in modes:
                        yz = self.bracket_vectors(vj, n, vk, p)
                        zx = self.bracket_vectors(vk, p, vi, m)
                        acc = (
                            self.bracket_elements(xy, self.mode(vk, p))
                            + self.bracket_elements(yz, self.mode(vi, m))
                            + self.bracket_elements(zx, self.mode(vj, n))
                        )
                        if not acc.is_zero():
                            problems.append(
                                f"Jacobi fails on ({self.basis[i]}({m}),"
                                f"{self.basis[j]}({n}),{self.basis[k]}({p})): "
                                + acc.format(self)
                            )
                            if len(problems) >= 20:
                                return problems
        return problems

    def certify(self, window: int = 2) -> "VLStructure":
        problems = self.verify_skew_symmetry(window) + self.verify_jacobi(window)
        if problems:
            raise ValueError("structure fails Lie axioms: " + "; ".join(problems[:3]))
        self.certified = True
        return self

    # -- reporting ------------------------------------------------------------------

    def degree_of(self, name_or_index) -> int:
        if self.degrees is None:
            raise ValueError("structure is not graded")
        i = self.index[name_or_index] if isinstance(name_or_index, str) else name_or_index
        return self.degrees[i]

    def polar_parts(self) -> dict:
        """Mode-index bookkeeping of the polar splitting and chosen complements."""
        report = {
            "central": [f"{n}(-1)" for n in self.u0_prime_names],
            "u0_prime": list(self.u0_prime_names),
            "u_prime": list(self.u_prime_names),
            "l_minus": [f"{n}(-1)" for n in self.u0_prime_names]
            + [f"{n}(-m), m >= 1" for n in self.u_prime_names],
            "l_plus": [f"{n}(m), m >= 0" for n in self.u_prime_names],
            "complement_rule": "lowest-index pivot (deterministic choice)",
        }
        if self.degrees is not None:
            report["triangular"] = {
                n: f"deg {n}(-m) = {self.degree_of(n)} + m - 1"
                for n in self.u_prime_names
            }
        return report

    def bracket_series(self, a: str, b: str) -> "BracketSeries":
        return BracketSeries(self, a, b)


class BracketSeries:
    """Generating-function view of one bracket table entry.

    Coefficient extraction expands f^{(k)}(y) Delta^(l)(x,y) directly from
    the mode series definition, independently of the closed component
    formula, so the two can be compared as an internal consistency check.
    """

    def __init__(self, structure: VLStructure, a: str, b: str):
        self.structure = structure
        self.a, self.b = a, b
        self.terms = structure.table_terms(structure.index[a], structure.index[b])

    def coefficient(self, m: int, n: int) -> ModeElement:
        """Coefficient of x^{-m-1} y^{-n-1}, via raw series expansion."""
        st = self.structure
        out = ModeElement()
        for fv, k, l in self.terms:
            # f^{(k)}(y) = sum_p binom(-p-1, k) k! f(p) y^{-p-k-1}
            # Delta^(l)  = sum_q q(q-1)..(q-l+1) x^{q-l} y^{-q-1}
            q = l - m - 1
            p = m + n - k - l
            w = 1
            for t in range(l):
                w *= q - t
            if not w:
                continue
            fact_k = 1
            for t in range(1, k + 1):
                fact_k *= t
            c = gen_binomial(-p - 1, k) * fact_k * w
            if c:
                out = out + st.mode(fv, p).scale(c)
        return out

    def __repr__(self):
        st = self.structure
        if not self.terms:
            return "0"
        bits = []
        for fv, k, l in self.terms:
            poly = " + ".join(
                (f"{rat_str(c)}*{st.basis[i]}" if c != 1 else st.basis[i])
                for i, c in sorted(fv.items())
            )
            fname = f"({poly})" if (len(fv) > 1 or k == 0) else poly
            deriv = "" if k == 0 else ("'" if k == 1 else f"^({k})")
            delta = "Delta" if l == 0 else f"Delta^({l})"
            bits.append(f"{fname}{deriv}(y)*{delta}")
        return " + ".join(bits)


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------

def witt() -> VLStructure:
    """One generator of degree 2; bracket  w'(y)Delta - 2 w(y)Delta^(1)."""
    s = VLStructure(
        basis=("omega",),
        degrees=(2,),
        d_domain=(),
        d_matrix=None,
        table={("omega", "omega"): [({"omega": 1}, 1, 0), ({"omega": -2}, 0, 1)]},
        name="witt",
    )
    return s.certify()


def virasoro() -> VLStructure:
    """Witt plus the central line  -(1/12) c(y) Delta^(3)."""
    s = VLStructure(
        basis=("omega", "c"),
        degrees=(2, 0),
        d_domain=("c",),
        d_matrix={"c": {}},
        table={
            ("omega", "omega"): [
                ({"omega": 1}, 1, 0),
                ({"omega": -2}, 0, 1),
                ({"c": Fraction(-1, 12)}, 0, 3),
            ],
            ("omega", "c"): [],
            ("c", "c"): [],
        },
        name="virasoro",
    )
    return s.certify()


def loop(g: FiniteLieAlgebra) -> VLStructure:
    """Loop structure over a Lie algebra: [a(x), b(y)] = [a,b](y) Delta."""
    table = {}
    for i, a in enumerate(g.names):
        for j, b in enumerate(g.names):
            bk = g.bracket_basis(i, j)
            table[(a, b)] = [({g.names[k]: c for k, c in bk.items()}, 0, 0)] if bk else []
    s = VLStructure(
        basis=g.names,
        degrees=(1,) * g.dim,
        d_domain=(),
        d_matrix=None,
        table=table,
        name="loop",
        meta={"kind": "loop"},
    )
    return s.certify()


def affine(g: FiniteLieAlgebra, form: BilinearForm,
           highest_root: str | None = None) -> VLStructure:
    """Affinization: loop bracket plus  -(a|b) c(y) Delta^(1)  central term."""
    problems = check_invariance(g, form)
    if problems:
        raise ValueError("form is not invariant: " + "; ".join(problems[:3]))
    table = {}
    for i, a in enumerate(g.names):
        for j, b in enumerate(g.names):
            terms = []
            bk = g.bracket_basis(i, j)
            if bk:
                terms.append(({g.names[k]: c for k, c in bk.items()}, 0, 0))
            if form.value(i, j):
                terms.append(({"c": -form.value(i, j)}, 0, 1))
            table[(a, b)] = terms
    meta = {"kind": "affine"}
    if highest_root is not None:
        meta["highest_root"] = highest_root
    s = VLStructure(
        basis=g.names + ("c",),
        degrees=(1,) * g.dim + (0,),
        d_domain=("c",),
        d_matrix={"c": {}},
        table=table,
        name="affine",
        meta=meta,
    )
    return s.certify()


def heisenberg(d_matrix) -> VLStructure:
    """Rank-r oscillator structure: [u_i(m), u_j(n)] = d_ij m delta_{m+n,0} c."""
    form = BilinearForm(d_matrix)
    r = len(form.matrix)
    names = tuple(f"u{i}" for i in range(1, r + 1))
    table = {}
    for i, a in enumerate(names):
        for j, b in enumerate(names):
            v = form.value(i, j)
            table[(a, b)] = [({"c": -v}, 0, 1)] if v else []
    s = VLStructure(
        basis=names + ("c",),
        degrees=(1,) * r + (0,),
        d_domain=("c",),
        d_matrix={"c": {}},
        table=table,
        name="heisenberg",
        meta={"kind": "heisenberg"},
    )
    return s.certify()


class CommAlgebra:
    """Commutative associative algebra by a structure-constant table."""

    __slots__ = ("names", "table")

    def __init__(self, names, table, check: bool = True):
        self.names = tuple(names)
        idx = {n: i for i, n in enumerate(self.names)}

        def pos(x):
            return idx[x] if isinstance(x, str) else int(x)

        t: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (a, b), val in table.items():
            entry = {}
            for k, c in val.items():
                c = rat(c)
                if c:
                    entry[pos(k)] = c
            if entry:
                t[(pos(a), pos(b))] = entry
        self.table = t
        if check:
            problems = self.check_axioms()
            if problems:
                raise ValueError("not commutative associative: " + "; ".join(problems[:3]))

    def product_basis(self, i: int, j: int) -> dict[int, Fraction]:
        return self.table.get((i, j), {})

    def product_vec(self, u: dict[int, Fraction], v: dict[int, Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for i, a in u.items():
            for j, b in v.items():
                for k, c in self.product_basis(i, j).items():
                    val = out.get(k, Fraction(0)) + a * b * c
                    if val:
                        out[k] = val
                    else:
                        out.pop(k, None)
        return out

    def check_axioms(self) -> list[str]:
        problems = []
        r = len(self.names)
        for i in range(r):
            for j in range(r):
                if self.product_basis(i, j) != self.product_basis(j, i):
                    problems.append(f"commutativity fails on ({self.names[i]},{self.names[j]})")
        for i in range(r):
            for j in range(r):
                for k in range(r):
                    lhs = self.product_vec(self.product_basis(i, j), {k: Fraction(1)})
                    rhs = self.product_vec({i: Fraction(1)}, self.product_basis(j, k))
                    if lhs != rhs:
                        problems.append(
                            f"associativity fails on ({self.names[i]},{self.names[j]},{self.names[k]})"
                        )
        return problems

    def cube_is_zero(self) -> bool:
        """Whether every triple product vanishes."""
        r = len(self.names)
        for i in range(r):
            for j in range(r):
                prod = self.product_basis(i, j)
                for k in range(r):
                    if self.product_vec(prod, {k: Fraction(1)}):
                        return False
        return True


def _form_cyclic_problems(alg: CommAlgebra, form: BilinearForm) -> list[str]:
    """Check (ab|c) = (bc|a) over all basis triples."""
    problems = []
    r = len(alg.names)
    for i in range(r):
        for j in range(r):
            for k in range(r):
                lhs = sum(
                    (c * form.value(p, k) for p, c in alg.product_basis(i, j).items()),
                    Fraction(0),
                )
                rhs = sum(
                    (c * form.value(p, i) for p, c in alg.product_basis(j, k).items()),
                    Fraction(0),
                )
                if lhs != rhs:
                    problems.append(
                        f"form associativity fails on ({alg.names[i]},{alg.names[j]},{alg.names[k]})"
                    )
    return problems


def novikov(algebra: CommAlgebra, form: BilinearForm | None = None) -> VLStructure:
    """Degree-2 structure over a commutative associative algebra.

    Table: (1/2)(ab)'(y)Delta - (ab)(y)Delta^(1) - (1/6)(a|b) c(y)Delta^(3),
    whose shifted components reproduce
    (1/2)(m-n)(ab)(m+n-1) + (1/6)(a|b)(m^3-m) delta_{m,-n} c
    in Virasoro-style mode indexing.
    """
    r = len(algebra.names)
    if form is None:
        form = BilinearForm([[0] * r for _ in range(r)])
    problems = _form_cyclic_problems(algebra, form)
    if problems:
        raise ValueError("form is not associative: " + "; ".join(problems[:3]))
    table = _novikov_table(algebra, form)
    s = VLStructure(
        basis=algebra.names + ("c",),
        degrees=(2,) * r + (0,),
        d_domain=("c",),
        d_matrix={"c": {}},
        table=table,
        name="novikov",
        meta={"kind": "novikov"},
    )
    return s.certify()


def _novikov_table(algebra: CommAlgebra, form: BilinearForm):
    table = {}
    names = algebra.names
    for i, a in enumerate(names):
        for j, b in enumerate(names):
            prod = {names[k]: c for k, c in algebra.product_basis(i, j).items()}
            terms = []
            if prod:
                terms.append(({n: Fraction(c) / 2 for n, c in prod.items()}, 1, 0))
                terms.append(({n: -c for n, c in prod.items()}, 0, 1))
            if form.value(i, j):
                terms.append(({"c": Fraction(-1, 6) * form.value(i, j)}, 0, 3))
            table[(a, b)] = terms
    return table


def novikov_candidate(algebra: CommAlgebra, form: BilinearForm | None = None) -> VLStructure:
    """Uncertified Novikov-shaped table for testing invalid input algebras."""
    r = len(algebra.names)
    if form is None:
        form = BilinearForm([[0] * r for _ in range(r)], require_symmetric=False)
    return VLStructure(
        basis=algebra.names + ("c",),
        degrees=None,
        d_domain=("c",),
        d_matrix={"c": {}},
        table=_novikov_table(algebra, form),
        name="novikov-candidate",
    )


def quadratic_central_candidate(algebra: CommAlgebra, form: BilinearForm | None = None) -> VLStructure:
    """Table  -(ab)'(y)Delta^(1) + ((ab)(y) + (a|b)) Delta^(2), ungraded.

    Components: [a(m), b(n)] = -mn (ab)(m+n-2) + m(m-1) delta_{m+n,1} (a|b) c.
    """
    r = len(algebra.names)
    if form is None:
        form = BilinearForm([[0] * r for _ in range(r)], require_symmetric=False)
    names = algebra.names
    table = {}
    for i, a in enumerate(names):
        for j, b in enumerate(names):
            prod = {names[k]: c for k, c in algebra.product_basis(i, j).items()}
            terms = []
            if prod:
                terms.append(({n: -c for n, c in prod.items()}, 1, 1))
                terms.append((dict(prod), 0, 2))
            if form.value(i, j):
                terms.append(({"c": form.value(i, j)}, 0, 2))
            table[(a, b)] = terms
    return VLStructure(
        basis=names + ("c",),
        degrees=None,
        d_domain=("c",),
        d_matrix={"c": {}},
        table=table,
        name="b3-candidate",
    )


def b3_criterion(algebra: CommAlgebra, form: BilinearForm | None = None,
                 window: int = 3) -> dict:
    """Jacobi-window verdict for the quadratic central bracket vs B^3 = 0.

    Builds the candidate structure, runs the Jacobi check over all ordered
    basis triples (the candidate need not be skew), independently decides
    whether all triple products vanish, and reports both verdicts plus
    agreement.
    """
    s = quadratic_central_candidate(algebra, form)
    problems = s.verify_jacobi(window, ordered=True)
    cube_zero = algebra.cube_is_zero()
    return {
        "jacobi_pass": not problems,
        "cube_zero": cube_zero,
        "agree": (not problems) == cube_zero,
        "witnesses": problems[:5],
    }


# ---------------------------------------------------------------------------
# Quadratic vertex Poisson coefficient relations
# ---------------------------------------------------------------------------

def verify_po_relations(g_matrix: Sequence[Sequence[SymPoly]],
                        b_tensor: Mapping[tuple[int, int, int], SymPoly]) -> list[str]:
    """Check the coefficient relations of order-2 quadratic bracket tables.

    Inputs: g[i][j] polynomials in the base symbols u_k, and b[i,j,k]
    polynomials.  Checks, for all indices:
      1. g^{ij} = -g^{ji}
      2. d g^{ij} / d u_k = b^{ij}_k
      3. sum_l b^{ij}_l g^{lk} = sum_l b^{jk}_l g^{li}
      4. sum_l d(b^{ij}_l g^{lk})/d u_m
           = sum_l (b^{ij}_l b^{lk}_m + b^{jk}_l b^{li}_m + b^{ki}_l b^{li}_m)
    """
    n = len(g_matrix)
    if n == 0:
        return []
    vars_ = g_matrix[0][0].vars
    names = vars_
    zero = SymPoly.zero(vars_)

    def b(i, j, k):
        return b_tensor.get((i, j, k), zero)

    problems = []
    for i in range(n):
        for j in range(n):
            if not (g_matrix[i][j] + g_matrix[j][i]).is_zero():
                problems.append(f"relation 1 fails at ({i},{j})")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if g_matrix[i][j].partial(names[k]) != b(i, j, k):
                    problems.append(f"relation 2 fails at ({i},{j},{k})")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs = zero
                rhs = zero
                for l in range(n):
                    lhs = lhs + b(i, j, l) * g_matrix[l][k]
                    rhs = rhs + b(j, k, l) * g_matrix[l][i]
                if lhs != rhs:
                    problems.append(f"relation 3 fails at ({i},{j},{k})")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for m in range(n):
                    lhs = zero
                    rhs = zero
                    for l in range(n):
                        lhs = lhs + (b(i, j, l) * g_matrix[l][k]).partial(names[m])
                        rhs = (rhs + b(i, j, l) * b(l, k, m)
                               + b(j, k, l) * b(l, i, m)
                               + b(k, i, l) * b(l, i, m))
                    if lhs != rhs:
                        problems.append(f"relation 4 fails at ({i},{j},{k},{m})")
    return problems
