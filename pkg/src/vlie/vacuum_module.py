"""Vacuum modules over a vertex Lie algebra structure.

States are rational combinations of normal-ordered creation monomials
applied to the vacuum.  A creation symbol is (n, cls, idx) with n <= -1:
cls 0 marks a frozen central generator (always at mode -1), cls 1 a
complement-basis generator at mode n.  Monomials are tuples of symbols
sorted by that key, so deeper modes sit leftmost.

Normal ordering rewrites words of modes by the two moves "swap an adjacent
out-of-order pair, emitting the bracket" and "annihilate at the vacuum".
Every mode is first reduced to canonical coordinates, so the rewriting only
ever sees central symbols (which commute) and complement modes.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .formal_calc import gen_binomial, rat, rat_str
from .vertex_lie import ModeElement, VLStructure

Symbol = tuple[int, int, int]          # (mode n, class, index)
Monomial = tuple[Symbol, ...]
State = dict[Monomial, Fraction]

VACUUM: Monomial = ()


def _clean(state: State) -> State:
    return {m: c for m, c in state.items() if c}


def _add_into(acc: State, state: State, scale: Fraction = Fraction(1)):
    for m, c in state.items():
        v = acc.get(m, Fraction(0)) + scale * c
        if v:
            acc[m] = v
        else:
            del acc[m]


def state_add(a: State, b: State, scale=Fraction(1)) -> State:
    out = dict(a)
    _add_into(out, b, rat(scale))
    return out


def state_scale(a: State, c) -> State:
    c = rat(c)
    return {m: c * v for m, v in a.items()} if c else {}


def state_eq(a: State, b: State) -> bool:
    return _clean(a) == _clean(b)


class VacuumModule:
    """Induced module over the negative modes, with optional central character.

    With ``lam`` given, frozen central generators act as the scalars
    lam[name]; without it they remain degree-zero creation symbols.  The
    action memo is the only mutable state and behaves as a get-or-compute
    map keyed by (mode, monomial).
    """

    def __init__(self, structure: VLStructure, lam: Mapping[str, object] | None = None):
        if not structure.certified:
            raise ValueError("vacuum modules require a certified structure")
        self.structure = structure
        self.lam: dict[str, Fraction] | None
        if lam is None:
            self.lam = None
        else:
            self.lam = {str(k): rat(v) for k, v in lam.items()}
            missing = [n for n in structure.u0_prime_names if n not in self.lam]
            if missing:
                raise ValueError(f"central character must cover {missing}")
        self._act_memo: dict[tuple, State] = {}
        self._mode_memo: dict[tuple, State] = {}

    # -- degrees -------------------------------------------------------------

    def is_graded(self) -> bool:
        st = self.structure
        if st.degrees is None:
            return False
        if any(st.degree_of(n) != 0 for n in st.u0_prime_names):
            return False
        return all(st.degree_of(n) >= 1 for n in st.u_prime_names)

    def require_graded(self, what: str):
        if not self.is_graded():
            raise ValueError(
                f"{what} needs a graded structure with degree-0 center and "
                "positive-degree creators; this one is not"
            )

    def symbol_degree(self, sym: Symbol) -> int:
        n, cls, idx = sym
        st = self.structure
        name = st.u0_prime_names[idx] if cls == 0 else st.u_prime_names[idx]
        return st.degree_of(name) + (-n) - 1

    def monomial_degree(self, mono: Monomial) -> int:
        return sum(self.symbol_degree(s) for s in mono)

    def state_degree(self, state: State) -> int:
        """Max degree over monomials; -1 for the zero state."""
        state = _clean(state)
        if not state:
            return -1
        return max(self.monomial_degree(m) for m in state)

    # -- state constructors ----------------------------------------------------

    def vacuum(self) -> State:
        return {VACUUM: Fraction(1)}

    def creator(self, name: str, n: int) -> Symbol:
        st = self.structure
        if name in st.u_prime_names:
            if n > -1:
                raise ValueError("creation modes have n <= -1")
            return (n, 1, st.u_prime_names.index(name))
        if name in st.u0_prime_names:
            if n != -1:
                raise ValueError("central creators only exist at mode -1")
            return (-1, 0, st.u0_prime_names.index(name))
        raise KeyError(f"unknown creator name {name!r}")

    def monomial(self, symbols: Iterable[tuple[str, int]]) -> Monomial:
        syms = sorted(self.creator(n, m) for n, m in symbols)
        if self.lam is not None and any(cls == 0 for _, cls, _ in syms):
            raise ValueError("central creators are scalars in a quotient module")
        return tuple(syms)

    def state(self, items: Iterable[tuple[Iterable[tuple[str, int]], object]]) -> State:
        out: State = {}
        for symbols, coeff in items:
            _add_into(out, {self.monomial(symbols): rat(coeff)})
        return out

    def generator_state(self, name: str) -> State:
        return {self.monomial([(name, -1)]): Fraction(1)}

    def format_state(self, state: State) -> str:
        state = _clean(state)
        if not state:
            return "0"
        bits = []
        for mono in sorted(state):
            c = state[mono]
            body = "".join(self._format_symbol(s) for s in mono) + "1"
            if c == 1:
                bits.append(body)
            elif c == -1:
                bits.append(f"-{body}")
            else:
                bits.append(f"{rat_str(c)}*{body}")
        return " + ".join(bits).replace("+ -", "- ")

    def symbol_name(self, sym: Symbol) -> str:
        _, cls, idx = sym
        st = self.structure
        return st.u0_prime_names[idx] if cls == 0 else st.u_prime_names[idx]

    def _format_symbol(self, sym: Symbol) -> str:
        return f"{self.symbol_name(sym)}({sym[0]})"

    # -- the action ---------------------------------------------------------------

    def act(self, name_or_vector, n: int, state: State) -> State:
        """Apply the mode u(n), normal ordering the result."""
        element = self.structure.mode(name_or_vector, n)
        return self.act_element(element, state)

    def act_element(self, element: ModeElement, state: State) -> State:
        out: State = {}
        for tag, c in element.terms.items():
            key = self._tag_to_key(tag)
            for mono, mc in state.items():
                _add_into(out, self._act_key(key, mono), c * mc)
        return out

    def _tag_to_key(self, tag) -> tuple:
        """Canonical mode tags to uniform (class, mode, index) keys."""
        if tag[0] == "z":
            return (0, -1, tag[1])
        return (1, tag[2], tag[1])

    def _act_key(self, key: tuple, mono: Monomial) -> State:
        """Single canonical mode applied to a canonical monomial."""
        memo = self._act_memo
        cached = memo.get((key, mono))
        if cached is not None:
            return cached
        cls, n, idx = key
        if cls == 0:
            # frozen central generator
            if self.lam is not None:
                name = self.structure.u0_prime_names[idx]
                result = {mono: self.lam[name]}
            else:
                result = {tuple(sorted(mono + ((-1, 0, idx),))): Fraction(1)}
            memo[(key, mono)] = result
            return result

        sym: Symbol = (n, 1, idx)
        if not mono:
            result = {(sym,): Fraction(1)} if n <= -1 else {}
        elif n <= -1 and sym <= mono[0]:
            result = {(sym,) + mono: Fraction(1)}
        else:
            head, tail = mono[0], mono[1:]
            result: State = {}
            # u(n) s1 rest = s1 u(n) rest + [u(n), s1] rest
            inner = self._act_key(key, tail)
            for new_mono, c in inner.items():
                _add_into(result, self._prepend(head, new_mono), c)
            bracket = self._symbol_bracket(key, head)
            for tag, c in bracket.terms.items():
                _add_into(result, self._act_key(self._tag_to_key(tag), tail), c)
        memo[(key, mono)] = result
        return result

    def _prepend(self, sym: Symbol, mono: Monomial) -> State:
        if not mono or sym <= mono[0]:
            return {(sym,) + mono: Fraction(1)}
        n, cls, idx = sym
        return self._act_key((cls, n, idx), mono)

    def _symbol_bracket(self, key: tuple, head: Symbol) -> ModeElement:
        st = self.structure
        if key[0] == 0 or head[1] == 0:
            return ModeElement()  # frozen central generators commute
        _, n, idx = key
        hn, _, hidx = head
        va = st.u_prime_vectors[idx]
        vb = st.u_prime_vectors[hidx]
        return st.bracket_vectors(va, n, vb, hn)

    # -- graded dimensions ----------------------------------------------------------

    def graded_dim(self, degree: int) -> int:
        """Number of canonical creation monomials of the given total degree."""
        self.require_graded("graded_dim")
        if self.lam is None:
            raise ValueError(
                "graded dimensions need a central character; without one the "
                "degree-0 piece is infinite-dimensional"
            )
        if degree < 0:
            return 0
        weights = self._creator_weights(degree)
        dp = [0] * (degree + 1)
        dp[0] = 1
        for w in weights:
            for d in range(w, degree + 1):
                dp[d] += dp[d - w]
        return dp[degree]

    def _creator_weights(self, cap: int) -> list[int]:
        st = self.structure
        weights = []
        for name in st.u_prime_names:
            base = st.degree_of(name)
            n = 1
            while base + n - 1 <= cap:
                weights.append(base + n - 1)
                n += 1
        return weights

    def character(self, depth: int) -> list[int]:
        return [self.graded_dim(d) for d in range(depth + 1)]

    def basis_monomials(self, degree: int) -> list[Monomial]:
        """All canonical monomials of exactly the given degree (enumeration)."""
        self.require_graded("basis enumeration")
        st = self.structure
        creators: list[tuple[int, Symbol]] = []
        for idx, name in enumerate(st.u_prime_names):
            base = st.degree_of(name)
            n = 1
            while base + n - 1 <= degree:
                creators.append((base + n - 1, (-n, 1, idx)))
                n += 1
        creators.sort(key=lambda t: t[1])
        out: list[Monomial] = []

        def rec(i: int, left: int, acc: list[Symbol]):
            if left == 0:
                out.append(tuple(sorted(acc)))
                return
            if i >= len(creators):
                return
            w, sym = creators[i]
            rec(i + 1, left, acc)
            if w <= left:
                acc.append(sym)
                rec(i, left - w, acc)
                acc.pop()

        rec(0, degree, [])
        return sorted(set(out))

    def basis_states_upto(self, degree: int) -> list[State]:
        out = []
        for d in range(degree + 1):
            for mono in self.basis_monomials(d):
                out.append({mono: Fraction(1)})
        return out

    # -- vertex operator modes ---------------------------------------------------------

    def mode_of_state(self, a: State, n: int, b: State) -> State:
        """a_n b where Y(a, x) = sum a_n x^{-n-1}.

        Base cases: vacuum modes are delta_{n,-1} id, and (u(-1)1)_n acts as
        u(n).  For a headed by u(-k-1) the iterate expansion applies, with
        both sums truncated by degree bounds, so a graded module is
        required.
        """
        self.require_graded("mode_of_state")
        out: State = {}
        for mono, c in _clean(a).items():
            _add_into(out, self._mode_of_monomial(mono, n, b), c)
        return out

    def _mode_of_monomial(self, mono: Monomial, n: int, b: State) -> State:
        b = _clean(b)
        if not b:
            return {}
        if not mono:
            return dict(b) if n == -1 else {}
        items = tuple(sorted(b.items()))
        key = (mono, n, items)
        cached = self._mode_memo.get(key)
        if cached is not None:
            return cached

        head, tail = mono[0], mono[1:]
        hn, cls, idx = head
        if cls == 0:
            raise ValueError("central creators are scalars here; use a quotient module")
        k = -hn - 1  # head is u(-k-1), k >= 0
        deg_tail = self.monomial_degree(tail)
        deg_b = self.state_degree(b)
        deg_u = self.structure.degree_of(self.structure.u_prime_names[idx])
        bound_first = deg_tail + deg_b - n - 1
        bound_second = deg_u + deg_b - 1
        result: State = {}
        i = 0
        while i <= max(bound_first, bound_second):
            coeff = gen_binomial(-k - 1, i)
            if coeff:
                if i <= bound_first:
                    inner = self._mode_of_monomial(tail, n + i, b)
                    if inner:
                        sign = -1 if i % 2 else 1
                        outer = self._act_creator_state(idx, -k - 1 - i, inner)
                        _add_into(result, outer, coeff * sign)
                if i <= bound_second:
                    ub = self.act(self.structure.u_prime_names[idx], i, b)
                    if ub:
                        inner = self._mode_of_monomial(tail, n - k - 1 - i, ub)
                        sign = -1 if (k + 1 + i) % 2 else 1
                        _add_into(result, inner, -coeff * sign)
            i += 1
        result = _clean(result)
        self._mode_memo[key] = result
        return result

    def _act_creator_state(self, idx: int, n: int, state: State) -> State:
        out: State = {}
        key = (1, n, idx)
        for mono, c in state.items():
            _add_into(out, self._act_key(key, mono), c)
        return out

    # -- derived operations -----------------------------------------------------------

    def modes_of_pair(self, a: State, b: State) -> dict[int, State]:
        """All nonzero a_i b for i >= 0 (finitely many by degree bounds)."""
        self.require_graded("modes_of_pair")
        top = self.state_degree(a) + self.state_degree(b) - 1
        out = {}
        for i in range(0, max(top, -1) + 1):
            v = self.mode_of_state(a, i, b)
            if v:
                out[i] = v
        return out

    def lie_admissible_bracket(self, a: State, b: State) -> State:
        """a_{-1} b - b_{-1} a."""
        return state_add(
            self.mode_of_state(a, -1, b), self.mode_of_state(b, -1, a), Fraction(-1)
        )

    def borcherds_check(self, a: State, b: State, window: int, degree: int) -> list[str]:
        """Verify [a_m, b_n] = sum_i binom(m,i) (a_i b)_{m+n-i} on all basis
        states of degree <= ``degree``, for |m|, |n| <= ``window``."""
        self.require_graded("borcherds_check")
        products = self.modes_of_pair(a, b)
        problems = []
        states = self.basis_states_upto(degree)
        for m in range(-window, window + 1):
            for n in range(-window, window + 1):
                for s in states:
                    bs = self.mode_of_state(b, n, s)
                    lhs = self.mode_of_state(a, m, bs) if bs else {}
                    as_ = self.mode_of_state(a, m, s)
                    if as_:
                        lhs = state_add(lhs, self.mode_of_state(b, n, as_), Fraction(-1))
                    rhs: State = {}
                    for i, aib in products.items():
                        c = gen_binomial(m, i)
                        if c:
                            _add_into(rhs, self.mode_of_state(aib, m + n - i, s), c)
                    if not state_eq(lhs, rhs):
                        problems.append(
                            f"commutator mismatch at m={m}, n={n} on state "
                            f"{self.format_state(s)}: {self.format_state(lhs)} "
                            f"vs {self.format_state(rhs)}"
                        )
                        if len(problems) >= 5:
                            return problems
        return problems
