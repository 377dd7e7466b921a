"""Brute-force cross-check: the cyclotomic algebra built from its presentation.

Nothing here touches the module constructions.  Words in the generators are
straightened into the ordered product form (polynomial part, Clifford part,
braid part) by the defining relations alone; the cyclotomic quotient is cut
out by closing the two-sided ideal of the defining polynomial inside a finite
exponent window and projecting onto the ordered basis.  Semisimplicity is
then decided by the rank of the trace form of the left-regular
representation, with no reference to any module.

Two coefficient backends share the straightening code.  The working-precision
backend produces float generator matrices and a singular-value profile of the
trace form; the error there is relative to the (sometimes enormous) reduction
coefficients, so its rank readings can drown.  The modular backend runs the
same pipeline over a prime field, where rank is exact: a specialization can
only lose rank, never gain it, so full rank at one prime is a proof and a
deficit is confirmed at a second prime.  The modular route needs the
parameters to be rational.

Exponent convention: the basis for rank r keeps every exponent in [0, r-1];
the word count r^n 2^n n! is the dimension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product

import numpy as np

from .params import ParameterSet, qval, separability_polynomial
from .scalars import format_scalar, to_scalar


class BudgetExceeded(RuntimeError):
    """The requested size is past what brute force handles here."""


@dataclass(frozen=True)
class PBWWord:
    x_exponents: tuple
    c_bits: tuple
    perm: tuple


def _perm_id(n: int) -> tuple:
    return tuple(range(1, n + 1))


def _apply_s(perm: tuple, i: int) -> tuple:
    out = list(perm)
    out[i - 1], out[i] = out[i], out[i - 1]
    return tuple(out)


def _descent(perm: tuple):
    """Some i with l(perm * s_i) < l(perm), or None for the identity."""
    for i in range(1, len(perm)):
        if perm[i - 1] > perm[i]:
            return i
    return None


# -- coefficient backends ----------------------------------------------------

class PrecisionRing:
    """Complex arithmetic at the parameter set's working precision."""

    exact = False

    def __init__(self, p: ParameterSet):
        p.precision.activate()
        self.p = p
        self.one = to_scalar(1, p.precision)
        self.zero = to_scalar(0, p.precision)
        self.eps = p.epsilon_hecke if p.variant == "nondeg" else self.zero

    def from_int(self, k):
        return to_scalar(k, self.p.precision)

    def qvalue(self, label):
        return qval(self.p.Q[label], self.p)

    def neg(self, a):
        return -a

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a / b

    def is_zero(self, a):
        return abs(a) <= 2.0 ** -100


def _rational(v) -> Fraction:
    if v is None:
        raise BudgetExceeded("exact rank needs rational parameters")
    return v


class PrimeRing:
    """The same coefficients reduced modulo a prime."""

    exact = True

    def __init__(self, p: ParameterSet, prime: int):
        self.p = p
        self.prime = prime
        self.one = 1
        self.zero = 0
        if p.variant == "nondeg":
            q = _rational(p.q_exact)
            self.eps = self.from_fraction(q - 1 / q)
        else:
            self.eps = 0

    def from_fraction(self, fr: Fraction):
        den = fr.denominator % self.prime
        if den == 0:
            raise ZeroDivisionError("prime divides a parameter denominator")
        return fr.numerator * pow(den, -1, self.prime) % self.prime

    def from_int(self, k):
        return k % self.prime

    def qvalue(self, label):
        Qf = _rational(self.p.Q_exact[label])
        if self.p.variant == "nondeg":
            q = _rational(self.p.q_exact)
            t = q * Qf
            return self.from_fraction(2 * (t + 1 / t) / (q + 1 / q))
        return self.from_fraction(Qf * (Qf + 1))

    def neg(self, a):
        return (-a) % self.prime

    def add(self, a, b):
        return (a + b) % self.prime

    def mul(self, a, b):
        return (a * b) % self.prime

    def div(self, a, b):
        return a * pow(b, -1, self.prime) % self.prime

    def is_zero(self, a):
        return a % self.prime == 0


# -- straightening -----------------------------------------------------------

class AffineRewriter:
    """Right-multiplication of ordered words by generators, with memoized
    braid-past-polynomial and braid-past-Clifford crossings."""

    def __init__(self, p: ParameterSet, n: int, ring=None):
        self.p = p
        self.n = n
        self.ring = ring if ring is not None else PrecisionRing(p)
        self.nondeg = p.variant == "nondeg"
        self._tx_cache: dict = {}
        self._tc_cache: dict = {}

    def _add(self, elem: dict, word: PBWWord, coeff) -> None:
        ring = self.ring
        c = elem.get(word)
        c = coeff if c is None else ring.add(c, coeff)
        if ring.is_zero(c):
            elem.pop(word, None)
        else:
            elem[word] = c

    def unit(self) -> dict:
        n = self.n
        return {PBWWord((0,) * n, (0,) * n, _perm_id(n)): self.ring.one}

    def _attach_poly_clifford(self, alpha, beta, elem: dict) -> dict:
        """X^alpha C^beta * elem in ordered form: the Clifford part crosses
        each word's polynomial part, then the Clifford parts merge."""
        out: dict = {}
        ring = self.ring
        n = self.n
        for w, c in elem.items():
            a2 = list(w.x_exponents)
            sign = 1
            if self.nondeg:
                for j in range(n):
                    if beta[j]:
                        a2[j] = -a2[j]
            else:
                for j in range(n):
                    if beta[j] and a2[j] % 2:
                        sign = -sign
            merged = tuple(x + y for x, y in zip(alpha, a2))
            bsign, bits = _merge_cliffords(beta, w.c_bits)
            coeff = c if sign * bsign > 0 else ring.neg(c)
            self._add(out, PBWWord(merged, bits, w.perm), coeff)
        return out

    def times_x(self, elem: dict, k: int, s: int) -> dict:
        if s < 0 and not self.nondeg:
            raise ValueError("no inverse polynomial generators in this variant")
        out: dict = {}
        ring = self.ring
        for w, c in elem.items():
            crossed = self._cross_tx(w.perm, k, s)
            for w2, c2 in self._attach_poly_clifford(
                    w.x_exponents, w.c_bits, crossed).items():
                self._add(out, w2, ring.mul(c, c2))
        return out

    def times_c(self, elem: dict, k: int) -> dict:
        out: dict = {}
        ring = self.ring
        for w, c in elem.items():
            crossed = self._cross_tc(w.perm, k)
            for w2, c2 in self._attach_poly_clifford(
                    w.x_exponents, w.c_bits, crossed).items():
                self._add(out, w2, ring.mul(c, c2))
        return out

    def times_t(self, elem: dict, i: int) -> dict:
        out: dict = {}
        ring = self.ring
        for w, c in elem.items():
            u = w.perm
            if u[i - 1] < u[i]:
                self._add(out, PBWWord(w.x_exponents, w.c_bits, _apply_s(u, i)), c)
            else:
                if not ring.is_zero(ring.eps):
                    self._add(out, w, ring.mul(c, ring.eps))
                self._add(out, PBWWord(w.x_exponents, w.c_bits, _apply_s(u, i)), c)
        return out

    def times_word(self, elem: dict, word: PBWWord) -> dict:
        for k, a in enumerate(word.x_exponents, start=1):
            step = 1 if a > 0 else -1
            for _ in range(abs(a)):
                elem = self.times_x(elem, k, step)
        for k, bit in enumerate(word.c_bits, start=1):
            if bit:
                elem = self.times_c(elem, k)
        letters = []
        u = word.perm
        while (i := _descent(u)) is not None:
            letters.append(i)
            u = _apply_s(u, i)
        for i in reversed(letters):
            elem = self.times_t(elem, i)
        return elem

    def mul(self, e1: dict, e2: dict) -> dict:
        out: dict = {}
        ring = self.ring
        for w2, c2 in e2.items():
            for w1, c1 in self.times_word(dict(e1), w2).items():
                self._add(out, w1, ring.mul(c1, c2))
        return out

    # -- crossings: T_u * X_k^s and T_u * C_k in ordered form

    def _cross_tx(self, u: tuple, k: int, s: int) -> dict:
        key = (u, k, s)
        hit = self._tx_cache.get(key)
        if hit is not None:
            return hit
        n = self.n
        i = _descent(u)
        if i is None:
            alpha = [0] * n
            alpha[k - 1] = s
            out = {PBWWord(tuple(alpha), (0,) * n, u): self.ring.one}
            self._tx_cache[key] = out
            return out
        u_short = _apply_s(u, i)
        out: dict = {}
        ring = self.ring
        for alpha, beta, coeff, has_t in self._tx_rule(i, k, s):
            part = self._monomial_after(u_short, alpha, beta)
            if has_t:
                part = self.times_t(part, i)
            for w, c in part.items():
                self._add(out, w, ring.mul(c, coeff))
        self._tx_cache[key] = out
        return out

    def _cross_tc(self, u: tuple, k: int) -> dict:
        key = (u, k)
        hit = self._tc_cache.get(key)
        if hit is not None:
            return hit
        n = self.n
        i = _descent(u)
        if i is None:
            bits = [0] * n
            bits[k - 1] = 1
            out = {PBWWord((0,) * n, tuple(bits), u): self.ring.one}
            self._tc_cache[key] = out
            return out
        u_short = _apply_s(u, i)
        out: dict = {}
        ring = self.ring
        for beta, coeff, has_t in self._tc_rule(i, k):
            part = self._monomial_after(u_short, (0,) * n, beta)
            if has_t:
                part = self.times_t(part, i)
            for w, c in part.items():
                self._add(out, w, ring.mul(c, coeff))
        self._tc_cache[key] = out
        return out

    def _monomial_after(self, u: tuple, alpha, beta) -> dict:
        """T_u * X^alpha C^beta in ordered form."""
        elem = {PBWWord((0,) * self.n, (0,) * self.n, u): self.ring.one}
        return self.times_word(elem, PBWWord(tuple(alpha), tuple(beta),
                                             _perm_id(self.n)))

    def _tx_rule(self, i: int, k: int, s: int):
        """T_i X_k^s as [(alpha, beta, coeff, trailing_T_i)]."""
        n = self.n
        ring = self.ring
        one, eps = ring.one, ring.eps

        def e(pos, val):
            v = [0] * n
            v[pos - 1] = val
            return tuple(v)

        def b(*pos):
            v = [0] * n
            for q in pos:
                v[q - 1] = 1
            return tuple(v)

        zero = (0,) * n
        if k != i and k != i + 1:
            return [(e(k, s), zero, one, True)]
        cc = b(i, i + 1)
        if self.nondeg:
            neps = ring.neg(eps)
            if k == i and s == 1:
                return [(e(i + 1, 1), zero, one, True),
                        (e(i + 1, 1), zero, neps, False),
                        (e(i, -1), cc, neps, False)]
            if k == i and s == -1:
                return [(e(i + 1, -1), zero, one, True),
                        (e(i, -1), zero, eps, False),
                        (e(i + 1, -1), cc, eps, False)]
            if k == i + 1 and s == 1:
                return [(e(i, 1), zero, one, True),
                        (e(i + 1, 1), zero, eps, False),
                        (e(i + 1, -1), cc, neps, False)]
            return [(e(i, -1), zero, one, True),
                    (e(i, -1), zero, neps, False),
                    (e(i, -1), cc, eps, False)]
        none = ring.neg(one)
        if k == i:
            return [(e(i + 1, 1), zero, one, True),
                    (zero, zero, none, False),
                    (zero, cc, none, False)]
        return [(e(i, 1), zero, one, True),
                (zero, zero, one, False),
                (zero, cc, none, False)]

    def _tc_rule(self, i: int, k: int):
        n = self.n
        ring = self.ring
        one = ring.one

        def b(pos):
            v = [0] * n
            v[pos - 1] = 1
            return tuple(v)

        if k == i:
            return [(b(i + 1), one, True)]
        if k == i + 1:
            if self.nondeg:
                return [(b(i), one, True),
                        (b(i), ring.neg(ring.eps), False),
                        (b(i + 1), ring.eps, False)]
            return [(b(i), one, True)]
        return [(b(k), one, True)]


def _merge_cliffords(beta, gamma):
    """C^beta * C^gamma -> (sign, bits): anticommute and square to one."""
    sign = 1
    bits = list(beta)
    for j, bit in enumerate(gamma):
        if not bit:
            continue
        # move C_{j+1} left past the tail of bits
        sign *= (-1) ** sum(bits[j + 1:])
        if bits[j]:
            bits[j] = 0
        else:
            bits[j] = 1
    return sign, tuple(bits)


def cyclotomic_coefficients(p: ParameterSet, ring=None):
    """Monic defining polynomial in the first polynomial generator.

    Returned as coefficients c_0..c_r with c_r = 1; denominators cleared,
    so the constant term is a unit exactly when inverses exist.
    """
    ring = ring if ring is not None else PrecisionRing(p)
    coeffs = [ring.one]

    def times(factor):
        # factor given low-to-high
        out = [ring.zero] * (len(coeffs) + len(factor) - 1)
        for i, a in enumerate(coeffs):
            for j, b in enumerate(factor):
                out[i + j] = ring.add(out[i + j], ring.mul(a, b))
        return out

    one = ring.one
    for label in range(p.m):
        qv = ring.qvalue(label)
        if p.variant == "nondeg":
            coeffs = times([one, ring.neg(qv), one])
        else:
            coeffs = times([ring.neg(qv), ring.zero, one])
    if p.flavor in ("s", "ss"):
        if p.variant == "nondeg":
            coeffs = times([ring.neg(one), one])
        else:
            coeffs = times([ring.zero, one])
    if p.flavor == "ss":
        coeffs = times([one, one])
    return coeffs


def _budget(p: ParameterSet, n: int) -> None:
    r = p.r
    if r == 0:
        raise BudgetExceeded("rank zero quotient (no defining polynomial factors)")
    ok = (n == 1 and r <= 8) or \
         (n == 2 and r <= (4 if p.variant == "nondeg" else 6)) or \
         (n == 3 and p.variant == "deg" and r <= 2)
    if not ok:
        raise BudgetExceeded(
            f"regular representation for variant={p.variant} n={n} rank={r} "
            "is past the brute-force budget")


class _QuotientScaffold:
    """Window bookkeeping shared by the numeric and modular backends."""

    def window_words(self, n: int, lo: int, hi: int):
        perms = sorted(permutations(range(1, n + 1)))
        return [PBWWord(a, b, u)
                for a in product(range(lo, hi + 1), repeat=n)
                for b in product((0, 1), repeat=n)
                for u in perms]

    def set_window(self, n: int, r: int, lo: int, hi: int) -> None:
        self.lo, self.hi = lo, hi
        self.window = self.window_words(n, lo, hi)
        self.win_index = {w: i for i, w in enumerate(self.window)}
        self.basis = [w for w in self.window
                      if all(0 <= a < r for a in w.x_exponents)]
        self.basis_index = {w: i for i, w in enumerate(self.basis)}
        self.dim = len(self.basis)
        assert self.dim == r ** n * 2 ** n * math.factorial(n)

    def window_plan(self, p: ParameterSet):
        # left multiplication by a Clifford generator flips an exponent down
        # to -(r-1); right multiplication by an inverse reaches -1
        if p.variant == "nondeg":
            lo = min(-1, -(p.r - 1))
            return (lo, p.r), (lo - 1, p.r + 1)
        return (0, p.r), (0, p.r + 1)

    def defining_element(self, p: ParameterSet, n: int, ring) -> dict:
        return {PBWWord(tuple([j] + [0] * (n - 1)), (0,) * n, _perm_id(n)): c
                for j, c in enumerate(cyclotomic_coefficients(p, ring))
                if not ring.is_zero(c)}

    def ideal_frontier(self, rw: AffineRewriter, f_elem: dict, try_add):
        """Grow the two-sided ideal span by one-generator moves."""
        p, n = rw.p, rw.n
        nondeg = p.variant == "nondeg"

        def right_products(g):
            for k in range(1, n + 1):
                yield rw.times_x(g, k, 1)
                if nondeg:
                    yield rw.times_x(g, k, -1)
                yield rw.times_c(g, k)
            for i in range(1, n):
                yield rw.times_t(g, i)

        def left_products(g):
            for k in range(1, n + 1):
                word = [0] * n
                word[k - 1] = 1
                yield rw._attach_poly_clifford(tuple(word), (0,) * n, g)
                if nondeg:
                    word[k - 1] = -1
                    yield rw._attach_poly_clifford(tuple(word), (0,) * n, g)
                bits = [0] * n
                bits[k - 1] = 1
                yield rw._attach_poly_clifford((0,) * n, tuple(bits), g)
            unit = rw.unit()
            for i in range(1, n):
                ti = rw.times_t(unit, i)
                yield rw.mul(ti, g)

        frontier = [f_elem]
        try_add(f_elem)
        rounds = 0
        while frontier and rounds < 200:
            rounds += 1
            fresh = []
            for g in frontier:
                for cand in right_products(g):
                    if try_add(cand):
                        fresh.append(cand)
                for cand in left_products(g):
                    if try_add(cand):
                        fresh.append(cand)
            frontier = fresh

    def left_generator_actions(self, rw: AffineRewriter):
        """(name, index, callable) left multiplications by each generator."""
        n = rw.n
        acts = []

        def x_prefix(elem, k, s):
            alpha = [0] * n
            alpha[k - 1] = s
            return rw._attach_poly_clifford(tuple(alpha), (0,) * n, elem)

        def c_prefix(elem, k):
            bits = [0] * n
            bits[k - 1] = 1
            return rw._attach_poly_clifford((0,) * n, tuple(bits), elem)

        def t_prefix(elem, i):
            return rw.mul(rw.times_t(rw.unit(), i), elem)

        for k in range(1, n + 1):
            acts.append(("X", k, lambda e, k=k: x_prefix(e, k, 1)))
        if rw.nondeg:
            for k in range(1, n + 1):
                acts.append(("Xinv", k, lambda e, k=k: x_prefix(e, k, -1)))
        for k in range(1, n + 1):
            acts.append(("C", k, lambda e, k=k: c_prefix(e, k)))
        for i in range(1, n):
            acts.append(("T", i, lambda e, i=i: t_prefix(e, i)))
        return acts


class RegularRepresentation(_QuotientScaffold):
    """The quotient algebra on its ordered-word basis, numerically."""

    def __init__(self, p: ParameterSet, n: int):
        _budget(p, n)
        self.p = p
        self.n = n
        self.rw = AffineRewriter(p, n)
        self.r = p.r
        first, wider = self.window_plan(p)
        try:
            self._assemble(*first)
        except BudgetExceeded:
            self._assemble(*wider)

    def _assemble(self, lo: int, hi: int) -> None:
        self.set_window(self.n, self.r, lo, hi)
        f_elem = self.defining_element(self.p, self.n, self.rw.ring)
        raws = self._close_ideal(f_elem)
        self._solve_projection(raws)
        self._generator_matrices()

    def _vec(self, elem: dict):
        v = np.zeros(len(self.window), dtype=np.complex128)
        for w, c in elem.items():
            idx = self.win_index.get(w)
            if idx is None:
                return None
            v[idx] = complex(c)
        return v

    def _close_ideal(self, f_elem: dict):
        win_dim = len(self.window)
        cap = win_dim - self.dim + 8
        q_buf = np.zeros((win_dim, cap), dtype=np.complex128)
        count = 0
        raws: list = []

        # incremental pass only detects novelty; the projection is later
        # rebuilt from the raw vectors in one stable factorization
        def try_add(elem):
            nonlocal count
            v = self._vec(elem)
            if v is None:
                return False
            nrm = np.linalg.norm(v)
            if nrm < 1e-12:
                return False
            v = v / nrm
            q = q_buf[:, :count]
            w = v - q @ (q.conj().T @ v)
            w = w - q @ (q.conj().T @ w)
            nrm2 = np.linalg.norm(w)
            if nrm2 < 1e-8 or count >= cap:
                return False
            q_buf[:, count] = w / nrm2
            count += 1
            raws.append(v)
            return True

        self.ideal_frontier(self.rw, f_elem, try_add)
        return raws

    def _solve_projection(self, raws) -> None:
        basis_set = set(self.basis)
        out_words = [w for w in self.window if w not in basis_set]
        out_index = {w: i for i, w in enumerate(out_words)}
        in_rows = np.array([self.win_index[w] for w in self.basis], dtype=int)
        out_rows = np.array([self.win_index[w] for w in out_words], dtype=int)
        if not raws:
            raise BudgetExceeded("ideal closure found nothing inside the window")
        raw_mat = np.stack(raws, axis=1)
        u, sv, _ = np.linalg.svd(raw_mat, full_matrices=False)
        keep = int((sv > sv[0] * 1e-12).sum())
        q_mat = u[:, :keep]
        q_out = q_mat[out_rows, :]
        q_in = q_mat[in_rows, :]
        rhs = np.eye(len(out_words), dtype=np.complex128)
        sol, *_ = np.linalg.lstsq(q_out, rhs, rcond=None)
        resid = q_out @ sol - rhs
        worst = float(np.abs(resid).max()) if resid.size else 0.0
        if worst > 1e-6:
            raise BudgetExceeded(
                f"ideal closure cannot reduce the window (residual {worst:.2e})")
        # pi(e_w) = e_w - Q z  restricted to basis coordinates
        self._pi_out = -(q_in @ sol)
        self._out_index = out_index

    def _project(self, elem: dict) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.complex128)
        for w, c in elem.items():
            bi = self.basis_index.get(w)
            if bi is not None:
                v[bi] += complex(c)
                continue
            oi = self._out_index.get(w)
            if oi is None:
                raise BudgetExceeded(f"word escapes the reduction window: {w}")
            v += complex(c) * self._pi_out[:, oi]
        return v

    def _generator_matrices(self) -> None:
        D = self.dim
        one = self.rw.ring.one

        def column_map(apply):
            m = np.zeros((D, D), dtype=np.complex128)
            for j, w in enumerate(self.basis):
                m[:, j] = self._project(apply({w: one}))
            return m

        self.X, self.Xinv, self.C, self.T = [], [], [], []
        for name, _, act in self.left_generator_actions(self.rw):
            getattr(self, name).append(column_map(act))

    def word_matrix(self, w: PBWWord) -> np.ndarray:
        m = np.eye(self.dim, dtype=np.complex128)
        for k, a in enumerate(w.x_exponents):
            g = self.X[k] if a > 0 else (self.Xinv[k] if a < 0 else None)
            for _ in range(abs(a)):
                m = m @ g
        for k, bit in enumerate(w.c_bits):
            if bit:
                m = m @ self.C[k]
        u = w.perm
        letters = []
        while (i := _descent(u)) is not None:
            letters.append(i)
            u = _apply_s(u, i)
        for i in reversed(letters):
            m = m @ self.T[i - 1]
        return m


class ModularQuotient(_QuotientScaffold):
    """The same construction over a prime field: ranks here are exact."""

    # below 2^26 so a 200-term inner product of residues fits in int64
    PRIMES = (67108859, 67108837, 67108819)

    def __init__(self, p: ParameterSet, n: int, prime: int):
        _budget(p, n)
        self.p = p
        self.n = n
        self.prime = prime
        self.ring = PrimeRing(p, prime)
        self.rw = AffineRewriter(p, n, self.ring)
        self.r = p.r
        first, wider = self.window_plan(p)
        try:
            self._assemble(*first)
        except BudgetExceeded:
            self._assemble(*wider)

    def _assemble(self, lo: int, hi: int) -> None:
        self.set_window(self.n, self.r, lo, hi)
        # columns ordered out-of-range first: every echelon pivot must land
        # on an out column, else the window is too tight
        basis_set = set(self.basis)
        out_words = [w for w in self.window if w not in basis_set]
        self.col_of = {}
        for i, w in enumerate(out_words):
            self.col_of[w] = i
        for i, w in enumerate(self.basis):
            self.col_of[w] = len(out_words) + i
        self.n_out = len(out_words)
        self.width = len(self.window)
        self._close_ideal()
        self._generator_matrices()

    def _vec(self, elem: dict):
        v = np.zeros(self.width, dtype=np.int64)
        for w, c in elem.items():
            col = self.col_of.get(w)
            if col is None:
                return None
            v[col] = c
        return v

    def _reduce(self, v: np.ndarray) -> np.ndarray:
        mod = self.prime
        for col in self.pivot_order:
            c = v[col]
            if c:
                v = (v - c * self.rows[col]) % mod
        return v

    def _close_ideal(self) -> None:
        mod = self.prime
        self.rows: dict = {}
        self.pivot_order: list = []

        def try_add(elem):
            v = self._vec(elem)
            if v is None:
                return False
            v = v % mod
            if not v.any():
                return False
            v = self._reduce(v)
            nz = np.nonzero(v)[0]
            if nz.size == 0:
                return False
            piv = int(nz[0])
            if piv >= self.n_out:
                # an exact ideal element supported on basis words alone
                # contradicts the dimension count; blame the prime
                raise ZeroDivisionError("spurious modular collapse")
            v = v * pow(int(v[piv]), -1, mod) % mod
            self.rows[piv] = v
            self.pivot_order.append(piv)
            self.pivot_order.sort()
            return True

        f_elem = self.defining_element(self.p, self.n, self.ring)
        self.ideal_frontier(self.rw, f_elem, try_add)
        if len(self.pivot_order) < self.n_out:
            raise BudgetExceeded(
                f"ideal closure covers {len(self.pivot_order)} of "
                f"{self.n_out} out-of-range words")

    def _project(self, elem: dict) -> np.ndarray:
        v = self._vec(elem)
        if v is None:
            raise BudgetExceeded("word escapes the reduction window")
        v = self._reduce(v % self.prime)
        if v[:self.n_out].any():
            raise BudgetExceeded("incomplete reduction in the modular quotient")
        return v[self.n_out:]

    def _generator_matrices(self) -> None:
        D = self.dim
        self.matrices = {}
        for name, idx, act in self.left_generator_actions(self.rw):
            m = np.zeros((D, D), dtype=np.int64)
            for j, w in enumerate(self.basis):
                m[:, j] = self._project(act({w: 1}))
            self.matrices[(name, idx)] = m

    def word_matrix(self, w: PBWWord) -> np.ndarray:
        mod = self.prime
        m = np.eye(self.dim, dtype=np.int64)
        for k, a in enumerate(w.x_exponents, start=1):
            g = self.matrices[("X", k)] if a > 0 else \
                (self.matrices[("Xinv", k)] if a < 0 else None)
            for _ in range(abs(a)):
                m = (m @ g) % mod
        for k, bit in enumerate(w.c_bits, start=1):
            if bit:
                m = (m @ self.matrices[("C", k)]) % mod
        u = w.perm
        letters = []
        while (i := _descent(u)) is not None:
            letters.append(i)
            u = _apply_s(u, i)
        for i in reversed(letters):
            m = (m @ self.matrices[("T", i)]) % mod
        return m

    def trace_gram_rank(self) -> int:
        mod = self.prime
        D = self.dim
        mats = np.stack([self.word_matrix(w) for w in self.basis])
        flat = mats.reshape(D, D * D)
        flat_t = mats.transpose(0, 2, 1).reshape(D, D * D)
        gram = np.zeros((D, D), dtype=np.int64)
        # chunk the inner product so sums of residue products stay in int64
        step = 128
        for start in range(0, D * D, step):
            gram = (gram + flat[:, start:start + step]
                    @ flat_t[:, start:start + step].T) % mod
        return _modular_rank(gram, mod)


def _modular_rank(mat: np.ndarray, mod: int) -> int:
    m = mat % mod
    rows, cols = m.shape
    rank = 0
    for col in range(cols):
        piv = None
        for r in range(rank, rows):
            if m[r, col]:
                piv = r
                break
        if piv is None:
            continue
        m[[rank, piv]] = m[[piv, rank]]
        inv = pow(int(m[rank, col]), -1, mod)
        m[rank] = m[rank] * inv % mod
        mask = np.nonzero(m[rank + 1:, col])[0]
        if mask.size:
            sel = mask + rank + 1
            m[sel] = (m[sel] - np.outer(m[sel, col], m[rank])) % mod
        rank += 1
        if rank == rows:
            break
    return rank


def regular_representation(p: ParameterSet, n: int) -> dict:
    """Left-multiplication matrices of the generators on the ordered basis."""
    rep = RegularRepresentation(p, n)
    return {"dim": rep.dim, "basis": rep.basis,
            "X": rep.X, "Xinv": rep.Xinv, "C": rep.C, "T": rep.T,
            "_rep": rep}


def _modular_trace_rank(p: ParameterSet, n: int):
    """Exact trace-form rank: full rank at any prime is a proof, a deficit
    is believed once two primes agree."""
    last = None
    deficit_seen = None
    for prime in ModularQuotient.PRIMES:
        try:
            qt = ModularQuotient(p, n, prime)
            rank = qt.trace_gram_rank()
        except ZeroDivisionError:
            continue
        last = (rank, qt.dim)
        if rank == qt.dim:
            return last
        if deficit_seen == rank:
            return last
        deficit_seen = rank
    if last is None:
        raise BudgetExceeded("no usable prime for the exact rank")
    return last


def trace_form_rank(p: ParameterSet, n: int):
    """(rank, dim) of the trace form over the ordered basis.

    Rational parameters get the exact modular rank; otherwise the float
    singular-value rank is the best available reading.
    """
    try:
        return _modular_trace_rank(p, n)
    except BudgetExceeded as err:
        if "rational" not in str(err):
            raise
    rank, dim, _ = _numeric_trace_form(p, n)
    return rank, dim


def _numeric_trace_form(p: ParameterSet, n: int):
    rep = RegularRepresentation(p, n)
    if rep.dim > 200:
        raise BudgetExceeded(
            f"trace-form Gram at dimension {rep.dim} is past the budget")
    mats = np.stack([rep.word_matrix(w) for w in rep.basis])
    # unit Frobenius norm per basis word: a diagonal congruence, so the
    # rank is untouched while the spread of the entries collapses
    norms = np.sqrt(np.einsum("aij,aij->a", np.abs(mats), np.abs(mats)))
    mats = mats / norms[:, None, None]
    gram = np.einsum("aij,bji->ab", mats, mats)
    svals = np.linalg.svd(gram, compute_uv=False)
    smax = svals[0] if len(svals) else 0.0
    thresh = max(smax, 1.0) * 1e-6
    rank = int((svals > thresh).sum())
    return rank, rep.dim, svals


def oracle_report(p: ParameterSet, n: int) -> dict:
    """Semisimplicity verdict next to the separating-polynomial value."""
    rank, dim = trace_form_rank(p, n)
    try:
        _, _, svals = _numeric_trace_form(p, n)
        profile = [float(s) for s in svals]
    except BudgetExceeded:
        profile = []
    return {
        "dim": dim,
        "rank": rank,
        "P_value": format_scalar(separability_polynomial(p, n), p.precision),
        "singular_values": profile,
    }


def exact_trace_rank_one_strand(p: ParameterSet):
    """(rank, dim) for a single strand, all arithmetic at working precision.

    No floats, no primes: products straighten exactly and first-position
    exponents reduce by the defining polynomial, so this independently
    confirms both other rank readings on the smallest cases.
    """
    p.precision.activate()
    r = p.r
    if r == 0 or r > 8:
        raise BudgetExceeded("single-strand exact path needs rank in 1..8")
    rw = AffineRewriter(p, 1)
    basis = [PBWWord((a,), (b,), (1,)) for a in range(r) for b in (0, 1)]
    dim = len(basis)
    one = rw.ring.one
    zero = rw.ring.zero
    prods = [[_reduce_first_position(rw.times_word({a: one}, b), p, 1)
              for b in basis] for a in basis]
    tau = {}
    for i, a in enumerate(basis):
        t = zero
        for j, b in enumerate(basis):
            t = t + prods[i][j].get(b, zero)
        tau[a] = t
    gram = []
    for i in range(dim):
        row = []
        for j in range(dim):
            g = zero
            for w, c in prods[i][j].items():
                g = g + c * tau[w]
            row.append(g)
        gram.append(row)
    scale = max((abs(c) for row in gram for c in row), default=0)
    if scale == 0:
        return 0, dim
    cutoff = scale * abs(to_scalar(10, p.precision) ** -40)
    rank = 0
    rows = [row[:] for row in gram]
    for col in range(dim):
        piv, best = None, cutoff
        for ri in range(rank, dim):
            if abs(rows[ri][col]) > best:
                piv, best = ri, abs(rows[ri][col])
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        lead = rows[rank][col]
        for ri in range(rank + 1, dim):
            f = rows[ri][col] / lead
            rows[ri] = [x - f * y for x, y in zip(rows[ri], rows[rank])]
        rank += 1
    return rank, dim


_TOKEN_KINDS = {"t": "T", "s": "T", "x": "X", "c": "C"}


def _parse_token(tok: str):
    text = tok.strip().lower()
    kind = _TOKEN_KINDS.get(text[0])
    if kind is None:
        raise ValueError(f"unknown generator token {tok!r}")
    body = text[1:]
    power = 1
    if "^" in body:
        body, pw = body.split("^", 1)
        power = int(pw)
    return kind, int(body), power


def normal_form(word, p: ParameterSet, n: int) -> dict:
    """Straighten a free word in the generators, exponents reduced.

    `word` is an iterable of tokens like "T1", "X2", "X1^-1", "C2"
    (degenerate spellings "s1", "x2", "c1" also work).  Reduction of
    first-position exponents uses the defining polynomial directly and is
    exact; other positions go through the numeric quotient solver, which
    needs the size to be inside the brute-force budget.
    """
    if n > 3:
        raise BudgetExceeded("free-word straightening capped at three strands")
    p.precision.activate()
    rw = AffineRewriter(p, n)
    elem = rw.unit()
    for tok in word:
        kind, idx, power = _parse_token(tok)
        if kind == "X":
            if power < 0 and p.variant == "deg":
                raise ValueError("no inverse polynomial generators in this variant")
            step = 1 if power > 0 else -1
            for _ in range(abs(power)):
                elem = rw.times_x(elem, idx, step)
        elif kind == "C":
            elem = rw.times_c(elem, idx)
        else:
            if not 1 <= idx < n:
                raise ValueError(f"braid index {idx} out of range")
            elem = rw.times_t(elem, idx)
    elem = _reduce_first_position(elem, p, n)
    r = p.r
    if all(all(0 <= a < r for a in w.x_exponents) for w in elem):
        return elem
    rep = RegularRepresentation(p, n)
    vec = rep._project(elem)
    out: dict = {}
    for i, c in enumerate(vec):
        if abs(c) > 1e-12:
            out[rep.basis[i]] = to_scalar(complex(c), p.precision)
    return out


def _reduce_first_position(elem: dict, p: ParameterSet, n: int) -> dict:
    """Exact exponent reduction at position one via the defining polynomial."""
    ring = PrecisionRing(p)
    coeffs = cyclotomic_coefficients(p, ring)
    r = len(coeffs) - 1
    # X1^r = -sum_{j<r} c_j X1^j ; X1^-1 = -c_0^-1 sum_{j>=1} c_j X1^{j-1}
    high = [-c for c in coeffs[:-1]]
    inv = None
    if p.variant == "nondeg":
        inv = [-coeffs[j] / coeffs[0] for j in range(1, r + 1)]
    out: dict = {}
    work = list(elem.items())
    while work:
        w, c = work.pop()
        a = w.x_exponents[0]
        if 0 <= a < r:
            cur = out.get(w)
            cur = c if cur is None else cur + c
            if abs(cur) <= 2.0 ** -100:
                out.pop(w, None)
            else:
                out[w] = cur
            continue
        if a >= r:
            table, base = high, a - r
        else:
            table, base = inv, a + 1
        for j, tc in enumerate(table):
            if abs(tc) <= 2.0 ** -100:
                continue
            alpha = (base + j,) + w.x_exponents[1:]
            work.append((PBWWord(alpha, w.c_bits, w.perm), c * tc))
    return out
