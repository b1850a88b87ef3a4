"""Rewriting engine: triangular normal forms F-block * toral letter * E-block, plus tensor arithmetic.

A toral letter T(k, l) stands for K_k L_l with (k, l) in a lattice of the doubled space.
All commutation data is linear in (k, l), so the infinite families K_gamma, L_delta
are handled by one rule family each.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from math import floor
from typing import Callable, Iterable, NamedTuple, Sequence

from . import ratmat as rm
from .errors import (
    DegreeMismatch,
    ExponentNotInLattice,
    InputError,
    NonTerminating,
    SpecMismatch,
)
from .lattice import Lattice
from .qscalar import FieldScalar, ScalarContext, render_scalar

Letter = tuple  # ("E", i) | ("F", i) | ("T", vector of length 2n)


class Word(NamedTuple):
    f: tuple[int, ...]
    t: tuple[Fraction, ...] | None
    e: tuple[int, ...]

    def letters(self) -> list[Letter]:
        out: list[Letter] = [("F", i) for i in self.f]
        if self.t is not None:
            out.append(("T", self.t))
        out.extend(("E", i) for i in self.e)
        return out

    @property
    def degree(self) -> int:
        return len(self.f) + len(self.e) + (0 if self.t is None else 1)

    @property
    def is_toral(self) -> bool:
        return not self.f and not self.e


ONE_WORD = Word((), None, ())


def E(i: int) -> Letter:
    return ("E", i)


def F(i: int) -> Letter:
    return ("F", i)


def T(v: Sequence) -> Letter:
    return ("T", rm.vec(v))


class ToralGroup:
    """Lattice of toral exponents, optionally modulo a subgroup H (canonical representatives by HNF)."""

    def __init__(self, n: int, lattice: Lattice, quotient: Sequence[Sequence] | None = None):
        if lattice.dim != 2 * n:
            raise InputError("toral lattice must live in the doubled space")
        self.n = n
        self.lattice = lattice
        self.quotient = tuple(rm.vec(h) for h in quotient) if quotient else ()
        for h in self.quotient:
            if h not in lattice:
                raise InputError("quotient generators must lie in the toral lattice")
        self._cache: dict = {}
        if self.quotient:
            den = rm.common_denominator(list(lattice.basis) + list(self.quotient))
            self._den = den
            # eliminate the L-coordinates first so representatives prefer K letters
            self._perm = list(range(n, 2 * n)) + list(range(n))
            rows = [tuple(h[p] * den for p in self._perm) for h in self.quotient]
            h = rm.hnf_rows(rows)
            self._hnf = [tuple(int(x) for x in r) for r in h]
            self._pivots = [next(j for j, x in enumerate(r) if x) for r in self._hnf]

    def canonical(self, v: Sequence) -> tuple[Fraction, ...] | None:
        v = tuple(v)
        hit = self._cache.get(v, False)
        if hit is not False:
            return hit
        ok, _ = self.lattice.contains(v)
        if not ok:
            raise ExponentNotInLattice(f"toral exponent {tuple(rm.fmt_frac(x) for x in v)} is outside the lattice")
        out = v
        if self.quotient:
            den = self._den
            w = [int(v[p] * den) for p in self._perm]
            for row, piv in zip(self._hnf, self._pivots):
                k = floor(Fraction(w[piv], row[piv]))
                if k:
                    w = [a - k * b for a, b in zip(w, row)]
            out = [Fraction(0)] * (2 * self.n)
            for idx, p in enumerate(self._perm):
                out[p] = Fraction(w[idx], den)
            out = tuple(out)
        res = None if all(x == 0 for x in out) else out
        self._cache[v] = res
        return res

    def fuse(self, a, b):
        if a is None:
            return b if b is None else self.canonical(b)
        if b is None:
            return a
        return self.canonical(rm.vadd(a, b))

    def generators(self) -> list[tuple[Fraction, ...]]:
        """Lattice basis vectors (their canonical representatives, nonzero ones)."""
        out = []
        for b in self.lattice.basis:
            c = self.canonical(b)
            if c is not None and c not in out:
                out.append(c)
        return out


@dataclass
class SerreRule:
    lead: tuple[int, ...]
    rhs: list[tuple[FieldScalar, tuple[int, ...]]]
    relation: list[tuple[FieldScalar, tuple[int, ...]]]
    pair: tuple[int, int] | None  # None marks a rule derived by completion


def e_word_key(w: tuple[int, ...]) -> tuple:
    return w


def f_word_key(w: tuple[int, ...]) -> tuple:
    # precedence F_n < ... < F_1
    return tuple(-i for i in w)


class RewriteSystem:
    """Oriented rewrite rules for a presented algebra with triangular normal form."""

    def __init__(
        self,
        n: int,
        ctx: ScalarContext,
        toral: ToralGroup,
        commute: Sequence[Sequence[Fraction]],
        e_coeff: Sequence[FieldScalar] | None,
        serre_E: Sequence[SerreRule],
        serre_F: Sequence[SerreRule],
        has_E: bool = True,
        has_F: bool = True,
        label: str = "",
        step_cap: int = 10**7,
    ):
        self.n = n
        self.ctx = ctx
        self.toral = toral
        self.commute = [rm.vec(c) for c in commute]  # exponent of T E_j T^-1 is dot(t, commute[j])
        self.e_coeff = list(e_coeff) if e_coeff is not None else None
        self.serre_E = list(serre_E)
        self.serre_F = list(serre_F)
        self.has_E = has_E
        self.has_F = has_F
        self.label = label
        self.step_cap = step_cap
        self._steps = 0
        self.one = ctx.one
        self._check_orientation()
        self._lead_E = self._index(self.serre_E)
        self._lead_F = self._index(self.serre_F)
        self._nfE: dict = {}
        self._nfF: dict = {}
        self._mulL: dict = {}
        self._mulW: dict = {}
        self._rexp: dict = {}
        self._kl: list = []
        if e_coeff is not None:
            for i in range(n):
                a = rm.unit(n, i)
                z = tuple(Fraction(0) for _ in range(n))
                self._kl.append((self.toral.canonical(a + z), self.toral.canonical(z + a)))

    # construction checks
    def _check_orientation(self) -> None:
        for r in self.serre_E:
            for _, w in r.rhs:
                if not (len(w) == len(r.lead) and e_word_key(w) < e_word_key(r.lead)):
                    raise NonTerminating(f"E rule {r.lead} is not decreasing")
        for r in self.serre_F:
            for _, w in r.rhs:
                if not (len(w) == len(r.lead) and f_word_key(w) < f_word_key(r.lead)):
                    raise NonTerminating(f"F rule {r.lead} is not decreasing")

    @staticmethod
    def _index(rules):
        out: dict[int, list[SerreRule]] = {}
        for r in rules:
            out.setdefault(r.lead[0], []).append(r)
        return out

    # scalars
    def r_exp(self, t, j: int) -> Fraction:
        if t is None:
            return Fraction(0)
        key = (t, j)
        hit = self._rexp.get(key)
        if hit is None:
            hit = rm.dot(t, self.commute[j])
            self._rexp[key] = hit
        return hit

    def r_exp_word(self, t, w: Iterable[int]) -> Fraction:
        if t is None:
            return Fraction(0)
        return sum((self.r_exp(t, j) for j in w), Fraction(0))

    def qpow(self, r) -> FieldScalar:
        return self.ctx.q_power(r)

    def _tick(self) -> None:
        self._steps += 1
        if self._steps > self.step_cap:
            raise NonTerminating("rewrite step cap exceeded")

    # block normal forms
    def _nf_block(self, w, cache, leads):
        hit = cache.get(w)
        if hit is not None:
            return hit
        for pos in range(len(w)):
            for rule in leads.get(w[pos], ()):
                L = rule.lead
                if w[pos : pos + len(L)] == L:
                    self._tick()
                    pre, post = w[:pos], w[pos + len(L) :]
                    res: dict = {}
                    for c, mid in rule.rhs:
                        for ww, cc in self._nf_block(pre + mid + post, cache, leads).items():
                            res[ww] = res.get(ww, 0) + c * cc
                    res = {k: v for k, v in res.items() if v}
                    cache[w] = res
                    return res
        res = {w: self.one}
        cache[w] = res
        return res

    def complete_blocks(self, degree_bound: int) -> int:
        """Add consequence rules resolving E/F-block critical pairs up to `degree_bound`.

        The blocks are homogeneous, so this terminates. Returns the number of rules added.
        """
        added = 0
        for kind in ("E", "F"):
            if (kind == "E" and not self.has_E) or (kind == "F" and not self.has_F):
                continue
            rules = self.serre_E if kind == "E" else self.serre_F
            key = e_word_key if kind == "E" else f_word_key
            while True:
                new = self._block_critical(rules, kind, degree_bound, key)
                if new is None:
                    break
                rules.append(new)
                added += 1
                self._lead_E = self._index(self.serre_E)
                self._lead_F = self._index(self.serre_F)
                self._nfE.clear()
                self._nfF.clear()
                self._mulL.clear()
                self._mulW.clear()
        return added

    def _block_critical(self, rules, kind, bound, key):
        nf = self.nf_E if kind == "E" else self.nf_F
        for ra in rules:
            for rb in rules:
                la, lb = len(ra.lead), len(rb.lead)
                cands = []
                for k in range(1, min(la, lb)):
                    if la + lb - k <= bound and ra.lead[la - k :] == rb.lead[:k]:
                        cands.append((ra.lead + rb.lead[k:], la - k))
                if ra is not rb and lb <= la:
                    for s in range(la - lb + 1):
                        if ra.lead[s : s + lb] == rb.lead:
                            cands.append((ra.lead, s))
                for w, off in cands:
                    diff: dict = {}
                    for c, mid in ra.rhs:
                        for ww, cc in nf(mid + w[la:]).items():
                            diff[ww] = diff.get(ww, 0) + c * cc
                    for c, mid in rb.rhs:
                        for ww, cc in nf(w[:off] + mid + w[off + lb :]).items():
                            diff[ww] = diff.get(ww, 0) - c * cc
                    diff = {k2: v for k2, v in diff.items() if v}
                    if diff:
                        lead = max(diff, key=key)
                        lc = diff[lead]
                        rhs = [(-c / lc, ww) for ww, c in diff.items() if ww != lead]
                        rel = [(c, ww) for ww, c in diff.items()]
                        return SerreRule(lead, rhs, rel, None)
        return None

    def nf_E(self, w: tuple[int, ...]) -> dict:
        return self._nf_block(w, self._nfE, self._lead_E)

    def nf_F(self, w: tuple[int, ...]) -> dict:
        return self._nf_block(w, self._nfF, self._lead_F)

    def is_irreducible_E(self, w) -> bool:
        return self.nf_E(tuple(w)) == {tuple(w): self.one}

    def is_irreducible_F(self, w) -> bool:
        return self.nf_F(tuple(w)) == {tuple(w): self.one}

    # products
    def canonical_letter(self, letter: Letter) -> Letter | None:
        kind = letter[0]
        if kind == "T":
            c = self.toral.canonical(letter[1])
            return None if c is None else ("T", c)
        if kind == "E" and not self.has_E or kind == "F" and not self.has_F:
            raise SpecMismatch(f"generator {kind}{letter[1] + 1} does not belong to {self.label or 'this algebra'}")
        if not 0 <= letter[1] < self.n:
            raise SpecMismatch(f"generator index {letter[1] + 1} out of range")
        return letter

    def mul_letter(self, u: Word, letter: Letter) -> dict:
        key = (u, letter)
        hit = self._mulL.get(key)
        if hit is not None:
            return hit
        kind = letter[0]
        res: dict = {}
        if kind == "T":
            t = letter[1]
            s = self.qpow(-self.r_exp_word(t, u.e))
            res[Word(u.f, self.toral.fuse(u.t, t), u.e)] = s
        elif kind == "E":
            for w, c in self.nf_E(u.e + (letter[1],)).items():
                res[Word(u.f, u.t, w)] = c
        else:
            j = letter[1]
            s0 = self.qpow(-self.r_exp(u.t, j))
            for fw, c in self.nf_F(u.f + (j,)).items():
                res[Word(fw, u.t, u.e)] = c * s0
            if self.e_coeff is not None:
                cj = self.e_coeff[j]
                tK, tL = self._kl[j]
                e = u.e
                for p, ep in enumerate(e):
                    if ep != j:
                        continue
                    pre, post = e[:p], e[p + 1 :]
                    for tx, sign in ((tK, 1), (tL, -1)):
                        coef = cj * self.qpow(-self.r_exp_word(tx, pre))
                        if sign < 0:
                            coef = -coef
                        tt = self.toral.fuse(u.t, tx)
                        for ew, c in self.nf_E(pre + post).items():
                            w = Word(u.f, tt, ew)
                            res[w] = res.get(w, 0) + coef * c
            res = {k: v for k, v in res.items() if v}
        self._mulL[key] = res
        return res

    def mul_words(self, u: Word, v: Word) -> dict:
        if v == ONE_WORD:
            return {u: self.one}
        if u == ONE_WORD:
            return {v: self.one}
        key = (u, v)
        hit = self._mulW.get(key)
        if hit is not None:
            return hit
        if not u.e and not v.f:
            res = {Word(u.f, self.toral.fuse(u.t, v.t), v.e): self.one}
        else:
            cur = {u: self.one}
            for letter in v.letters():
                nxt: dict = {}
                for w, c in cur.items():
                    for w2, c2 in self.mul_letter(w, letter).items():
                        nxt[w2] = nxt.get(w2, 0) + c * c2
                cur = {k: x for k, x in nxt.items() if x}
            res = cur
        self._mulW[key] = res
        return res

    def mul_dicts(self, a: dict, b: dict) -> dict:
        out: dict = {}
        for u, cu in a.items():
            for v, cv in b.items():
                for w, cw in self.mul_words(u, v).items():
                    out[w] = out.get(w, 0) + cu * cv * cw
        return {k: x for k, x in out.items() if x}

    def normal_form_letters(self, letters: Sequence[Letter]) -> dict:
        cur = {ONE_WORD: self.one}
        for raw in letters:
            letter = self.canonical_letter(raw)
            if letter is None:
                continue
            nxt: dict = {}
            for w, c in cur.items():
                for w2, c2 in self.mul_letter(w, letter).items():
                    nxt[w2] = nxt.get(w2, 0) + c * c2
            cur = {k: x for k, x in nxt.items() if x}
        return cur

    def word(self, letters: Sequence[Letter]) -> "AlgebraElement":
        return AlgebraElement(self, self.normal_form_letters(letters))

    def element(self, terms: dict) -> "AlgebraElement":
        return AlgebraElement(self, terms)

    def scalar(self, c) -> "AlgebraElement":
        c = c if isinstance(c, FieldScalar) else self.ctx.const(c)
        return AlgebraElement(self, {ONE_WORD: c} if c else {})

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def toral_word(self, v) -> Word:
        return Word((), self.toral.canonical(v), ())

    # relation catalogue
    def relations(self, sample_torals: Sequence | None = None) -> list[tuple[str, list]]:
        """Defining relations as raw letter combinations: list of (name, [(coef, letters)])."""
        n = self.n
        ts = list(sample_torals) if sample_torals is not None else self.toral.generators()
        rels: list[tuple[str, list]] = []
        one = self.one
        zero2n = tuple(Fraction(0) for _ in range(2 * n))
        for a in ts:
            rels.append((f"inverse[{_vs(a)}]", [(one, [T(a), T(rm.vneg(a))]), (-one, [])]))
            for b in ts:
                rels.append((f"fuse[{_vs(a)},{_vs(b)}]", [(one, [T(a), T(b)]), (-one, [T(rm.vadd(a, b))])]))
        for h in self.toral.quotient:
            rels.append((f"quotient[{_vs(h)}]", [(one, [T(h)]), (-one, [])]))
        for a in ts:
            for j in range(n):
                r = rm.dot(a, self.commute[j])
                if self.has_E:
                    rels.append(
                        (f"(c)[{_vs(a)},E{j + 1}]", [(one, [T(a), E(j), T(rm.vneg(a))]), (-self.qpow(r), [E(j)])])
                    )
                if self.has_F:
                    rels.append(
                        (f"(d)[{_vs(a)},F{j + 1}]", [(one, [T(a), F(j), T(rm.vneg(a))]), (-self.qpow(-r), [F(j)])])
                    )
        if self.has_E and self.has_F and self.e_coeff is not None:
            for i in range(n):
                for j in range(n):
                    terms = [(one, [E(i), F(j)]), (-one, [F(j), E(i)])]
                    if i == j:
                        a = rm.unit(n, i)
                        z = zero2n[:n]
                        terms += [(-self.e_coeff[i], [T(a + z)]), (self.e_coeff[i], [T(z + a)])]
                    rels.append((f"(e)[{i + 1},{j + 1}]", terms))
        for r in (r for r in self.serre_E if r.pair is not None):
            rels.append((f"(f)[{r.pair[0] + 1},{r.pair[1] + 1}]", [(c, [E(x) for x in w]) for c, w in r.relation]))
        for r in (r for r in self.serre_F if r.pair is not None):
            rels.append((f"(g)[{r.pair[0] + 1},{r.pair[1] + 1}]", [(c, [F(x) for x in w]) for c, w in r.relation]))
        return rels

    def basis_words(self, degree_bound: int, torals: Sequence | None = None) -> list[Word]:
        """Normal words with |E| + |F| + [toral letter present] <= degree_bound."""
        ts = list(torals) if torals is not None else self.toral.generators()
        ew = irreducible_words(self, "E", degree_bound) if self.has_E else {0: [()]}
        fw = irreducible_words(self, "F", degree_bound) if self.has_F else {0: [()]}
        out = []
        tors = [None] + [self.toral.canonical(t) for t in ts]
        seen = set()
        for df, fs in fw.items():
            for de, es in ew.items():
                for t in tors:
                    d = df + de + (0 if t is None else 1)
                    if d > degree_bound:
                        continue
                    for f in fs:
                        for e in es:
                            w = Word(f, t, e)
                            if w not in seen:
                                seen.add(w)
                                out.append(w)
        return out


def _vs(v) -> str:
    return ",".join(rm.fmt_frac(x) for x in v)


def irreducible_words(system: RewriteSystem, kind: str, max_degree: int) -> dict[int, list[tuple[int, ...]]]:
    """Irreducible E- or F-words grouped by degree (built by extending irreducible words)."""
    out = {0: [()]}
    red = system.is_irreducible_E if kind == "E" else system.is_irreducible_F
    for d in range(1, max_degree + 1):
        layer = []
        for w in out[d - 1]:
            for i in range(system.n):
                cand = w + (i,)
                if red(cand):
                    layer.append(cand)
        out[d] = layer
    return out


def pbw_counts(system: RewriteSystem, max_degree: int) -> list[int]:
    words = irreducible_words(system, "E", max_degree)
    return [len(words[d]) for d in range(max_degree + 1)]


# elements


class AlgebraElement:
    __slots__ = ("system", "terms")

    def __init__(self, system: RewriteSystem, terms: dict):
        self.system = system
        self.terms = {k: v for k, v in terms.items() if v}

    def _check(self, other: "AlgebraElement") -> None:
        if other.system is not self.system:
            raise SpecMismatch("elements belong to different algebras")

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            other = self.system.scalar(other)
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return AlgebraElement(self.system, out)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.system, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            self._check(other)
            return AlgebraElement(self.system, self.system.mul_dicts(self.terms, other.terms))
        return AlgebraElement(self.system, {k: v * other for k, v in self.terms.items()})

    def __rmul__(self, other):
        return AlgebraElement(self.system, {k: other * v for k, v in self.terms.items()})

    def __pow__(self, k: int):
        out = self.system.scalar(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return self.system is other.system and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coefficient(self, w: Word) -> FieldScalar:
        return self.terms.get(w, self.system.ctx.zero)

    def render(self) -> str:
        return render_element(self.terms, self.system.n)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"AlgebraElement({self.render()!r})"


def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x * y


def normal_form(system: RewriteSystem, raw: Sequence[tuple]) -> AlgebraElement:
    """Normal form of a raw combination [(coef, letters), ...]."""
    out: dict = {}
    for c, letters in raw:
        for w, cw in system.normal_form_letters(letters).items():
            out[w] = out.get(w, 0) + c * cw
    return AlgebraElement(system, out)


# ordering and rendering


def word_sort_key(w: Word) -> tuple:
    letters = [(0, -i) for i in w.f]
    if w.t is not None:
        n = len(w.t) // 2
        k, l = w.t[:n], w.t[n:]
        if any(l):
            letters.append((1, tuple(l)))
        if any(k):
            letters.append((2, tuple(k)))
    letters += [(3, i) for i in w.e]
    return (len(letters), tuple(letters))


def render_vector(v) -> str:
    return "[" + ",".join(rm.fmt_frac(x) for x in v) + "]"


def render_word(w: Word, n: int) -> str:
    parts = [f"F{i + 1}" for i in w.f]
    if w.t is not None:
        k, l = w.t[:n], w.t[n:]
        if any(l):
            parts.append("L" + render_vector(l))
        if any(k):
            parts.append("K" + render_vector(k))
    parts += [f"E{i + 1}" for i in w.e]
    return "*".join(parts) if parts else "1"


def render_element(terms: dict, n: int) -> str:
    if not terms:
        return "0"
    out = []
    for idx, w in enumerate(sorted(terms, key=word_sort_key, reverse=True)):
        c = terms[w].minimal()
        neg = _is_negative_leading(c)
        body = render_scalar(-c if neg else c)
        wtxt = render_word(w, n)
        if wtxt == "1":
            term = body
        elif body == "1":
            term = wtxt
        else:
            term = f"{_paren(body)}*{wtxt}"
        if idx == 0:
            out.append(("-" if neg else "") + term)
        else:
            out.append((" - " if neg else " + ") + term)
    return "".join(out)


def _is_negative_leading(c: FieldScalar) -> bool:
    coeffs = [x for x in c.num.coeffs() if x != 0]
    return bool(coeffs) and coeffs[-1] < 0


def _paren(s: str) -> str:
    depth = 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and i > 0:
            return f"({s})"
    return s


# tensors


class TensorElement:
    __slots__ = ("systems", "terms")

    def __init__(self, systems: Sequence[RewriteSystem], terms: dict):
        self.systems = tuple(systems)
        self.terms = {k: v for k, v in terms.items() if v}

    @property
    def degree(self) -> int:
        return len(self.systems)

    @classmethod
    def pure(cls, *elements: AlgebraElement) -> "TensorElement":
        acc = {(): elements[0].system.one}
        for x in elements:
            nxt = {}
            for k, c in acc.items():
                for w, cw in x.terms.items():
                    nxt[k + (w,)] = c * cw
            acc = nxt
        return cls([x.system for x in elements], acc)

    def __add__(self, other: "TensorElement") -> "TensorElement":
        if self.systems != other.systems:
            raise DegreeMismatch("tensor factors differ")
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return TensorElement(self.systems, out)

    def __neg__(self):
        return TensorElement(self.systems, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        return TensorElement(self.systems, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, TensorElement):
            return tensor_multiply(self, other)
        return TensorElement(self.systems, {k: v * other for k, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.systems == other.systems and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        keyf = lambda ws: tuple(word_sort_key(w) for w in ws)  # noqa: E731
        for ws in sorted(self.terms, key=keyf, reverse=True):
            c = render_scalar(self.terms[ws])
            body = " (x) ".join(render_word(w, s.n) for w, s in zip(ws, self.systems))
            parts.append(body if c == "1" else f"{_paren(c)}*({body})")
        return " + ".join(parts)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"TensorElement({self.render()!r})"


def tensor_multiply(u: TensorElement, v: TensorElement) -> TensorElement:
    if u.degree != v.degree:
        raise DegreeMismatch(f"tensor degrees {u.degree} and {v.degree}")
    if u.systems != v.systems:
        raise SpecMismatch("tensor factors belong to different algebras")
    out: dict = {}
    systems = u.systems
    for ku, cu in u.terms.items():
        for kv, cv in v.terms.items():
            acc = {(): cu * cv}
            for s, a, b in zip(systems, ku, kv):
                prod = s.mul_words(a, b)
                nxt = {}
                for k, c in acc.items():
                    for w, cw in prod.items():
                        nxt[k + (w,)] = c * cw
                acc = nxt
            for k, c in acc.items():
                out[k] = out.get(k, 0) + c
    return TensorElement(systems, out)


def apply_componentwise(maps: Sequence[Callable[[Word], dict] | None], u: TensorElement, systems=None) -> TensorElement:
    """Apply per-slot linear maps given on words (None keeps the slot). Slot maps return {word: coef}."""
    out: dict = {}
    for ks, c in u.terms.items():
        acc = {(): c}
        for m, w in zip(maps, ks):
            img = {w: None} if m is None else m(w)
            nxt = {}
            for k, a in acc.items():
                for w2, b in img.items():
                    nxt[k + (w2,)] = a if b is None else a * b
            acc = nxt
        for k, a in acc.items():
            out[k] = out.get(k, 0) + a
    return TensorElement(systems if systems is not None else u.systems, out)


# confluence audit


@dataclass
class OverlapFailure:
    word: list
    rule_a: str
    rule_b: str
    difference: str


@dataclass
class OverlapReport:
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.failures


class _Pattern(NamedTuple):
    name: str
    cls: tuple  # letter classes: ("E", i), ("F", j) or ("T",)


def _patterns(system: RewriteSystem) -> list[_Pattern]:
    n = system.n
    pats = [_Pattern("TT", (("T",), ("T",)))]
    for i in range(n):
        if system.has_E:
            pats.append(_Pattern(f"ET{i}", (("E", i), ("T",))))
        if system.has_F:
            pats.append(_Pattern(f"TF{i}", (("T",), ("F", i))))
    if system.has_E and system.has_F:
        for i in range(n):
            for j in range(n):
                pats.append(_Pattern(f"EF{i}{j}", (("E", i), ("F", j))))
    for r in system.serre_E:
        pats.append(_Pattern("SE" + "".join(map(str, r.lead)), tuple(("E", x) for x in r.lead)))
    for r in system.serre_F:
        pats.append(_Pattern("SF" + "".join(map(str, r.lead)), tuple(("F", x) for x in r.lead)))
    return pats


def _apply_rule(system: RewriteSystem, pat: _Pattern, letters: list, pos: int) -> list:
    """One rewrite step of rule `pat` at `pos`; returns [(coef, letters)]."""
    seg = letters[pos : pos + len(pat.cls)]
    pre, post = letters[:pos], letters[pos + len(pat.cls) :]
    one = system.one
    name = pat.name
    n = system.n
    if name == "TT":
        return [(one, pre + [("T", rm.vadd(seg[0][1], seg[1][1]))] + post)]
    if name.startswith("ET"):
        t, j = seg[1][1], seg[0][1]
        return [(system.qpow(-system.r_exp(t, j)), pre + [seg[1], seg[0]] + post)]
    if name.startswith("TF"):
        t, j = seg[0][1], seg[1][1]
        return [(system.qpow(-system.r_exp(t, j)), pre + [seg[1], seg[0]] + post)]
    if name.startswith("EF"):
        i, j = seg[0][1], seg[1][1]
        out = [(one, pre + [seg[1], seg[0]] + post)]
        if i == j:
            a = rm.unit(n, i)
            z = tuple(Fraction(0) for _ in range(n))
            c = system.e_coeff[i]
            out.append((c, pre + [("T", a + z)] + post))
            out.append((-c, pre + [("T", z + a)] + post))
        return out
    kind = "E" if name.startswith("SE") else "F"
    rules = system.serre_E if kind == "E" else system.serre_F
    lead = tuple(x[1] for x in seg)
    rule = next(r for r in rules if r.lead == lead)
    return [(c, pre + [(kind, x) for x in w] + post) for c, w in rule.rhs]


def _reduce_raw(system: RewriteSystem, raw: list) -> dict:
    out: dict = {}
    for c, letters in raw:
        for w, cw in system.normal_form_letters(letters).items():
            out[w] = out.get(w, 0) + c * cw
    return {k: v for k, v in out.items() if v}


def _matches(cls: tuple, letter) -> bool:
    if cls[0] == "T":
        return letter[0] == "T"
    return letter == cls


def overlap_check(system: RewriteSystem, degree_bound: int, sample_torals: Sequence | None = None) -> OverlapReport:
    """Reduce every critical overlap of rule left sides (length <= degree_bound) both ways."""
    ts = list(sample_torals) if sample_torals is not None else system.toral.generators()
    pats = _patterns(system)
    report = OverlapReport()
    for pa in pats:
        for pb in pats:
            la, lb = len(pa.cls), len(pb.cls)
            shapes = []
            for k in range(1, min(la, lb)):
                if la + lb - k <= degree_bound and _cls_compatible(pa.cls[la - k :], pb.cls[:k]):
                    shapes.append((pa.cls + pb.cls[k:], la - k))
            if lb < la and pa is not pb:
                for s in range(0, la - lb + 1):
                    if la <= degree_bound and _cls_compatible(pa.cls[s : s + lb], pb.cls):
                        shapes.append((pa.cls, s))
            for cls_word, offset in shapes:
                tpos = [i for i, c in enumerate(cls_word) if c[0] == "T"]
                for choice in iproduct(ts, repeat=len(tpos)):
                    letters = [c if c[0] != "T" else None for c in cls_word]
                    for p, t in zip(tpos, choice):
                        letters[p] = ("T", t)
                    ra = _reduce_raw(system, _apply_rule(system, pa, letters, 0))
                    rb = _reduce_raw(system, _apply_rule(system, pb, letters, offset))
                    report.checked += 1
                    if ra != rb:
                        diff = AlgebraElement(system, ra) - AlgebraElement(system, rb)
                        report.failures.append(OverlapFailure(letters, pa.name, pb.name, diff.render()))
    return report


def _cls_compatible(a: tuple, b: tuple) -> bool:
    return all((x[0] == "T" and y[0] == "T") or x == y for x, y in zip(a, b))
