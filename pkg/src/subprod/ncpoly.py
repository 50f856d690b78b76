"""Noncommutative polynomials in x1..xd, their text form, and graded ideals.

Words are plain tuples of letters in 1..d. Degree-n words are ordered
lexicographically with letter 1 smallest, so the word ``(a1, ..., an)`` sits
at index ``sum((aj - 1) * d**(n - j))`` of C^(d^n). This is the same order
that ``np.kron`` produces for ``e_a1 (x) ... (x) e_an``.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .kernel import CHECK_TOL, InvalidInput, Subspace, orthonormalize

Word = tuple


class ParseError(InvalidInput):
    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}: {text[:pos]!r} <-- {text[pos:]!r}")


def check_word(word, d: int) -> Word:
    w = tuple(int(a) for a in word)
    for a in w:
        if not 1 <= a <= d:
            raise InvalidInput(f"letter {a} out of range 1..{d}")
    return w


def word_index(word: Word, d: int) -> int:
    idx = 0
    for a in word:
        idx = idx * d + (a - 1)
    return idx


def index_word(idx: int, d: int, n: int) -> Word:
    letters = []
    for _ in range(n):
        idx, r = divmod(idx, d)
        letters.append(r + 1)
    return tuple(reversed(letters))


def words(d: int, n: int) -> list:
    """All words of length n in lexicographic order."""
    return list(itertools.product(range(1, d + 1), repeat=n))


def parse_word(text: str, d: int | None = None) -> Word:
    """``"212"`` or ``"2 1 2"`` -> (2, 1, 2). Multi-digit letters need spaces."""
    text = text.strip()
    parts = text.split() if " " in text else list(text)
    w = tuple(int(p) for p in parts)
    return check_word(w, d) if d is not None else w


@dataclass(frozen=True)
class NCPolynomial:
    d: int
    terms: Mapping[Word, complex]

    def __post_init__(self):
        clean = {}
        for w, c in dict(self.terms).items():
            w = check_word(w, self.d)
            c = complex(c)
            if c != 0:
                clean[w] = c
        object.__setattr__(self, "terms", dict(sorted(clean.items(), key=lambda t: (len(t[0]), t[0]))))

    # construction helpers
    @classmethod
    def zero(cls, d: int) -> "NCPolynomial":
        return cls(d, {})

    @classmethod
    def monomial(cls, word, d: int, coeff: complex = 1.0) -> "NCPolynomial":
        return cls(d, {tuple(word): coeff})

    @classmethod
    def from_vector(cls, vec, d: int, n: int) -> "NCPolynomial":
        """Inverse of :func:`embed_coeff` (entries below 1e-14 dropped)."""
        vec = np.asarray(vec, dtype=complex).ravel()
        if vec.size != d**n:
            raise InvalidInput(f"vector length {vec.size} != d^n = {d**n}")
        return cls(d, {index_word(i, d, n): c for i, c in enumerate(vec) if abs(c) > 1e-14})

    def __hash__(self):
        return hash((self.d, tuple(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degrees(self) -> set:
        return {len(w) for w in self.terms}

    @property
    def degree(self) -> int:
        """Largest degree; -1 for the zero polynomial."""
        return max(self.degrees, default=-1)

    def is_homogeneous(self) -> bool:
        return len(self.degrees) <= 1

    def homogeneous_components(self) -> dict:
        out = {}
        for w, c in self.terms.items():
            out.setdefault(len(w), {})[w] = c
        return {n: NCPolynomial(self.d, t) for n, t in sorted(out.items())}

    def coeff_norm(self) -> float:
        return float(np.sqrt(sum(abs(c) ** 2 for c in self.terms.values())))

    # algebra
    def _same_d(self, other):
        if self.d != other.d:
            raise InvalidInput(f"alphabet mismatch: {self.d} vs {other.d}")

    def __add__(self, other):
        self._same_d(other)
        t = dict(self.terms)
        for w, c in other.terms.items():
            t[w] = t.get(w, 0) + c
        return NCPolynomial(self.d, t)

    def __neg__(self):
        return NCPolynomial(self.d, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, NCPolynomial):
            self._same_d(other)
            t = {}
            for (w1, c1), (w2, c2) in itertools.product(self.terms.items(), other.terms.items()):
                t[w1 + w2] = t.get(w1 + w2, 0) + c1 * c2
            return NCPolynomial(self.d, t)
        return NCPolynomial(self.d, {w: c * other for w, c in self.terms.items()})

    def __rmul__(self, scalar):
        return self * scalar

    def evaluate(self, matrices) -> np.ndarray:
        """p(T) = sum_w c_w T^w, with T^() the identity."""
        mats = [np.asarray(m, dtype=complex) for m in matrices]
        if len(mats) != self.d:
            raise InvalidInput(f"need {self.d} matrices, got {len(mats)}")
        k = mats[0].shape[0]
        out = np.zeros((k, k), dtype=complex)
        cache = {(): np.eye(k, dtype=complex)}
        for w, c in self.terms.items():
            out += c * _word_product(mats, w, cache)
        return out

    def __str__(self):
        return render(self)


def _word_product(mats, w, cache):
    if w not in cache:
        cache[w] = mats[w[0] - 1] @ _word_product(mats, w[1:], cache)
    return cache[w]


# ---------------------------------------------------------------------------
# text form

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<var>x\d+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<cplx>\([^()]*\))
  | (?P<op>[+\-*])
    """,
    re.VERBOSE,
)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError("unexpected character", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(0), pos))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


def _complex_literal(tok: str, text: str, pos: int) -> complex:
    body = tok[1:-1].replace(" ", "")
    if not body:
        raise ParseError("empty complex literal", text, pos)
    body = re.sub(r"(^|[+\-])i", r"\g<1>1i", body)
    try:
        return complex(body.replace("i", "j"))
    except ValueError:
        raise ParseError(f"bad complex literal {tok!r}", text, pos) from None


def parse_poly(text: str, d: int) -> NCPolynomial:
    """Parse e.g. ``"x1 x2 - (0.5+2i) x2 x1 + 3"``.

    A term is an optional coefficient (real literal or parenthesised complex
    ``(a+bi)``, optionally followed by ``*``) and a monomial of
    whitespace-separated variables. A bare coefficient, or the literal ``1``,
    stands for the empty monomial.
    """
    toks = _tokenize(text)
    i = 0
    terms: dict = {}

    def peek():
        return toks[i]

    first = True
    while True:
        kind, tok, pos = peek()
        sign = 1.0
        if kind == "op" and tok in "+-":
            sign = -1.0 if tok == "-" else 1.0
            i += 1
        elif not first:
            if kind == "end":
                break
            raise ParseError("expected '+' or '-'", text, pos)
        elif kind == "end":
            raise ParseError("empty polynomial", text, pos)
        first = False

        kind, tok, pos = peek()
        coeff = None
        if kind == "num":
            coeff = float(tok)
            i += 1
        elif kind == "cplx":
            coeff = _complex_literal(tok, text, pos)
            i += 1
        if coeff is not None and peek()[0] == "op" and peek()[1] == "*":
            i += 1
            if peek()[0] != "var":
                raise ParseError("expected variable after '*'", text, peek()[2])
        word = []
        while peek()[0] == "var":
            _, tok, pos = peek()
            idx = int(tok[1:])
            if not 1 <= idx <= d:
                raise ParseError(f"variable x{idx} outside x1..x{d}", text, pos)
            word.append(idx)
            i += 1
        if coeff is None and not word:
            raise ParseError("expected coefficient or variable", text, peek()[2])
        c = sign * (1.0 if coeff is None else coeff)
        w = tuple(word)
        terms[w] = terms.get(w, 0) + c
    return NCPolynomial(d, terms)


def _fmt_real(x: float) -> str:
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def render(p: NCPolynomial) -> str:
    """Inverse of :func:`parse_poly` on the term map (floats rendered by repr)."""
    if p.is_zero():
        return "0"
    pieces = []
    for w, c in p.terms.items():
        mono = " ".join(f"x{a}" for a in w)
        if c.imag == 0:
            sign = "-" if np.signbit(c.real) else "+"
            mag = abs(c.real)
            coef = "" if (mag == 1.0 and mono) else _fmt_real(mag)
        else:
            sign = "+"
            im = c.imag
            coef = f"({_fmt_real(c.real)}{'-' if np.signbit(im) else '+'}{_fmt_real(abs(im))}i)"
        body = " ".join(s for s in (coef, mono) if s)
        pieces.append((sign, body))
    head_sign, head = pieces[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# embedding and ideals

def embed_coeff(p: NCPolynomial, n: int | None = None) -> np.ndarray:
    """p(e) = sum_w c_w e_w in C^(d^n)."""
    if not p.is_homogeneous():
        raise InvalidInput("embed_coeff needs a homogeneous polynomial")
    if n is None:
        n = max(p.degree, 0)
    if p.terms and p.degree != n:
        raise InvalidInput(f"polynomial has degree {p.degree}, expected {n}")
    v = np.zeros(p.d**n, dtype=complex)
    for w, c in p.terms.items():
        v[word_index(w, p.d)] = c
    return v


@dataclass(frozen=True)
class HomogeneousIdeal:
    d: int
    generators: tuple

    def __post_init__(self):
        gens = tuple(self.generators)
        for g in gens:
            if g.d != self.d:
                raise InvalidInput("generator alphabet does not match ideal")
            if g.is_zero():
                raise InvalidInput("zero generator")
            if not g.is_homogeneous():
                raise InvalidInput(f"generator {render(g)!r} is not homogeneous")
            if g.degree < 1:
                raise InvalidInput("degree-0 generator would make the ideal improper")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def parse(cls, d: int, texts: Iterable[str]) -> "HomogeneousIdeal":
        return cls(d, tuple(parse_poly(t, d) for t in texts))

    @property
    def max_degree(self) -> int:
        return max((g.degree for g in self.generators), default=0)

    def generators_of_degree(self, n: int) -> list:
        return [g for g in self.generators if g.degree == n]


def graded_component(J: HomogeneousIdeal, n: int) -> Subspace:
    """I^(n): span of (x^a g x^b)(e) over generators g and |a| + |b| = n - deg g."""
    if n < 1:
        raise InvalidInput("graded_component needs n >= 1")
    d = J.d
    vecs = []
    for g in J.generators:
        m = g.degree
        if m > n:
            continue
        gv = embed_coeff(g, m)
        for left in range(n - m + 1):
            right = n - m - left
            # e_a (x) g(e) (x) e_b for all a, b: identity blocks around gv
            block = np.kron(np.kron(np.eye(d**left), gv.reshape(-1, 1)), np.eye(d**right))
            vecs.append(block)
    if not vecs:
        return Subspace(np.zeros((d**n, 0), dtype=complex))
    return orthonormalize(np.hstack(vecs))


def contains(J: HomogeneousIdeal, p: NCPolynomial, tol: float = CHECK_TOL,
             component: Subspace | None = None) -> bool:
    """Whether homogeneous ``p`` lies in J, up to ``tol`` relative to its coefficient norm."""
    if p.is_zero():
        return True
    return membership_residual(J, p, component) <= tol * p.coeff_norm()


def membership_residual(J: HomogeneousIdeal, p: NCPolynomial, component: Subspace | None = None) -> float:
    """Distance from p(e) to I^(deg p)."""
    if not p.is_homogeneous():
        raise InvalidInput("membership is decided per homogeneous component; split p first")
    if p.is_zero():
        return 0.0
    n = p.degree
    if n == 0:
        # the ideal is proper, so nonzero constants are never members
        return p.coeff_norm()
    comp = graded_component(J, n) if component is None else component
    return comp.distance(embed_coeff(p, n))
