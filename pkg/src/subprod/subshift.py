"""Languages of words avoiding forbidden factors.

Two languages are produced from a finite forbidden set W:

* the factor-closed language: all words with no factor in W;
* the pruned language: words that occur in some bi-infinite sequence
  avoiding W. These are path labels in the higher-block graph after
  repeatedly removing vertices with no incoming or no outgoing edge.
"""
from __future__ import annotations

from functools import lru_cache

from .kernel import InvalidInput


class EmptyLanguage(InvalidInput):
    """The pruned language has no words of some length."""


def normalize_forbidden(W, d: int) -> tuple:
    out = []
    for w in W:
        w = tuple(int(a) for a in w)
        if len(w) < 2:
            raise InvalidInput(f"forbidden word {w} must have length >= 2")
        if any(not 1 <= a <= d for a in w):
            raise InvalidInput(f"forbidden word {w} uses letters outside 1..{d}")
        out.append(w)
    return tuple(sorted(set(out), key=lambda w: (len(w), w)))


def step(W) -> int:
    """k such that the shift defined by W is a k-step SFT (max length - 1)."""
    return max((len(w) for w in W), default=1) - 1


def _ends_with_forbidden(word: tuple, W: tuple) -> bool:
    return any(len(w) <= len(word) and word[-len(w):] == w for w in W)


def allowed_words(W, d: int, n: int) -> list:
    """Words of length n (lexicographic order) with no factor in W."""
    W = normalize_forbidden(W, d)
    return list(_allowed(W, d, n))


@lru_cache(maxsize=256)
def _allowed(W: tuple, d: int, n: int) -> tuple:
    if n == 0:
        return ((),)
    prev = _allowed(W, d, n - 1)
    out = []
    for w in prev:
        for a in range(1, d + 1):
            c = w + (a,)
            if not _ends_with_forbidden(c, W):
                out.append(c)
    return tuple(out)


@lru_cache(maxsize=256)
def _pruned_graph(W: tuple, d: int):
    """Surviving (vertices, edges) of the higher-block graph on k-words."""
    k = max(step(W), 1)
    vertices = set(_allowed(W, d, k))
    edges = set(_allowed(W, d, k + 1))
    while True:
        has_out = {e[:-1] for e in edges}
        has_in = {e[1:] for e in edges}
        keep = vertices & has_out & has_in
        if keep == vertices:
            break
        vertices = keep
        edges = {e for e in edges if e[:-1] in vertices and e[1:] in vertices}
    return k, frozenset(vertices), frozenset(edges)


def pruned_words(W, d: int, n: int) -> list:
    """Words of length n that occur in a bi-infinite sequence avoiding W."""
    W = normalize_forbidden(W, d)
    return list(_pruned(W, d, n))


@lru_cache(maxsize=256)
def _pruned(W: tuple, d: int, n: int) -> tuple:
    k, vertices, edges = _pruned_graph(W, d)
    if n == 0:
        return ((),) if vertices else ()
    if n <= k:
        return tuple(sorted({v[i:i + n] for v in vertices for i in range(k - n + 1)}))
    out = []
    for w in _pruned(W, d, n - 1):
        for a in range(1, d + 1):
            c = w + (a,)
            if c[-(k + 1):] in edges:
                out.append(c)
    return tuple(out)


def language(W, d: int, n: int, prune: bool) -> list:
    words = pruned_words(W, d, n) if prune else allowed_words(W, d, n)
    if prune and not words:
        raise EmptyLanguage(f"the shift forbidding {list(W)} has no words of length {n}")
    return words


def extension_sets(W, d: int, k: int | None = None) -> dict:
    """E_i^k = {a in L^k : i a in L} for the pruned language L, keyed by letter i."""
    W = normalize_forbidden(W, d)
    if k is None:
        k = step(W)
    longer = set(_pruned(W, d, k + 1))
    return {
        i: [a for a in _pruned(W, d, k) if (i,) + a in longer]
        for i in range(1, d + 1)
    }
