"""Exact arithmetic in the algebraic span of Cuntz algebra monomials.

The Cuntz algebra O_n (n >= 2) is generated by isometries s_1, ..., s_n with

    s_i* s_j = delta_ij I,          sum_{i=1}^{n} s_i s_i* = I,

and O_1 denotes the scalars, with the convention that its single generator
is the unit. Every product of generators and adjoints reduces to zero or to
a single word pair s_u s_v* (u, v tuples of 1-based letters), so finite
complex combinations of word pairs form a *-algebra closed under all
operations implemented here.

Equality modulo the relations is decidable on this span: within a degree
class d = |u| - |v|, every term can be rewritten with sum_i s_i s_i* = I
until all annihilation words share one length, and word pairs of a common
shape (|u|, |v|) are linearly independent. ``canonical_equal`` performs
exactly that expansion and compares coefficients.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import BadLevel, MismatchedAlgebra

ZERO_TOL = 1e-13  # coefficients at or below this magnitude are dropped
EQ_TOL = 1e-12    # default tolerance for canonical equality


def _check_word(n, letters):
    word = tuple(int(l) for l in letters)
    if n < 1:
        raise ValueError(f"algebra index must be >= 1, got {n}")
    for l in word:
        if not 1 <= l <= n:
            raise ValueError(f"letter {l} outside 1..{n}")
    if n == 1:
        return ()  # the single generator of O_1 is the unit, words collapse
    return word


@dataclass(frozen=True)
class CuntzMonomial:
    """A word pair s_u s_v* in O_n; u = v = () is the unit I_n."""

    n: int
    u: tuple = ()
    v: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "u", _check_word(self.n, self.u))
        object.__setattr__(self, "v", _check_word(self.n, self.v))

    @classmethod
    def unit(cls, n):
        return cls(n)

    @classmethod
    def generator(cls, n, i):
        return cls(n, (i,))

    @property
    def key(self):
        return (self.u, self.v)

    @property
    def degree(self):
        return len(self.u) - len(self.v)

    def adjoint(self):
        return CuntzMonomial(self.n, self.v, self.u)

    def label(self):
        """Text form ``n=<int>;u=<comma-list>;v=<comma-list>``."""
        us = ",".join(str(l) for l in self.u)
        vs = ",".join(str(l) for l in self.v)
        return f"n={self.n};u={us};v={vs}"

    @classmethod
    def parse_label(cls, text):
        try:
            fields = dict(part.split("=", 1) for part in text.strip().split(";"))
            n = int(fields["n"])
            u = tuple(int(t) for t in fields["u"].split(",") if t)
            v = tuple(int(t) for t in fields["v"].split(",") if t)
        except (KeyError, ValueError) as exc:
            raise ValueError(f"bad monomial label {text!r}") from exc
        return cls(n, u, v)

    def __str__(self):
        if not self.u and not self.v:
            return f"I_{self.n}"
        parts = []
        if self.u:
            parts.append("s" + "".join(f"_{l}" for l in self.u))
        if self.v:
            parts.append("s" + "".join(f"_{l}" for l in self.v) + "*")
        return "".join(parts)


def mono_key_product(a_key, b_key):
    """Product of two word-pair keys; the resulting key or None for zero.

    (s_u1 s_v1*)(s_u2 s_v2*) contracts through s_v1* s_u2: if v1 is a prefix
    of u2 with remainder w the product is s_{u1 w} s_{v2}*; if u2 is a proper
    prefix of v1 with remainder w it is s_{u1} s_{v2 w}*; otherwise some
    s_i* s_j with i != j occurs and the product vanishes.
    """
    (u1, v1), (u2, v2) = a_key, b_key
    if len(v1) <= len(u2):
        if u2[: len(v1)] == v1:
            return (u1 + u2[len(v1):], v2)
        return None
    if v1[: len(u2)] == u2:
        return (u1, v2 + v1[len(u2):])
    return None


class AlgebraElement:
    """Finite complex combination of word pairs in one O_n.

    Terms are stored as a map (u, v) -> coefficient; keys are normalized
    word tuples and coefficients with magnitude at or below ``ZERO_TOL``
    are pruned. Instances are treated as immutable.
    """

    __slots__ = ("n", "_terms")

    def __init__(self, n, terms=None, _validate=True):
        self.n = int(n)
        acc = {}
        if terms:
            for (u, v), c in terms.items():
                if _validate:
                    u = _check_word(self.n, u)
                    v = _check_word(self.n, v)
                c = complex(c)
                key = (u, v)
                if key in acc:
                    acc[key] += c
                else:
                    acc[key] = c
        self._terms = {k: c for k, c in acc.items() if abs(c) > ZERO_TOL}

    @classmethod
    def zero(cls, n):
        return cls(n)

    @classmethod
    def unit(cls, n):
        return cls(n, {((), ()): 1.0}, _validate=False)

    @classmethod
    def monomial(cls, mono, coeff=1.0):
        return cls(mono.n, {mono.key: coeff}, _validate=False)

    @property
    def terms(self):
        """Term map; treat as read-only."""
        return self._terms

    def items(self):
        return self._terms.items()

    def monomials(self):
        for (u, v), c in self._terms.items():
            yield CuntzMonomial(self.n, u, v), c

    @property
    def is_zero(self):
        return not self._terms

    def _require_same(self, other):
        if self.n != other.n:
            raise MismatchedAlgebra(f"O_{self.n} vs O_{other.n}")

    def __add__(self, other):
        self._require_same(other)
        out = dict(self._terms)
        for key, c in other._terms.items():
            out[key] = out.get(key, 0j) + c
        return AlgebraElement(self.n, out, _validate=False)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __neg__(self):
        return (-1.0) * self

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            self._require_same(other)
            out = {}
            for key1, c1 in self._terms.items():
                for key2, c2 in other._terms.items():
                    key = mono_key_product(key1, key2)
                    if key is not None:
                        out[key] = out.get(key, 0j) + c1 * c2
            return AlgebraElement(self.n, out, _validate=False)
        c = complex(other)
        return AlgebraElement(
            self.n, {k: c * v for k, v in self._terms.items()}, _validate=False
        )

    def __rmul__(self, scalar):
        return self * scalar

    def adjoint(self):
        return AlgebraElement(
            self.n,
            {(v, u): c.conjugate() for (u, v), c in self._terms.items()},
            _validate=False,
        )

    def __eq__(self, other):
        """Exact term-level equality; use canonical_equal for equality
        modulo the Cuntz relations."""
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __repr__(self):
        if not self._terms:
            return f"AlgebraElement(O_{self.n}, 0)"
        bits = " + ".join(
            f"({c:.4g})*{CuntzMonomial(self.n, u, v)}"
            for (u, v), c in sorted(self._terms.items())
        )
        return f"AlgebraElement(O_{self.n}, {bits})"


def mono_product(a, b):
    """Normal form of (s_{a.u} s_{a.v}*)(s_{b.u} s_{b.v}*); at most one term."""
    if a.n != b.n:
        raise MismatchedAlgebra(f"O_{a.n} vs O_{b.n}")
    key = mono_key_product(a.key, b.key)
    if key is None:
        return AlgebraElement.zero(a.n)
    return AlgebraElement(a.n, {key: 1.0}, _validate=False)


def adjoint(x):
    return x.adjoint()


def level_expand(x, target_len):
    """Rewrite x so every annihilation word has length exactly ``target_len``.

    Each term s_u s_v* with |v| < target_len becomes the sum over all words
    w of length target_len - |v| of s_{u w} s_{v w}*, by inserting
    sum_i s_i s_i* = I. The value in O_n is unchanged and each term keeps
    its degree |u| - |v|.
    """
    n = x.n
    out = {}
    for (u, v), c in x.items():
        gap = target_len - len(v)
        if gap < 0:
            raise BadLevel(
                f"target {target_len} below annihilation length {len(v)}"
            )
        if gap == 0 or n == 1:
            out[(u, v)] = out.get((u, v), 0j) + c
        else:
            for w in itertools.product(range(1, n + 1), repeat=gap):
                key = (u + w, v + w)
                out[key] = out.get(key, 0j) + c
    return AlgebraElement(n, out, _validate=False)


def expanded_keys(n, key, target_len):
    """Keys of the level expansion of a single word pair (no coefficients)."""
    u, v = key
    gap = target_len - len(v)
    if gap < 0:
        raise BadLevel(f"target {target_len} below annihilation length {len(v)}")
    if gap == 0 or n == 1:
        yield key
        return
    for w in itertools.product(range(1, n + 1), repeat=gap):
        yield (u + w, v + w)


def canonical_equal(x, y, tol=EQ_TOL):
    """Equality in O_n modulo the Cuntz relations.

    Splits x - y by degree, expands every term of a degree class to the
    maximal annihilation length present, and checks that all coefficients
    vanish within ``tol``. Sound and complete on the span because word
    pairs with fixed |u| and |v| are linearly independent.
    """
    if x.n != y.n:
        raise MismatchedAlgebra(f"O_{x.n} vs O_{y.n}")
    diff = x - y
    if diff.is_zero:
        return True
    groups = {}
    for (u, v), c in diff.items():
        groups.setdefault(len(u) - len(v), []).append(((u, v), c))
    for terms in groups.values():
        target = max(len(v) for (_, v), _ in terms)
        acc = {}
        for key, c in terms:
            for ekey in expanded_keys(diff.n, key, target):
                acc[ekey] = acc.get(ekey, 0j) + c
        if any(abs(c) > tol for c in acc.values()):
            return False
    return True


def substitute_generators(x, matrix):
    """Apply the *-endomorphism s_j -> sum_i matrix[i-1, j-1] s_i termwise.

    Expands every letter of every word; intended for short words (the cost
    is n^(|u|+|v|) per term).
    """
    n = x.n
    U = np.asarray(matrix, dtype=complex)
    if U.shape != (n, n):
        raise ValueError(f"matrix shape {U.shape} does not match O_{n}")
    out = {}
    letters = range(1, n + 1)
    for (u, v), c in x.items():
        for iu in itertools.product(letters, repeat=len(u)):
            cu = c
            for a, b in zip(iu, u):
                cu *= U[a - 1, b - 1]
            if abs(cu) <= ZERO_TOL:
                continue
            for iv in itertools.product(letters, repeat=len(v)):
                cv = cu
                for a, b in zip(iv, v):
                    cv *= U[a - 1, b - 1].conjugate()
                if abs(cv) <= ZERO_TOL:
                    continue
                key = (iu, iv)
                out[key] = out.get(key, 0j) + cv
    return AlgebraElement(n, out, _validate=False)


class DirectSumElement:
    """Finitely supported map n -> AlgebraElement in the direct sum.

    An absent index means the zero component; products are componentwise
    because distinct summands annihilate each other.
    """

    __slots__ = ("_components",)

    def __init__(self, components=None):
        comps = {}
        if components:
            for n, x in components.items():
                if x.n != int(n):
                    raise MismatchedAlgebra(
                        f"component keyed {n} has algebra index {x.n}"
                    )
                if not x.is_zero:
                    comps[int(n)] = x
        self._components = comps

    @classmethod
    def from_element(cls, x):
        return cls({x.n: x})

    @property
    def components(self):
        """Component map; treat as read-only."""
        return self._components

    def component(self, n):
        return self._components.get(n, AlgebraElement.zero(n))

    def indices(self):
        return sorted(self._components)

    @property
    def is_zero(self):
        return not self._components

    def __add__(self, other):
        out = dict(self._components)
        for n, x in other._components.items():
            out[n] = out[n] + x if n in out else x
        return DirectSumElement(out)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, other):
        if isinstance(other, DirectSumElement):
            out = {}
            for n, x in self._components.items():
                if n in other._components:
                    out[n] = x * other._components[n]
            return DirectSumElement(out)
        return DirectSumElement(
            {n: x * other for n, x in self._components.items()}
        )

    def __rmul__(self, scalar):
        return self * scalar

    def __neg__(self):
        return (-1.0) * self

    def adjoint(self):
        return DirectSumElement(
            {n: x.adjoint() for n, x in self._components.items()}
        )

    def __eq__(self, other):
        if not isinstance(other, DirectSumElement):
            return NotImplemented
        return self._components == other._components

    def __repr__(self):
        return f"DirectSumElement({self._components!r})"


def as_element(x, n=None):
    """Coerce a monomial or element to an AlgebraElement, checking the index."""
    if isinstance(x, CuntzMonomial):
        x = AlgebraElement.monomial(x)
    if not isinstance(x, AlgebraElement):
        raise TypeError(f"expected an algebra element, got {type(x).__name__}")
    if n is not None and x.n != n:
        raise MismatchedAlgebra(f"expected O_{n}, got O_{x.n}")
    return x


def iter_monomials(n, max_total_len):
    """Word pairs ordered by total length, creation-heavy first, then lex.

    The order is the deterministic scan used for witness searches.
    """
    for t in range(max_total_len + 1):
        if n == 1 and t > 0:
            break  # everything collapses to the unit
        for a in range(t, -1, -1):
            for u in itertools.product(range(1, n + 1), repeat=a):
                for v in itertools.product(range(1, n + 1), repeat=t - a):
                    yield CuntzMonomial(n, u, v)
