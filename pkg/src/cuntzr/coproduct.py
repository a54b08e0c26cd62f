"""The divisor-pair comultiplication of the Cuntz direct sum.

For every ordered factorization n = m * l there is a unital *-embedding
phi_{m,l} : O_n -> O_m (x) O_l that sends the generator with 1-based index
w = l*(i-1) + j to s_i (x) s_j. Summing the embeddings over all ordered
divisor pairs of each component index gives a coassociative comultiplication
on the direct sum; the opposite comultiplication is the same map followed
by the leg flip.

Tensor elements are stored blockwise, keyed by the pair (or triple) of
algebra indices of the legs, so a pair of representations or states can
project onto the single block it sees. Canonical equality of tensor
elements applies the level expansion of :mod:`cuntzr.algebra` to every leg
independently inside each block.
"""

from __future__ import annotations

from .algebra import (
    EQ_TOL,
    ZERO_TOL,
    AlgebraElement,
    CuntzMonomial,
    DirectSumElement,
    expanded_keys,
    mono_key_product,
)
from .errors import BadFactorization


def divisor_pairs(n):
    """Ordered factorizations (m, l) with m * l = n, in increasing m."""
    return [(m, n // m) for m in range(1, n + 1) if n % m == 0]


def split_index(w, l):
    """Decompose a 1-based generator index w = l*(i-1) + j with 1 <= j <= l."""
    return (w - 1) // l + 1, (w - 1) % l + 1


def _split_word(word, right_size):
    left = []
    right = []
    for w in word:
        i, j = split_index(w, right_size)
        left.append(i)
        right.append(j)
    return tuple(left), tuple(right)


class TensorElement2:
    """Finite combination of two-leg tensor monomials, grouped by index pair."""

    __slots__ = ("_blocks",)

    def __init__(self, blocks=None):
        out = {}
        if blocks:
            for pair, terms in blocks.items():
                acc = {}
                for key, c in terms.items():
                    c = complex(c)
                    acc[key] = acc.get(key, 0j) + c
                acc = {k: c for k, c in acc.items() if abs(c) > ZERO_TOL}
                if acc:
                    out[tuple(pair)] = acc
        self._blocks = out

    @property
    def blocks(self):
        """Block map (m, l) -> {(key_left, key_right): coeff}; read-only."""
        return self._blocks

    def block(self, m, l):
        return self._blocks.get((m, l), {})

    @property
    def is_zero(self):
        return not self._blocks

    def term_count(self):
        return sum(len(t) for t in self._blocks.values())

    def __add__(self, other):
        out = {p: dict(t) for p, t in self._blocks.items()}
        for p, terms in other._blocks.items():
            dst = out.setdefault(p, {})
            for key, c in terms.items():
                dst[key] = dst.get(key, 0j) + c
        return TensorElement2(out)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __rmul__(self, scalar):
        c = complex(scalar)
        return TensorElement2(
            {p: {k: c * v for k, v in t.items()} for p, t in self._blocks.items()}
        )

    def __mul__(self, other):
        if not isinstance(other, TensorElement2):
            return self.__rmul__(other)
        out = {}
        for pair, terms in self._blocks.items():
            if pair not in other._blocks:
                continue  # distinct direct summands multiply to zero
            dst = out.setdefault(pair, {})
            for (a1, a2), c1 in terms.items():
                for (b1, b2), c2 in other._blocks[pair].items():
                    k1 = mono_key_product(a1, b1)
                    if k1 is None:
                        continue
                    k2 = mono_key_product(a2, b2)
                    if k2 is None:
                        continue
                    key = (k1, k2)
                    dst[key] = dst.get(key, 0j) + c1 * c2
        return TensorElement2(out)

    def flip2(self):
        """Swap the legs: block (m, l) with term a (x) b becomes (l, m), b (x) a."""
        out = {}
        for (m, l), terms in self._blocks.items():
            dst = out.setdefault((l, m), {})
            for (k1, k2), c in terms.items():
                dst[(k2, k1)] = dst.get((k2, k1), 0j) + c
        return TensorElement2(out)

    def adjoint(self):
        out = {}
        for pair, terms in self._blocks.items():
            dst = out.setdefault(pair, {})
            for ((u1, v1), (u2, v2)), c in terms.items():
                key = ((v1, u1), (v2, u2))
                dst[key] = dst.get(key, 0j) + c.conjugate()
        return TensorElement2(out)

    def __eq__(self, other):
        if not isinstance(other, TensorElement2):
            return NotImplemented
        return self._blocks == other._blocks

    def __repr__(self):
        return f"TensorElement2(blocks={sorted(self._blocks)})"


class TensorElement3:
    """Finite combination of three-leg tensor monomials, grouped by index triple."""

    __slots__ = ("_blocks",)

    def __init__(self, blocks=None):
        out = {}
        if blocks:
            for triple, terms in blocks.items():
                acc = {}
                for key, c in terms.items():
                    c = complex(c)
                    acc[key] = acc.get(key, 0j) + c
                acc = {k: c for k, c in acc.items() if abs(c) > ZERO_TOL}
                if acc:
                    out[tuple(triple)] = acc
        self._blocks = out

    @property
    def blocks(self):
        return self._blocks

    def block(self, m, l, k):
        return self._blocks.get((m, l, k), {})

    @property
    def is_zero(self):
        return not self._blocks

    def term_count(self):
        return sum(len(t) for t in self._blocks.values())

    def __add__(self, other):
        out = {p: dict(t) for p, t in self._blocks.items()}
        for p, terms in other._blocks.items():
            dst = out.setdefault(p, {})
            for key, c in terms.items():
                dst[key] = dst.get(key, 0j) + c
        return TensorElement3(out)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __rmul__(self, scalar):
        c = complex(scalar)
        return TensorElement3(
            {p: {k: c * v for k, v in t.items()} for p, t in self._blocks.items()}
        )

    def __eq__(self, other):
        if not isinstance(other, TensorElement3):
            return NotImplemented
        return self._blocks == other._blocks

    def __repr__(self):
        return f"TensorElement3(blocks={sorted(self._blocks)})"


def phi(n, m, x):
    """Letterwise embedding of O_{n*m} into the block O_n (x) O_m.

    Each 1-based generator index w splits uniquely as w = m*(i-1) + j with
    1 <= i <= n and 1 <= j <= m; creation and annihilation words map letter
    by letter, so every input term yields exactly one tensor term.
    """
    if isinstance(x, CuntzMonomial):
        x = AlgebraElement.monomial(x)
    if x.n != n * m:
        raise BadFactorization(f"element of O_{x.n} does not factor as {n}*{m}")
    terms = {}
    for (u, v), c in x.items():
        uL, uR = _split_word(u, m)
        vL, vR = _split_word(v, m)
        # route through CuntzMonomial so O_1 legs collapse to the unit
        keyL = CuntzMonomial(n, uL, vL).key
        keyR = CuntzMonomial(m, uR, vR).key
        key = (keyL, keyR)
        terms[key] = terms.get(key, 0j) + c
    return TensorElement2({(n, m): terms})


def _components(x):
    if isinstance(x, CuntzMonomial):
        x = AlgebraElement.monomial(x)
    if isinstance(x, AlgebraElement):
        x = DirectSumElement.from_element(x)
    if not isinstance(x, DirectSumElement):
        raise TypeError(f"cannot take the coproduct of {type(x).__name__}")
    return x.components


def delta(x):
    """Comultiplication: one block phi_{m,l}(x_n) per ordered divisor pair.

    Accepts a CuntzMonomial, AlgebraElement, or DirectSumElement. A single
    monomial of O_n produces exactly one pure tensor term per ordered
    divisor pair of n.
    """
    blocks = {}
    for n, comp in sorted(_components(x).items()):
        for m, l in divisor_pairs(n):
            piece = phi(m, l, comp)
            for pair, terms in piece.blocks.items():
                dst = blocks.setdefault(pair, {})
                for key, c in terms.items():
                    dst[key] = dst.get(key, 0j) + c
    return TensorElement2(blocks)


def delta_op(x):
    """Opposite comultiplication: the coproduct followed by the leg flip."""
    return delta(x).flip2()


def expand_leg(t, leg, comap):
    """Apply a coproduct-like map to one leg of every term of ``t``.

    ``comap`` receives a single-term AlgebraElement and returns a
    TensorElement2; the result collects three-leg terms grouped by index
    triples. ``leg`` is 1 (left) or 2 (right).
    """
    if leg not in (1, 2):
        raise ValueError("leg must be 1 or 2")
    blocks = {}
    for (m, l), terms in t.blocks.items():
        for (k1, k2), c in terms.items():
            if leg == 1:
                inner = comap(AlgebraElement(m, {k1: 1.0}, _validate=False))
                for (p, q), tt in inner.blocks.items():
                    dst = blocks.setdefault((p, q, l), {})
                    for (a, b), c2 in tt.items():
                        key = (a, b, k2)
                        dst[key] = dst.get(key, 0j) + c * c2
            else:
                inner = comap(AlgebraElement(l, {k2: 1.0}, _validate=False))
                for (p, q), tt in inner.blocks.items():
                    dst = blocks.setdefault((m, p, q), {})
                    for (a, b), c2 in tt.items():
                        key = (k1, a, b)
                        dst[key] = dst.get(key, 0j) + c * c2
    return TensorElement3(blocks)


def f_r(x):
    """Right-expanded double coproduct (id (x) delta) o delta."""
    return expand_leg(delta(x), 2, delta)


def f_l(x):
    """Left-expanded double coproduct (delta (x) id) o delta."""
    return expand_leg(delta(x), 1, delta)


def f_r_op(x):
    """(id (x) delta_op) o delta_op; right expansion of the opposite coproduct."""
    return expand_leg(delta_op(x), 2, delta_op)


def f_l_op(x):
    """(delta_op (x) id) o delta_op; left expansion of the opposite coproduct."""
    return expand_leg(delta_op(x), 1, delta_op)


def canonical_equal2(a, b, tol=EQ_TOL):
    """Blockwise equality of two-leg tensor elements modulo the relations.

    Inside each block, terms are grouped by the pair of leg degrees and both
    legs are expanded to the maximal annihilation length of the group; the
    expanded tensor monomials are linearly independent, so vanishing of all
    coefficients decides equality.
    """
    diff = a - b
    for (m, l), terms in diff.blocks.items():
        groups = {}
        for ((u1, v1), (u2, v2)), c in terms.items():
            d = (len(u1) - len(v1), len(u2) - len(v2))
            groups.setdefault(d, []).append((((u1, v1), (u2, v2)), c))
        for members in groups.values():
            t1 = max(len(k[0][1]) for k, _ in members)
            t2 = max(len(k[1][1]) for k, _ in members)
            acc = {}
            for (key1, key2), c in members:
                for e1 in expanded_keys(m, key1, t1):
                    for e2 in expanded_keys(l, key2, t2):
                        acc[(e1, e2)] = acc.get((e1, e2), 0j) + c
            if any(abs(c) > tol for c in acc.values()):
                return False
    return True


def canonical_equal3(a, b, tol=EQ_TOL):
    """Three-leg analogue of :func:`canonical_equal2`."""
    diff = a - b
    for (m, l, k), terms in diff.blocks.items():
        groups = {}
        for (key1, key2, key3), c in terms.items():
            d = tuple(len(u) - len(v) for u, v in (key1, key2, key3))
            groups.setdefault(d, []).append(((key1, key2, key3), c))
        for members in groups.values():
            t1 = max(len(keys[0][1]) for keys, _ in members)
            t2 = max(len(keys[1][1]) for keys, _ in members)
            t3 = max(len(keys[2][1]) for keys, _ in members)
            acc = {}
            for (key1, key2, key3), c in members:
                for e1 in expanded_keys(m, key1, t1):
                    for e2 in expanded_keys(l, key2, t2):
                        for e3 in expanded_keys(k, key3, t3):
                            acc[(e1, e2, e3)] = acc.get((e1, e2, e3), 0j) + c
            if any(abs(c) > tol for c in acc.values()):
                return False
    return True


def check_coassoc(x, tol=EQ_TOL):
    """Whether the two double coproducts of ``x`` agree."""
    return canonical_equal3(f_r(x), f_l(x), tol)
