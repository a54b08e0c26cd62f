"""Concrete realizations of the vector states on the sequence space.

The standard representation of O_n acts on the basis e_1, e_2, ... by

    pi_n(s_i) e_k = e_{n(k-1)+i},
    pi_n(s_i)* e_k = e_{(k-1)//n + 1} when (k-1) mod n == i-1, else 0.

Its vector state at e_1 is the state of the first standard basis vector.
A general unit vector z is realized by substituting the generators through
any unitary U whose first row is conj(z) and then acting as above; the
vector state at e_1 becomes rho_z, every image of a finitely supported
vector stays finitely supported, and all inner products are exact. Note
that the adjoint generators then satisfy s_j* e_1 = z_j e_1, so images of
creation words already span everything the coproduct images reach.

Vectors are plain dicts from basis indices (or index pairs / triples for
tensor legs) to complex amplitudes. :func:`span_basis` collects the images
of all embedded creation words up to a depth, assembles their exact Gram
matrix, and orthonormalizes it with the pivoted kernel; the resulting rank
is the finite-depth cyclicity evidence for the cyclic vector e_1 (x) e_1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._kernels import RANK_TOL, orthonormalize_gram
from .algebra import CuntzMonomial, as_element
from .coproduct import TensorElement2, TensorElement3, delta
from .errors import MismatchedAlgebra
from .states import GPState, UnitVector

AMP_TOL = 1e-13  # amplitudes at or below this magnitude are dropped


# ---------------------------------------------------------------------------
# finitely supported vectors as dicts


def prune_vec(vec):
    return {k: a for k, a in vec.items() if abs(a) > AMP_TOL}


def vec_inner(a, b):
    """<a, b> with the convention conjugate-linear in the first argument."""
    if len(b) < len(a):
        return sum(a[k].conjugate() * v for k, v in b.items() if k in a)
    return sum(v.conjugate() * b[k] for k, v in a.items() if k in b)


def vec_norm(a):
    return float(np.sqrt(sum(abs(v) ** 2 for v in a.values())))


def vec_add(a, b, scale=1.0):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0j) + scale * v
    return prune_vec(out)


def vec_sub(a, b):
    return vec_add(a, b, scale=-1.0)


def vec_scale(a, c):
    return prune_vec({k: c * v for k, v in a.items()})


def vec_dist(a, b):
    return vec_norm(vec_add(a, b, scale=-1.0))


def flip_pairs(vec):
    """Swap the two legs of a pair-indexed vector."""
    return {(k2, k1): a for (k1, k2), a in vec.items()}


def fock_to_list(vec):
    """Report form [[k, re, im], ...] of a basis-indexed vector, sorted."""
    return [
        [int(k), float(a.real), float(a.imag)] for k, a in sorted(vec.items())
    ]


def pair_to_list(vec):
    """Report form [[j, k, re, im], ...] of a pair-indexed vector, sorted."""
    return [
        [int(j), int(k), float(a.real), float(a.imag)]
        for (j, k), a in sorted(vec.items())
    ]


# ---------------------------------------------------------------------------
# the twisted permutative action


def complete_unitary(z, tol=1e-10):
    """A unitary with first row conj(z), completed against the standard basis.

    Modified Gram-Schmidt over the candidates e_1, e_2, ...; a candidate is
    skipped when its residual norm is at most ``tol``. Deterministic in z.
    """
    z = np.asarray(z, dtype=complex).reshape(-1)
    n = z.size
    rows = [z.conj()]
    for k in range(n):
        if len(rows) == n:
            break
        cand = np.zeros(n, dtype=complex)
        cand[k] = 1.0
        for row in rows:
            cand = cand - np.vdot(row, cand) * row
        nrm = float(np.linalg.norm(cand))
        if nrm > tol:
            rows.append(cand / nrm)
    if len(rows) != n:
        raise RuntimeError("unitary completion failed")  # cannot happen for unit z
    return np.vstack(rows)


class GPRepresentation:
    """The permutative action, optionally twisted by a unitary; cyclic vector e_1."""

    __slots__ = ("n", "U", "is_standard")

    def __init__(self, n, U=None):
        self.n = int(n)
        if U is None:
            self.U = np.eye(self.n, dtype=complex)
            self.is_standard = True
        else:
            self.U = np.asarray(U, dtype=complex)
            if self.U.shape != (self.n, self.n):
                raise ValueError(f"twist shape {self.U.shape} for O_{self.n}")
            self.is_standard = bool(
                np.array_equal(self.U, np.eye(self.n, dtype=complex))
            )

    @classmethod
    def standard(cls, n):
        return cls(n)

    @classmethod
    def for_state(cls, state):
        """The realization of the state of z: twist by a completion of conj(z)."""
        z = state.z if isinstance(state, GPState) else state
        if not isinstance(z, UnitVector):
            z = UnitVector(z)
        if z == UnitVector.standard(z.n):
            return cls(z.n)
        return cls(z.n, complete_unitary(z.z))

    def state(self):
        """The vector state at e_1; equals the state the twist was built from."""
        return GPState(UnitVector(self.U[0].conj()))

    def __repr__(self):
        kind = "standard" if self.is_standard else "twisted"
        return f"GPRepresentation(O_{self.n}, {kind})"


def _creation(rep, j, vec):
    n = rep.n
    if rep.is_standard:
        return {n * (k - 1) + j: a for k, a in vec.items()}
    out = {}
    col = rep.U[:, j - 1]
    for k, a in vec.items():
        base = n * (k - 1)
        for i in range(1, n + 1):
            c = col[i - 1]
            if c != 0:
                key = base + i
                out[key] = out.get(key, 0j) + c * a
    return out


def _annihilation(rep, j, vec):
    n = rep.n
    out = {}
    for k, a in vec.items():
        i = (k - 1) % n + 1
        q = (k - 1) // n + 1
        if rep.is_standard:
            if i == j:
                out[q] = out.get(q, 0j) + a
        else:
            c = rep.U[i - 1, j - 1].conjugate()
            if c != 0:
                out[q] = out.get(q, 0j) + c * a
    return out


def act_word(rep, u, v, vec):
    """Apply s_u s_v* (word tuples) in the representation to a vector."""
    out = vec
    for j in v:  # the factor s_{v_1}* stands rightmost and acts first
        out = _annihilation(rep, j, out)
        if not out:
            return {}
    for j in reversed(u):
        out = _creation(rep, j, out)
    return prune_vec(out)


def act(rep, mono, vec):
    """Apply a monomial in the (possibly twisted) representation to a vector."""
    if mono.n != rep.n:
        raise MismatchedAlgebra(f"monomial of O_{mono.n} in O_{rep.n} action")
    return act_word(rep, mono.u, mono.v, vec)


def act_element(rep, x, vec):
    x = as_element(x, rep.n)
    out = {}
    for (u, v), c in x.items():
        out = vec_add(out, act_word(rep, u, v, vec), scale=c)
    return out


def gns_lambda(rep, x):
    """Image of an element under the vector map x -> pi(x) e_1."""
    return act_element(rep, x, {1: 1.0})


# ---------------------------------------------------------------------------
# tensor legs


def lambda2(rep1, rep2, t):
    """Legwise vector map applied to the matching block of a tensor element.

    Blocks other than (rep1.n, rep2.n) act as zero on this pair, mirroring
    how a state of one summand extends to the direct sum.
    """
    if not isinstance(t, TensorElement2):
        raise TypeError("lambda2 expects a two-leg tensor element")
    out = {}
    omega = {1: 1.0}
    for (key1, key2), c in t.block(rep1.n, rep2.n).items():
        f1 = act_word(rep1, key1[0], key1[1], omega)
        if not f1:
            continue
        f2 = act_word(rep2, key2[0], key2[1], omega)
        for k1, a1 in f1.items():
            for k2, a2 in f2.items():
                key = (k1, k2)
                out[key] = out.get(key, 0j) + c * a1 * a2
    return prune_vec(out)


def act2(rep1, rep2, t, vec):
    """Apply the matching block of a two-leg tensor element to a pair vector."""
    if not isinstance(t, TensorElement2):
        raise TypeError("act2 expects a two-leg tensor element")
    out = {}
    for (key1, key2), c in t.block(rep1.n, rep2.n).items():
        for (k1, k2), amp in vec.items():
            f1 = act_word(rep1, key1[0], key1[1], {k1: 1.0})
            if not f1:
                continue
            f2 = act_word(rep2, key2[0], key2[1], {k2: 1.0})
            for q1, a1 in f1.items():
                for q2, a2 in f2.items():
                    key = (q1, q2)
                    out[key] = out.get(key, 0j) + c * amp * a1 * a2
    return prune_vec(out)


def lambda3(rep1, rep2, rep3, t):
    """Three-leg analogue of :func:`lambda2`."""
    if not isinstance(t, TensorElement3):
        raise TypeError("lambda3 expects a three-leg tensor element")
    out = {}
    omega = {1: 1.0}
    for (key1, key2, key3), c in t.block(rep1.n, rep2.n, rep3.n).items():
        f1 = act_word(rep1, key1[0], key1[1], omega)
        if not f1:
            continue
        f2 = act_word(rep2, key2[0], key2[1], omega)
        if not f2:
            continue
        f3 = act_word(rep3, key3[0], key3[1], omega)
        for k1, a1 in f1.items():
            for k2, a2 in f2.items():
                for k3, a3 in f3.items():
                    key = (k1, k2, k3)
                    out[key] = out.get(key, 0j) + c * a1 * a2 * a3
    return prune_vec(out)


# ---------------------------------------------------------------------------
# span bases


def creation_words(n, depth):
    """All creation words of O_n with length <= depth, by length then lex."""
    import itertools

    words = [()]
    for t in range(1, depth + 1):
        words.extend(itertools.product(range(1, n + 1), repeat=t))
    return words


def pack_vectors(vectors, support=None):
    """Dense amplitude matrix of a vector list over a common sorted support.

    Returns (support, A) with A[s, i] the amplitude of vectors[i] at
    support[s].
    """
    if support is None:
        keys = set()
        for vec in vectors:
            keys.update(vec)
        support = sorted(keys)
    index = {k: s for s, k in enumerate(support)}
    A = np.zeros((len(support), len(vectors)), dtype=complex)
    for i, vec in enumerate(vectors):
        for k, a in vec.items():
            A[index[k], i] = a
    return support, A


@dataclass
class SpanBasis:
    """Images of embedded creation words with exact Gram data.

    ``vectors[i]`` is the image of the coproduct of the i-th creation word
    under the legwise vector maps of the state pair; ``gram`` collects the
    exact pairwise inner products; ``coords``/``combos``/``pivots`` come
    from the pivoted orthonormalization and express the orthonormal basis
    q_0..q_{rank-1} through the vectors and vice versa.
    """

    state1: GPState
    state2: GPState
    rep1: GPRepresentation
    rep2: GPRepresentation
    depth: int
    words: list
    vectors: list
    support: list
    amat: np.ndarray
    gram: np.ndarray
    rank: int
    pivots: np.ndarray
    coords: np.ndarray
    combos: np.ndarray
    _index: dict = field(repr=False, default=None)

    def __post_init__(self):
        self._index = {k: s for s, k in enumerate(self.support)}

    @property
    def block_index(self):
        return self.state1.n * self.state2.n

    def dense(self, vec):
        """Amplitudes of a pair vector over the stored support.

        Off-support amplitudes are not representable in the span; their mass
        shows up in :meth:`coordinates_of` as residual.
        """
        out = np.zeros(len(self.support), dtype=complex)
        for k, a in vec.items():
            s = self._index.get(k)
            if s is not None:
                out[s] = a
        return out

    def coordinates_of(self, vec):
        """Orthonormal coordinates of a vector and its off-span residual.

        The residual is the norm of the difference between the vector and
        its reconstructed projection; the difference-of-squares form would
        lose half the significant digits and misreport in-span vectors.
        """
        b = self.amat.conj().T @ self.dense(vec)
        y = self.combos.conj() @ b
        residual = vec_dist(vec, self.from_coordinates(y))
        return y, float(residual)

    def from_coordinates(self, y):
        """The vector with the given orthonormal coordinates, as a dict."""
        dense = self.amat @ (self.combos.T @ y)
        return prune_vec(
            {k: complex(dense[s]) for s, k in enumerate(self.support)}
        )

    def orthobasis_vector(self, a):
        y = np.zeros(self.rank, dtype=complex)
        y[a] = 1.0
        return self.from_coordinates(y)


def span_basis(omega1, omega2, depth, rank_tol=RANK_TOL):
    """Images of all creation words up to ``depth`` with Gram data.

    Words run over O_{n1*n2}; annihilation parts are redundant on the
    cyclic vector because adjoint generators fix it up to the scalar z_j.
    """
    rep1 = GPRepresentation.for_state(omega1)
    rep2 = GPRepresentation.for_state(omega2)
    N = omega1.n * omega2.n
    words = creation_words(N, depth)
    vectors = [
        lambda2(rep1, rep2, delta(CuntzMonomial(N, w, ()))) for w in words
    ]
    support, A = pack_vectors(vectors)
    gram = A.conj().T @ A
    rank, pivots, coords, combos = orthonormalize_gram(gram, tol=rank_tol)
    return SpanBasis(
        state1=omega1,
        state2=omega2,
        rep1=rep1,
        rep2=rep2,
        depth=depth,
        words=words,
        vectors=vectors,
        support=support,
        amat=A,
        gram=gram,
        rank=int(rank),
        pivots=pivots,
        coords=coords,
        combos=combos,
    )
