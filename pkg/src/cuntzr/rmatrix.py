"""Construction and verification of the swap-implementing unitaries.

For a pair of commuting states, the image v_x of each embedded creation
word under the coproduct and the image w_x under the opposite coproduct
have identical Gram matrices, so v_x -> w_x extends to a unitary on the
common span. The operator is materialized on the finite span of all words
up to a chosen depth, as a matrix in the orthonormal coordinates of the
pivoted Gram factorization. For standard basis states it is a permutation
of basis pairs with a digit-zipping closed form, kept alongside the dense
matrix.

The verifiers check, on span vectors, everything the construction promises:
unitarity, the conjugation identity carrying the coproduct to its opposite,
the inversion symmetry through the leg flip, and the triple-product
exchange identity, the latter against an independent symbolic expansion of
the double opposite coproduct. A fixed counterexample scenario shows how
the construction degenerates for a noncommuting pair.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from .algebra import CuntzMonomial
from .coproduct import delta, delta_op, f_l_op, f_r, f_r_op
from .errors import GramMismatch, NotCommuting, OutOfDomain
from .representations import (
    GPRepresentation,
    SpanBasis,
    act2,
    creation_words,
    flip_pairs,
    lambda2,
    lambda3,
    pack_vectors,
    pair_to_list,
    prune_vec,
    span_basis,
    vec_dist,
    vec_norm,
)
from .states import GPState, commutes, twist_state

BUILD_TOL = 1e-9  # Gram equality, unitarity, and domain projection tolerance


@dataclass
class CheckRecord:
    """One named verification with its pass flag and worst residual."""

    name: str
    passed: bool
    residual: float
    witness: str = None

    def to_json(self):
        out = {
            "name": self.name,
            "pass": bool(self.passed),
            "residual": float(self.residual),
        }
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class VerificationReport:
    """A scenario id with its list of checks and wall-clock time."""

    scenario: str
    checks: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    @property
    def max_residual(self):
        return max((c.residual for c in self.checks), default=0.0)

    def add(self, name, passed, residual, witness=None):
        self.checks.append(CheckRecord(name, bool(passed), float(residual), witness))

    def to_json(self, include_timings=False):
        out = {
            "scenario": self.scenario,
            "checks": [c.to_json() for c in self.checks],
            "pass": self.passed,
        }
        if include_timings:
            out["timings"] = {"total_s": float(self.elapsed)}
        return out


# ---------------------------------------------------------------------------
# digit machinery for the standard-state closed form


def _digits(x, base, length):
    """Base digits of x, least significant first, fixed length."""
    out = []
    for _ in range(length):
        out.append(x % base)
        x //= base
    return out


def swap_index_pair(n, m, a, b, length):
    """Closed-form image of the basis pair (e_a, e_b) for standard states.

    The base-n digits of a-1 and base-m digits of b-1 zip to word letters
    w = m*(i-1) + j; each letter is re-split as w = n*(i'-1) + j' and the
    digit strings are reassembled, base-n from the j' and base-m from the
    i'. Padding with leading units leaves the image unchanged, so the map
    is consistent across lengths.
    """
    da = _digits(a - 1, n, length)
    db = _digits(b - 1, m, length)
    a2 = 0
    b2 = 0
    for k in reversed(range(length)):
        w = m * da[k] + db[k]  # 0-based letter
        b2 = b2 * m + w // n
        a2 = a2 * n + w % n
    return a2 + 1, b2 + 1


def _standard_permutation(n, m, depth):
    out = {}
    for a in range(1, n**depth + 1):
        for b in range(1, m**depth + 1):
            out[(a, b)] = swap_index_pair(n, m, a, b, depth)
    return out


# ---------------------------------------------------------------------------
# the operator


@dataclass
class RMatrixOperator:
    """The swap-implementing unitary on a finite span.

    ``matrix`` holds the operator in the orthonormal coordinates of the
    domain span; ``permutation``, present for standard basis states, maps
    domain basis pairs to image basis pairs and is exact. Either form can
    be applied to pair-indexed vectors; vectors outside the span raise
    OutOfDomain.
    """

    omega1: GPState
    omega2: GPState
    depth: int
    basis: SpanBasis = None
    matrix: np.ndarray = None
    permutation: dict = None
    gram_residual: float = 0.0
    unitarity_residual: float = 0.0

    @property
    def shape(self):
        return (self.omega1.n, self.omega2.n)

    @property
    def rank(self):
        if self.basis is not None:
            return self.basis.rank
        return len(self.permutation)

    def apply(self, vec, tol=BUILD_TOL):
        """Image of a pair-indexed vector; dense path when a matrix exists."""
        if self.matrix is not None:
            y, residual = self.basis.coordinates_of(vec)
            scale = max(1.0, vec_norm(vec))
            if residual > tol * scale:
                raise OutOfDomain(residual)
            return self.basis.from_coordinates(self.matrix @ y)
        return self.apply_permutation(vec)

    def apply_permutation(self, vec):
        """Exact image through the index permutation (standard states only)."""
        if self.permutation is None:
            raise OutOfDomain(
                vec_norm(vec), "operator has no permutation form"
            )
        out = {}
        for key, a in vec.items():
            target = self.permutation.get(key)
            if target is None:
                raise OutOfDomain(abs(a), f"basis pair {key} outside the span")
            out[target] = out.get(target, 0j) + a
        return prune_vec(out)

    def is_identity(self, tol=0.0):
        """Whether the operator fixes its whole span within ``tol``."""
        if self.matrix is not None:
            dev = np.max(np.abs(self.matrix - np.eye(self.matrix.shape[0])))
            return float(dev) <= tol
        return all(k == v for k, v in self.permutation.items())

    def to_json(self):
        """Export form: states, depth, domain words, Gram, matrix entries."""

        def cpx_matrix(M):
            return [
                [[float(c.real), float(c.imag)] for c in row] for row in M
            ]

        out = {
            "omega1": self.omega1.to_json(),
            "omega2": self.omega2.to_json(),
            "depth": int(self.depth),
            "rank": int(self.rank),
        }
        if self.basis is not None:
            out["domain_basis"] = [
                CuntzMonomial(self.omega1.n * self.omega2.n, w, ()).label()
                for w in self.basis.words
            ]
            out["gram"] = cpx_matrix(self.basis.gram)
        if self.matrix is not None:
            out["matrix"] = cpx_matrix(self.matrix)
            out["unitarity_residual"] = float(self.unitarity_residual)
            out["gram_residual"] = float(self.gram_residual)
        if self.permutation is not None:
            out["permutation"] = [
                [int(a), int(b), int(a2), int(b2)]
                for (a, b), (a2, b2) in sorted(self.permutation.items())
            ]
        return out


def build_r(omega1, omega2, depth, tol=BUILD_TOL):
    """Construct the swap-implementing unitary for a commuting state pair.

    Raises NotCommuting (with a witness monomial) when the two product
    functionals differ, and GramMismatch when the numerical Gram equality
    that makes the operator well defined fails beyond ``tol``.
    """
    ok, witness = commutes(omega1, omega2)
    if not ok:
        raise NotCommuting(
            f"product functionals differ on {witness.label()}", witness
        )
    basis = span_basis(omega1, omega2, depth)
    N = omega1.n * omega2.n
    wvecs = [
        lambda2(basis.rep1, basis.rep2, delta_op(CuntzMonomial(N, w, ())))
        for w in basis.words
    ]
    keys = set(basis.support)
    for vec in wvecs:
        keys.update(vec)
    support = sorted(keys)
    _, A = pack_vectors(basis.vectors, support)
    _, B = pack_vectors(wvecs, support)
    gram_w = B.conj().T @ B
    dev = np.abs(basis.gram - gram_w)
    gram_residual = float(dev.max()) if dev.size else 0.0
    if gram_residual > tol:
        i, j = np.unravel_index(int(np.argmax(dev)), dev.shape)
        raise GramMismatch(
            CuntzMonomial(N, basis.words[i], ()).label(),
            CuntzMonomial(N, basis.words[j], ()).label(),
            gram_residual,
        )
    gram_vw = A.conj().T @ B
    C = basis.combos
    matrix = C.conj() @ gram_vw @ C.T
    unit_dev = matrix.conj().T @ matrix - np.eye(basis.rank)
    unitarity_residual = float(np.max(np.abs(unit_dev))) if basis.rank else 0.0
    if unitarity_residual > tol:
        raise GramMismatch(
            "RtR", "I", unitarity_residual
        )  # image span left the domain span; cannot happen for commuting pairs
    permutation = None
    if omega1.is_standard_basis and omega2.is_standard_basis:
        permutation = _standard_permutation(omega1.n, omega2.n, depth)
    return RMatrixOperator(
        omega1=omega1,
        omega2=omega2,
        depth=depth,
        basis=basis,
        matrix=matrix,
        permutation=permutation,
        gram_residual=gram_residual,
        unitarity_residual=unitarity_residual,
    )


def radix_swap_r(n, m, depth):
    """The closed-form operator for the standard states, permutation only."""
    return RMatrixOperator(
        omega1=GPState.standard(n),
        omega2=GPState.standard(m),
        depth=depth,
        permutation=_standard_permutation(n, m, depth),
    )


# ---------------------------------------------------------------------------
# verifiers


def verify_intertwining(rmat, test_words=None, span_depth=None, tol=BUILD_TOL):
    """Conjugation identity on span vectors.

    For every test word x and every stored span vector v built from words of
    length at most ``span_depth``, compares the image of the coproduct
    action followed by the operator with the operator followed by the
    opposite-coproduct action. The operator must be built deep enough that
    both paths stay inside its domain: depth >= span_depth + longest word.
    """
    start = time.perf_counter()
    n1, n2 = rmat.shape
    N = n1 * n2
    if test_words is None:
        test_words = [CuntzMonomial.generator(N, i) for i in range(1, N + 1)]
    test_words = [
        w if isinstance(w, CuntzMonomial) else CuntzMonomial(N, w, ())
        for w in test_words
    ]
    max_len = max((len(w.u) + len(w.v) for w in test_words), default=0)
    if span_depth is None:
        span_depth = rmat.depth - max_len
    if rmat.depth < span_depth + max_len or span_depth < 0:
        raise OutOfDomain(
            float(span_depth + max_len - rmat.depth),
            f"operator depth {rmat.depth} cannot host words of length "
            f"{max_len} on the depth-{span_depth} span",
        )
    basis = rmat.basis
    vectors = [
        vec
        for w, vec in zip(basis.words, basis.vectors)
        if len(w) <= span_depth and vec
    ]
    rep1, rep2 = basis.rep1, basis.rep2
    report = VerificationReport(scenario="intertwining")
    for word in test_words:
        dx = delta(word)
        dxo = delta_op(word)
        worst = 0.0
        for vec in vectors:
            lhs = rmat.apply(act2(rep1, rep2, dx, vec), tol=tol)
            rhs = act2(rep1, rep2, dxo, rmat.apply(vec, tol=tol))
            worst = max(worst, vec_dist(lhs, rhs))
        report.add(f"intertwine:{word.label()}", worst <= tol, worst)
    report.elapsed = time.perf_counter() - start
    return report


def verify_symmetry(omega1, omega2, depth, tol=BUILD_TOL, r12=None, r21=None):
    """Inversion symmetry: the operator, composed with its reversed-pair
    partner through leg flips, is the identity on the span."""
    start = time.perf_counter()
    if r12 is None:
        r12 = build_r(omega1, omega2, depth, tol=tol)
    if r21 is None:
        r21 = build_r(omega2, omega1, depth, tol=tol)
    worst = 0.0
    for a in range(r12.basis.rank):
        q = r12.basis.orthobasis_vector(a)
        step = flip_pairs(q)
        step = r21.apply(step, tol=tol)
        step = flip_pairs(step)
        step = r12.apply(step, tol=tol)
        worst = max(worst, vec_dist(step, q))
    report = VerificationReport(scenario="inversion-symmetry")
    report.add("inversion-symmetry", worst <= tol, worst)
    report.elapsed = time.perf_counter() - start
    return report


def _apply_on_legs(rmat, vec3, legs, tol):
    """Apply a pairwise operator to two legs of a triple-indexed vector.

    The untouched leg's index is the slice parameter; each slice is a pair
    vector in the operator's domain ordering.
    """
    slices = {}
    for (k1, k2, k3), a in vec3.items():
        if legs == (1, 2):
            park, pair = k3, (k1, k2)
        elif legs == (1, 3):
            park, pair = k2, (k1, k3)
        elif legs == (2, 3):
            park, pair = k1, (k2, k3)
        else:
            raise ValueError(f"bad legs {legs}")
        slices.setdefault(park, {})[pair] = a
    out = {}
    for park, pair_vec in sorted(slices.items()):
        image = rmat.apply(pair_vec, tol=tol)
        for (a1, a2), amp in image.items():
            if legs == (1, 2):
                key = (a1, a2, park)
            elif legs == (1, 3):
                key = (a1, park, a2)
            else:
                key = (park, a1, a2)
            out[key] = out.get(key, 0j) + amp
    return prune_vec(out)


def verify_ybe(omega1, omega2, omega3, depth, tol=BUILD_TOL, rs=None):
    """Triple exchange identity with an independent symbolic oracle.

    For every word x of the combined algebra up to ``depth``, both operator
    orderings are applied by leg slicing to the image of the right-expanded
    double coproduct, and both are compared with each other and with the
    legwise images of the two double opposite coproducts, which the
    two orderings must reproduce.
    """
    start = time.perf_counter()
    if rs is None:
        r12 = build_r(omega1, omega2, depth, tol=tol)
        r13 = build_r(omega1, omega3, depth, tol=tol)
        r23 = build_r(omega2, omega3, depth, tol=tol)
    else:
        r12, r13, r23 = rs
    rep1 = GPRepresentation.for_state(omega1)
    rep2 = GPRepresentation.for_state(omega2)
    rep3 = GPRepresentation.for_state(omega3)
    N = omega1.n * omega2.n * omega3.n
    report = VerificationReport(scenario="ybe")
    all_permutations = all(
        s.is_standard_basis for s in (omega1, omega2, omega3)
    )
    for word in creation_words(N, depth):
        mono = CuntzMonomial(N, word, ())
        t0 = lambda3(rep1, rep2, rep3, f_r(mono))
        lhs = _apply_on_legs(r23, t0, (2, 3), tol)
        lhs = _apply_on_legs(r13, lhs, (1, 3), tol)
        lhs = _apply_on_legs(r12, lhs, (1, 2), tol)
        rhs = _apply_on_legs(r12, t0, (1, 2), tol)
        rhs = _apply_on_legs(r13, rhs, (1, 3), tol)
        rhs = _apply_on_legs(r23, rhs, (2, 3), tol)
        oracle_l = lambda3(rep1, rep2, rep3, f_l_op(mono))
        oracle_r = lambda3(rep1, rep2, rep3, f_r_op(mono))
        worst = max(
            vec_dist(lhs, rhs),
            vec_dist(lhs, oracle_l),
            vec_dist(rhs, oracle_r),
            vec_dist(oracle_l, oracle_r),
        )
        if all_permutations and worst > 0.0:
            passed = False  # permutation paths must agree exactly
        else:
            passed = worst <= tol
        report.add(f"ybe:{mono.label()}", passed, worst)
    report.elapsed = time.perf_counter() - start
    return report


def counterexample_demo(tol=BUILD_TOL):
    """The degenerate scenario for the noncommuting flip-twisted pair.

    With the standard state of O_2 and its flip twist, the coproduct action
    of the generator with index 2 of O_4 fixes the cyclic pair vector, so a
    relation-defined operator must fix it too (the unit branch gives the
    same vector). The opposite coproduct, however, sends the cyclic vector
    to an orthogonal one, so no unitary can satisfy the conjugation
    identity, and the construction rejects the pair with a witness.
    """
    start = time.perf_counter()
    report = VerificationReport(scenario="counterexample")
    omega = GPState.standard(2)
    # the flip twist of the standard state is the second basis vector
    flip = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    omega_bar = twist_state(omega.z, flip)
    rep = GPRepresentation.standard(2)
    rep_bar = GPRepresentation.for_state(omega_bar)
    v = {(1, 1): 1.0 + 0j}
    x = CuntzMonomial.generator(4, 2)

    fixed = act2(rep, rep_bar, delta(x), v)
    res_fixed = vec_dist(fixed, v)
    report.add("coproduct-action-fixes-cyclic-vector", res_fixed == 0.0, res_fixed)

    # the unit branch of the defining relation forces Rv = v
    rv = act2(rep, rep_bar, delta_op(CuntzMonomial.unit(4)), v)
    res_rv = vec_dist(rv, v)
    report.add("relation-unit-branch-fixes-cyclic-vector", res_rv == 0.0, res_rv)

    opposite = act2(rep, rep_bar, delta_op(x), v)
    overlap = abs(sum(v[k].conjugate() * a for k, a in opposite.items() if k in v))
    report.add(
        "opposite-image-orthogonal-to-cyclic-vector",
        overlap == 0.0,
        overlap,
        witness=json.dumps(pair_to_list(opposite)),
    )

    # with Rv = v and R* v = v, the conjugated action returns v, which the
    # opposite action contradicts
    lhs = rv  # R (coproduct action) R* v = R v = v
    violation = vec_dist(lhs, opposite)
    report.add("conjugation-identity-violated", violation > tol, violation)

    witness_label = None
    rejected = False
    try:
        build_r(omega, omega_bar, 1, tol=tol)
    except NotCommuting as exc:
        rejected = True
        witness_label = exc.witness.label() if exc.witness else None
    report.add(
        "construction-rejects-pair",
        rejected and witness_label == "n=4;u=2;v=",
        0.0 if rejected else 1.0,
        witness=witness_label,
    )
    report.elapsed = time.perf_counter() - start
    return report
