"""States of the Cuntz algebras parametrized by unit vectors.

A unit vector z in C^n defines a pure state rho_z of O_n by

    rho_z(s_u s_v*) = conj(z_{u_1}) ... conj(z_{u_a}) * z_{v_1} ... z_{v_b},

with empty products equal to 1, so rho_z(I) = 1 and rho_z(s_u) = conj(z)_u.
For n = 1 the only admitted vector is the scalar 1, matching the convention
that O_1 is the scalars.

Two such states multiply through the comultiplication: evaluating the
product functional (rho_z (x) rho_y) o phi on O_{nm} gives the state of the
interleaved vector with components (z [*] y)_{m(i-1)+j} = z_i y_j, i.e. the
Kronecker product of the coefficient vectors. The product functional is
kept lazily as :class:`StarComposite` so the closed form is something the
tests verify rather than assume.
"""

from __future__ import annotations

import numpy as np

from .algebra import AlgebraElement, as_element, iter_monomials
from .coproduct import phi
from .errors import MismatchedAlgebra, NotUnitary

NORM_TOL = 1e-12     # unit-vector normalization tolerance
UNITARY_TOL = 1e-10  # column-orthonormality tolerance for twists
COMMUTE_TOL = 1e-12  # componentwise tolerance of the commutation test


class UnitVector:
    """A unit vector in C^n; the parameter of one state."""

    __slots__ = ("n", "z")

    def __init__(self, components):
        z = np.asarray(components, dtype=complex).reshape(-1).copy()
        if z.size < 1:
            raise ValueError("a unit vector needs at least one component")
        nrm = float(np.linalg.norm(z))
        if abs(nrm - 1.0) > NORM_TOL:
            raise ValueError(f"not a unit vector: norm = {nrm!r}")
        z.setflags(write=False)
        self.n = int(z.size)
        self.z = z

    @classmethod
    def basis(cls, n, k=1):
        z = np.zeros(n, dtype=complex)
        z[k - 1] = 1.0
        return cls(z)

    @classmethod
    def standard(cls, n):
        return cls.basis(n, 1)

    @classmethod
    def uniform(cls, n):
        return cls(np.full(n, 1.0 / np.sqrt(n), dtype=complex))

    def __eq__(self, other):
        if not isinstance(other, UnitVector):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.z, other.z))

    def close_to(self, other, tol=NORM_TOL):
        return self.n == other.n and float(np.max(np.abs(self.z - other.z))) <= tol

    def __repr__(self):
        return f"UnitVector({self.z.tolist()!r})"


def boxtimes(z, y):
    """Interleaving product of unit vectors; component l*(i-1)+j is z_i y_j."""
    return UnitVector(np.kron(z.z, y.z))


def gp_eval(z, x):
    """Evaluate the state of ``z`` on an element or monomial of O_n."""
    x = as_element(x)
    if x.n != z.n:
        raise MismatchedAlgebra(f"state on O_{z.n}, element of O_{x.n}")
    zz = z.z
    total = 0j
    for (u, v), c in x.items():
        val = complex(c)
        for l in u:
            val *= zz[l - 1].conjugate()
        for l in v:
            val *= zz[l - 1]
        total += val
    return total


class GPState:
    """The pure state rho_z; callable on algebra elements of O_n."""

    __slots__ = ("z",)

    def __init__(self, z):
        if not isinstance(z, UnitVector):
            z = UnitVector(z)
        self.z = z

    @classmethod
    def standard(cls, n):
        return cls(UnitVector.standard(n))

    @classmethod
    def uniform(cls, n):
        return cls(UnitVector.uniform(n))

    @property
    def n(self):
        return self.z.n

    def __call__(self, x):
        return gp_eval(self.z, x)

    @property
    def is_standard_basis(self):
        return self.z == UnitVector.standard(self.n)

    def to_json(self):
        return {
            "n": self.n,
            "z": [[float(c.real), float(c.imag)] for c in self.z.z],
        }

    def __eq__(self, other):
        if not isinstance(other, GPState):
            return NotImplemented
        return self.z == other.z

    def __repr__(self):
        return f"GPState({self.z.z.tolist()!r})"


class StarComposite:
    """Lazy product functional (omega (x) psi) o phi_{n,m} on O_{n*m}.

    Evaluation expands the embedding and multiplies the two factor values;
    nothing about the factors beyond linearity is assumed, so composites
    nest and non-closed-form functionals can be compared directly.
    """

    __slots__ = ("left", "right", "n")

    def __init__(self, left, right):
        self.left = left
        self.right = right
        self.n = left.n * right.n

    def __call__(self, x):
        x = as_element(x, self.n)
        block = phi(self.left.n, self.right.n, x).block(self.left.n, self.right.n)
        total = 0j
        for (key1, key2), c in block.items():
            a = self.left(AlgebraElement(self.left.n, {key1: 1.0}, _validate=False))
            if a == 0:
                continue
            b = self.right(AlgebraElement(self.right.n, {key2: 1.0}, _validate=False))
            total += c * a * b
        return total

    def __repr__(self):
        return f"StarComposite({self.left!r}, {self.right!r})"


def star(omega, psi):
    """The product functional of two states through the comultiplication."""
    return StarComposite(omega, psi)


def commutes(omega, psi, tol=COMMUTE_TOL):
    """Whether the two product functionals of a state pair coincide.

    Distinct unit vectors give distinct states, so the componentwise
    equality of the two interleavings decides exactly. On failure a witness
    monomial with differing product values is returned, found by scanning
    word pairs by total length, creation-heavy first, then lexicographically.

    Returns (True, None) or (False, witness).
    """
    zy = boxtimes(omega.z, psi.z)
    yz = boxtimes(psi.z, omega.z)
    if float(np.max(np.abs(zy.z - yz.z))) <= tol:
        return True, None
    a = star(omega, psi)
    b = star(psi, omega)
    for mono in iter_monomials(omega.n * psi.n, 2):
        x = AlgebraElement.monomial(mono)
        if abs(a(x) - b(x)) > tol:
            return False, mono
    raise RuntimeError("interleavings differ but no witness was found")


def twist_state(z, matrix, tol=UNITARY_TOL):
    """The state of ``z`` composed with the substitution s_j -> sum_i U[i,j] s_i.

    For a unitary U this equals the state of the vector U^dagger z, which is
    what is returned; the tests validate the identity against direct
    symbolic substitution. Raises NotUnitary when the columns of U are not
    orthonormal within ``tol``.
    """
    if not isinstance(z, UnitVector):
        z = UnitVector(z)
    U = np.asarray(matrix, dtype=complex)
    if U.shape != (z.n, z.n):
        raise NotUnitary(f"matrix shape {U.shape} does not match C^{z.n}")
    dev = float(np.max(np.abs(U.conj().T @ U - np.eye(z.n))))
    if dev > tol:
        raise NotUnitary(f"columns not orthonormal: deviation {dev:.3e}")
    return GPState(UnitVector(U.conj().T @ z.z))


def state_to_json(state):
    return state.to_json()


def state_from_json(obj):
    """Build a state from its JSON form.

    Accepts the explicit form {"n": n, "z": [[re, im], ...]} and the
    shortcuts {"standard": n} (first basis vector) and {"uniform": n}.
    """
    if not isinstance(obj, dict):
        raise ValueError("state JSON must be an object")
    if "standard" in obj:
        return GPState.standard(int(obj["standard"]))
    if "uniform" in obj:
        return GPState.uniform(int(obj["uniform"]))
    if "n" not in obj or "z" not in obj:
        raise ValueError('state JSON needs "n" and "z" (or a shortcut key)')
    n = int(obj["n"])
    comps = []
    for entry in obj["z"]:
        re, im = entry
        comps.append(complex(float(re), float(im)))
    if len(comps) != n:
        raise ValueError(f'state JSON: |z| = {len(comps)} but n = {n}')
    return GPState(UnitVector(comps))
