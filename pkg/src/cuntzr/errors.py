"""Exception types shared across the package."""


class CuntzrError(Exception):
    """Base class for all package errors."""


class MismatchedAlgebra(CuntzrError):
    """Operands live in different Cuntz algebras O_n."""


class BadLevel(CuntzrError):
    """An expansion target is below an existing annihilation length."""


class BadFactorization(CuntzrError):
    """An element's algebra index does not factor as requested."""


class NotUnitary(CuntzrError):
    """A matrix expected to be unitary fails the check."""


class NotCommuting(CuntzrError):
    """Two states fail the commutation precondition of the construction.

    ``witness`` is a monomial on which the two product functionals differ,
    or None when no witness was requested.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class GramMismatch(CuntzrError):
    """The Gram matrices of the two image families do not coincide."""

    def __init__(self, word_x, word_y, residual):
        super().__init__(
            f"Gram equality fails at ({word_x}, {word_y}): deviation {residual:.3e}"
        )
        self.word_x = word_x
        self.word_y = word_y
        self.residual = residual


class OutOfDomain(CuntzrError):
    """A vector does not lie in a finite span within tolerance."""

    def __init__(self, residual, message=None):
        super().__init__(
            message or f"projection residual {residual:.3e} exceeds tolerance"
        )
        self.residual = residual


class SpecError(CuntzrError):
    """Invalid scenario description, with field-level messages."""

    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        super().__init__("; ".join(errors))
        self.errors = list(errors)
