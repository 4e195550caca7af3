"""Exception hierarchy shared by all modules."""


class StackyModuliError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(StackyModuliError, ValueError):
    pass


class NonFreeSource(StackyModuliError, ValueError):
    pass


class IllDefinedHom(StackyModuliError, ValueError):
    """A matrix does not send source relators into the target relation lattice."""


class FieldMismatch(StackyModuliError, ValueError):
    pass


class BudgetExceeded(StackyModuliError, RuntimeError):
    pass


class NonLinearForm(StackyModuliError, ValueError):
    pass


class GeneralPositionViolated(StackyModuliError, ValueError):
    pass


class NonHomogeneousRelation(StackyModuliError, ValueError):
    pass


class PathExplosion(StackyModuliError, RuntimeError):
    pass


class NotInLambdaR(StackyModuliError, ValueError):
    pass


class BasisMismatch(StackyModuliError, RuntimeError):
    """Matched Peirce components have different monomial images (internal error)."""


class NotPicHomogeneous(StackyModuliError, ValueError):
    pass


class BadResidue(StackyModuliError, ValueError):
    pass


class NonGenericTheta(StackyModuliError, ValueError):
    pass
