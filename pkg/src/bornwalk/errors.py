"""Exception types shared across the package."""


class BornwalkError(Exception):
    """Base class for errors raised by this package."""


class UnclassifiedDynamicsError(BornwalkError, ValueError):
    """The transition matrix falls outside every known dynamics regime."""


class OracleBudgetExceeded(BornwalkError, RuntimeError):
    """Exhaustive path enumeration would exceed the configured budget."""


class NoEquivalentHamiltonian(BornwalkError, ValueError):
    """The transition matrix has no equivalent real two-state Hamiltonian."""


class EnsembleFalsified(BornwalkError, AssertionError):
    """The rotation-averaged event matrix violates the Born ensemble structure."""
