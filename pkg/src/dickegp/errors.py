"""Exception hierarchy.

Everything raised on purpose by the library derives from :class:`DickeError`.
Input problems are also ``ValueError`` so callers that only know the stdlib
can still catch them; numerical failures derive from :class:`NumericalError`.
"""


class DickeError(Exception):
    pass


class InputError(DickeError, ValueError):
    """Bad argument value (maps to exit code 2 in the CLI)."""


class NumericalError(DickeError, RuntimeError):
    """A computation could not certify its result (exit code 3 in the CLI)."""


class NonPositiveParameter(InputError):
    pass


class NegativeCoupling(InputError):
    pass


class BetaOutOfRange(InputError):
    pass


class InvalidSector(InputError):
    pass


class DimensionTooLarge(InputError):
    pass


class StepCountTooSmall(InputError):
    def __init__(self, steps, minimum):
        self.steps = steps
        self.minimum = minimum
        super().__init__(
            f"loop steps K={steps} too small; need K >= {minimum}"
        )

    def __reduce__(self):
        return (type(self), (self.steps, self.minimum))


class GridTooSmall(InputError):
    pass


class NonUniformGrid(InputError):
    pass


class GridDoesNotBracket(InputError):
    pass


class NoConvergence(NumericalError):
    pass


class ScanBoundaryHit(NumericalError):
    def __init__(self, n_atoms, coupling, sector, m_max_factor):
        self.n_atoms = n_atoms
        self.coupling = coupling
        self.sector = sector
        self.m_max_factor = m_max_factor
        super().__init__(
            f"ground sector M={sector} sits on the scan upper bound "
            f"(N={n_atoms}, lambda={coupling!r}, m_max_factor={m_max_factor}); "
            "raise m_max_factor"
        )

    def __reduce__(self):
        return (type(self), (self.n_atoms, self.coupling, self.sector, self.m_max_factor))


class LadderTooSmall(InputError):
    pass

