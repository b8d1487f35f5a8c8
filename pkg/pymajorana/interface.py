"""Base classes and errors shared by the pymajorana modules."""

__all__ = (
    'MajoranaError',
    'DomainError',
    'InvariantViolation',
    'ResourceLimitError',
    'ComputationError',
    'UsageError',
    'QuadraticForm',
)


class MajoranaError(Exception):
    """
      Base class for every error raised by pymajorana. ``name`` identifies
      the check or guard that failed and ``deviation`` carries the measured
      numerical deviation when there is one.
    """

    def __init__(self, message, name=None, deviation=None):
        super(MajoranaError, self).__init__(message)
        self.name = name or self.__class__.__name__
        self.deviation = deviation

    def to_dict(self):
        return dict(
            error=self.name,
            kind=self.__class__.__name__,
            deviation=self.deviation,
            message=str(self),
        )


class DomainError(MajoranaError, ValueError):
    """
      An argument lies outside the domain of an operation, e.g. a row
      index beyond the cylinder or a wave number off the K grid.
    """


class InvariantViolation(MajoranaError):
    """
      A numerical identity that must hold did not, within its tolerance.
    """


class ResourceLimitError(MajoranaError):
    """
      A many-body construction would exceed the configured site cap.
    """


class ComputationError(MajoranaError):
    """
      An eigensolver or decomposition failed to converge.
    """


class UsageError(MajoranaError):
    """
      Command-line or configuration misuse.
    """


class QuadraticForm(object):
    """
      Base class for the two single-particle representations of the model.
      Subclasses hold the lattice ``spec``, a square ``matrix`` and the
      constant ``offset`` such that the many-body Hamiltonian equals the
      quadratic form plus ``offset``.
    """

    kind = None

    def __init__(self, spec, params, matrix, offset):
        self.spec = spec
        self.params = params
        self.matrix = matrix
        self.offset = offset

    @property
    def dimension(self):
        return self.matrix.shape[0]

    def hermitian_matrix(self):
        """
          Returns the Hermitian matrix whose eigenvalues come in +/- pairs
          and whose nonnegative half are the single-particle energies.
        """
        raise NotImplementedError

    def norm(self):
        """
          Spectral norm of the stored matrix, used to scale tolerances.
        """
        raise NotImplementedError
