class DomainError(ValueError):
    """Input outside the domain of an operation (bad index, dimension, degree)."""


class NotHyperbolicError(ValueError):
    """A polynomial expected to be real-rooted has non-real roots."""


class PreconditionError(ValueError):
    pass


class SamplingExhausted(RuntimeError):
    """Rejection sampling used its whole budget without an accepted draw."""


class EmptyDomainError(DomainError):
    pass
