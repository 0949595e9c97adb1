class PWLabError(Exception):
    pass


class QuadratureError(PWLabError):
    """Adaptive quadrature ran out of refinements."""

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class IntegrationError(PWLabError):
    pass


class SingularityError(PWLabError, ValueError):
    pass


class DegenerateEigenvalueError(PWLabError, ValueError):
    pass


class CriticalAngleError(PWLabError, ValueError):
    pass


class RayAmbiguityError(PWLabError, ValueError):
    pass


class ResampleError(PWLabError):
    pass


class ResolutionError(PWLabError, ValueError):
    pass
