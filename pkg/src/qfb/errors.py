"""Exception types shared across the package."""


class QfbError(Exception):
    """Base class for all package-specific errors."""


class SingularAtPole(QfbError):
    """Transfer matrix requested at (or numerically too close to) a pole."""


class NonBipartiteGraph(QfbError):
    """Interaction graph admits no two-coloring."""


class LoopSingular(QfbError):
    """Feedback loop denominator vanishes at the evaluation point."""


class IllPosedLoop(QfbError):
    """Feedback interconnection has no well-defined closed-loop model."""


class NotReal(QfbError):
    """Quadrature transfer matrix has a non-negligible imaginary part."""


class Unphysical(QfbError):
    """Covariance matrix violates the uncertainty relation."""


class NotBogoliubov(QfbError):
    """Transfer entries do not satisfy |G11|^2 - |G12|^2 = 1."""


class UnstablePerturbation(QfbError):
    """A perturbed system has a pole with nonnegative real part."""


class ConfigError(QfbError):
    """Invalid or unknown configuration content."""
