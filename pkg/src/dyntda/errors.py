"""Exception hierarchy.

Every error carries the name of the pipeline stage that raised it so the CLI
can emit a structured report.
"""


class DynTDAError(Exception):
    module = "dyntda"

    def to_dict(self) -> dict:
        return {"error": type(self).__name__, "module": self.module, "message": str(self)}


# odesolve

class OdeError(DynTDAError):
    module = "odesolve"


class DivergedError(OdeError):
    def __init__(self, step: int, message: str | None = None):
        self.step = step
        super().__init__(message or f"non-finite state at step {step}")


class TruncationError(OdeError):
    def __init__(self, bound: float, k_max: int):
        self.bound = bound
        self.k_max = k_max
        super().__init__(f"series tolerance unreachable: bound {bound:.3e} at k_max={k_max}")


class SolverError(OdeError):
    def __init__(self, message: str, condition: float = float("nan")):
        self.condition = condition
        super().__init__(f"{message} (condition estimate {condition:.3e})")


class SpectralFailureError(OdeError):
    pass


# quantumsim

class QuantumSimError(DynTDAError):
    module = "quantumsim"


class EncodingError(QuantumSimError):
    def __init__(self, message: str, index: int | None = None):
        self.index = index
        if index is not None:
            message = f"{message} (state index {index})"
        super().__init__(message)


class DimensionMismatchError(QuantumSimError, ValueError):
    pass


# cliquecomplex

class CliqueComplexError(DynTDAError):
    module = "cliquecomplex"


class MetricError(CliqueComplexError, ValueError):
    pass


# homology

class HomologyError(DynTDAError):
    module = "homology"


class SimplexRangeError(HomologyError, IndexError):
    pass


class NumericalRankError(HomologyError):
    def __init__(self, message: str, borderline=()):
        self.borderline = tuple(borderline)
        super().__init__(f"{message}; borderline values {list(self.borderline)}")


class GapTooSmallError(HomologyError):
    def __init__(self, gap: float, floor: float):
        self.gap = gap
        self.floor = floor
        super().__init__(f"spectral gap {gap:.3e} below floor {floor:.1e}")


class FilterDegreeError(HomologyError):
    pass


class UndefinedMultiplicativeError(HomologyError, ValueError):
    pass


# analysis

class AnalysisError(DynTDAError):
    module = "analysis"


class SweepError(AnalysisError):
    def __init__(self, eps: float, cause: DynTDAError):
        self.eps = eps
        self.cause = cause
        self.module = getattr(cause, "module", "analysis")
        super().__init__(f"at eps={eps!r}: {cause}")


# cli

class ConfigError(DynTDAError, ValueError):
    module = "cli"
