"""Exception hierarchy shared by the library and the CLI."""


class CMTypeError(Exception):
    """Base class; the CLI maps every subclass to exit code 1."""


class NotCoprime(CMTypeError, ValueError):
    def __init__(self, p: int, m: int):
        super().__init__(f"p={p} is not coprime to m={m}")
        self.p = p
        self.m = m


class CapExceeded(CMTypeError):
    pass


class NotSupersingularOrbit(CMTypeError, ValueError):
    pass


class NotSupersingular(CMTypeError):
    pass


class OracleBoundExceeded(CMTypeError):
    pass


class InfinityTypeViolation(CMTypeError):
    def __init__(self, offenders):
        self.offenders = list(offenders)
        super().__init__(f"tau(iota(r)) != n - tau(r) for {self.offenders}")


class NonWeightTwo(CMTypeError, ValueError):
    pass


class IncompatibleField(CMTypeError, ValueError):
    pass


class ZeroComponent(CMTypeError, ValueError):
    pass


class PrecisionExhausted(CMTypeError):
    pass
