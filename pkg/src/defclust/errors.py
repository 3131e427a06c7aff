"""Exception hierarchy shared by all engines and oracles.

Engines never trust a caller-asserted hypothesis: when a run cannot
complete because the hypothesis was false, a :class:`HypothesisViolation`
carrying a concrete witness is raised.  Oracles refuse instances above
their caps instead of approximating.
"""

from __future__ import annotations


class DefclustError(Exception):
    """Base class for all package errors."""


class GraphFormatError(DefclustError):
    """Malformed graph input (bad line, loop, out-of-range vertex)."""


class PartialColouringError(DefclustError):
    """A colouring was expected to be total but left vertices unassigned."""

    def __init__(self, uncoloured):
        self.uncoloured = tuple(uncoloured)
        super().__init__(f"colouring is partial; uncoloured vertices: {self.uncoloured}")


class OracleCapExceeded(DefclustError):
    """An exact oracle refused an instance above its configured cap."""

    def __init__(self, what, size, cap):
        self.what, self.size, self.cap = what, size, cap
        super().__init__(f"{what}: instance size {size} exceeds cap {cap}; refusing (no heuristic fallback)")


class HypothesisViolation(DefclustError):
    """A caller-asserted structural hypothesis was exposed as false.

    ``witness`` holds engine-specific evidence (a subgraph, a cycle, a
    minor model, an immersion certificate, ...).
    """

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class OracleContractViolation(DefclustError):
    """A separator oracle returned a set violating its declared (c, beta)."""

    def __init__(self, message, subgraph=None, returned=None):
        self.subgraph = subgraph
        self.returned = returned
        super().__init__(message)


class ContractViolation(DefclustError):
    """A base colouring engine broke the contract it declared."""


class ResamplingFailed(DefclustError):
    """The resampling budget was exhausted across all reseed attempts."""
