"""Exception types shared across the package.

Errors are split into three rough families: input validation (bad tables,
malformed words, ring mismatches), well-formed mathematical obstructions
(a lift that provably cannot exist, a non-perfect kernel), and resource
guards (integer blow-up, enumeration bounds).  The CLI maps these to its
exit codes, so raising the right family matters.
"""

from __future__ import annotations


class PlusconError(Exception):
    """Base class for all library errors."""


class InvalidInput(PlusconError):
    """Malformed or inconsistent user input (CLI exit code 2)."""


class ParseError(InvalidInput):
    """A word, group-ring element, or file failed to parse."""


class OrderTooLarge(InvalidInput):
    """A group exceeds the configured order bound for the operation."""


class MixedGroups(InvalidInput):
    """Two operands live over different groups."""


class MixedRings(InvalidInput):
    """Two operands live over different coefficient rings."""


class NonAbelianGroup(InvalidInput):
    """An operation requiring an abelian group got a non-abelian one."""


class NotNormal(InvalidInput):
    """A subgroup argument is not normal in its ambient group."""


class InvalidBoundary(InvalidInput):
    """A boundary matrix fails the chain-complex identity d(d(x)) = 0."""


class RankMismatch(InvalidInput):
    """Matrix or complex shapes are incompatible."""


class MismatchedBase(InvalidInput):
    """Chain maps or gluing data do not share the expected based subcomplex."""


class Obstruction(PlusconError):
    """A well-formed mathematical obstruction (CLI exit code 1).

    Instances carry a machine-checkable ``certificate`` dict that the
    library can re-verify.
    """

    def __init__(self, message: str, certificate: dict | None = None):
        super().__init__(message)
        self.certificate = dict(certificate or {})


class NotLiftable(Obstruction):
    """A prescribed relative class has no equivariant cycle lift."""


class NotPerfect(Obstruction):
    """The subgroup being killed is not perfect (nonzero H1 obstruction)."""


class NotInvertible(Obstruction):
    """A matrix is not invertible over the group ring."""


class NotAcyclic(Obstruction):
    """A complex expected to be acyclic has nonzero homology."""


class NotASummand(Obstruction):
    """The mod-2 framing system is inconsistent (no summand splitting)."""


class NotOneSidedH(Obstruction):
    """A cobordism model fails the one-sided h-cobordism conditions."""


class BudgetExceeded(PlusconError):
    """A configured resource bound was hit (CLI exit code 3)."""
