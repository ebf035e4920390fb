"""Exception hierarchy shared by every kummerlab module."""


class KummerlabError(Exception):
    """Base class for all library errors."""


class DomainError(KummerlabError, ValueError):
    """An argument lies outside the domain of the operation (zero, non-prime, ...)."""


class UnfactoredResidue(KummerlabError):
    """Factorization could not be completed or certified within budget."""

    def __init__(self, residue, message=None):
        self.residue = residue
        super().__init__(message or f"could not certify factorization of residue {residue}")


class Undecided(KummerlabError):
    """A local decision procedure hit its precision ceiling without a verdict."""

    def __init__(self, place, message=None):
        self.place = place
        super().__init__(message or f"undecided at place {place}")


class UncomparedPlace(KummerlabError):
    """A place where the twisted local conditions differ was left out of T."""

    def __init__(self, place):
        self.place = place
        super().__init__(f"local conditions differ at uncompared place {place}")


class NoSuchFrobenius(KummerlabError):
    """Prescribed Legendre conditions contradict a multiplicative relation."""

    def __init__(self, relation):
        self.relation = relation
        super().__init__(f"inconsistent conditions: classes {relation} multiply to a square "
                         "but their prescribed symbols multiply to -1")


class SearchExhausted(KummerlabError):
    """No prime up to the bound satisfies the conditions."""


class StructureRejected(KummerlabError):
    """A proposed 2-structure fails one of its defining conditions."""

    def __init__(self, condition, place=None, detail=""):
        self.condition = condition
        self.place = place
        msg = condition if place is None else f"{condition} at {place}"
        super().__init__(f"{msg}: {detail}" if detail else msg)
