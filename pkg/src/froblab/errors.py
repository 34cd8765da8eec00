"""Exception hierarchy shared by all froblab modules."""


class FrobLabError(Exception):
    pass


class SpecError(FrobLabError, ValueError):
    """A ring, group, weight, poset or partition spec string failed to parse."""


class RingAxiomError(FrobLabError):
    def __init__(self, axiom, triple):
        self.axiom = axiom
        self.triple = tuple(triple)
        super().__init__(f"ring axiom '{axiom}' fails at {self.triple}")


class ReducibleModulusError(FrobLabError):
    def __init__(self, modulus, factor):
        self.modulus = modulus
        self.factor = factor
        super().__init__(f"modulus {modulus} is reducible (factor {factor})")


class BudgetExceeded(FrobLabError):
    def __init__(self, what, required, budget):
        self.what = what
        self.required = required
        self.budget = budget
        super().__init__(f"{what}: {required} candidates required, budget is {budget}")


class NotGeneratingError(FrobLabError):
    """A character passed where a generating character is required."""


class InvalidGroupError(FrobLabError):
    pass


class IllDefinedMapError(FrobLabError):
    """Generator images do not respect a linear relation among the generators."""

    def __init__(self, x, y1, y2):
        self.x, self.y1, self.y2 = x, y1, y2
        super().__init__(f"vector {x} would map to both {y1} and {y2}")


class InconsistencyError(FrobLabError, AssertionError):
    """Two independent computations of the same quantity disagree (a bug)."""


class UnknownScenarioError(FrobLabError, KeyError):
    pass
