"""Exception hierarchy shared by every module."""


class SheafDualError(Exception):
    """Base class for all errors raised by this package."""


class NotPartialOrder(SheafDualError):
    def __init__(self, axiom, witness):
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"relation is not a partial order: {axiom} fails at {witness}")


class NotALattice(SheafDualError):
    def __init__(self, operation, witness):
        self.operation = operation
        self.witness = witness
        super().__init__(f"no {operation} for pair {witness}")


class NotBounded(SheafDualError):
    pass


class NotDistributive(SheafDualError):
    def __init__(self, witness=None):
        self.witness = witness
        super().__init__(f"lattice is not distributive (witness {witness})")


class NotBoolean(SheafDualError):
    pass


class OperatorAxiomViolation(SheafDualError):
    def __init__(self, index, axiom, witness):
        self.index = index
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"operator {index} violates {axiom} at {witness}")


class NotClosed(SheafDualError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"carrier not closed: {witness}")


class NotHomomorphism(SheafDualError):
    def __init__(self, reason, witness):
        self.reason = reason
        self.witness = witness
        super().__init__(f"map is not a homomorphism: {reason} at {witness}")


class NotIsomorphism(SheafDualError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"map is not an isomorphism: {witness}")


class NotBLOIdeal(SheafDualError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"not an operator-closed ideal: {witness}")


class NotCongruence(SheafDualError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"partition is not a congruence: {witness}")


class IllDefined(SheafDualError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"stalk map is not well defined: {witness}")


class NotApplicable(SheafDualError):
    pass


class BudgetExceeded(SheafDualError):
    def __init__(self, budget, what="search"):
        self.budget = budget
        super().__init__(f"{what} exceeded budget of {budget}")


class UniverseTooLarge(BudgetExceeded):
    def __init__(self, count, budget):
        self.count = count
        BudgetExceeded.__init__(self, budget, what=f"name universe ({count} names)")


class RankOverflow(SheafDualError):
    pass


class TensorAxiomViolation(SheafDualError):
    def __init__(self, axiom, witness):
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"tensor violates {axiom} at {witness}")


class TensorUnavailable(SheafDualError):
    pass


class ParseError(SheafDualError):
    def __init__(self, line, column, message):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")
