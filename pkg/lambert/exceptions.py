'''
Errors raised by the lambert application.

Every error derives from LambertError so management commands can translate
the whole family into exit codes in one place.
'''


class LambertError(Exception):
    '''Base class of all lambert errors.'''


class DomainError(LambertError, ValueError):
    '''An argument lies outside the real domain of the requested evaluation.'''


class UnsupportedParameterError(DomainError):
    '''The series is only derived for a narrower parameter set (alpha = 1).'''


class CapacityError(LambertError, IndexError):
    '''
    A Stirling index exceeds the bound of the table that was asked for it.

    Attributes:
        bound (int): The largest index the table holds.
        index (int): The index that was requested.
    '''

    def __init__(self, kind, index, bound):
        self.bound = bound
        self.index = index
        super().__init__(
            f'{kind} table holds n <= {bound}, index {index} requested'
        )


class SolverError(LambertError, ArithmeticError):
    '''
    The reference root finder did not converge.

    Attributes:
        trace (tuple): Iterates visited before giving up, oldest first.
    '''

    def __init__(self, message, trace=()):
        self.trace = tuple(trace)
        super().__init__(f'{message} after {len(self.trace)} iterations')


class ExperimentError(LambertError, ValueError):
    '''An experiment was configured with degenerate input.'''
