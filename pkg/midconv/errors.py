__license__ = "MIT"


class MidconvError(Exception):
    pass


class PreconditionError(MidconvError, ValueError):
    ''' A violated precondition or hypothesis of an operation. '''


class InconclusiveError(MidconvError):
    ''' A search ran out of attempts without deciding. '''


class IntegrationError(MidconvError, ArithmeticError):
    ''' Numerical continuation failed, usually because a path runs too close to a pole. '''


class DocumentError(MidconvError):
    ''' A JSON document does not describe a tuple or system. '''
