class HocError(Exception):
    pass

class MalformedRational(HocError):
    pass

class StructureError(HocError):
    """An algorithm, predicate or instance that breaks a structural rule.

    ``round`` is the 1-based round the problem was found in, when there is one.
    """

    def __init__(self, message, round=None):
        super(StructureError, self).__init__(message)
        self.message = message
        self.round = round

class ClassifierError(HocError):
    pass

class WitnessError(HocError):
    pass

class BoundTooLarge(HocError):

    def __init__(self, estimate, limit, message=None):
        super(BoundTooLarge, self).__init__(message or (
            "estimated %d abstract states exceeds the limit of %d; "
            "try a smaller --n or raise HOC_MAX_STATES" % (estimate, limit)))
        self.estimate = estimate
        self.limit = limit
