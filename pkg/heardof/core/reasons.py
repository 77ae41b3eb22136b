"""Stable reason codes and the simulator witness each one asks for."""
from heardof.core.types import Reason

NO_MULT_FIRST_ROUND = 'NoMultFirstRound'
MISSING_UNI_ROUND = 'MissingUniRound'
NON_SMOR_FIRST_ROUND_MULT = 'NonSmorFirstRoundMult'
CONSTANTS_VIOLATION = 'ConstantsViolation'
NO_UNIFIER = 'NoUnifier'
NO_DECIDER_AFTER_UNIFIER = 'NoDeciderAfterUnifier'
MULT_AFTER_INP_ROUND = 'MultAfterInpRound'
TS_INP_ROUND_VIOLATION = 'TsInpRoundViolation'
LS_FIRST_ROUND = 'LsFirstRound'
LS_AFTER_INP_ROUND = 'LsAfterInpRound'
GLOBAL_EQUALIZER = 'GlobalEqualizer'
FRAGMENT_MISMATCH = 'FragmentMismatch'
NON_CANONICAL_ROUND = 'NonCanonicalRound'

AGREEMENT = 'agreement'
TERMINATION = 'termination'
BOTH = 'both'

WITNESS_REQUESTS = {
    CONSTANTS_VIOLATION: AGREEMENT,
    NON_SMOR_FIRST_ROUND_MULT: AGREEMENT,
    MULT_AFTER_INP_ROUND: AGREEMENT,
    NO_MULT_FIRST_ROUND: TERMINATION,
    MISSING_UNI_ROUND: TERMINATION,
    NO_UNIFIER: TERMINATION,
    NO_DECIDER_AFTER_UNIFIER: TERMINATION,
    TS_INP_ROUND_VIOLATION: BOTH,
    LS_FIRST_ROUND: BOTH,
    LS_AFTER_INP_ROUND: BOTH,
}

OUT_OF_FRAGMENT_CODES = (GLOBAL_EQUALIZER, FRAGMENT_MISMATCH, NON_CANONICAL_ROUND)


def make_reason(code, round=None, detail=''):
    return Reason(code, round, detail, WITNESS_REQUESTS.get(code))


def witness_kinds(reasons):
    """The simulator checks requested by a list of reasons, in a fixed order."""
    requested = set()
    for reason in reasons:
        if reason.witness == BOTH:
            requested.update((AGREEMENT, TERMINATION))
        elif reason.witness:
            requested.add(reason.witness)
    return [kind for kind in (AGREEMENT, TERMINATION) if kind in requested]
