"""Per-round threshold summaries and the border threshold."""
from dataclasses import dataclass
from fractions import Fraction

from heardof.core.errors import ClassifierError
from heardof.core.types import ABSENT, Operation, RoundType, Threshold

__all__ = ['RoundFact', 'RoundFacts', 'round_facts', 'border_threshold', 'border_key',
    'is_smor_only']


@dataclass(frozen=True)
class RoundFact:
    index: int
    rtype: RoundType
    has_uni: bool
    has_mult: bool
    thr_u: Threshold
    thr_m_min: Threshold  # thr_m^{i,k}
    thr_m_max: Threshold  # thr_m^{i,1}
    mult_ops: tuple = ()

    @property
    def is_ls(self):
        return self.rtype is RoundType.LS

    def __str__(self):
        return 'round %d (%s): thr_u=%s, thr_m^k=%s' % (
            self.index, self.rtype.value, self.thr_u, self.thr_m_min)


class RoundFacts(tuple):
    """RoundFact for every round of an algorithm, with its ir and timestamp flag."""

    def __new__(cls, facts, ir, timestamps=False):
        obj = super(RoundFacts, cls).__new__(cls, facts)
        obj.ir = ir
        obj.timestamps = timestamps
        return obj

    @property
    def r(self):
        return len(self)

    def round(self, i):
        return self[i - 1]

    def thr_u(self, i):
        return self[i - 1].thr_u

    def thr_m(self, i):
        return self[i - 1].thr_m_min


def _fact(rnd):
    unis = [ins.threshold for ins in rnd.unis]
    mults = [ins.threshold for ins in rnd.mults]
    return RoundFact(
        index=rnd.index,
        rtype=rnd.rtype,
        has_uni=bool(unis),
        has_mult=bool(mults),
        thr_u=min(unis) if unis else ABSENT,
        thr_m_min=min(mults) if mults else ABSENT,
        thr_m_max=max(mults) if mults else ABSENT,
        mult_ops=tuple(ins.operation for ins in rnd.mults))


def round_facts(alg) -> RoundFacts:
    return RoundFacts([_fact(rnd) for rnd in alg.rounds], alg.ir, alg.timestamps)


def border_key(facts) -> Fraction:
    """max(1 - thr_u^1, 1 - thr_m^{1,k}/2) with Absent read as -1.

    Values above 1 mean no predicate threshold can reach the border.
    """
    first = facts.round(1)
    return max(1 - first.thr_u.key, 1 - first.thr_m_min.key / 2)


def border_threshold(facts) -> Fraction:
    first = facts.round(1)
    if first.thr_u.is_absent or first.thr_m_min.is_absent:
        raise ClassifierError("the border threshold needs a uni and a mult instruction "
            "in the first round")
    return border_key(facts)


def is_smor_only(fact):
    return all(op is Operation.SMOR for op in fact.mult_ops)
