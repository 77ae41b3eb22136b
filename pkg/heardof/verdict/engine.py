"""Dispatch to the characterization of the instance's fragment."""
from dataclasses import dataclass, field
from typing import Optional

from heardof.core import reasons
from heardof.core.reasons import OUT_OF_FRAGMENT_CODES, make_reason
from heardof.core.types import Fragment, Instance, Outcome, RoundType, Verdict
from heardof.classify.facts import border_key, round_facts
from heardof.classify.predicates import predicate_facts
from heardof.classify.structure import constant_checks, structure_reasons
from heardof.normalize.normalizer import normalize

import logging
logger = logging.getLogger(__name__)

__all__ = ['TheoremTrace', 'check_consensus', 'check_instance', 'witness_pair', 'CONDITIONS']

CONDITIONS = {
    Fragment.CORE: 'T',
    Fragment.TS: 'sT',
    Fragment.COORD: 'cT',
    Fragment.TS_COORD: 'scT',
}

SAFE = 'syntactically safe'
T_SAFE = 'syntactically t-safe'


@dataclass
class TheoremTrace:
    name: str
    fragment: Fragment
    outcome: Outcome = Outcome.ACCEPT
    condition: Optional[str] = None
    structure_check: Optional[str] = None
    premise: list = field(default_factory=list)
    structure: list = field(default_factory=list)
    provisos: list = field(default_factory=list)
    condition_reasons: list = field(default_factory=list)
    constants: list = field(default_factory=list)
    border: Optional[object] = None
    predicates: list = field(default_factory=list)
    witness_pair: Optional[tuple] = None
    rewrites: list = field(default_factory=list)
    out_of_fragment: list = field(default_factory=list)
    instance: Optional[Instance] = None

    @property
    def reasons(self):
        if self.out_of_fragment:
            return list(self.out_of_fragment)
        return self.premise + self.structure + self.provisos + self.condition_reasons


def witness_pair(unifiers, deciders):
    """The lexicographically smallest (i, j) with i <= j, 1-based, or None."""
    for i, unifier in enumerate(unifiers, start=1):
        if unifier is None:
            continue
        for j in range(i, len(deciders) + 1):
            if deciders[j - 1]:
                return (i, j)
    return None


def _premise(alg):
    found = []
    if alg.round(1).rtype is RoundType.LS:
        found.append(make_reason(reasons.LS_FIRST_ROUND, None, "the first round is an ls round"))
    if alg.round(alg.ir + 1).rtype is RoundType.LS:
        found.append(make_reason(reasons.LS_AFTER_INP_ROUND, alg.ir + 1,
            "round ir+1 = %d is an ls round" % (alg.ir + 1)))
    return found


def _condition(trace, spec, facts, fragment):
    for k, phi in enumerate(spec.sporadics, start=1):
        trace.predicates.append(predicate_facts('phi^%d' % k, phi, facts,
            coordinators=fragment.coordinators, strong=fragment.timestamps))
    unifiers = [p.unifier for p in trace.predicates]
    deciders = [p.decider for p in trace.predicates]
    trace.witness_pair = witness_pair(unifiers, deciders)
    if trace.witness_pair is not None:
        return []
    kind = ('strong ' if fragment.timestamps else '') + ('c-' if fragment.coordinators else '')
    found = []
    first = next((i for i, u in enumerate(unifiers, start=1) if u is not None), None)
    if first is None:
        found.append(make_reason(reasons.NO_UNIFIER, None,
            "no sporadic predicate is a %sunifier" % kind))
    if first is not None or not any(deciders):
        found.append(make_reason(reasons.NO_DECIDER_AFTER_UNIFIER, None,
            "no sporadic predicate is a %sdecider" % ('c-' if fragment.coordinators else '')
            + ('' if first is None else " at or after phi^%d" % first)))
    return found


def check_instance(instance, fragment=None):
    """Normalizes ``instance`` and applies the characterization of its fragment."""
    normalized, report = normalize(instance, fragment)
    trace = TheoremTrace(instance.name, report.fragment, rewrites=list(report.rewrites),
        instance=normalized)
    trace.out_of_fragment = [r for r in report.violations if r.code in OUT_OF_FRAGMENT_CODES]
    if trace.out_of_fragment:
        trace.outcome = Outcome.OUT_OF_FRAGMENT
        logger.debug("%s is out of fragment: %s" % (instance.name,
            ', '.join(str(r) for r in trace.out_of_fragment)))
        return Verdict(Outcome.OUT_OF_FRAGMENT, trace.out_of_fragment), trace

    alg, spec = normalized.algorithm, normalized.spec
    fragment = report.fragment
    facts = round_facts(alg)
    trace.condition = CONDITIONS[fragment]
    trace.structure_check = T_SAFE if fragment.timestamps else SAFE
    trace.provisos = list(report.violations)
    if fragment.coordinators:
        trace.premise = _premise(alg)
    trace.structure = structure_reasons(alg, facts)
    trace.constants = constant_checks(facts, halve=not fragment.timestamps)
    first = facts.round(1)
    if not first.thr_u.is_absent and not first.thr_m_min.is_absent:
        trace.border = border_key(facts)
    trace.condition_reasons = _condition(trace, spec, facts, fragment)

    found = trace.reasons
    trace.outcome = Outcome.REJECT if found else Outcome.ACCEPT
    logger.debug("%s: %s (%s)" % (instance.name, trace.outcome.value,
        ', '.join(str(r) for r in found) or 'witness pair %s' % (trace.witness_pair,)))
    return Verdict(trace.outcome, found), trace


def check_consensus(alg, spec, fragment=None):
    """The verdict for ``alg`` under ``spec`` and the trace explaining it."""
    return check_instance(Instance(alg, spec), fragment)
