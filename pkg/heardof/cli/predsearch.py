"""Weakest sporadic predicates that make an algorithm correct.

Only thresholds the algorithm itself uses (and the border threshold) are
tried, so this is a search over a small grid, not synthesis.
"""
import itertools

from heardof.core.types import (ABSENT, Outcome, PhasePredicate, PredicateEntry, RoundType,
    Threshold)
from heardof.classify.facts import border_key, round_facts
from heardof.classify.predicates import is_decider, unifier_position
from heardof.verdict.engine import check_instance

__all__ = ['weakest_decider', 'unifier_candidates', 'search_predicates']


def weakest_decider(facts):
    entries = []
    for fact in facts:
        if fact.is_ls:
            entries.append(PredicateEntry(has_ls=True))
        elif fact.has_uni:
            entries.append(PredicateEntry(thr=fact.thr_u))
        else:
            return None
    return PhasePredicate(entries)


def _thresholds(alg, facts, i):
    values = {ABSENT}
    values.update(ins.threshold for ins in alg.round(i).instructions)
    if i == 1:
        border = border_key(facts)
        if 0 <= border < 1:
            values.add(Threshold.present(border))
    return sorted(values)


def _weakness(phi):
    return (sum(max(e.thr.key, 0) for e in phi.entries),
        sum(e.has_eq + e.has_ls for e in phi.entries), str(phi))


def unifier_candidates(alg, facts):
    """Predicates with one (c-)equalizer at a round up to ir, weakest first."""
    per_round = [_thresholds(alg, facts, i) for i in range(1, alg.r + 1)]
    candidates = set()
    for position in range(1, alg.ir + 1):
        for combo in itertools.product(*per_round):
            entries = []
            for i, thr in enumerate(combo, start=1):
                ls_round = alg.round(i).rtype is RoundType.LS
                if ls_round:
                    entries.append(PredicateEntry(has_ls=i == position))
                else:
                    entries.append(PredicateEntry(has_eq=i == position, thr=thr))
            candidates.add(PhasePredicate(entries))
    return sorted(candidates, key=_weakness)


def search_predicates(instance, fragment=None):
    """The weakest (unifier, decider) pair making ``instance`` correct, or None.

    None also when the algorithm fails a check no predicate can repair.
    """
    verdict, trace = check_instance(instance, fragment)
    if verdict.outcome is Outcome.OUT_OF_FRAGMENT:
        return None
    if trace.premise or trace.structure or trace.provisos:
        return None
    alg, spec = trace.instance.algorithm, trace.instance.spec
    fragment = trace.fragment
    facts = round_facts(alg)
    glob = spec.global_predicate
    decider = weakest_decider(facts)
    if decider is None or not is_decider(decider.conjoin(glob), facts, fragment.coordinators):
        return None
    for unifier in unifier_candidates(alg, facts):
        position = unifier_position(unifier.conjoin(glob), facts,
            coordinators=fragment.coordinators, strong=fragment.timestamps)
        if position is not None:
            return unifier, decider
    return None
