"""Predicate strengthening and removal of mult instructions that never fire."""
from heardof.core.types import CommSpec, Instruction, RoundType
from heardof.classify.facts import round_facts
from heardof.classify.predicates import is_preserving

__all__ = ['strengthen_sporadics', 'prune_dead_mults', 'assumption_holds', 'guarded_rounds']


def strengthen_sporadics(spec):
    """Conjoins every sporadic predicate with the global one."""
    glob = spec.global_predicate
    return CommSpec(glob, tuple(phi.conjoin(glob) for phi in spec.sporadics))


def guarded_rounds(alg, glob):
    """Rounds i whose predecessors 1..i-1 are all non-preserving under ``glob``.

    No ? reaches such a round in a global phase.
    """
    facts = round_facts(alg)
    rounds = []
    for i in range(1, alg.r + 1):
        rounds.append(i)
        if is_preserving(i, glob, facts):
            break
    return rounds


def _raise(ins, g):
    if ins.threshold < g:
        return Instruction(ins.guard, g, ins.operation)
    return ins


def _prune_round(rnd, g):
    unis = [_raise(ins, g) for ins in rnd.unis]
    mults = []
    for ins in rnd.mults:
        mults.append(_raise(ins, g))
        if ins.threshold <= g:
            break
    return rnd.replace(instructions=tuple(unis + mults))


def prune_dead_mults(alg, glob, rewrites=None):
    """Drops mult instructions no global phase can reach.

    In a round that no ? reaches, every H a global phase admits has more
    than thr_i(glob)*n values, so any instruction threshold below that is
    as good as thr_i(glob) itself, and nothing after the first such mult
    instruction ever fires. ls rounds are left alone.
    """
    i = 1
    while i <= alg.r:
        if i not in guarded_rounds(alg, glob):
            break
        rnd = alg.round(i)
        g = glob.thr(i)
        if rnd.rtype is not RoundType.LS and not g.is_absent:
            pruned = _prune_round(rnd, g)
            if pruned != rnd:
                if rewrites is not None:
                    rewrites.append("round %d: instructions below the global threshold %s "
                        "pruned to [%s]" % (i, g, ', '.join(str(ins) for ins in pruned.instructions)))
                alg = alg.replace_round(pruned)
        i += 1
    return alg


def assumption_holds(alg, glob):
    """Thresholds of rounds that no ? reaches are at least the global threshold."""
    facts = round_facts(alg)
    for i in guarded_rounds(alg, glob):
        fact = facts.round(i)
        if fact.is_ls:
            continue
        g = glob.thr(i)
        if fact.has_uni and fact.thr_u < g:
            return False
        if fact.has_mult and fact.thr_m_min < g:
            return False
    return True
