"""Syntactic safety: the structural half of every characterization."""
from heardof.core import reasons
from heardof.core.reasons import make_reason
from heardof.classify.facts import is_smor_only, round_facts

__all__ = ['constant_checks', 'is_syntactically_safe', 'is_t_safe', 'structure_reasons']

MINUS = '−'


def constant_checks(facts, halve=True):
    """Both constant inequalities, as (holds, detail) pairs.

    An inequality over an Absent threshold is skipped; the missing
    instruction is reported on its own.
    """
    after = facts.thr_u(facts.ir + 1)
    first = facts.round(1)
    checks = []
    if not after.is_absent and not first.thr_m_min.is_absent:
        left = first.thr_m_min.value / 2 if halve else first.thr_m_min.value
        name = 'thr_m^{1,k}/2' if halve else 'thr_m^{1,k}'
        checks.append(_inequality(name, left, 1 - after.value))
    if not after.is_absent and not first.thr_u.is_absent:
        checks.append(_inequality('thr_u^1', first.thr_u.value, 1 - after.value))
    return checks


def _inequality(name, left, right):
    relation = '≥' if left >= right else '<'
    return left >= right, '%s = %s %s %s = 1%sthr_u^{ir+1}' % (name, left, relation, right, MINUS)


def _common(facts):
    found = []
    if not facts.round(1).has_mult:
        found.append(make_reason(reasons.NO_MULT_FIRST_ROUND, None,
            "the first round has no mult instruction"))
    for fact in facts:
        if not fact.has_uni:
            found.append(make_reason(reasons.MISSING_UNI_ROUND, fact.index,
                "round %d has no uni instruction" % fact.index))
    return found


def _constants(facts, halve):
    failed = [detail for holds, detail in constant_checks(facts, halve) if not holds]
    if failed:
        return [make_reason(reasons.CONSTANTS_VIOLATION, None, '; '.join(failed))]
    return []


def is_syntactically_safe(alg, facts=None):
    """Violations of syntactic safety; an empty list means safe."""
    facts = facts or round_facts(alg)
    found = _common(facts)
    if not is_smor_only(facts.round(1)):
        found.append(make_reason(reasons.NON_SMOR_FIRST_ROUND_MULT, None,
            "a first-round mult instruction does not use smor"))
    return found + _constants(facts, halve=True)


def is_t_safe(alg, facts=None):
    """Violations of syntactic t-safety (timestamps: no smor item, no halving)."""
    facts = facts or round_facts(alg)
    return _common(facts) + _constants(facts, halve=False)


def structure_reasons(alg, facts=None):
    if alg.timestamps:
        return is_t_safe(alg, facts)
    return is_syntactically_safe(alg, facts)
