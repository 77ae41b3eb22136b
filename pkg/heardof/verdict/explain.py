"""Human-readable and JSON renderings of a TheoremTrace."""
import json

from django.conf import settings

from heardof.core import reasons
from heardof.core.types import Outcome

__all__ = ['explain', 'report_json', 'dumps_report']

_OUT_OF_FRAGMENT = {
    reasons.GLOBAL_EQUALIZER: "the global predicate may not contain an equalizer "
        "(with coordinators, neither eq nor ls)",
    reasons.FRAGMENT_MISMATCH: "the requested fragment differs from the detected one",
    reasons.NON_CANONICAL_ROUND: "the round cannot be put in canonical form",
}


def _phi(name):
    return name.replace('phi', 'φ')


def _unifier_word(trace):
    word = 'unifier'
    if trace.fragment.coordinators:
        word = 'c-' + word
    if trace.fragment.timestamps:
        word = 'strong ' + word
    return word


def _decider_word(trace):
    return 'c-decider' if trace.fragment.coordinators else 'decider'


def explain(trace):
    """A deterministic account of every definition checked for the verdict."""
    lines = ['%s: %s' % (trace.name, trace.outcome.value),
        'fragment: %s' % trace.fragment.value]
    for rewrite in trace.rewrites:
        lines.append('rewrite: %s' % rewrite)

    if trace.outcome is Outcome.OUT_OF_FRAGMENT:
        for reason in trace.out_of_fragment:
            lines.append('out of fragment: %s, %s' % (reason, _OUT_OF_FRAGMENT[reason.code]))
            if reason.detail:
                lines.append('  %s' % reason.detail)
        return '\n'.join(lines) + '\n'

    lines.append('condition: %s, structure: %s' % (trace.condition, trace.structure_check))
    for reason in trace.premise:
        lines.append('premise failed: %s, %s' % (reason, reason.detail))
    for holds, detail in trace.constants:
        lines.append('constants: %s%s' % (detail, '' if holds else '  [violated]'))
    for reason in trace.structure:
        lines.append('structure failed: %s, %s' % (reason, reason.detail))
    for reason in trace.provisos:
        lines.append('proviso failed: %s, %s' % (reason, reason.detail))
    if trace.border is not None:
        lines.append('border threshold: %s' % trace.border)
    else:
        lines.append('border threshold: undefined (the first round needs uni and mult)')

    for facts in trace.predicates:
        name = _phi(facts.name)
        if facts.unifier is not None:
            lines.append('%s: %s (equalizer at round %d)' % (_unifier_word(trace), name,
                facts.unifier))
        if facts.decider:
            lines.append('%s: %s' % (_decider_word(trace), name))
        if facts.unifier is None and not facts.decider:
            lines.append('%s: neither %s nor %s' % (name, _unifier_word(trace),
                _decider_word(trace)))
        for rc in facts.rounds:
            flags = []
            if trace.fragment.coordinators:
                flags.append('c-preserving' if rc.c_preserving else 'not c-preserving')
                flags.append('c-solo-safe' if rc.c_solo_safe else 'not c-solo-safe')
                if rc.c_equalizer:
                    flags.append('c-equalizer')
            else:
                flags.append('preserving' if rc.preserving else 'not preserving')
                flags.append('solo-safe' if rc.solo_safe else 'not solo-safe')
                if rc.equalizer:
                    flags.append('equalizer')
            lines.append('  round %d: %s' % (rc.index, ', '.join(flags)))

    if trace.witness_pair is not None:
        i, j = trace.witness_pair
        lines.append('condition %s holds with %s and %s' % (trace.condition,
            _phi('phi^%d' % i), _phi('phi^%d' % j)))
    for reason in trace.condition_reasons:
        lines.append('condition failed: %s, %s' % (reason, reason.detail))
    return '\n'.join(lines) + '\n'


def _rat(value):
    return None if value is None else str(value)


def report_json(verdict, trace):
    return {
        'schema': settings.HOC_REPORT_SCHEMA,
        'instance': trace.name,
        'verdict': verdict.outcome.value,
        'fragment': trace.fragment.value,
        'reasons': verdict.codes,
        'details': [{'code': str(r), 'detail': r.detail, 'witness': r.witness}
            for r in verdict.reasons],
        'witness_pair': list(trace.witness_pair) if trace.witness_pair else None,
        'constants': {
            'border_threshold': _rat(trace.border),
            'inequalities': [{'holds': holds, 'detail': detail}
                for holds, detail in trace.constants],
        },
        'predicates': [facts.to_json() for facts in trace.predicates],
        'rewrites': list(trace.rewrites),
    }


def dumps_report(report):
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + '\n'
