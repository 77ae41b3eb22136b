from heardof.core.types import RoundType

__all__ = ['pretty', 'pretty_instance']

INDENT = '    '

def _quote(name):
    return '"%s"' % name.replace('\\', '\\\\').replace('"', '\\"').replace('\n', '\\n')

def _instruction(rnd, ins, r):
    cond = '%s(H)' % ins.guard.value
    if ins.threshold.value:
        cond += ' && |H| > %s' % ins.threshold
    if rnd.index == r:
        target = 'dec'
    elif rnd.sets_inp:
        target = 'x%d := inp' % rnd.index
    else:
        target = 'x%d' % rnd.index
    return 'if %s then %s := %s(H);' % (cond, target, ins.operation.value)

def _send(alg, rnd):
    if rnd.index == 1:
        return 'send (inp, ts);' if alg.timestamps else 'send (inp);'
    return 'send x%d;' % (rnd.index - 1)

def _tuple(phi):
    return '(%s)' % ', '.join(str(entry) for entry in phi.entries)

def pretty(alg, spec) -> str:
    lines = ['algorithm %s {' % _quote(alg.name)]
    for rnd in alg.rounds:
        header = 'round %d' % rnd.index
        if rnd.rtype is not RoundType.EVERY:
            header += ' ' + rnd.rtype.value
        lines.append(INDENT + header + ' {')
        lines.append(INDENT * 2 + _send(alg, rnd))
        for ins in rnd.instructions:
            lines.append(INDENT * 2 + _instruction(rnd, ins, alg.r))
        lines.append(INDENT + '}')
    lines.append('}')
    lines.append('predicate {')
    lines.append(INDENT + 'global: %s;' % _tuple(spec.global_predicate))
    lines.append(INDENT + 'sporadic: %s;' % ', '.join(_tuple(phi) for phi in spec.sporadics))
    lines.append('}')
    return '\n'.join(lines) + '\n'

def pretty_instance(instance) -> str:
    return pretty(instance.algorithm, instance.spec)
