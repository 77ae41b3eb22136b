"""Witnesses: serializable executions that show a violation.

A witness only stores the sequence of configurations and the predicate
used at every step. The per-round detail (heard-of multisets, class flows)
is reconstructed when the witness is written out, and ``replay`` checks
that detail independently of the search code.
"""
from collections import Counter
from dataclasses import dataclass, field
import json
from typing import Optional

from django.conf import settings

from heardof.core.errors import WitnessError
from heardof.core.types import RoundType
from heardof.sim.phases import Flow, after_lr, apply_flows, new_rank, phase_step, predicate_for
from heardof.sim.profiles import UNDEF, Value, Profile, AbstractConfig, RoundCounts
from heardof.sim.semantics import delivered, leader_value, pool_values, update_value

import logging
logger = logging.getLogger(__name__)

__all__ = ['Witness', 'AGREEMENT', 'TERMINATION', 'replay', 'load_witness']

AGREEMENT = 'agreement'
TERMINATION = 'termination'


@dataclass
class Witness:
    kind: str
    n: int
    states: list
    labels: list = field(default_factory=list)
    loop_start: Optional[int] = None

    @property
    def initial(self):
        return self.states[0]

    @property
    def final(self):
        return self.states[-1]

    def steps(self, instance):
        alg, spec = instance.algorithm, instance.spec
        for label, source, target in zip(self.labels, self.states, self.states[1:]):
            yield phase_step(alg, source, predicate_for(spec, label), target, label)

    def summary(self):
        if self.kind == AGREEMENT:
            return "agreement violation after %d phase(s) at n=%d: %s" % (
                len(self.labels), self.n, self.final)
        return "non-terminating lasso at n=%d: %d phase(s) to the loop, loop of %d at %s" % (
            self.n, self.loop_start, len(self.labels) - self.loop_start, self.states[self.loop_start])

    def to_json(self, instance):
        return {
            'schema': settings.HOC_WITNESS_SCHEMA,
            'kind': self.kind,
            'instance': instance.name,
            'n': self.n,
            'initial': self.initial.to_json(),
            'phases': [_phase_json(step) for step in self.steps(instance)],
            'loop_start': self.loop_start,
            'final': self.final.to_json(),
        }

    def dumps(self, instance):
        return json.dumps(self.to_json(instance), indent=2, sort_keys=True) + '\n'


def _counts_json(counts):
    return {'a': counts.a, 'b': counts.b, '?': counts.q}


def _h_json(h):
    return [[str(v), rank, c] for (v, rank), c in h if c]


def _profile_json(p):
    return {'inp': str(p.inp), 'rank': p.rank, 'dec': str(p.dec)}


def _phase_json(step):
    rounds = []
    for rs in step.rounds:
        record = {
            'round': rs.round,
            'counts': _counts_json(rs.counts),
            'choices': [{'value': str(c.value), 'processes': c.processes, 'h': _h_json(c.h)}
                for c in rs.choices],
        }
        if rs.sender is not None:
            record['sender'] = str(rs.sender)
        rounds.append(record)
    return {
        'predicate': step.label,
        'rounds': rounds,
        'flows': [{'from': _profile_json(f.source), 'inp_round': str(f.v_ir),
            'last_round': str(f.v_r), 'count': f.count} for f in step.flows],
        'sporadic_index': step.target.sporadic_index,
        'state': step.target.to_json(),
    }


def load_witness(path):
    with open(path, encoding='utf-8') as f:
        return json.load(f)


def _fail(phase, message):
    raise WitnessError("phase %d: %s" % (phase, message))


def _read_counts(data):
    return RoundCounts(data['a'], data['b'], data['?'])


def _read_h(data):
    h = Counter()
    for v, rank, c in data:
        h[(Value.parse(v), rank)] += c
    return tuple(sorted(h.items()))


def _check_h(phase, i, rnd, entry, pool, h, value, n):
    available = dict(pool)
    for key, c in h:
        if c > available.get(key, 0):
            _fail(phase, "round %d: heard-of multiset is not part of the sent messages" % i)
    if not entry.thr.admits(sum(c for _, c in h), n):
        _fail(phase, "round %d: heard-of multiset of size %d violates %s"
            % (i, sum(c for _, c in h), entry))
    got = update_value(rnd.instructions, h, n)
    if got is not value:
        _fail(phase, "round %d: heard-of multiset yields %s, not %s" % (i, got, value))


def _check_round(phase, alg, i, entry, pool, counts, record, n):
    rnd = alg.round(i)
    choices = [(Value.parse(c['value']), _read_h(c['h']), c['processes']) for c in record['choices']]
    tally = [0, 0, 0]
    for value, _, processes in choices:
        tally[value] += processes
    if RoundCounts(*tally) != counts or sum(counts) != n:
        _fail(phase, "round %d: choices do not add up to %s" % (i, counts))

    if rnd.rtype is RoundType.LS:
        if 'sender' not in record:
            _fail(phase, "round %d: ls round without a sender" % i)
        d = Value.parse(record['sender'])
        if after_lr(alg, i):
            if d is not leader_value(pool):
                _fail(phase, "round %d: sender %s is not the leader" % (i, d))
        elif d not in pool_values(pool):
            _fail(phase, "round %d: nobody sent %s" % (i, d))
        value = delivered(rnd, d)
        allowed = {value} if entry.has_ls else {value, UNDEF}
        if not set(counts.values()) <= allowed:
            _fail(phase, "round %d: %s cannot follow from sender %s" % (i, counts, d))
        return

    if rnd.rtype is RoundType.LR:
        leader, rest = choices[0], choices[1:]
        if leader[2] != 1 or counts != RoundCounts.one(leader[0], n):
            _fail(phase, "round %d: an lr round hands a value to exactly one process" % i)
        if any(value is not UNDEF or h for value, h, _ in rest):
            _fail(phase, "round %d: only the leader receives messages" % i)
        _check_h(phase, i, rnd, entry, pool, leader[1], leader[0], n)
        return

    if entry.has_eq and len(choices) != 1:
        _fail(phase, "round %d: an equalizer round gives everybody the same multiset" % i)
    for value, h, _ in choices:
        _check_h(phase, i, rnd, entry, pool, h, value, n)


def _replay_phase(phase, alg, phi, cfg, record):
    n = cfg.n
    if [r['round'] for r in record['rounds']] != list(range(1, alg.r + 1)):
        _fail(phase, "expected rounds 1..%d" % alg.r)
    vectors = {}
    pool = cfg.inp_pool()
    for i, rec in enumerate(record['rounds'], start=1):
        counts = _read_counts(rec['counts'])
        _check_round(phase, alg, i, phi.entry(i), pool, counts, rec, n)
        vectors[i] = counts
        pool = counts.pool()

    flows = [Flow(Profile(Value.parse(f['from']['inp']), f['from']['rank'], Value.parse(f['from']['dec'])),
        Value.parse(f['inp_round']), Value.parse(f['last_round']), f['count'])
        for f in record['flows']]
    sources, ir_tally, r_tally = Counter(), [0, 0, 0], [0, 0, 0]
    for flow in flows:
        sources[flow.source] += flow.count
        ir_tally[flow.v_ir] += flow.count
        r_tally[flow.v_r] += flow.count
    if sources != cfg.counter():
        _fail(phase, "flows do not start from the previous configuration")
    if RoundCounts(*ir_tally) != vectors[alg.ir]:
        _fail(phase, "flows do not match round %d" % alg.ir)
    if RoundCounts(*r_tally) != vectors[alg.r]:
        _fail(phase, "flows do not match round %d" % alg.r)
    return apply_flows(n, flows, new_rank(alg, cfg))


def replay(instance, data):
    """Re-executes a witness read from JSON and returns its final configuration.

    Raises WitnessError when any recorded step is not a legal transition or
    the execution does not show the claimed violation.
    """
    alg, spec = instance.algorithm, instance.spec
    if data.get('schema') != settings.HOC_WITNESS_SCHEMA:
        raise WitnessError("unsupported witness schema %r" % data.get('schema'))
    n = data['n']
    cfg = AbstractConfig.from_json(n, data['initial'])
    if cfg.decided() or cfg.max_rank != 0:
        raise WitnessError("a witness must start from an initial configuration")
    states = [cfg]
    labels = []
    k = 0
    for phase, record in enumerate(data['phases'], start=1):
        label = record['predicate']
        if label != 'global':
            if label != 'phi^%d' % (k + 1) or k >= spec.k:
                _fail(phase, "sporadic predicate %s is out of order" % label)
            k += 1
        cfg = _replay_phase(phase, alg, predicate_for(spec, label), cfg, record).with_index(k)
        if cfg != AbstractConfig.from_json(n, record['state'], k):
            _fail(phase, "recorded state %s differs from the replayed %s"
                % (AbstractConfig.from_json(n, record['state'], k), cfg))
        states.append(cfg)
        labels.append(label)
    if AbstractConfig.from_json(n, data['final'], k) != cfg:
        raise WitnessError("final state does not match the replay")

    if data['kind'] == AGREEMENT:
        if not cfg.has_disagreement:
            raise WitnessError("final state %s has no disagreement" % cfg)
    elif data['kind'] == TERMINATION:
        start = data.get('loop_start')
        if k != spec.k:
            raise WitnessError("the lasso does not pass all %d sporadic predicates" % spec.k)
        if start is None or not (0 <= start < len(labels)) or states[start] != cfg:
            raise WitnessError("the execution does not return to its loop start")
        if any(label != 'global' for label in labels[start:]):
            raise WitnessError("the loop may only use the global predicate")
        if cfg.fully_decided:
            raise WitnessError("every process has decided in the loop")
    else:
        raise WitnessError("unknown witness kind %r" % data['kind'])
    logger.debug("replayed %s witness for %s" % (data['kind'], instance.name))
    return cfg
