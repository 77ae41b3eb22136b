"""Bounded searches over the counting abstraction.

Configurations are explored in breadth-first order and successors are
visited in the configuration order, so every result, witnesses included,
is the same from run to run.
"""
from collections import deque
from math import comb

from django.conf import settings

from heardof.core.errors import BoundTooLarge
from heardof.sim.phases import phase_successors, predicate_for
from heardof.sim.profiles import AbstractConfig
from heardof.sim.witness import AGREEMENT, TERMINATION, Witness

import logging
logger = logging.getLogger(__name__)

__all__ = ['estimate_states', 'guard_bound', 'reachable_configs', 'check_agreement',
    'check_termination']


def estimate_states(instance, n):
    """Rough upper bound on the abstract states a search at ``n`` can visit."""
    estimate = comb(n + 5, 5) * (instance.spec.k + 1)
    if instance.algorithm.timestamps:
        estimate *= n
    return estimate


def guard_bound(instance, n, limit=None):
    if limit is None:
        limit = settings.HOC_MAX_STATES
    estimate = estimate_states(instance, n)
    if estimate > limit:
        raise BoundTooLarge(estimate, limit)
    return estimate


def _path(parents, node):
    states, labels = [node], []
    while parents[node] is not None:
        node, label = parents[node]
        states.append(node)
        labels.append(label)
    states.reverse()
    labels.reverse()
    return states, labels


def reachable_configs(instance, n, depth=None):
    """Configurations reachable from an initial one within ``depth`` global phases."""
    alg, phi = instance.algorithm, instance.spec.global_predicate
    seen = set(AbstractConfig.initials(n))
    frontier = sorted(seen)
    steps = 0
    while frontier and (depth is None or steps < depth):
        following = set()
        for cfg in frontier:
            following |= phase_successors(alg, cfg, phi) - seen
        seen |= following
        frontier = sorted(following)
        steps += 1
    return seen


def check_agreement(instance, n, depth=None):
    """A shortest execution under the global predicate in which two processes
    decide differently, or None."""
    alg, phi = instance.algorithm, instance.spec.global_predicate
    parents = {}
    queue = deque()
    for cfg in AbstractConfig.initials(n):
        parents[cfg] = None
        queue.append((cfg, 0))
    while queue:
        cfg, distance = queue.popleft()
        if cfg.has_disagreement:
            states, labels = _path(parents, cfg)
            logger.debug("agreement violation for %s at n=%d after %d states"
                % (instance.name, n, len(parents)))
            return Witness(AGREEMENT, n, states, labels)
        if depth is not None and distance >= depth:
            continue
        for succ in sorted(phase_successors(alg, cfg, phi)):
            if succ not in parents:
                parents[succ] = (cfg, 'global')
                queue.append((succ, distance + 1))
    logger.debug("no agreement violation for %s at n=%d (%d states)" % (instance.name, n, len(parents)))
    return None


def check_termination(instance, n, depth=None):
    """A lasso: an execution that passes the sporadic predicates in order and
    then loops under the global predicate while some process is undecided.

    Configurations first reached after ``depth`` phases are not expanded.
    """
    alg, spec = instance.algorithm, instance.spec
    k = spec.k
    global_phi = spec.global_predicate
    parents = {}
    order = []
    loops = {}
    queue = deque()
    for cfg in AbstractConfig.initials(n):
        parents[cfg] = None
        queue.append((cfg, 0))

    def visit(node, succ, label, distance):
        if succ not in parents:
            parents[succ] = (node, label)
            queue.append((succ, distance + 1))

    while queue:
        node, distance = queue.popleft()
        order.append(node)
        if depth is not None and distance >= depth:
            continue
        succs = sorted(phase_successors(alg, node, global_phi))
        for succ in succs:
            visit(node, succ, 'global', distance)
        if node.sporadic_index < k:
            j = node.sporadic_index + 1
            label = 'phi^%d' % j
            for succ in sorted(phase_successors(alg, node, predicate_for(spec, label))):
                visit(node, succ.with_index(j), label, distance)
        elif not node.fully_decided:
            loops[node] = succs

    alive = set(loops)
    changed = True
    while changed:
        changed = False
        for node in list(alive):
            if not any(succ in alive for succ in loops[node]):
                alive.discard(node)
                changed = True
    logger.debug("termination search for %s at n=%d: %d states, %d on undecided cycles"
        % (instance.name, n, len(order), len(alive)))
    if not alive:
        return None

    start = next(node for node in order if node in alive)
    walk = [start]
    position = {start: 0}
    while True:
        succ = min(s for s in loops[walk[-1]] if s in alive)
        walk.append(succ)
        if succ in position:
            break
        position[succ] = len(walk) - 1
    states, labels = _path(parents, start)
    loop_start = len(states) - 1 + position[walk[-1]]
    states.extend(walk[1:])
    labels.extend(['global'] * (len(walk) - 1))
    return Witness(TERMINATION, n, states, labels, loop_start)
