"""Phase transitions of the counting abstraction.

Within a phase only two rounds touch process state: round ir (inp and its
timestamp) and the last round (dec). Every round in between only matters
through the count vector it produces, so a phase is computed as

  1. the exact set of count vectors reachable at round ir,
  2. for each of them, the sets of values the last round may hand out,
  3. every way of assigning (round-ir value, last-round value) pairs to the
     processes of each profile class consistently with 1. and 2.

Processes pick their heard-of multisets independently and identities never
matter, so any assignment with the right margins is realizable.
"""
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
import itertools
from typing import NamedTuple, Optional

from heardof.core.types import RoundType
from heardof.sim.profiles import (UNDEF, Value, Profile, AbstractConfig, RoundCounts,
    compositions)
from heardof.sim.semantics import (round_successors, last_round_choices, fire_choices,
    senders, delivered)

import logging
logger = logging.getLogger(__name__)

__all__ = ['Flow', 'Choice', 'RoundStep', 'PhaseStep', 'after_lr', 'predicate_for',
    'phase_successors', 'phase_step', 'apply_flows', 'new_rank']


class Flow(NamedTuple):
    """``count`` processes of profile ``source`` got ``v_ir`` at round ir and
    ``v_r`` at the last round."""
    source: Profile
    v_ir: Value
    v_r: Value
    count: int


class Choice(NamedTuple):
    value: Value
    h: tuple
    processes: int


@dataclass(frozen=True)
class RoundStep:
    round: int
    counts: RoundCounts
    choices: tuple
    sender: Optional[Value] = None


@dataclass(frozen=True)
class PhaseStep:
    label: str
    source: AbstractConfig
    rounds: tuple
    flows: tuple
    target: AbstractConfig


def after_lr(alg, i):
    return i > 1 and alg.round(i - 1).rtype is RoundType.LR


def predicate_for(spec, label):
    """'global' or 'phi^j'. A sporadic phase is also a global one."""
    if label == 'global':
        return spec.global_predicate
    j = int(label.partition('^')[2])
    return spec.sporadics[j - 1].conjoin(spec.global_predicate)


def new_rank(alg, cfg):
    return cfg.max_rank + 1 if alg.timestamps else 0


def apply_flows(n, flows, rank, sporadic_index=0):
    counter = Counter()
    for flow in flows:
        source = flow.source
        if flow.v_ir is UNDEF:
            inp, r = source.inp, source.rank
        else:
            inp, r = flow.v_ir, rank
        dec = source.dec if source.dec is not UNDEF else flow.v_r
        counter[Profile(inp, r, dec)] += flow.count
    return AbstractConfig.build(n, counter, sporadic_index)


def _advance(alg, phi, n, pools, i):
    rnd = alg.round(i)
    vectors = set()
    for pool in pools:
        vectors |= round_successors(rnd, pool, phi.entry(i), n, after_lr(alg, i))
    return vectors


def _ir_vectors(alg, phi, n, inp_pool):
    pools = {inp_pool}
    vectors = set()
    for i in range(1, alg.ir + 1):
        vectors = _advance(alg, phi, n, pools, i)
        pools = {v.pool() for v in vectors}
    return vectors


@lru_cache(maxsize=None)
def _choice_sets(alg, phi, n, r_ir):
    pools = {r_ir.pool()}
    for i in range(alg.ir + 1, alg.r):
        pools = {v.pool() for v in _advance(alg, phi, n, pools, i)}
    result = set()
    for pool in pools:
        result |= last_round_choices(alg.round(alg.r), pool, phi.entry(alg.r), n,
            after_lr(alg, alg.r))
    return frozenset(result)


def _splits(classes, margins):
    """Splits every class over (a, b, ?) so the columns sum to ``margins``."""
    if not classes:
        if not any(margins):
            yield ()
        return
    (profile, c), rest = classes[0], classes[1:]
    for split in compositions(c, 3):
        if all(s <= m for s, m in zip(split, margins)):
            remaining = tuple(m - s for s, m in zip(split, margins))
            for tail in _splits(rest, remaining):
                yield ((profile, split),) + tail


def _flow_options(classes, r_ir, choices):
    choices = sorted(choices)
    for split in _splits(classes, tuple(r_ir)):
        cells = []
        for profile, parts in split:
            for v_ir, m in zip(Value, parts):
                if not m:
                    continue
                if profile.dec is not UNDEF:
                    cells.append([(Flow(profile, v_ir, choices[0], m),)])
                    continue
                cells.append([
                    tuple(Flow(profile, v_ir, w, c) for w, c in zip(choices, combo) if c)
                    for combo in compositions(m, len(choices))])
        for picked in itertools.product(*cells):
            yield tuple(itertools.chain.from_iterable(picked))


@lru_cache(maxsize=None)
def _successors(alg, phi, n, counts):
    cfg = AbstractConfig(n, counts)
    rank = new_rank(alg, cfg)
    result = set()
    for r_ir in _ir_vectors(alg, phi, n, cfg.inp_pool()):
        for choices in _choice_sets(alg, phi, n, r_ir):
            for flows in _flow_options(counts, r_ir, choices):
                result.add(apply_flows(n, flows, rank).counts)
    return frozenset(result)


def phase_successors(alg, cfg, phi):
    """Every configuration one phase under ``phi`` can lead to from ``cfg``.

    Successors keep ``cfg``'s sporadic index.
    """
    return frozenset(AbstractConfig(cfg.n, counts, cfg.sporadic_index)
        for counts in _successors(alg, phi, cfg.n, cfg.counts))


def _paths(alg, phi, n, pool, first, last):
    if first > last:
        yield ()
        return
    rnd = alg.round(first)
    for v in sorted(round_successors(rnd, pool, phi.entry(first), n, after_lr(alg, first))):
        for rest in _paths(alg, phi, n, v.pool(), first + 1, last):
            yield (v,) + rest


def _round_step(alg, phi, n, i, pool, counts):
    rnd = alg.round(i)
    entry = phi.entry(i)
    if rnd.rtype is RoundType.LS:
        for d in senders(pool, after_lr(alg, i)):
            value = delivered(rnd, d)
            if not set(counts.values()) <= {value, UNDEF}:
                continue
            if entry.has_ls and counts != RoundCounts.uniform(value, n):
                continue
            h = (((d, 0), 1),) if value is not UNDEF else ()
            choices = tuple(Choice(v, h if v is value else (), counts[v]) for v in counts.values())
            return RoundStep(i, counts, choices, sender=d)
        raise AssertionError("no sender explains %s in round %d" % (counts, i))
    fire = fire_choices(rnd.instructions, pool, entry.thr, n)
    if rnd.rtype is RoundType.LR:
        leader = [v for v in counts.values() if v is not UNDEF]
        d = leader[0] if leader else UNDEF
        choices = (Choice(d, fire[d], 1), Choice(UNDEF, (), n - 1))
        return RoundStep(i, counts, choices, sender=d)
    return RoundStep(i, counts, tuple(Choice(v, fire[v], counts[v]) for v in counts.values()))


def _last_counts(flows):
    tally = [0, 0, 0]
    for flow in flows:
        tally[flow.v_r] += flow.count
    return RoundCounts(*tally)


def phase_step(alg, cfg, phi, target, label='global'):
    """Reconstructs one way ``cfg`` reaches ``target`` in a phase under ``phi``.

    Used to spell out witnesses; the search itself only keeps configurations.
    """
    n = cfg.n
    rank = new_rank(alg, cfg)
    goal = target.counts
    inp_pool = cfg.inp_pool()
    for head in _paths(alg, phi, n, inp_pool, 1, alg.ir):
        r_ir = head[-1]
        for middle in _paths(alg, phi, n, r_ir.pool(), alg.ir + 1, alg.r - 1):
            vectors = head + middle
            pool = vectors[-1].pool()
            for choices in sorted(last_round_choices(alg.round(alg.r), pool, phi.entry(alg.r), n,
                    after_lr(alg, alg.r)), key=sorted):
                for flows in _flow_options(cfg.counts, r_ir, choices):
                    if apply_flows(n, flows, rank).counts != goal:
                        continue
                    vectors = vectors + (_last_counts(flows),)
                    pools = (inp_pool,) + tuple(v.pool() for v in vectors[:-1])
                    rounds = tuple(_round_step(alg, phi, n, i, pools[i - 1], vectors[i - 1])
                        for i in range(1, alg.r + 1))
                    return PhaseStep(label, cfg, rounds, flows, target)
    raise ValueError("%s is not a successor of %s" % (target, cfg))
