"""The parametrized two-round OneThird family over a threshold grid.

Round 1 has uni thr_u1 and mult thr_m, round 2 decides with uni thr_u2.
The first sporadic phase is (eq && thr max(thr_u1, thr_m), true), or the
same without eq, and the second (thr thr_u1, thr thr_u2). With eq the
family is correct exactly when thr_m/2 >= 1 - thr_u2 and
thr_u1 >= 1 - thr_u2; without eq nothing unifies.

The predicate grid keeps the correct algorithms of the family and varies
the unifier threshold p on its own. It unifies when p >= thr_m and either
p >= thr_u1 or p reaches the border max(1 - thr_u1, 1 - thr_m/2).
"""
from fractions import Fraction
import itertools
import json
import os

from heardof.core.parsetools import rat_slug
from heardof.core.types import (Algorithm, CommSpec, Fragment, Guard, Instruction, Operation,
    Outcome, PhasePredicate, PredicateEntry, Round, Threshold, TRUE)
from heardof.corpus.entries import MANIFEST, CorpusEntry
from heardof.dsl.pretty import pretty

import logging
logger = logging.getLogger(__name__)

__all__ = ['GRID', 'SMALL_GRID', 'grid_instance', 'grid_family', 'expected_outcome',
    'stamp_grid', 'predicate_grid_family', 'expected_predicate_outcome',
    'stamp_predicate_grid']

GRID = tuple(Fraction(*p) for p in ((1, 3), (1, 2), (3, 5), (2, 3), (3, 4), (4, 5)))
SMALL_GRID = (Fraction(1, 4), Fraction(1, 3), Fraction(1, 2))


def grid_instance(thr_u1, thr_m, thr_u2, with_eq=True, name=None, thr_p=None):
    u1, m, u2 = (Threshold.present(t) for t in (thr_u1, thr_m, thr_u2))
    first = Round(1, instructions=(
        Instruction(Guard.UNI, u1, Operation.SMOR),
        Instruction(Guard.MULT, m, Operation.SMOR)), sets_inp=True)
    second = Round(2, instructions=(Instruction(Guard.UNI, u2, Operation.SMOR),), sets_dec=True)
    name = name or 'OneThird(u=%s,m=%s,%s)%s' % (thr_u1, thr_m, thr_u2, '' if with_eq else ' no eq')
    alg = Algorithm(name, (first, second))
    p = max(u1, m) if thr_p is None else Threshold.present(thr_p)
    unifier = PhasePredicate((PredicateEntry(has_eq=with_eq, thr=p), TRUE))
    decider = PhasePredicate((PredicateEntry(thr=u1), PredicateEntry(thr=u2)))
    return alg, CommSpec(PhasePredicate.true(2), (unifier, decider))


def expected_outcome(thr_u1, thr_m, thr_u2, with_eq=True):
    if not with_eq:
        return Outcome.REJECT
    safe = Fraction(thr_m) / 2 >= 1 - Fraction(thr_u2) and Fraction(thr_u1) >= 1 - Fraction(thr_u2)
    return Outcome.ACCEPT if safe else Outcome.REJECT


def expected_predicate_outcome(thr_u1, thr_m, thr_u2, thr_p, with_eq=True):
    if expected_outcome(thr_u1, thr_m, thr_u2, with_eq) is Outcome.REJECT:
        return Outcome.REJECT
    u1, m, p = Fraction(thr_u1), Fraction(thr_m), Fraction(thr_p)
    border = max(1 - u1, 1 - m / 2)
    if p >= m and (p >= u1 or p >= border):
        return Outcome.ACCEPT
    return Outcome.REJECT


def grid_id(thr_u1, thr_m, thr_u2, with_eq=True):
    return 'onethird-grid-u%s-m%s-d%s%s' % (rat_slug(thr_u1), rat_slug(thr_m), rat_slug(thr_u2),
        '' if with_eq else '-noeq')


def predicate_grid_id(thr_u1, thr_m, thr_u2, thr_p, with_eq=True):
    return 'onethird-pgrid-u%s-m%s-d%s-p%s%s' % (rat_slug(thr_u1), rat_slug(thr_m),
        rat_slug(thr_u2), rat_slug(thr_p), '' if with_eq else '-noeq')


def grid_family(values=GRID, with_eq=(True, False)):
    """Yields (id, algorithm, spec, expected outcome) over ``values`` cubed."""
    for eq in with_eq:
        for u1, m, u2 in itertools.product(values, repeat=3):
            alg, spec = grid_instance(u1, m, u2, eq)
            yield grid_id(u1, m, u2, eq), alg, spec, expected_outcome(u1, m, u2, eq)


def predicate_grid_family(values=GRID, with_eq=(True, False)):
    """Like grid_family, over the correct algorithms crossed with a unifier threshold."""
    correct = [t for t in itertools.product(values, repeat=3)
        if expected_outcome(*t) is Outcome.ACCEPT]
    for eq in with_eq:
        for (u1, m, u2), p in itertools.product(correct, values):
            alg, spec = grid_instance(u1, m, u2, eq, thr_p=p)
            yield (predicate_grid_id(u1, m, u2, p, eq), alg, spec,
                expected_predicate_outcome(u1, m, u2, p, eq))


def stamp_family(directory, family, origin):
    """Writes ``family`` as .ho files with a manifest; returns the entries."""
    os.makedirs(directory, exist_ok=True)
    entries = []
    for entry_id, alg, spec, outcome in family:
        path = os.path.join(directory, entry_id + '.ho')
        with open(path, 'w', encoding='utf-8') as f:
            f.write(pretty(alg, spec))
        entries.append(CorpusEntry(entry_id, path, Fragment.CORE, outcome, origin=origin))
    with open(os.path.join(directory, MANIFEST), 'w', encoding='utf-8') as f:
        json.dump({'schema': 1, 'entries': [e.to_json() for e in entries]}, f, indent=2,
            sort_keys=True)
        f.write('\n')
    logger.info("stamped %d grid instances into %s" % (len(entries), directory))
    return entries


def stamp_grid(directory, values=GRID, with_eq=(True, False)):
    return stamp_family(directory, grid_family(values, with_eq), 'OneThird threshold grid')


def stamp_predicate_grid(directory, values=GRID, with_eq=(True, False)):
    return stamp_family(directory, predicate_grid_family(values, with_eq),
        'OneThird predicate grid')
