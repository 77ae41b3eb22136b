"""Checker against simulator, instance by instance.

An Accept must come with no simulator witness at any tested n; a Reject
should be witnessed by one of the simulations its reasons ask for. Only the
first is a hard failure: a missing witness may just need a larger n.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import django

from heardof.core.errors import BoundTooLarge, HocError
from heardof.core.reasons import witness_kinds
from heardof.core.types import Outcome
from heardof.dsl.parser import parse_file
from heardof.sim.search import check_agreement, check_termination, guard_bound
from heardof.verdict.engine import check_instance

import logging
logger = logging.getLogger(__name__)

__all__ = ['CrossvalRow', 'crossval', 'crossval_entry', 'simulate', 'CONSISTENT',
    'failing_rows', 'INCONSISTENT', 'UNWITNESSED', 'SKIPPED', 'ERROR']

CONSISTENT = 'consistent'
INCONSISTENT = 'inconsistent'
UNWITNESSED = 'unwitnessed'
SKIPPED = 'skipped'
ERROR = 'error'

SEARCHES = {
    'agreement': check_agreement,
    'termination': check_termination,
}


@dataclass(frozen=True)
class CrossvalRow:
    id: str
    verdict: str
    expected: Optional[str]
    status: str
    simulation: str = ''
    reasons: tuple = ()

    @property
    def failed(self):
        return self.status in (INCONSISTENT, ERROR)

    @property
    def matches_manifest(self):
        return self.expected is None or self.expected == self.verdict

    def to_json(self):
        return {
            'id': self.id,
            'verdict': self.verdict,
            'expected': self.expected,
            'status': self.status,
            'simulation': self.simulation,
            'reasons': list(self.reasons),
        }


def simulate(instance, kinds, max_n, depth):
    """The first witness of one of ``kinds`` for n = 2..max_n, with its n, or None."""
    for n in range(2, max_n + 1):
        try:
            guard_bound(instance, n)
        except BoundTooLarge:
            logger.debug("%s: stopping at n=%d, bound too large" % (instance.name, n))
            return None
        for kind in kinds:
            witness = SEARCHES[kind](instance, n, depth)
            if witness is not None:
                return witness
    return None


def crossval_entry(entry, max_n, depth, checker=check_instance):
    expected = entry.verdict.value if entry.verdict else None
    try:
        instance = parse_file(entry.path)
        verdict, _ = checker(instance)
    except HocError as e:
        logger.exception("crossval failure on %s: %r" % (entry.id, e))
        return CrossvalRow(entry.id, ERROR, expected, ERROR, str(e))
    outcome, codes = verdict.outcome, tuple(verdict.codes)
    if outcome is Outcome.OUT_OF_FRAGMENT:
        return CrossvalRow(entry.id, outcome.value, expected, SKIPPED, reasons=codes)

    n = max(max_n, entry.witness_n or 0)
    if outcome is Outcome.ACCEPT:
        witness = simulate(instance, ('agreement', 'termination'), n, depth)
        if witness is not None:
            return CrossvalRow(entry.id, outcome.value, expected, INCONSISTENT, witness.summary())
        return CrossvalRow(entry.id, outcome.value, expected, CONSISTENT,
            'no violation up to n=%d' % n)
    witness = simulate(instance, witness_kinds(verdict.reasons), n, depth)
    if witness is None:
        return CrossvalRow(entry.id, outcome.value, expected, UNWITNESSED,
            'no witness up to n=%d' % n, codes)
    return CrossvalRow(entry.id, outcome.value, expected, CONSISTENT, witness.summary(), codes)


def _worker_setup():
    django.setup()


def _run(args):
    return crossval_entry(*args)


def crossval(entries, max_n, depth, workers=1, checker=check_instance):
    """Rows in the order of ``entries``, whatever the number of workers."""
    jobs = [(entry, max_n, depth, checker) for entry in entries]
    if workers <= 1 or len(jobs) <= 1:
        return [_run(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers, initializer=_worker_setup) as pool:
        return list(pool.map(_run, jobs))


def failing_rows(rows, strict=False):
    """Rows that make a crossval run fail: inconsistencies, errors, verdicts that
    differ from the manifest, and with ``strict`` also unwitnessed rejects."""
    return [row for row in rows
        if row.failed or not row.matches_manifest or (strict and row.status == UNWITNESSED)]
