"""Provisos on the global predicate and on the rounds around ir.

A mult instruction right after the inp round (or, with timestamps, in the
inp round itself) either never fires, in which case it is removed, or it
breaks consensus. Which case applies is decided by bounded reachability:
can a global phase hand both a and b to the round in question?
"""
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from django.conf import settings

from heardof.core import reasons
from heardof.core.reasons import make_reason
from heardof.core.types import Instruction, RoundType, Threshold
from heardof.sim.phases import after_lr
from heardof.sim.profiles import A, B, compositions
from heardof.sim.semantics import round_successors

import logging
logger = logging.getLogger(__name__)

__all__ = ['NormReport', 'validate_provisos', 'global_equalizer', 'start_pools',
    'mixed_reachable']

HALF = Threshold.present(Fraction(1, 2))


@dataclass
class NormReport:
    fragment: object
    rewrites: list = field(default_factory=list)
    violations: list = field(default_factory=list)

    @property
    def codes(self):
        return [str(reason) for reason in self.violations]

    def to_json(self):
        return {
            'fragment': self.fragment.value,
            'rewrites': list(self.rewrites),
            'violations': self.codes,
        }


def global_equalizer(spec, coordinators):
    glob = spec.global_predicate
    return glob.has_c_equalizer if coordinators else glob.has_equalizer


def start_pools(n, timestamps):
    """Every ?-free round-one pool of ``n`` processes.

    With timestamps the ranks are arbitrary but contiguous from 0.
    """
    if not timestamps:
        for n_b in range(n + 1):
            yield tuple(((v, 0), c) for v, c in ((A, n - n_b), (B, n_b)) if c)
        return
    for levels in range(1, n + 1):
        keys = [(v, rank) for rank in range(levels) for v in (A, B)]
        for combo in compositions(n, len(keys)):
            pool = Counter({key: c for key, c in zip(keys, combo) if c})
            if {rank for _, rank in pool} == set(range(levels)):
                yield tuple(sorted(pool.items()))


def _vectors_at(alg, glob, n, pool, last):
    pools = {pool}
    vectors = set()
    for i in range(1, last + 1):
        vectors = set()
        for p in pools:
            vectors |= round_successors(alg.round(i), p, glob.entry(i), n, after_lr(alg, i))
        pools = {v.pool() for v in vectors}
    return vectors


def mixed_reachable(alg, glob, last, bound=None):
    """True if a global phase can give some processes a and others b at round ``last``.

    ``last`` = 0 asks about the inp values themselves. Checked for
    n = 2..``bound``.
    """
    if bound is None:
        bound = settings.HOC_PROVISO_BOUND
    if last == 0:
        return True
    for n in range(2, bound + 1):
        for pool in start_pools(n, alg.timestamps):
            if any(v.a and v.b for v in _vectors_at(alg, glob, n, pool, last)):
                logger.debug("%s: round %d mixes a and b at n=%d" % (alg.name, last, n))
                return True
    return False


def _without_mults(rnd):
    return rnd.replace(instructions=tuple(rnd.unis))


def _mult_after_inp_round(alg, glob, report, bound):
    i = alg.ir + 1
    rnd = alg.round(i)
    if not rnd.has_mult:
        return alg
    if mixed_reachable(alg, glob, alg.ir, bound):
        report.violations.append(make_reason(reasons.MULT_AFTER_INP_ROUND, i,
            "round %d has a mult instruction and a global phase can reach it with "
            "both values (checked up to n=%d)" % (i, bound)))
        return alg
    report.rewrites.append("round %d: mult instructions removed, no global phase reaches "
        "them with both values (checked up to n=%d)" % (i, bound))
    return alg.replace_round(_without_mults(rnd))


def _ts_inp_round(alg, glob, report, bound):
    i = alg.ir
    rnd = alg.round(i)
    if rnd.rtype is RoundType.LS:
        return alg
    weak_uni = [ins for ins in rnd.unis if ins.threshold < HALF]
    if not rnd.has_mult and not weak_uni:
        return alg
    if mixed_reachable(alg, glob, i - 1, bound):
        report.violations.append(make_reason(reasons.TS_INP_ROUND_VIOLATION, i,
            "round %d needs no mult instruction and a uni threshold of at least 1/2, "
            "and a global phase can reach it with both values (checked up to n=%d)"
            % (i, bound)))
        return alg
    unis = tuple(Instruction(ins.guard, max(ins.threshold, HALF), ins.operation)
        for ins in rnd.unis)
    report.rewrites.append("round %d: mult instructions removed and uni threshold raised "
        "to at least 1/2, no global phase reaches it with both values (checked up to n=%d)"
        % (i, bound))
    return alg.replace_round(rnd.replace(instructions=unis))


def validate_provisos(alg, spec, fragment=None, report=None, bound=None):
    """Checks the provisos of ``fragment`` and applies the rewrites they allow.

    Returns the possibly rewritten algorithm and the report.
    """
    fragment = fragment or alg.fragment
    report = report or NormReport(fragment)
    if bound is None:
        bound = settings.HOC_PROVISO_BOUND
    glob = spec.global_predicate
    if global_equalizer(spec, fragment.coordinators):
        kind = 'c-equalizer' if fragment.coordinators else 'equalizer'
        report.violations.append(make_reason(reasons.GLOBAL_EQUALIZER, None,
            "the global predicate %s has an %s" % (glob, kind)))
        return alg, report
    if fragment.timestamps:
        alg = _ts_inp_round(alg, glob, report, bound)
    else:
        alg = _mult_after_inp_round(alg, glob, report, bound)
    return alg, report
