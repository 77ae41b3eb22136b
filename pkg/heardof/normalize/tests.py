from fractions import Fraction
import glob
import itertools
import os
from unittest import mock

from django.conf import settings
from django.test import SimpleTestCase

from heardof.core.errors import ClassifierError
from heardof.core.types import (Algorithm, CommSpec, Fragment, Guard, Instance, Instruction,
    Operation, PhasePredicate, PredicateEntry, Round, Threshold, TRUE)
from heardof.dsl.parser import parse_file
from heardof.normalize.canonical import (canonicalize_round, canonicalize_rounds, is_canonical,
    same_updates)
from heardof.normalize.normalizer import normalize
from heardof.normalize.provisos import mixed_reachable, start_pools, validate_provisos
from heardof.normalize.rewrite import (assumption_holds, guarded_rounds, prune_dead_mults,
    strengthen_sporadics)
from heardof.sim.profiles import A, B
from heardof.sim.semantics import fire_set

T = Threshold.present
THIRD, HALF, TWO_THIRDS = T(Fraction(1, 3)), T(Fraction(1, 2)), T(Fraction(2, 3))


def ins(guard, thr, op=Operation.SMOR):
    return Instruction(guard, thr, op)


def uni(thr, op=Operation.SMOR):
    return ins(Guard.UNI, thr, op)


def mult(thr, op=Operation.SMOR):
    return ins(Guard.MULT, thr, op)


def thr_entries(*thresholds):
    return PhasePredicate(PredicateEntry(thr=t) for t in thresholds)


def corpus(name):
    return parse_file(os.path.join(settings.HOC_CORPUS_DIR, name + '.ho'))


def two_rounds(first, second, timestamps=False):
    return Algorithm('alg', (Round(1, instructions=first, sets_inp=True),
        Round(2, instructions=second, sets_dec=True)), timestamps)


class CanonicalTests(SimpleTestCase):

    def test_uni_moves_first(self):
        rnd = canonicalize_round(Round(1, instructions=(mult(HALF), uni(TWO_THIRDS))))
        self.assertEqual(rnd.instructions, (uni(TWO_THIRDS), mult(HALF)))

    def test_already_canonical(self):
        rnd = Round(1, instructions=(uni(TWO_THIRDS, Operation.MIN),))
        assert is_canonical(rnd)
        assert canonicalize_round(rnd) is rnd

    def test_same_operation_mults_sorted(self):
        rnd = canonicalize_round(Round(1, instructions=(mult(THIRD), mult(TWO_THIRDS))))
        self.assertEqual(rnd.instructions, (mult(TWO_THIRDS), mult(THIRD)))

    def test_uni_duplicates_collapse_to_smallest(self):
        rnd = canonicalize_round(Round(1, instructions=(uni(TWO_THIRDS), uni(HALF, Operation.MIN))))
        self.assertEqual(rnd.instructions, (uni(HALF, Operation.MIN),))

    def test_dominated_mult_dropped(self):
        rnd = canonicalize_round(Round(1, instructions=(mult(THIRD, Operation.MIN),
            mult(TWO_THIRDS))))
        self.assertEqual(rnd.instructions, (mult(THIRD, Operation.MIN),))
        rnd = Round(1, instructions=(mult(TWO_THIRDS), mult(THIRD, Operation.MIN)))
        assert canonicalize_round(rnd) is rnd

    def test_equivalence_by_enumeration(self):
        pool = (uni(THIRD), uni(TWO_THIRDS, Operation.MIN), mult(HALF), mult(TWO_THIRDS, Operation.MIN),
            mult(THIRD))
        for size in (1, 2, 3):
            for instructions in itertools.permutations(pool, size):
                rnd = canonicalize_round(Round(1, instructions=instructions))
                assert rnd is not None, instructions
                assert is_canonical(rnd)
                assert same_updates(instructions, rnd.instructions), instructions

    def test_different_updates_detected(self):
        assert not same_updates((mult(HALF),), (mult(HALF, Operation.MIN),))

    def test_rewrites_recorded(self):
        alg = two_rounds((mult(HALF), uni(TWO_THIRDS)), (uni(TWO_THIRDS),))
        rewrites = []
        result = canonicalize_rounds(alg, rewrites)
        self.assertEqual(result.round(1).instructions, (uni(TWO_THIRDS), mult(HALF)))
        self.assertEqual(rewrites, ['round 1: instructions reordered to [uni 2/3 smor, mult 1/2 smor]'])


class StrengthenTests(SimpleTestCase):

    def test_conjunction(self):
        spec = CommSpec(thr_entries(THIRD, Threshold()),
            (PhasePredicate((PredicateEntry(has_eq=True), TRUE)),))
        self.assertEqual(str(strengthen_sporadics(spec).sporadics[0]), '(eq && thr 1/3, true)')

    def test_true_global_changes_nothing(self):
        spec = CommSpec(PhasePredicate.true(2), (thr_entries(TWO_THIRDS, TWO_THIRDS),))
        self.assertEqual(strengthen_sporadics(spec), spec)

    def test_max(self):
        spec = CommSpec(thr_entries(HALF, HALF), (thr_entries(THIRD, TWO_THIRDS),))
        self.assertEqual(strengthen_sporadics(spec).sporadics[0], thr_entries(HALF, TWO_THIRDS))

    def test_implies_global_on_corpus(self):
        for path in glob.glob(os.path.join(settings.HOC_CORPUS_DIR, '*.ho')):
            spec = strengthen_sporadics(parse_file(path).spec)
            for phi in spec.sporadics:
                assert phi.implies(spec.global_predicate), path


class PruneTests(SimpleTestCase):

    def test_mults_below_global_threshold(self):
        alg = two_rounds((uni(TWO_THIRDS), mult(TWO_THIRDS), mult(THIRD)), (uni(TWO_THIRDS),))
        glob = thr_entries(HALF, Threshold())
        rewrites = []
        pruned = prune_dead_mults(alg, glob, rewrites)
        self.assertEqual(pruned.round(1).instructions,
            (uni(TWO_THIRDS), mult(TWO_THIRDS), mult(HALF)))
        self.assertEqual(len(rewrites), 1)
        assert assumption_holds(pruned, glob)
        assert not assumption_holds(alg, glob)

    def test_fire_sets_unchanged(self):
        before = (uni(THIRD), mult(TWO_THIRDS), mult(THIRD), mult(Threshold.present(0)))
        alg = two_rounds(before, (uni(TWO_THIRDS),))
        glob = thr_entries(HALF, Threshold())
        after = prune_dead_mults(alg, glob).round(1).instructions
        self.assertEqual(after, (uni(HALF), mult(TWO_THIRDS), mult(HALF)))
        for n in range(2, 7):
            for n_b in range(n + 1):
                pool = tuple(((v, 0), c) for v, c in ((A, n - n_b), (B, n_b)) if c)
                self.assertEqual(fire_set(before, pool, HALF, n), fire_set(after, pool, HALF, n))

    def test_true_global_prunes_nothing(self):
        alg = corpus('onethird-2-3').algorithm
        glob = PhasePredicate.true(2)
        assert prune_dead_mults(alg, glob) is alg
        assert assumption_holds(alg, glob)

    def test_guarded_rounds_stop_at_preserving_round(self):
        alg = corpus('weak-unifier').algorithm
        glob = PhasePredicate.true(4)
        rounds = guarded_rounds(alg, glob)
        self.assertEqual(rounds[0], 1)
        assert rounds == list(range(1, len(rounds) + 1))


class ProvisoTests(SimpleTestCase):

    def test_onethird_has_no_violations(self):
        instance = corpus('onethird-2-3')
        _, report = validate_provisos(instance.algorithm, instance.spec)
        self.assertEqual(report.violations, [])
        self.assertEqual(report.fragment, Fragment.CORE)

    def test_global_equalizer(self):
        instance = corpus('onethird-global-eq')
        _, report = validate_provisos(instance.algorithm, instance.spec)
        self.assertEqual(report.codes, ['GlobalEqualizer'])

    def test_reachable_mult_after_inp_round(self):
        instance = corpus('onethird-mult-round2')
        alg, report = validate_provisos(instance.algorithm, instance.spec)
        self.assertEqual(report.codes, ['MultAfterInpRound(2)'])
        assert alg.round(2).has_mult

    def test_unreachable_mult_after_inp_round_removed(self):
        alg = two_rounds((uni(HALF),), (uni(TWO_THIRDS), mult(TWO_THIRDS)))
        assert not mixed_reachable(alg, PhasePredicate.true(2), 1)
        fixed, report = validate_provisos(alg, CommSpec(PhasePredicate.true(2)))
        self.assertEqual(report.violations, [])
        self.assertEqual(fixed.round(2).instructions, (uni(TWO_THIRDS),))
        self.assertEqual(len(report.rewrites), 1)

    def _ts(self, first, inp_round):
        return Algorithm('ts', (Round(1, instructions=first),
            Round(2, instructions=inp_round, sets_inp=True),
            Round(3, instructions=(uni(HALF),), sets_dec=True)), timestamps=True)

    def test_ts_inp_round_violation(self):
        alg = self._ts((uni(HALF, Operation.MAXTS), mult(HALF, Operation.MAXTS)), (uni(THIRD),))
        _, report = validate_provisos(alg, CommSpec(PhasePredicate.true(3)))
        self.assertEqual(report.codes, ['TsInpRoundViolation(2)'])

    def test_ts_inp_round_repaired(self):
        alg = self._ts((uni(HALF, Operation.MAXTS),), (uni(THIRD), mult(THIRD)))
        fixed, report = validate_provisos(alg, CommSpec(PhasePredicate.true(3)))
        self.assertEqual(report.violations, [])
        self.assertEqual(fixed.round(2).instructions, (uni(HALF),))

    def test_start_pools(self):
        self.assertEqual(len(list(start_pools(3, False))), 4)
        for pool in start_pools(3, True):
            self.assertEqual(sum(c for _, c in pool), 3)
            self.assertEqual(min(rank for (_, rank), _ in pool), 0)


class NormalizeTests(SimpleTestCase):

    def test_fragment_mismatch(self):
        instance = corpus('onethird-2-3')
        result, report = normalize(instance, Fragment.TS)
        self.assertEqual(report.codes, ['FragmentMismatch'])
        assert result is instance

    def test_matching_fragment_override(self):
        _, report = normalize(corpus('onethird-2-3'), Fragment.CORE)
        self.assertEqual(report.violations, [])

    def test_abstention(self):
        instance = Instance(two_rounds((mult(HALF), uni(TWO_THIRDS)), (uni(TWO_THIRDS),)),
            CommSpec(PhasePredicate.true(2)))
        with mock.patch('heardof.normalize.canonical.same_updates', return_value=False):
            _, report = normalize(instance)
        self.assertEqual(report.codes, ['NonCanonicalRound(1)'])

    def test_idempotent_on_corpus(self):
        for path in sorted(glob.glob(os.path.join(settings.HOC_CORPUS_DIR, '*.ho'))):
            once, _ = normalize(parse_file(path))
            twice, report = normalize(once)
            self.assertEqual(twice, once, path)

    def test_pruned_thresholds_reach_global_on_corpus(self):
        for path in sorted(glob.glob(os.path.join(settings.HOC_CORPUS_DIR, '*.ho'))):
            result, report = normalize(parse_file(path))
            if report.codes:
                continue
            assert assumption_holds(result.algorithm, result.spec.global_predicate), path

    def test_unpruned_low_threshold_is_an_error(self):
        alg = corpus('onethird-2-3').algorithm
        instance = Instance(alg, CommSpec(thr_entries(T(Fraction(3, 4)), Threshold())))
        result, _ = normalize(instance)
        self.assertEqual({ins.threshold for ins in result.algorithm.round(1).instructions},
            {T(Fraction(3, 4))})
        with mock.patch('heardof.normalize.normalizer.prune_dead_mults',
                side_effect=lambda alg, predicate, rewrites: alg):
            with self.assertRaises(ClassifierError):
                normalize(instance)

    def test_canonical_rounds_preserve_updates_on_corpus(self):
        for path in sorted(glob.glob(os.path.join(settings.HOC_CORPUS_DIR, '*.ho'))):
            alg = parse_file(path).algorithm
            canonical = canonicalize_rounds(alg)
            for before, after in zip(alg.rounds, canonical.rounds):
                assert same_updates(before.instructions, after.instructions), path
