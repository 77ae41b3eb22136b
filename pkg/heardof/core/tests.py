from fractions import Fraction

from django.test import SimpleTestCase

from heardof.core import reasons
from heardof.core.errors import MalformedRational, StructureError
from heardof.core.parsetools import rat_slug
from heardof.core.types import (ABSENT, Algorithm, CommSpec, Fragment, Guard, Instance,
    Instruction, Operation, Outcome, PhasePredicate, PredicateEntry, Round, RoundType, Threshold,
    TRUE, Verdict, rat, threshold_ge)


def uni(thr, op=Operation.SMOR):
    return Instruction(Guard.UNI, Threshold.present(thr), op)

def mult(thr, op=Operation.SMOR):
    return Instruction(Guard.MULT, Threshold.present(thr), op)


def two_rounds(name='alg', first=None, second=None):
    first = first or (uni(Fraction(2, 3)), mult(Fraction(2, 3)))
    second = second or (uni(Fraction(2, 3)),)
    return Algorithm(name, (Round(1, instructions=first, sets_inp=True),
        Round(2, instructions=second, sets_dec=True)))


class ThresholdTests(SimpleTestCase):

    def test_rationals(self):
        assert rat(2, 4) == Fraction(1, 2)
        with self.assertRaises(MalformedRational):
            rat(1, 0)

    def test_range(self):
        with self.assertRaises(StructureError):
            Threshold.present(1)
        with self.assertRaises(StructureError):
            Threshold.present(Fraction(-1, 3))
        assert Threshold.present(0).key == 0

    def test_absent_orders_below_zero(self):
        assert ABSENT < Threshold.present(0)
        assert ABSENT.key == -1
        assert max(ABSENT, Threshold.present(Fraction(1, 3))) == Threshold.present(Fraction(1, 3))
        assert threshold_ge(Threshold.present(Fraction(2, 3)), Threshold.present(Fraction(2, 3)))
        assert not threshold_ge(ABSENT, Threshold.present(0))

    def test_admits_is_strict(self):
        two_thirds = Threshold.present(Fraction(2, 3))
        assert not two_thirds.admits(2, 3)
        assert two_thirds.admits(3, 3)
        assert two_thirds.admits(5, 6) and not two_thirds.admits(4, 6)
        assert ABSENT.admits(0, 4)


class AlgorithmTests(SimpleTestCase):

    def test_basic_shape(self):
        alg = two_rounds()
        self.assertEqual(alg.r, 2)
        self.assertEqual(alg.ir, 1)
        self.assertEqual(alg.fragment, Fragment.CORE)
        assert alg.round(1).has_mult and not alg.round(2).has_mult

    def test_needs_two_rounds(self):
        with self.assertRaises(StructureError):
            Algorithm('one', (Round(1, instructions=(uni(0),), sets_inp=True, sets_dec=True),))

    def test_single_inp_round_before_last(self):
        with self.assertRaises(StructureError):
            Algorithm('x', (Round(1, instructions=(uni(0),)),
                Round(2, instructions=(uni(0),), sets_dec=True)))
        with self.assertRaises(StructureError):
            Algorithm('x', (Round(1, instructions=(uni(0),)),
                Round(2, instructions=(uni(0),), sets_inp=True, sets_dec=True)))

    def test_lr_must_precede_ls(self):
        with self.assertRaises(StructureError):
            Algorithm('x', (Round(1, RoundType.LR, (uni(0),), sets_inp=True),
                Round(2, instructions=(uni(0),), sets_dec=True)))
        alg = Algorithm('c', (Round(1, RoundType.LR, (uni(0), mult(0))),
            Round(2, RoundType.LS, (uni(0),), sets_inp=True),
            Round(3, instructions=(uni(0),), sets_dec=True)))
        self.assertEqual(alg.fragment, Fragment.COORD)
        self.assertEqual(alg.ir, 2)

    def test_ls_round_has_no_mult(self):
        with self.assertRaises(StructureError):
            Round(2, RoundType.LS, (uni(0), mult(0)))

    def test_maxts_only_with_timestamps_in_first_round(self):
        first = (uni(0, Operation.MAXTS), mult(0, Operation.MAXTS))
        with self.assertRaises(StructureError):
            two_rounds(first=first)
        alg = Algorithm('ts', (Round(1, instructions=first),
            Round(2, instructions=(uni(Fraction(1, 2)),), sets_inp=True),
            Round(3, instructions=(uni(Fraction(2, 3)),), sets_dec=True)), timestamps=True)
        self.assertEqual(alg.fragment, Fragment.TS)
        with self.assertRaises(StructureError):
            Algorithm('ts', (Round(1, instructions=(uni(0, Operation.MAXTS), mult(0))),
                Round(2, instructions=(uni(0),), sets_inp=True),
                Round(3, instructions=(uni(0),), sets_dec=True)), timestamps=True)

    def test_replace_round(self):
        alg = two_rounds()
        changed = alg.replace_round(alg.round(2).replace(instructions=(uni(Fraction(1, 2)),)))
        self.assertEqual(changed.round(2).unis[0].threshold, Threshold.present(Fraction(1, 2)))
        self.assertEqual(alg.round(2).unis[0].threshold, Threshold.present(Fraction(2, 3)))


class PredicateTests(SimpleTestCase):

    def test_conjoin_and_implies(self):
        a = PhasePredicate((PredicateEntry(has_eq=True), PredicateEntry(thr=Threshold.present(Fraction(1, 2)))))
        b = PhasePredicate((PredicateEntry(thr=Threshold.present(Fraction(2, 3))), TRUE))
        both = a.conjoin(b)
        self.assertEqual(str(both), '(eq && thr 2/3, thr 1/2)')
        assert both.implies(a) and both.implies(b)
        assert not a.implies(b)
        assert a.has_equalizer and not b.has_equalizer

    def test_spec_arity(self):
        with self.assertRaises(StructureError):
            CommSpec(PhasePredicate.true(2), (PhasePredicate.true(3),))
        spec = CommSpec(PhasePredicate.true(2))
        self.assertEqual(spec.k, 1)
        self.assertEqual([name for name, _ in spec.predicates()], ['global', 'phi^1'])

    def test_instance_rejects_misplaced_atoms(self):
        alg = two_rounds()
        with self.assertRaises(StructureError):
            Instance(alg, CommSpec(PhasePredicate.true(2),
                (PhasePredicate((PredicateEntry(has_ls=True), TRUE)),)))
        with self.assertRaises(StructureError):
            Instance(alg, CommSpec(PhasePredicate.true(3)))


class VerdictTests(SimpleTestCase):

    def test_reject_needs_reasons(self):
        with self.assertRaises(StructureError):
            Verdict(Outcome.REJECT)
        assert Verdict(Outcome.ACCEPT).accepted

    def test_reason_strings(self):
        self.assertEqual(str(reasons.make_reason(reasons.MISSING_UNI_ROUND, 2)), 'MissingUniRound(2)')
        self.assertEqual(str(reasons.make_reason(reasons.NO_UNIFIER)), 'NoUnifier')

    def test_witness_kinds(self):
        found = [reasons.make_reason(reasons.NO_UNIFIER),
            reasons.make_reason(reasons.CONSTANTS_VIOLATION)]
        self.assertEqual(reasons.witness_kinds(found), ['agreement', 'termination'])
        self.assertEqual(reasons.witness_kinds([reasons.make_reason(reasons.LS_FIRST_ROUND)]),
            ['agreement', 'termination'])
        self.assertEqual(reasons.witness_kinds([]), [])

    def test_rat_slug(self):
        self.assertEqual(rat_slug(Fraction(2, 3)), '2-3')
        self.assertEqual(rat_slug(0), '0')
