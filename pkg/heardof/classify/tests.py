from fractions import Fraction
import itertools
import os

from django.conf import settings
from django.test import SimpleTestCase

from heardof.core.errors import ClassifierError
from heardof.core.types import (ABSENT, Algorithm, Guard, Instruction, Operation, PhasePredicate,
    PredicateEntry, Round, Threshold, TRUE)
from heardof.classify.facts import border_threshold, round_facts
from heardof.classify.predicates import (c_variants, is_c_decider, is_c_unifier, is_decider,
    is_preserving, is_solo_safe, is_strong_c_unifier, is_strong_unifier, is_unifier,
    predicate_facts, unifier_position)
from heardof.classify.structure import constant_checks, is_syntactically_safe, is_t_safe
from heardof.dsl.parser import parse_file

T = Threshold.present
HALF, TWO_THIRDS = T(Fraction(1, 2)), T(Fraction(2, 3))


def corpus(name):
    return parse_file(os.path.join(settings.HOC_CORPUS_DIR, name + '.ho'))


def phi(*entries):
    return PhasePredicate(entries)


def thr(value):
    return PredicateEntry(thr=T(value))


def onethird(first, second):
    first, second = T(first), T(second)
    return Algorithm('OneThird', (
        Round(1, instructions=(Instruction(Guard.UNI, first, Operation.SMOR),
            Instruction(Guard.MULT, first, Operation.SMOR)), sets_inp=True),
        Round(2, instructions=(Instruction(Guard.UNI, second, Operation.SMOR),), sets_dec=True)))


class FactTests(SimpleTestCase):

    def test_onethird_facts(self):
        facts = round_facts(onethird(Fraction(2, 3), Fraction(2, 3)))
        first, second = facts.round(1), facts.round(2)
        self.assertEqual((first.thr_u, first.thr_m_min), (TWO_THIRDS, TWO_THIRDS))
        self.assertEqual((second.thr_u, second.thr_m_min), (TWO_THIRDS, ABSENT))
        self.assertEqual(facts.ir, 1)

    def test_uni_without_size(self):
        facts = round_facts(corpus('paxos-3round').algorithm)
        assert facts.round(2).is_ls
        self.assertEqual(facts.round(2).thr_u, T(0))

    def test_mult_thresholds_ordered(self):
        for fact in round_facts(corpus('weak-unifier').algorithm):
            if fact.has_mult:
                assert fact.thr_m_min <= fact.thr_m_max

    def test_border_threshold(self):
        self.assertEqual(border_threshold(round_facts(onethird(Fraction(2, 3), Fraction(2, 3)))),
            Fraction(2, 3))
        self.assertEqual(border_threshold(round_facts(onethird(Fraction(1, 2), Fraction(2, 3)))),
            Fraction(3, 4))
        self.assertEqual(border_threshold(round_facts(onethird(Fraction(9, 10), Fraction(2, 3)))),
            Fraction(11, 20))

    def test_border_threshold_above_half(self):
        for num, den in itertools.product(range(0, 10), range(1, 11)):
            if num < den:
                assert border_threshold(round_facts(onethird(Fraction(num, den), Fraction(1, 2)))) \
                    > Fraction(1, 2)

    def test_border_threshold_needs_mult(self):
        with self.assertRaises(ClassifierError):
            border_threshold(round_facts(corpus('onethird-no-mult-round1').algorithm))


class RoundClassTests(SimpleTestCase):

    def setUp(self):
        self.facts = round_facts(onethird(Fraction(2, 3), Fraction(2, 3)))

    def test_preserving(self):
        assert not is_preserving(1, phi(thr(Fraction(2, 3)), TRUE), self.facts)
        assert is_preserving(1, phi(thr(Fraction(1, 2)), TRUE), self.facts)
        # round 2 has no mult
        assert is_preserving(2, phi(TRUE, thr(Fraction(9, 10))), self.facts)

    def test_solo_safe(self):
        assert is_solo_safe(2, phi(TRUE, thr(Fraction(2, 3))), self.facts)
        assert not is_solo_safe(2, phi(TRUE, TRUE), self.facts)
        facts = round_facts(corpus('onethird-no-uni-round2').algorithm)
        assert not is_solo_safe(2, phi(TRUE, thr(Fraction(99, 100))), facts)

    def test_c_variants(self):
        facts = round_facts(corpus('paxos-3round').algorithm)
        with_ls = phi(TRUE, PredicateEntry(has_ls=True), TRUE)
        self.assertEqual(tuple(c_variants(2, with_ls, facts)), (False, True, True))
        self.assertEqual(tuple(c_variants(2, PhasePredicate.true(3), facts)), (True, False, False))
        eq = phi(PredicateEntry(has_eq=True), TRUE, TRUE)
        assert c_variants(1, eq, facts).c_equalizer


class PredicateClassTests(SimpleTestCase):

    def test_decider(self):
        facts = round_facts(onethird(Fraction(2, 3), Fraction(2, 3)))
        assert is_decider(phi(thr(Fraction(2, 3)), thr(Fraction(2, 3))), facts)
        assert not is_decider(phi(thr(Fraction(2, 3)), TRUE), facts)

    def test_paxos_c_decider_and_unifier(self):
        instance = corpus('paxos-4round')
        facts = round_facts(instance.algorithm)
        first = instance.spec.sporadics[0]
        assert is_c_decider(first, facts)
        assert is_strong_c_unifier(first, facts)
        self.assertEqual(unifier_position(first, facts, coordinators=True, strong=True), 2)

    def test_coordinator_c_unifier(self):
        # no eq anywhere, the ls round equalizes
        instance = corpus('coordinator-2-3')
        facts = round_facts(instance.algorithm)
        phi = instance.spec.sporadics[0]
        assert is_c_unifier(phi, facts)
        assert not is_unifier(phi, facts)
        self.assertEqual(unifier_position(phi, facts, coordinators=True), 2)
        assert not is_c_unifier(instance.spec.global_predicate, facts)

    def test_unifier(self):
        facts = round_facts(onethird(Fraction(2, 3), Fraction(2, 3)))
        unifier = phi(PredicateEntry(has_eq=True, thr=TWO_THIRDS), TRUE)
        self.assertEqual(unifier_position(unifier, facts), 1)
        weak = phi(PredicateEntry(has_eq=True, thr=T(Fraction(1, 3))), TRUE)
        assert not is_unifier(weak, facts)
        assert not is_unifier(phi(thr(Fraction(2, 3)), TRUE), facts)

    def test_border_alternative(self):
        instance = corpus('weak-unifier')
        facts = round_facts(instance.algorithm)
        first = instance.spec.sporadics[0]
        assert is_unifier(first, facts)
        assert not is_strong_unifier(first, facts)

    def test_strong_unifier_timestamps(self):
        instance = corpus('timestamp-1-2')
        facts = round_facts(instance.algorithm)
        assert is_strong_unifier(instance.spec.sporadics[0], facts)

    def test_strong_implies_plain(self):
        for name in ('onethird-2-3', 'weak-unifier', 'timestamp-1-2', 'onethird-1-2_3-4'):
            instance = corpus(name)
            facts = round_facts(instance.algorithm)
            for p in instance.spec.sporadics:
                if is_strong_unifier(p, facts):
                    assert is_unifier(p, facts)

    def test_decider_monotone(self):
        facts = round_facts(onethird(Fraction(1, 2), Fraction(2, 3)))
        values = [ABSENT, T(Fraction(1, 3)), HALF, TWO_THIRDS, T(Fraction(3, 4))]
        predicates = [phi(PredicateEntry(has_eq=eq, thr=a), PredicateEntry(thr=b))
            for eq, a, b in itertools.product((False, True), values, values)]
        for weaker, stronger in itertools.product(predicates, repeat=2):
            if stronger.implies(weaker) and is_decider(weaker, facts):
                assert is_decider(stronger, facts), (weaker, stronger)

    def test_predicate_facts(self):
        facts = round_facts(onethird(Fraction(2, 3), Fraction(2, 3)))
        result = predicate_facts('phi^1', phi(PredicateEntry(has_eq=True, thr=TWO_THIRDS), TRUE),
            facts)
        self.assertEqual(result.unifier, 1)
        assert not result.decider
        data = result.to_json()
        self.assertEqual(data['predicate'], 'phi^1')
        self.assertEqual([r['equalizer'] for r in data['rounds']], [True, False])
        for rc in result.rounds:
            assert rc.c_equalizer or not rc.equalizer


class StructureTests(SimpleTestCase):

    def test_onethird_safe(self):
        self.assertEqual(is_syntactically_safe(onethird(Fraction(2, 3), Fraction(2, 3))), [])

    def test_constants_violation(self):
        alg = onethird(Fraction(1, 2), Fraction(2, 3))
        found = is_syntactically_safe(alg)
        self.assertEqual([str(r) for r in found], ['ConstantsViolation'])
        self.assertEqual(found[0].detail, 'thr_m^{1,k}/2 = 1/4 < 1/3 = 1−thr_u^{ir+1}')
        self.assertEqual(found[0].witness, 'agreement')

    def test_constant_checks(self):
        checks = constant_checks(round_facts(onethird(Fraction(2, 3), Fraction(2, 3))))
        self.assertEqual(checks, [
            (True, 'thr_m^{1,k}/2 = 1/3 ≥ 1/3 = 1−thr_u^{ir+1}'),
            (True, 'thr_u^1 = 2/3 ≥ 1/3 = 1−thr_u^{ir+1}')])

    def test_t_safe(self):
        alg = corpus('timestamp-1-2').algorithm
        self.assertEqual(is_t_safe(alg), [])
        checks = constant_checks(round_facts(alg), halve=False)
        self.assertEqual(checks[0], (True, 'thr_m^{1,k} = 1/2 ≥ 1/2 = 1−thr_u^{ir+1}'))

    def test_mutants(self):
        cases = {
            'onethird-no-mult-round1': ['NoMultFirstRound'],
            'onethird-no-uni-round2': ['MissingUniRound(2)'],
            'onethird-min-round1': ['NonSmorFirstRoundMult'],
        }
        for name, codes in cases.items():
            found = is_syntactically_safe(corpus(name).algorithm)
            self.assertEqual([str(r) for r in found], codes, name)
