from fractions import Fraction
import json
import os

from django.conf import settings
from django.test import SimpleTestCase

from heardof.core.errors import BoundTooLarge, WitnessError
from heardof.core.types import (ABSENT, Guard, Instruction, Operation, PredicateEntry, Round,
    RoundType, Threshold)
from heardof.classify.facts import border_key, round_facts
from heardof.classify.predicates import is_decider, is_preserving, is_solo_safe
from heardof.corpus.grid import grid_instance
from heardof.dsl.parser import parse_file
from heardof.sim.explicit import explicit_reachable
from heardof.sim.phases import phase_successors
from heardof.sim.profiles import A, B, UNDEF, AbstractConfig, RoundCounts, compositions
from heardof.sim.search import check_agreement, check_termination, guard_bound, reachable_configs
from heardof.sim.semantics import fire_set, round_successors, update_value
from heardof.sim.witness import AGREEMENT, TERMINATION, replay

T = Threshold.present
SIXTHS = [Fraction(k, 6) for k in range(6)]


def corpus(name):
    return parse_file(os.path.join(settings.HOC_CORPUS_DIR, name + '.ho'))


def corpus_instances():
    names = sorted(os.path.splitext(f)[0] for f in os.listdir(settings.HOC_CORPUS_DIR)
        if f.endswith('.ho'))
    return [corpus(name) for name in names]


def uni(t, op=Operation.SMOR):
    return Instruction(Guard.UNI, T(t), op)


def mult(t, op=Operation.SMOR):
    return Instruction(Guard.MULT, T(t), op)


def pool(a=0, b=0, q=0):
    return RoundCounts(a, b, q).pool()


def solo(n):
    return RoundCounts.uniform(B, n).pool()


class UpdateTests(SimpleTestCase):

    def test_majority(self):
        ins = (uni(Fraction(2, 3)), mult(Fraction(2, 3)))
        self.assertEqual(update_value(ins, (((A, 0), 2), ((B, 0), 1)), 3), A)

    def test_smor_tie_goes_to_a(self):
        self.assertEqual(update_value((mult(0),), (((A, 0), 1), ((B, 0), 1)), 2), A)
        self.assertEqual(update_value((mult(0),), (((A, 0), 2), ((B, 0), 3)), 5), B)

    def test_maxts(self):
        h = (((A, 0), 1), ((B, 1), 1))
        self.assertEqual(update_value((mult(0, Operation.MAXTS),), h, 2), B)
        h = (((A, 1), 1), ((B, 1), 1), ((B, 0), 1))
        self.assertEqual(update_value((mult(0, Operation.MAXTS),), h, 3), A)

    def test_min(self):
        h = (((A, 0), 1), ((B, 0), 4))
        self.assertEqual(update_value((mult(0, Operation.MIN),), h, 5), A)

    def test_first_match(self):
        ins = (mult(Fraction(1, 2), Operation.MIN), mult(0, Operation.SMOR))
        self.assertEqual(update_value(ins, (((A, 0), 1), ((B, 0), 2)), 3), A)
        # too small for the first instruction, the second one fires
        self.assertEqual(update_value(ins, (((A, 0), 1), ((B, 0), 2)), 6), B)

    def test_undef_ignored_by_guards(self):
        h = (((A, 0), 1), ((UNDEF, 0), 2))
        self.assertEqual(update_value((uni(Fraction(1, 3)),), h, 3), UNDEF)
        self.assertEqual(update_value((uni(0),), h, 3), A)
        self.assertEqual(update_value((uni(0),), (((UNDEF, 0), 3),), 3), UNDEF)

    def test_nothing_fires(self):
        self.assertEqual(update_value((uni(Fraction(1, 2)),), (((A, 0), 1), ((B, 0), 1)), 2), UNDEF)


class FireSetTests(SimpleTestCase):

    def test_onethird_first_round(self):
        rnd = corpus('onethird-2-3').algorithm.round(1)
        self.assertEqual(fire_set(rnd.instructions, pool(a=2, b=2), T(Fraction(2, 3)), 4), {A, B})

    def test_solo_pool(self):
        ins = (uni(Fraction(2, 3)),)
        self.assertEqual(fire_set(ins, solo(3), T(Fraction(2, 3)), 3), {B})
        self.assertEqual(fire_set(ins, solo(3), T(Fraction(1, 2)), 3), {B, UNDEF})
        self.assertEqual(fire_set(ins, solo(3), ABSENT, 3), {B, UNDEF})

    def test_predicate_counts_undef(self):
        # only H = {a, ?, ?} passes a 2/3 size test
        p = pool(a=1, q=2)
        self.assertEqual(fire_set((uni(0),), p, T(Fraction(2, 3)), 3), {A})
        self.assertEqual(fire_set((uni(Fraction(1, 2)),), p, T(Fraction(2, 3)), 3), {UNDEF})

    def test_first_round_border(self):
        # a can still be produced from a pool with a share t of b exactly when t is below
        # the border 1 - thr_u, 1 - thr_m / 2
        for u1 in SIXTHS:
            for m in SIXTHS:
                alg, _ = grid_instance(u1, m, Fraction(2, 3))
                border = border_key(round_facts(alg))
                instructions = alg.round(1).instructions
                for n in (3, 4, 6):
                    for k in range(n + 1):
                        fire = fire_set(instructions, pool(a=n - k, b=k), ABSENT, n)
                        self.assertEqual(A in fire, Fraction(k, n) < border, (u1, m, n, k))


class RoundSuccessorTests(SimpleTestCase):

    def test_equalizer(self):
        rnd = corpus('onethird-2-3').algorithm.round(1)
        entry = PredicateEntry(has_eq=True, thr=T(Fraction(2, 3)))
        self.assertEqual(round_successors(rnd, pool(a=2, b=2), entry, 4),
            {RoundCounts(4, 0, 0), RoundCounts(0, 4, 0)})

    def test_without_equalizer(self):
        rnd = Round(1, instructions=(uni(Fraction(2, 3)),), sets_inp=True)
        entry = PredicateEntry(thr=T(Fraction(1, 2)))
        self.assertEqual(round_successors(rnd, solo(3), entry, 3),
            {RoundCounts(0, b, q) for b, q in compositions(3, 2)})

    def test_leader_round(self):
        rnd = corpus('paxos-4round').algorithm.round(1)
        self.assertIs(rnd.rtype, RoundType.LR)
        entry = PredicateEntry(thr=T(Fraction(1, 2)))
        self.assertEqual(round_successors(rnd, pool(a=4), entry, 4), {RoundCounts(1, 0, 3)})

    def test_solo_safe_rounds_keep_solo_pools(self):
        for instance in corpus_instances():
            alg = instance.algorithm
            facts = round_facts(alg)
            for label, phi in instance.spec.predicates():
                for i in range(1, alg.r + 1):
                    rnd = alg.round(i)
                    if rnd.rtype is not RoundType.EVERY or not is_solo_safe(i, phi, facts):
                        continue
                    for n in (3, 4, 6):
                        self.assertEqual(round_successors(rnd, solo(n), phi.entry(i), n),
                            {RoundCounts.uniform(B, n)}, (instance.name, label, i, n))

    def test_non_preserving_rounds_never_lose_values(self):
        for instance in corpus_instances():
            alg = instance.algorithm
            facts = round_facts(alg)
            for label, phi in instance.spec.predicates():
                for i in range(1, alg.r + 1):
                    rnd = alg.round(i)
                    if rnd.rtype is not RoundType.EVERY or is_preserving(i, phi, facts):
                        continue
                    for n in (3, 4, 5):
                        for a in range(n + 1):
                            fire = fire_set(rnd.instructions, pool(a=a, b=n - a), phi.thr(i), n)
                            self.assertNotIn(UNDEF, fire, (instance.name, label, i, n, a))

    def test_preserving_rounds(self):
        missing_mult = Round(1, instructions=(uni(Fraction(1, 2)),), sets_inp=True)
        self.assertIn(UNDEF, fire_set(missing_mult.instructions, pool(a=2, b=2),
            T(Fraction(1, 2)), 4))
        weak = corpus('onethird-2-3').algorithm.round(1)
        self.assertIn(UNDEF, fire_set(weak.instructions, pool(a=3, b=3), T(Fraction(1, 2)), 6))


class PhaseTests(SimpleTestCase):

    def phases(self):
        """(instance, label, phi, is decider) for every corpus predicate, conjoined with global."""
        for instance in corpus_instances():
            alg, spec = instance.algorithm, instance.spec
            facts = round_facts(alg)
            glob = spec.global_predicate
            for label, phi in spec.predicates():
                phi = phi.conjoin(glob)
                yield instance, label, phi, is_decider(phi, facts,
                    coordinators=alg.fragment.coordinators)

    def test_deciders_decide_solo_configurations(self):
        checked = set()
        for instance, label, phi, decider in self.phases():
            if not decider:
                continue
            checked.add(instance.name)
            for n in (3, 4, 6):
                succs = phase_successors(instance.algorithm, AbstractConfig.initial(n, n), phi)
                self.assertTrue(succs, (instance.name, label, n))
                for succ in succs:
                    self.assertEqual(succ.dec_counts(), (0, n, 0), (instance.name, label, n))
        for name in ('OneThird(2/3,2/3)', 'OneThird(1/2,3/4)'):
            self.assertIn(name, checked)

    def test_non_deciders_can_stall(self):
        stalled = set()
        for instance, label, phi, decider in self.phases():
            if decider:
                continue
            for n in (3, 4, 6):
                start = AbstractConfig.initial(n, n)
                self.assertIn(start, phase_successors(instance.algorithm, start, phi),
                    (instance.name, label, n))
                stalled.add((instance.name, label))
        self.assertIn(('OneThird(2/3,2/3)', 'global'), stalled)

    def test_decisions_are_stable(self):
        instance = corpus('onethird-1-2_2-3')
        alg, phi = instance.algorithm, instance.spec.global_predicate
        for cfg in reachable_configs(instance, 4, 2):
            self.assertNotIn(UNDEF, [p.inp for p in cfg.profiles()])
            before = cfg.dec_counts()
            for succ in phase_successors(alg, cfg, phi):
                after = succ.dec_counts()
                self.assertGreaterEqual(after[A], before[A])
                self.assertGreaterEqual(after[B], before[B])

    def test_timestamps_are_compressed(self):
        instance = corpus('timestamp-1-2')
        for cfg in reachable_configs(instance, 3, 2):
            ranks = sorted({p.rank for p in cfg.profiles()})
            self.assertEqual(ranks, list(range(len(ranks))))


class AgreementSearchTests(SimpleTestCase):

    def test_small_constants_violate_agreement(self):
        instance = corpus('onethird-1-2_2-3')
        for n in range(2, 7):
            self.assertIsNone(check_agreement(instance, n), n)
        witness = check_agreement(instance, 7)
        self.assertEqual(witness.kind, AGREEMENT)
        self.assertEqual(witness.n, 7)
        self.assertTrue(witness.final.has_disagreement)
        self.assertEqual(witness.initial.decided(), set())

    def test_mutants(self):
        for name in ('onethird-min-round1', 'onethird-mult-round2'):
            witness = check_agreement(corpus(name), 4)
            self.assertIsNotNone(witness, name)
            self.assertTrue(witness.final.has_disagreement)

    def test_correct_algorithm(self):
        self.assertIsNone(check_agreement(corpus('onethird-2-3'), 4))

    def test_depth(self):
        self.assertIsNone(check_agreement(corpus('onethird-1-2_2-3'), 7, depth=0))


class TerminationSearchTests(SimpleTestCase):

    def test_reordered_sporadics(self):
        instance = corpus('onethird-reordered')
        self.assertIsNone(check_termination(instance, 3))
        witness = check_termination(instance, 4)
        self.assertEqual(witness.kind, TERMINATION)
        self.assertEqual(witness.states[witness.loop_start], witness.final)
        self.assertFalse(witness.final.fully_decided)
        self.assertEqual(witness.final.sporadic_index, instance.spec.k)
        self.assertEqual(set(witness.labels[witness.loop_start:]), {'global'})

    def test_mutants(self):
        for name in ('onethird-no-mult-round1', 'onethird-only-unifier'):
            self.assertIsNotNone(check_termination(corpus(name), 4), name)

    def test_correct_algorithm(self):
        self.assertIsNone(check_termination(corpus('onethird-2-3'), 4))


class EngineTests(SimpleTestCase):

    def test_engines_agree(self):
        for instance in corpus_instances():
            for depth in (1, 2, 3):
                self.assertEqual(explicit_reachable(instance, 3, depth),
                    reachable_configs(instance, 3, depth), (instance.name, depth))

    def test_explicit_engine_bound(self):
        with self.assertRaises(BoundTooLarge):
            explicit_reachable(corpus('onethird-2-3'), 4, 1)

    def test_guard_bound(self):
        instance = corpus('onethird-2-3')
        self.assertGreater(guard_bound(instance, 4), 0)
        with self.assertRaises(BoundTooLarge) as cm:
            guard_bound(instance, 4, limit=10)
        self.assertEqual(cm.exception.limit, 10)
        with self.assertRaises(BoundTooLarge):
            guard_bound(instance, 200)


class ReplayTests(SimpleTestCase):

    def witness_data(self, name, n, search):
        instance = corpus(name)
        witness = search(instance, n)
        return instance, witness, json.loads(witness.dumps(instance))

    def test_agreement_witness_replays(self):
        instance, witness, data = self.witness_data('onethird-1-2_2-3', 7, check_agreement)
        self.assertEqual(data['kind'], AGREEMENT)
        self.assertEqual(len(data['phases']), len(witness.labels))
        self.assertEqual(replay(instance, data), witness.final)

    def test_lasso_replays(self):
        instance, witness, data = self.witness_data('onethird-reordered', 4, check_termination)
        self.assertEqual(replay(instance, data), witness.final)

    def test_dumps_is_stable(self):
        instance = corpus('onethird-mult-round2')
        first = check_agreement(instance, 4).dumps(instance)
        self.assertEqual(first, check_agreement(instance, 4).dumps(instance))

    def test_tampered_witnesses(self):
        instance, _, data = self.witness_data('onethird-mult-round2', 4, check_agreement)
        bad = dict(data, final=data['initial'])
        with self.assertRaises(WitnessError):
            replay(instance, bad)
        with self.assertRaises(WitnessError):
            replay(instance, dict(data, kind=TERMINATION))
        with self.assertRaises(WitnessError):
            replay(instance, dict(data, schema=data['schema'] + 1))
        with self.assertRaises(WitnessError):
            replay(instance, dict(data, phases=data['phases'][:-1]))

    def test_witness_for_another_algorithm(self):
        _, _, data = self.witness_data('onethird-1-2_2-3', 7, check_agreement)
        with self.assertRaises(WitnessError):
            replay(corpus('onethird-2-3'), data)
