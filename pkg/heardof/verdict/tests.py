from fractions import Fraction
import itertools
import json
import os

from django.conf import settings
from django.test import SimpleTestCase

from heardof.core.types import Fragment, Outcome
from heardof.corpus.grid import (GRID, SMALL_GRID, grid_family, grid_instance,
    predicate_grid_family)
from heardof.dsl.parser import parse_file
from heardof.verdict.engine import SAFE, T_SAFE, check_consensus, check_instance, witness_pair
from heardof.verdict.explain import dumps_report, explain, report_json


def corpus(name):
    return parse_file(os.path.join(settings.HOC_CORPUS_DIR, name + '.ho'))


def codes(verdict):
    return [str(r) for r in verdict.reasons]


class GoldenTests(SimpleTestCase):

    def test_onethird_accepts(self):
        for name in ('onethird-2-3', 'onethird-1-2_3-4'):
            verdict, trace = check_instance(corpus(name))
            self.assertEqual(verdict.outcome, Outcome.ACCEPT, name)
            self.assertEqual(trace.witness_pair, (1, 2))

    def test_onethird_half_two_thirds_rejects(self):
        verdict, _ = check_instance(corpus('onethird-1-2_2-3'))
        self.assertEqual(verdict.outcome, Outcome.REJECT)
        self.assertEqual(codes(verdict), ['ConstantsViolation'])

    def test_algorithm_api(self):
        alg, spec = grid_instance(Fraction(1, 2), Fraction(1, 2), Fraction(3, 4))
        verdict, trace = check_consensus(alg, spec)
        assert verdict.accepted
        self.assertEqual(trace.condition, 'T')

    def test_reordered_sporadics(self):
        verdict, trace = check_instance(corpus('onethird-reordered'))
        self.assertEqual(codes(verdict), ['NoDeciderAfterUnifier'])
        self.assertIsNone(trace.witness_pair)

    def test_paxos(self):
        for name in ('paxos-4round', 'paxos-3round', 'paxos-3round-1-3', 'paxos-4round-1-3'):
            verdict, trace = check_instance(corpus(name))
            self.assertEqual(verdict.outcome, Outcome.ACCEPT, name)
            self.assertEqual(trace.witness_pair, (1, 1), name)
            self.assertEqual(trace.condition, 'scT')

    def test_out_of_fragment(self):
        verdict, trace = check_instance(corpus('onethird-global-eq'))
        self.assertEqual(verdict.outcome, Outcome.OUT_OF_FRAGMENT)
        self.assertEqual(codes(verdict), ['GlobalEqualizer'])
        verdict, _ = check_instance(corpus('onethird-2-3'), Fragment.COORD)
        self.assertEqual(codes(verdict), ['FragmentMismatch'])

    def test_all_failures_reported(self):
        verdict, _ = check_instance(corpus('onethird-no-uni-round2'))
        self.assertEqual(codes(verdict), ['MissingUniRound(2)', 'NoDeciderAfterUnifier'])

    def test_fragment_dispatch(self):
        cases = {
            'onethird-2-3': ('T', SAFE),
            'timestamp-1-2': ('sT', T_SAFE),
            'coordinator-2-3': ('cT', SAFE),
            'paxos-4round': ('scT', T_SAFE),
        }
        for name, expected in cases.items():
            _, trace = check_instance(corpus(name))
            self.assertEqual((trace.condition, trace.structure_check), expected, name)


class GridTests(SimpleTestCase):

    def test_onethird_grid(self):
        count = 0
        for entry_id, alg, spec, expected in grid_family(GRID):
            verdict, _ = check_consensus(alg, spec)
            self.assertEqual(verdict.outcome, expected, entry_id)
            count += 1
        self.assertEqual(count, 432)

    def test_predicate_grid(self):
        outcomes = set()
        for entry_id, alg, spec, expected in predicate_grid_family(GRID):
            verdict, _ = check_consensus(alg, spec)
            self.assertEqual(verdict.outcome, expected, entry_id)
            outcomes.add(expected)
        self.assertEqual(outcomes, {Outcome.ACCEPT, Outcome.REJECT})

    def test_border_unifier(self):
        # below thr_u1 but at the border max(1 - 3/4, 1 - 2/3 / 2) = 2/3
        half, two_thirds, three_quarters = Fraction(1, 2), Fraction(2, 3), Fraction(3, 4)
        alg, spec = grid_instance(three_quarters, two_thirds, three_quarters, thr_p=two_thirds)
        self.assertEqual(check_consensus(alg, spec)[0].outcome, Outcome.ACCEPT)
        # the border is now max(1 - 3/4, 1 - 1/2 / 2) = 3/4
        alg, spec = grid_instance(three_quarters, half, three_quarters, thr_p=two_thirds)
        self.assertEqual(check_consensus(alg, spec)[0].outcome, Outcome.REJECT)

    def test_small_constants_impossible(self):
        # every predicate pair over the grid, with and without eq
        for u1, m, u2 in itertools.product(SMALL_GRID, repeat=3):
            for eq, a, b in itertools.product((False, True), SMALL_GRID, SMALL_GRID):
                alg, _ = grid_instance(u1, m, u2)
                _, spec = grid_instance(a, a, b, with_eq=eq)
                verdict, _ = check_consensus(alg, spec)
                self.assertEqual(verdict.outcome, Outcome.REJECT, (u1, m, u2, eq, a, b))


class WitnessPairTests(SimpleTestCase):

    def test_smallest_pair(self):
        self.assertEqual(witness_pair([None, 2, 1], [True, False, True]), (2, 3))
        self.assertEqual(witness_pair([1, 1], [True, True]), (1, 1))
        self.assertIsNone(witness_pair([None, 1], [True, False]))

    def test_minimal_by_brute_force(self):
        for path in sorted(os.listdir(settings.HOC_CORPUS_DIR)):
            if not path.endswith('.ho'):
                continue
            verdict, trace = check_instance(parse_file(os.path.join(settings.HOC_CORPUS_DIR, path)))
            if verdict.outcome is Outcome.OUT_OF_FRAGMENT:
                continue
            k = len(trace.predicates)
            pairs = [(i, j) for i in range(1, k + 1) for j in range(i, k + 1)
                if trace.predicates[i - 1].unifier is not None and trace.predicates[j - 1].decider]
            self.assertEqual(trace.witness_pair, min(pairs) if pairs else None, path)
            if verdict.accepted:
                i, j = trace.witness_pair
                assert i <= j


class ExplainTests(SimpleTestCase):

    def test_accept(self):
        _, trace = check_instance(corpus('onethird-2-3'))
        text = explain(trace)
        assert text.startswith('OneThird(2/3,2/3): accept\nfragment: core\n')
        assert 'unifier: φ^1 (equalizer at round 1)\n' in text
        assert 'decider: φ^2\n' in text
        assert 'border threshold: 2/3\n' in text
        assert 'condition T holds with φ^1 and φ^2\n' in text

    def test_constants_violation(self):
        _, trace = check_instance(corpus('onethird-1-2_2-3'))
        assert 'constants: thr_m^{1,k}/2 = 1/4 < 1/3 = 1−thr_u^{ir+1}  [violated]' in explain(trace)

    def test_out_of_fragment(self):
        _, trace = check_instance(corpus('onethird-global-eq'))
        text = explain(trace)
        assert 'out of fragment: GlobalEqualizer, the global predicate may not contain an equalizer' \
            in text
        assert 'condition:' not in text

    def test_deterministic(self):
        first = explain(check_instance(corpus('weak-unifier'))[1])
        self.assertEqual(explain(check_instance(corpus('weak-unifier'))[1]), first)


class ReportTests(SimpleTestCase):

    def test_schema(self):
        verdict, trace = check_instance(corpus('onethird-1-2_2-3'))
        report = json.loads(dumps_report(report_json(verdict, trace)))
        self.assertEqual(report['schema'], settings.HOC_REPORT_SCHEMA)
        self.assertEqual(report['verdict'], 'reject')
        self.assertEqual(report['fragment'], 'core')
        self.assertEqual(report['reasons'], ['ConstantsViolation'])
        self.assertIsNone(report['witness_pair'])
        self.assertEqual(report['constants']['border_threshold'], '3/4')
        self.assertEqual(report['details'][0]['witness'], 'agreement')

    def test_accept_report(self):
        verdict, trace = check_instance(corpus('onethird-2-3'))
        report = report_json(verdict, trace)
        self.assertEqual(report['witness_pair'], [1, 2])
        self.assertEqual(report['reasons'], [])
        self.assertEqual([p['predicate'] for p in report['predicates']], ['phi^1', 'phi^2'])

    def test_byte_identical(self):
        for name in ('onethird-2-3', 'paxos-4round', 'coordinator-ls-first'):
            a = dumps_report(report_json(*check_instance(corpus(name))))
            b = dumps_report(report_json(*check_instance(corpus(name))))
            self.assertEqual(a, b)
