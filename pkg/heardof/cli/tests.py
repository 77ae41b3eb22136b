from fractions import Fraction
from io import StringIO
import json
import os
import tempfile
from unittest import mock

from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings

from heardof.cli.config import CliConfig
from heardof.cli.crossval import (CONSISTENT, INCONSISTENT, SKIPPED, UNWITNESSED, crossval,
    crossval_entry, failing_rows)
from heardof.cli.predsearch import search_predicates, weakest_decider
from heardof.classify.facts import round_facts
from heardof.core.types import Fragment, Outcome, Verdict
from heardof.corpus.entries import entry_by_id
from heardof.dsl.parser import parse_file


def corpus_path(name):
    return os.path.join(settings.HOC_CORPUS_DIR, name + '.ho')


def accept_everything(instance):
    return Verdict(Outcome.ACCEPT), None


class HocCommandTestCase(SimpleTestCase):

    def hoc(self, *args):
        """Runs hoc and returns (exit code, stdout)."""
        out, err = StringIO(), StringIO()
        try:
            call_command('hoc', *args, stdout=out, stderr=err)
        except CommandError as e:
            return e.returncode, out.getvalue()
        return 0, out.getvalue()


class CheckCommandTests(HocCommandTestCase):

    def test_accept(self):
        code, out = self.hoc('check', corpus_path('onethird-2-3'))
        self.assertEqual(code, 0)
        self.assertEqual(out, 'OneThird(2/3,2/3): accept\n')

    def test_reject(self):
        code, out = self.hoc('check', corpus_path('onethird-1-2_2-3'), '--json')
        self.assertEqual(code, 1)
        report = json.loads(out)
        self.assertEqual(report['verdict'], 'reject')
        self.assertEqual(report['reasons'], ['ConstantsViolation'])

    def test_out_of_fragment(self):
        code, out = self.hoc('check', corpus_path('onethird-global-eq'))
        self.assertEqual(code, 2)
        self.assertIn('GlobalEqualizer', out)

    def test_fragment_mismatch(self):
        code, out = self.hoc('check', corpus_path('onethird-2-3'), '--fragment', 'ts')
        self.assertEqual(code, 2)
        self.assertIn('FragmentMismatch', out)

    def test_missing_file(self):
        code, _ = self.hoc('check', corpus_path('no-such-file'))
        self.assertEqual(code, 3)

    def test_syntax_error(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'broken.ho')
            with open(path, 'w') as f:
                f.write('algorithm "Broken" { round 1 { send (inp); if uni(H) then } }\n')
            code, _ = self.hoc('check', path)
        self.assertEqual(code, 3)

    def test_json_is_byte_stable(self):
        first = self.hoc('check', corpus_path('paxos-4round'), '--json')
        self.assertEqual(first, self.hoc('check', corpus_path('paxos-4round'), '--json'))
        self.assertEqual(first[0], 0)

    def test_search_predicates(self):
        code, out = self.hoc('check', corpus_path('onethird-2-3'), '--search-predicates')
        self.assertEqual(code, 0)
        self.assertIn('weakest predicates: unifier (eq && thr 2/3', out)
        code, out = self.hoc('check', corpus_path('onethird-1-2_2-3'), '--search-predicates',
            '--json')
        self.assertEqual(code, 1)
        self.assertIsNone(json.loads(out)['weakest_predicates'])

    def test_explain(self):
        code, out = self.hoc('explain', corpus_path('onethird-2-3'))
        self.assertEqual(code, 0)
        self.assertIn('OneThird(2/3,2/3)', out)
        self.assertIn('accept', out)


class SimulateCommandTests(HocCommandTestCase):

    def test_no_violation(self):
        code, out = self.hoc('simulate', corpus_path('onethird-2-3'), '--n', '4')
        self.assertEqual(code, 0)
        self.assertIn('no agreement or termination violation at n=4', out)

    def test_witness_and_replay(self):
        path = corpus_path('onethird-1-2_2-3')
        with tempfile.TemporaryDirectory() as directory:
            witness = os.path.join(directory, 'witness.json')
            code, out = self.hoc('simulate', path, '--n', '7', '--depth', '50', '--check',
                'agreement', '--witness-out', witness)
            self.assertEqual(code, 1)
            self.assertIn('agreement violation', out)
            code, out = self.hoc('simulate', path, '--replay', witness)
            self.assertEqual(code, 1)
            self.assertIn('witness replays at n=7', out)

            with open(witness) as f:
                data = json.load(f)
            data['final'] = data['initial']
            with open(witness, 'w') as f:
                json.dump(data, f)
            code, _ = self.hoc('simulate', path, '--replay', witness)
            self.assertEqual(code, 3)

    def test_json(self):
        code, out = self.hoc('simulate', corpus_path('onethird-mult-round2'), '--n', '4',
            '--check', 'agreement', '--json')
        self.assertEqual(code, 1)
        data = json.loads(out)
        self.assertTrue(data['violation'])
        self.assertEqual(data['witness']['kind'], 'agreement')
        self.assertEqual(data['checks'], ['agreement'])

    def test_explicit_engine(self):
        code, out = self.hoc('simulate', corpus_path('onethird-2-3'), '--n', '3', '--depth', '2',
            '--engine', 'explicit', '--check', 'agreement')
        self.assertEqual(code, 0)
        self.assertIn('no agreement violation at n=3', out)
        code, _ = self.hoc('simulate', corpus_path('onethird-2-3'), '--n', '4',
            '--engine', 'explicit', '--check', 'agreement')
        self.assertEqual(code, 4)
        code, _ = self.hoc('simulate', corpus_path('onethird-2-3'), '--n', '3',
            '--engine', 'explicit', '--check', 'termination')
        self.assertEqual(code, 3)

    def test_bound(self):
        code, _ = self.hoc('simulate', corpus_path('onethird-2-3'), '--n', '40')
        self.assertEqual(code, 4)

    def test_bad_n(self):
        code, _ = self.hoc('simulate', corpus_path('onethird-2-3'), '--n', '1')
        self.assertEqual(code, 3)


class CorpusCommandTests(HocCommandTestCase):

    def test_list(self):
        code, out = self.hoc('corpus', 'list')
        self.assertEqual(code, 0)
        self.assertIn('paxos-4round', out)

    def test_check(self):
        code, out = self.hoc('corpus', 'check', '--json')
        self.assertEqual(code, 0)
        self.assertTrue(all(row['ok'] for row in json.loads(out)['entries']))

    def test_grid(self):
        with tempfile.TemporaryDirectory() as directory:
            code, out = self.hoc('corpus', 'grid', '--out', directory, '--small')
            self.assertEqual(code, 0)
            self.assertIn('wrote 54 instances', out)
            self.assertEqual(len([f for f in os.listdir(directory) if f.endswith('.ho')]), 54)

    def test_predicate_grid(self):
        with tempfile.TemporaryDirectory() as directory:
            code, out = self.hoc('corpus', 'grid', '--out', directory, '--predicates')
            self.assertEqual(code, 0)
            self.assertIn('wrote 996 instances', out)
            self.assertEqual(len([f for f in os.listdir(directory) if '-pgrid-' in f]), 996)


class ConfigTests(SimpleTestCase):

    def test_defaults(self):
        config = CliConfig.from_options({'command': 'simulate', 'path': 'x.ho'})
        self.assertEqual(config.n, settings.HOC_DEFAULT_N)
        self.assertEqual(config.kinds, ('agreement', 'termination'))
        self.assertEqual(config.paths, ('x.ho',))
        self.assertFalse(config.json)

    def test_options(self):
        config = CliConfig.from_options({'command': 'check', 'path': 'x.ho', 'json': True,
            'fragment': 'ts_coord', 'check': 'termination', 'threads': 3})
        self.assertEqual(config.fragment, Fragment.TS_COORD)
        self.assertEqual(config.kinds, ('termination',))
        self.assertEqual(config.workers, 3)
        self.assertTrue(config.json)

    def test_validation(self):
        with self.assertRaises(ValueError):
            CliConfig('simulate', n=1)
        with self.assertRaises(ValueError):
            CliConfig('simulate', depth=0)
        with self.assertRaises(ValueError):
            CliConfig('simulate', engine='symbolic')


class PredicateSearchTests(SimpleTestCase):

    def test_onethird(self):
        instance = parse_file(corpus_path('onethird-2-3'))
        unifier, decider = search_predicates(instance)
        self.assertEqual(str(decider), '(thr 2/3, thr 2/3)')
        self.assertTrue(unifier.entry(1).has_eq)
        self.assertEqual(str(unifier.thr(1)), '2/3')

    def test_unrepairable(self):
        self.assertIsNone(search_predicates(parse_file(corpus_path('onethird-1-2_2-3'))))
        self.assertIsNone(search_predicates(parse_file(corpus_path('onethird-global-eq'))))

    def test_weakest_decider_needs_unis(self):
        alg = parse_file(corpus_path('onethird-no-uni-round2')).algorithm
        self.assertIsNone(weakest_decider(round_facts(alg)))


class CrossvalTests(SimpleTestCase):

    def test_accepted_entry(self):
        row = crossval_entry(entry_by_id('onethird-2-3'), 3, 4)
        self.assertEqual(row.status, CONSISTENT)
        self.assertFalse(failing_rows([row]))

    def test_out_of_fragment_skipped(self):
        row = crossval_entry(entry_by_id('onethird-global-eq'), 3, 2)
        self.assertEqual(row.status, SKIPPED)
        self.assertIn('GlobalEqualizer', row.to_json()['reasons'])

    def test_broken_checker_is_caught(self):
        rows = crossval([entry_by_id('onethird-mult-round2')], 4, 4, workers=1,
            checker=accept_everything)
        self.assertEqual(rows[0].status, INCONSISTENT)
        self.assertEqual(failing_rows(rows), rows)


class JobTests(SimpleTestCase):

    def test_corpus_reports(self):
        with tempfile.TemporaryDirectory() as directory:
            with override_settings(HOC_ARTIFACT_DIR=directory):
                call_command('job', 'corpus_reports')
            with open(os.path.join(directory, 'corpus.json')) as f:
                reports = json.load(f)['reports']
        self.assertEqual(reports[0]['id'], 'onethird-2-3')

    def test_crossval_grid(self):
        values = (Fraction(2, 3), Fraction(3, 4))
        with tempfile.TemporaryDirectory() as directory:
            with override_settings(HOC_ARTIFACT_DIR=directory, HOC_MAX_N=4, HOC_THREADS=1), \
                    mock.patch('heardof.jobs.GRID', values):
                call_command('job', 'crossval_grid')
            with open(os.path.join(directory, 'crossval-grid.json')) as f:
                data = json.load(f)
        rows = data['rows']
        self.assertEqual(len(rows), 16 + 32)
        self.assertFalse([row['id'] for row in rows if row['status'] == INCONSISTENT])
        self.assertTrue(any(row['verdict'] == 'accept' for row in rows))
        self.assertEqual(data['known_unwitnessed'],
            [row['id'] for row in rows if row['status'] == UNWITNESSED])

    def test_unknown_job(self):
        with self.assertLogs('heardof.core.management.commands.job', 'ERROR'):
            call_command('job', 'no_such_job')
