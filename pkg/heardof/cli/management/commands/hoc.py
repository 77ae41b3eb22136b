import glob
import json
import os

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from heardof.cli.config import (CHECKS, ENGINES, EXIT_BOUND, EXIT_INPUT, EXIT_OUT_OF_FRAGMENT,
    EXIT_REJECT, CliConfig)
from heardof.cli.crossval import crossval, failing_rows
from heardof.cli.predsearch import search_predicates
from heardof.core.errors import BoundTooLarge, HocError, WitnessError
from heardof.core.types import Fragment, Outcome
from heardof.corpus.entries import MANIFEST, CorpusEntry, corpus_entries
from heardof.corpus.grid import GRID, SMALL_GRID, stamp_grid, stamp_predicate_grid
from heardof.dsl.parser import ParseError, parse_file
from heardof.sim.explicit import explicit_reachable
from heardof.sim.search import check_agreement, check_termination, guard_bound
from heardof.sim.witness import load_witness, replay
from heardof.verdict.engine import check_instance
from heardof.verdict.explain import dumps_report, explain, report_json

import logging
logger = logging.getLogger(__name__)

SEARCHES = {
    'agreement': check_agreement,
    'termination': check_termination,
}

OUTCOME_EXIT = {
    Outcome.ACCEPT: 0,
    Outcome.REJECT: EXIT_REJECT,
    Outcome.OUT_OF_FRAGMENT: EXIT_OUT_OF_FRAGMENT,
}


def _dumps(data):
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + '\n'


class Command(BaseCommand):
    help = "Checks Heard-Of consensus algorithms against the characterization theorems, " \
        "simulates them and cross-validates the two."
    requires_system_checks = []

    def add_arguments(self, parser):
        sub = parser.add_subparsers(dest='command', required=True)
        fragments = [f.value for f in Fragment]

        check = sub.add_parser('check', help='Prints the verdict for one .ho file')
        check.add_argument('path')
        check.add_argument('--json', action='store_true')
        check.add_argument('--fragment', choices=fragments)
        check.add_argument('--search-predicates', action='store_true', dest='search_predicates',
            help='Also report the weakest sporadic predicates that make the algorithm correct')

        simulate = sub.add_parser('simulate', help='Bounded search for a violation')
        simulate.add_argument('path')
        simulate.add_argument('--n', type=int)
        simulate.add_argument('--depth', '--max-phases', type=int, dest='depth')
        simulate.add_argument('--engine', choices=ENGINES, default='counting')
        simulate.add_argument('--check', choices=CHECKS, default='both')
        simulate.add_argument('--witness-out', dest='witness_out', metavar='FILE')
        simulate.add_argument('--replay', metavar='FILE',
            help='Re-execute a witness written by --witness-out instead of searching')
        simulate.add_argument('--json', action='store_true')

        explain_p = sub.add_parser('explain', help='Explains how the verdict was reached')
        explain_p.add_argument('path')
        explain_p.add_argument('--fragment', choices=fragments)

        corpus = sub.add_parser('corpus', help='The bundled corpus')
        corpus_sub = corpus.add_subparsers(dest='corpus_command', required=True)
        corpus_list = corpus_sub.add_parser('list')
        corpus_list.add_argument('--dir', dest='directory')
        corpus_check = corpus_sub.add_parser('check')
        corpus_check.add_argument('--dir', dest='directory')
        corpus_check.add_argument('--json', action='store_true')
        corpus_grid = corpus_sub.add_parser('grid', help='Writes the OneThird threshold grid')
        corpus_grid.add_argument('--out', required=True)
        corpus_grid.add_argument('--small', action='store_true')
        corpus_grid.add_argument('--predicates', action='store_true',
            help='Cross the correct algorithms with independent unifier thresholds')

        cv = sub.add_parser('crossval', help='Runs checker and simulator side by side')
        cv.add_argument('path', nargs='?', help='Directory of .ho files; the corpus by default')
        cv.add_argument('--n', type=int, default=settings.HOC_MAX_N)
        cv.add_argument('--depth', type=int)
        cv.add_argument('--threads', type=int)
        cv.add_argument('--strict', action='store_true')
        cv.add_argument('--json', action='store_true')

    def handle(self, **options):
        try:
            config = CliConfig.from_options(options)
        except ValueError as e:
            raise CommandError(str(e), returncode=EXIT_INPUT)
        try:
            return getattr(self, 'do_' + config.command)(config, options)
        except BoundTooLarge as e:
            raise CommandError(str(e), returncode=EXIT_BOUND)
        except ParseError as e:
            raise CommandError('%s:%s' % (config.paths[0] if config.paths else '-', e),
                returncode=EXIT_INPUT)
        except (OSError, ValueError, HocError) as e:
            raise CommandError(str(e), returncode=EXIT_INPUT)

    def _load(self, config):
        return parse_file(config.paths[0])

    def _exit(self, code, message):
        if code:
            raise CommandError(message, returncode=code)

    def do_check(self, config, options):
        instance = self._load(config)
        verdict, trace = check_instance(instance, config.fragment)
        weakest = None
        if options.get('search_predicates'):
            weakest = search_predicates(instance, config.fragment)
        if config.json:
            report = report_json(verdict, trace)
            if options.get('search_predicates'):
                report['weakest_predicates'] = None if weakest is None else {
                    'unifier': str(weakest[0]), 'decider': str(weakest[1])}
            self.stdout.write(dumps_report(report), ending='')
        else:
            line = '%s: %s' % (trace.name, verdict.outcome.value)
            if verdict.reasons:
                line += ' [%s]' % ', '.join(str(r) for r in verdict.reasons)
            self.stdout.write(line)
            if options.get('search_predicates'):
                if weakest is None:
                    self.stdout.write('weakest predicates: none')
                else:
                    self.stdout.write('weakest predicates: unifier %s, decider %s' % weakest)
        self._exit(OUTCOME_EXIT[verdict.outcome], verdict.outcome.value)

    def do_explain(self, config, options):
        _, trace = check_instance(self._load(config), config.fragment)
        self.stdout.write(explain(trace), ending='')

    def do_simulate(self, config, options):
        instance = self._load(config)
        if options.get('replay'):
            return self._replay(instance, options['replay'])
        if config.engine == 'explicit':
            return self._simulate_explicit(instance, config)

        guard_bound(instance, config.n)
        witness = None
        for kind in config.kinds:
            witness = SEARCHES[kind](instance, config.n, config.depth)
            if witness is not None:
                break
        if witness is not None and options.get('witness_out'):
            with open(options['witness_out'], 'w', encoding='utf-8') as f:
                f.write(witness.dumps(instance))
            logger.info("wrote %s witness to %s" % (witness.kind, options['witness_out']))
        if config.json:
            self.stdout.write(_dumps({
                'schema': settings.HOC_WITNESS_SCHEMA,
                'instance': instance.name,
                'engine': config.engine,
                'n': config.n,
                'depth': config.depth,
                'checks': list(config.kinds),
                'violation': witness is not None,
                'witness': witness.to_json(instance) if witness else None,
            }), ending='')
        elif witness is None:
            self.stdout.write('%s: no %s violation at n=%d within %d phase(s)' % (
                instance.name, ' or '.join(config.kinds), config.n, config.depth))
        else:
            self.stdout.write('%s: %s' % (instance.name, witness.summary()))
        self._exit(EXIT_REJECT if witness else 0, 'violation found')

    def _simulate_explicit(self, instance, config):
        if 'agreement' not in config.kinds:
            raise CommandError("the explicit engine only checks agreement", returncode=EXIT_INPUT)
        if 'termination' in config.kinds:
            self.stderr.write("the explicit engine only checks agreement; termination skipped")
        configs = explicit_reachable(instance, config.n, config.depth)
        bad = sorted(cfg for cfg in configs if cfg.has_disagreement)
        if config.json:
            self.stdout.write(_dumps({
                'schema': settings.HOC_WITNESS_SCHEMA,
                'instance': instance.name,
                'engine': config.engine,
                'n': config.n,
                'depth': config.depth,
                'checks': ['agreement'],
                'violation': bool(bad),
                'reachable': len(configs),
                'disagreements': [cfg.to_json() for cfg in bad],
            }), ending='')
        elif bad:
            self.stdout.write('%s: agreement violation reachable at n=%d: %s' % (
                instance.name, config.n, bad[0]))
        else:
            self.stdout.write('%s: no agreement violation at n=%d within %d phase(s), '
                '%d configuration(s)' % (instance.name, config.n, config.depth, len(configs)))
        self._exit(EXIT_REJECT if bad else 0, 'violation found')

    def _replay(self, instance, path):
        data = load_witness(path)
        try:
            final = replay(instance, data)
        except WitnessError as e:
            raise CommandError("witness %s does not replay: %s" % (path, e), returncode=EXIT_INPUT)
        self.stdout.write('%s: %s witness replays at n=%d, ending in %s' % (
            instance.name, data['kind'], data['n'], final))
        self._exit(EXIT_REJECT, 'violation confirmed')

    def do_corpus(self, config, options):
        action = options['corpus_command']
        if action == 'grid':
            values = SMALL_GRID if options.get('small') else GRID
            stamp = stamp_predicate_grid if options.get('predicates') else stamp_grid
            entries = stamp(options['out'], values)
            self.stdout.write('wrote %d instances to %s' % (len(entries), options['out']))
            return
        entries = corpus_entries(options.get('directory'))
        if action == 'list':
            for entry in entries:
                self.stdout.write('%-34s %-16s %-9s %s' % (entry.id, entry.verdict.value,
                    entry.fragment.value, os.path.basename(entry.path)))
            return

        rows = []
        for entry in entries:
            verdict, trace = check_instance(parse_file(entry.path))
            codes = [str(r) for r in verdict.reasons]
            problems = []
            if verdict.outcome is not entry.verdict:
                problems.append('verdict %s, expected %s' % (verdict.outcome.value,
                    entry.verdict.value))
            if entry.reasons and codes != list(entry.reasons):
                problems.append('reasons %s, expected %s' % (codes, list(entry.reasons)))
            if entry.witness_pair and trace.witness_pair != entry.witness_pair:
                problems.append('witness pair %s, expected %s' % (trace.witness_pair,
                    entry.witness_pair))
            rows.append({'id': entry.id, 'verdict': verdict.outcome.value, 'reasons': codes,
                'ok': not problems, 'problems': problems})
        if config.json:
            self.stdout.write(_dumps({'schema': settings.HOC_REPORT_SCHEMA, 'entries': rows}),
                ending='')
        else:
            for row in rows:
                self.stdout.write('%-4s %-34s %s%s' % ('ok' if row['ok'] else 'FAIL', row['id'],
                    row['verdict'], ''.join('; ' + p for p in row['problems'])))
        failed = [row for row in rows if not row['ok']]
        self._exit(EXIT_REJECT if failed else 0,
            '%d corpus entr%s disagree with the manifest' % (
                len(failed), 'y' if len(failed) == 1 else 'ies'))

    def do_crossval(self, config, options):
        directory = config.paths[0] if config.paths else settings.HOC_CORPUS_DIR
        if os.path.exists(os.path.join(directory, MANIFEST)):
            entries = corpus_entries(directory)
        else:
            entries = [CorpusEntry(os.path.splitext(os.path.basename(path))[0], path, None, None)
                for path in sorted(glob.glob(os.path.join(directory, '*.ho')))]
        if not entries:
            raise CommandError("no .ho files in %s" % directory, returncode=EXIT_INPUT)

        rows = crossval(entries, config.n, config.depth, workers=config.workers)
        if config.json:
            self.stdout.write(_dumps({
                'schema': settings.HOC_REPORT_SCHEMA,
                'n': config.n,
                'depth': config.depth,
                'rows': [row.to_json() for row in rows],
            }), ending='')
        else:
            width = max(len(row.id) for row in rows)
            for row in rows:
                self.stdout.write('%-*s  %-15s  %-12s  %s' % (width, row.id, row.verdict,
                    row.status, row.simulation))
        failed = failing_rows(rows, config.strict)
        self._exit(EXIT_REJECT if failed else 0,
            'crossval failed on %s' % ', '.join(row.id for row in failed))
