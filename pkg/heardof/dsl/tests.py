from fractions import Fraction
import glob
import os

from django.conf import settings
from django.test import SimpleTestCase

from heardof.core.types import Fragment, Operation, RoundType, Threshold
from heardof.dsl.parser import ParseError, parse, parse_file, parse_instance
from heardof.dsl.pretty import pretty, pretty_instance

ONETHIRD = """
# comments are ignored
algorithm "OneThird" {
    round 1 {
        send (inp);
        if uni(H) && |H| > 2/3 then x1 := inp := smor(H);
        if mult(H) && |H| > 2/3 then x1 := inp := smor(H);
    }
    round 2 {
        send x1;
        if uni(H) && |H| > 2/3 then dec := smor(H);
    }
}
predicate {
    global: (true, true);
    sporadic: (eq && thr 2/3, true), (thr 2/3, thr 2/3);
}
"""


def corpus_files():
    return sorted(glob.glob(os.path.join(settings.HOC_CORPUS_DIR, '*.ho')))


class ParseTests(SimpleTestCase):

    def test_onethird(self):
        alg, spec = parse(ONETHIRD)
        self.assertEqual(alg.name, 'OneThird')
        self.assertEqual((alg.r, alg.ir), (2, 1))
        self.assertEqual(alg.fragment, Fragment.CORE)
        first = alg.round(1)
        self.assertEqual([ins.threshold for ins in first.instructions],
            [Threshold.present(Fraction(2, 3))] * 2)
        assert all(ins.operation is Operation.SMOR for ins in first.instructions)
        self.assertEqual(spec.k, 2)
        self.assertEqual(str(spec.sporadics[0]), '(eq && thr 2/3, true)')

    def test_uni_without_size_means_zero(self):
        text = ONETHIRD.replace('if uni(H) && |H| > 2/3 then dec', 'if uni(H) then dec')
        alg, _ = parse(text)
        self.assertEqual(alg.round(2).unis[0].threshold, Threshold.present(0))

    def test_coordinator_round_types(self):
        instance = parse_file(os.path.join(settings.HOC_CORPUS_DIR, 'paxos-3round-1-3.ho'))
        alg = instance.algorithm
        self.assertEqual([rnd.rtype for rnd in alg.rounds],
            [RoundType.LR, RoundType.LS, RoundType.EVERY])
        assert alg.timestamps
        self.assertEqual(alg.fragment, Fragment.TS_COORD)
        assert instance.spec.sporadics[0].entry(2).has_ls

    def test_missing_sporadics_defaults_to_global(self):
        text = ONETHIRD.replace('    sporadic: (eq && thr 2/3, true), (thr 2/3, thr 2/3);\n', '')
        _, spec = parse(text)
        self.assertEqual(spec.sporadics, (spec.global_predicate,))


class ParseErrorTests(SimpleTestCase):

    def assertParseError(self, text, line=None):
        with self.assertRaises(ParseError) as cm:
            parse_instance(text)
        if line is not None:
            self.assertEqual(cm.exception.span.line, line)
        return cm.exception

    def test_syntax_error_has_span(self):
        e = self.assertParseError(ONETHIRD.replace('send x1;', 'send x1'))
        assert not e.structural
        assert e.span.line >= 3 and e.span.start > 0

    def test_zero_denominator(self):
        e = self.assertParseError(ONETHIRD.replace('|H| > 2/3 then dec', '|H| > 2/0 then dec'))
        assert 'malformed rational' in e.message

    def test_threshold_out_of_range(self):
        self.assertParseError(ONETHIRD.replace('thr 2/3, thr 2/3', 'thr 3/2, thr 2/3'))

    def test_round_numbering(self):
        e = self.assertParseError(ONETHIRD.replace('round 2', 'round 3'))
        assert e.structural

    def test_wrong_send(self):
        self.assertParseError(ONETHIRD.replace('send x1;', 'send x2;'))
        self.assertParseError(ONETHIRD.replace('send (inp);', 'send x0;'))

    def test_dec_only_in_last_round(self):
        self.assertParseError(ONETHIRD.replace('x1 := inp := smor(H);\n        if mult',
            'dec := smor(H);\n        if mult'))

    def test_mixed_inp_updates(self):
        self.assertParseError(ONETHIRD.replace('then x1 := inp := smor(H);\n    }',
            'then x1 := smor(H);\n    }'))

    def test_no_inp_round(self):
        self.assertParseError(ONETHIRD.replace('x1 := inp :=', 'x1 :='))

    def test_predicate_arity(self):
        e = self.assertParseError(ONETHIRD.replace('global: (true, true);', 'global: (true);'))
        assert e.structural

    def test_ls_atom_on_every_round(self):
        self.assertParseError(ONETHIRD.replace('(thr 2/3, thr 2/3)', '(ls, thr 2/3)'))

    def test_missing_file(self):
        with self.assertRaises(OSError):
            parse_file('/nonexistent/file.ho')


class PrettyTests(SimpleTestCase):

    def test_round_trip_on_corpus(self):
        files = corpus_files()
        assert files
        for path in files:
            instance = parse_file(path)
            text = pretty_instance(instance)
            self.assertEqual(parse_instance(text), instance, path)
            self.assertEqual(pretty_instance(parse_instance(text)), text, path)

    def test_pretty_onethird(self):
        text = pretty(*parse(ONETHIRD))
        assert text.startswith('algorithm "OneThird" {\n    round 1 {\n        send (inp);\n')
        assert '        if uni(H) && |H| > 2/3 then dec := smor(H);\n' in text
        assert '    sporadic: (eq && thr 2/3, true), (thr 2/3, thr 2/3);\n' in text
