import io
import json
import os
import random
import tempfile
import unittest
import unittest.mock

from hypothesis import given, settings
import hypothesis.strategies as st

import text_circuits
from text_circuits import constants, dot, grammar, hgt, sexpr, translate, txc, utils
from text_circuits.circuit import (CircuitConfig, GateCore, HoleBox, Instance, NounWire, TextCircuit, canonicalise,
                                   composePar, composeSeq, equal, freeGenerate, normalise, permutedWires,
                                   validateCircuit)
from text_circuits.derivation import HybridText, NounOccurrence, Phrase, PronominalLink, Sentence, npPaths, pairKind
from text_circuits.diagram import validateDiagram
from text_circuits.enums import BoxKind, GateKind, IssueCode, LinkKind, NodeKind, PairKind, RuleName, SliceKind, WireType, WordClass
from text_circuits.exceptions import (CyclicLink, IncompatibleOptionsError, InvalidCircuitError, InvalidLexiconError,
                                      InvalidTextError, PreconditionViolation, ReferentClash, SexprError,
                                      UnknownPassiveForm, UntextualisableError)
from text_circuits.extensions import applyExtensions, reduceIng, reducePassive, reducePossessive
from text_circuits.grammar import GeneratorConfig
from text_circuits.lexicon import Lexicon, defaultLexicon
from text_circuits.rewrite import (CompileOptions, compile, compileTraced, eliminateLinks, enumerateOrders,
                                   normaliseGates, orderChooser, reduceDiagram, reduceScopes, shrinkReflexive,
                                   toCircuit)
from text_circuits.textualise import fromSlices, sliceCircuit, textualise, textualiseWithLexicon

EXAMPLES = 'example-files'
FULL = os.getenv(constants.ENV_FULL_TESTS) == '1'
SEEDS = 1000 if FULL else 60


def example(name):
    return os.path.join(EXAMPLES, name)


def loadText(name):
    return hgt.load(example(name))


def compileFile(name, **kwargs):
    text, lexicon = loadText(name)
    return compile(text, lexicon, CompileOptions(**kwargs))


def parseText(data):
    return hgt.loads(data)[0]


def wires(*pairs):
    return [NounWire(x, y) for x, y in pairs]


class SexprTestCase(unittest.TestCase):

    def test_nested(self):
        self.assertEqual(sexpr.loads('(a (b 1) c)'), [['a', ['b', 1], 'c']])

    def test_unbalanced(self):
        with self.assertRaises(SexprError):
            sexpr.loads('(a (b)')

    def test_stray_close(self):
        with self.assertRaises(SexprError):
            sexpr.loads('a)')

    def test_comments_and_blank(self):
        self.assertEqual(sexpr.loads(''), [])
        self.assertEqual(sexpr.loads('; nothing here\n'), [])


class LexiconTestCase(unittest.TestCase):

    def test_reserved_present(self):
        lexicon = Lexicon()
        self.assertIs(lexicon.classOf(constants.EXISTS), WordClass.IV)
        self.assertIs(lexicon.classOf(constants.OWNS), WordClass.TV)
        self.assertIs(lexicon.classOf(constants.AMPERSAND), WordClass.CNJ)
        self.assertEqual(lexicon.activeForm(constants.OWNED), constants.OWNS)

    def test_homonym_rejected(self):
        with self.assertRaises(InvalidLexiconError):
            Lexicon([('BANK', WordClass.N), ('BANK', WordClass.IV)])

    def test_suffixed_homonyms(self):
        lexicon = Lexicon([('BANK-1', WordClass.N), ('BANK-2', WordClass.IV)])
        self.assertIs(lexicon.classOf('BANK-2'), WordClass.IV)

    def test_passive_needs_tv(self):
        with self.assertRaises(InvalidLexiconError):
            Lexicon([('RUNS', WordClass.IV, 'RUN')])

    def test_default(self):
        lexicon = defaultLexicon()
        self.assertEqual(lexicon.passiveForm('LIKES'), 'LIKED')
        self.assertIsNone(lexicon.activeForm('RUNS'))
        self.assertIn('ALICE', lexicon.tokens(WordClass.N))
        self.assertNotIn(constants.EXISTS, lexicon.tokens(WordClass.IV))

    def test_extended(self):
        lexicon = defaultLexicon().extended([('ZED', WordClass.N)])
        self.assertIs(lexicon.classOf('ZED'), WordClass.N)
        self.assertEqual(lexicon.passiveForm('HATES'), 'HATED')


class HgtTestCase(unittest.TestCase):

    def test_load_example(self):
        text, lexicon = loadText('relative-split.hgt')
        self.assertIsNone(lexicon)
        self.assertEqual(len(text.clauses), 2)
        self.assertEqual(text.links[0].chain, (NounOccurrence(0, 1), NounOccurrence(1, 0)))
        self.assertEqual(text.token(NounOccurrence(1, 0)), 'ALICE')

    def test_dumps_is_stable(self):
        text, _ = loadText('relative-fused.hgt')
        printed = hgt.dumps(text)
        self.assertEqual(hgt.dumps(hgt.loads(printed)[0]), printed)

    def test_lexicon_section(self):
        text, lexicon = hgt.loads('(text (lexicon (ZED n) (ZAPS tv ZAPPED)) (s (iv (np ZED) EXISTS)))')
        self.assertIs(lexicon.classOf('ZAPS'), WordClass.TV)
        self.assertEqual(lexicon.activeForm('ZAPPED'), 'ZAPS')
        self.assertFalse(grammar.validate(text, lexicon))

    def test_empty(self):
        text, lexicon = hgt.loads('')
        self.assertEqual(text.items, ())

    def test_malformed(self):
        for data in ('(text (s (iv (np ALICE) RUNS))', '(text (s (bogus ALICE)))', '(notatext)', '(text (link odd (0 0) (0 1)))'):
            with self.subTest(data = data):
                with self.assertRaises(InvalidTextError):
                    hgt.loads(data)


class GrammarTestCase(unittest.TestCase):

    def test_valid(self):
        for name in ('alice-runs.hgt', 'relative-split.hgt', 'relative-fused.hgt', 'laughs-at-himself.hgt',
                     'shared-conjunction.hgt', 'possessive.hgt', 'passive.hgt', 'tells-drinks-likes.hgt'):
            with self.subTest(name = name):
                text, lexicon = loadText(name)
                self.assertFalse(grammar.validate(text, lexicon))

    def test_unknown_token(self):
        report = grammar.validate(parseText('(text (s (iv (np ZORK) RUNS)))'))
        self.assertTrue(report.has(IssueCode.UNKNOWN_TOKEN))

    def test_wrong_class(self):
        report = grammar.validate(parseText('(text (s (iv (np ALICE) LIKES)))'))
        self.assertTrue(report)

    def test_link_must_be_same_noun(self):
        text = parseText('(text (s (iv (np ALICE) RUNS)) (s (iv (np BOB) RUNS)) (link regular (0 0) (1 0)))')
        self.assertTrue(grammar.validate(text).has(IssueCode.BAD_LINK))

    def test_extensions_off(self):
        text, lexicon = loadText('passive.hgt')
        self.assertTrue(grammar.validate(text, lexicon, extensions = False))

    def test_yield(self):
        text, _ = loadText('relative-split.hgt')
        self.assertEqual(grammar.yieldText(text), 'BOB LIKES ALICE. ALICE RUNS.')

    def test_surface_that(self):
        text = parseText('(text (s (scv (np CLAIRE) SEES (scope (cnj (scope (iv (np ALICE) RUNS)) [&] '
                         '(scope (iv (np BOB) DRINKS)))))))')
        self.assertEqual(grammar.yieldText(text), 'CLAIRE SEES [THAT] ALICE RUNS [&] [THAT] BOB DRINKS.')
        self.assertEqual(grammar.yieldText(text, surface = True), 'CLAIRE SEES THAT ALICE RUNS AND ALSO THAT BOB DRINKS.')

    def test_pair_kinds(self):
        text, _ = loadText('laughs-at-himself.hgt')
        self.assertIs(pairKind(text, NounOccurrence(0, 0), NounOccurrence(0, 1)), PairKind.REFLEXIVE)
        text, _ = loadText('shared-conjunction.hgt')
        self.assertIs(pairKind(text, NounOccurrence(0, 0), NounOccurrence(0, 1)), PairKind.SHARED)
        text, _ = loadText('relative-split.hgt')
        self.assertIs(pairKind(text, NounOccurrence(0, 1), NounOccurrence(1, 0)), PairKind.SEQUENTIAL)

    def test_np_order(self):
        clause = Phrase('tv', (Phrase('np', ('BOB',)), Phrase('adp', ('LIKES', 'WITH', Phrase('np', ('BEER',)))),
                               Phrase('np', ('ALICE',))))
        self.assertEqual([clause.at(x).children[0] for x in npPaths(clause)], ['BOB', 'ALICE', 'BEER'])

    def test_fusion(self):
        text, _ = loadText('relative-split.hgt')
        fused = grammar.fuseSubjectRelative(text, text.links[0])
        self.assertEqual(fused.clauses, text.clauses)
        self.assertEqual(grammar.decomposeRelativePronouns(fused), text)
        self.assertFalse(grammar.validate(fused))

    def test_special_subject_fusion(self):
        text = parseText('(text (s (is (np ALICE) SOBER)) (s (tv (np ALICE) LIKES (np BEER)))'
                         ' (link regular (0 0) (1 0)))')
        fused = grammar.fuseSubjectRelativeSpecial(text, text.links[0])
        self.assertFalse(grammar.validate(fused))
        structured = grammar.yieldText(fused)
        self.assertIn('!', structured)
        self.assertIn('WHO', structured)
        self.assertNotIn('!', grammar.yieldText(fused, surface = True))
        self.assertTrue(equal(compile(fused), compile(text)))

    def test_fusion_roles(self):
        text, _ = loadText('relative-split.hgt')
        with self.assertRaises(PreconditionViolation):
            grammar.fuseObjectRelative(text, text.links[0])

    def test_fusion_order(self):
        text, _ = loadText('relative-split.hgt')
        fused = grammar.fuseSubjectRelative(text, text.links[0])
        twice = grammar.fuseSubjectRelative(fused, fused.links[0])
        self.assertTrue(grammar.checkFusionOrder(twice).has(IssueCode.UNGRAMMATICAL_FUSION))

    def test_reflexive_after_subject_fusion(self):
        text = parseText('(text (s (tv (np ALICE) LIKES (np BOB))) (s (tv (np BOB) HATES (np BOB)))'
                         ' (link regular (0 1) (1 0) (1 1)))')
        fused = grammar.fuseSubjectRelative(text, (NounOccurrence(0, 1), NounOccurrence(1, 0)))
        self.assertFalse(grammar.checkFusionOrder(fused))
        late = grammar.introduceReflexive(fused, (NounOccurrence(1, 0), NounOccurrence(1, 1)))
        self.assertTrue(grammar.checkFusionOrder(late).has(IssueCode.UNGRAMMATICAL_FUSION))
        early = grammar.introduceReflexive(text, (NounOccurrence(1, 0), NounOccurrence(1, 1)))
        self.assertFalse(grammar.checkFusionOrder(early))

    def test_double_passive(self):
        text = parseText('(text (s (tv (np ALICE) (psv (psv LIKED)) (np BOB))))')
        self.assertTrue(grammar.validate(text).has(IssueCode.RULE_MISMATCH))
        with self.assertRaises(InvalidTextError):
            compile(text)

    def test_subject_relative_yield(self):
        text = parseText('(text (s (tv (np ALICE) LIKES (np BOB))) (s (tv (np BOB) HATES (np CLAIRE)))'
                         ' (link regular (0 1) (1 0)))')
        fused = grammar.fuseSubjectRelative(text, text.links[0])
        self.assertEqual(grammar.yieldText(fused), 'ALICE LIKES BOB WHO HATES CLAIRE.')
        self.assertEqual(grammar.decomposeRelativePronouns(fused), text)

    def test_object_relative_yield(self):
        text = parseText('(text (s (tv (np ALICE) LIKES (np BOB))) (s (tv (np CLAIRE) (adp GIVES TO (np BOB)) (np BEER)))'
                         ' (link regular (0 1) (1 2)))')
        fused = grammar.fuseObjectRelative(text, text.links[0])
        self.assertFalse(grammar.validate(fused))
        self.assertEqual(grammar.yieldText(fused), 'ALICE LIKES BOB THAT CLAIRE GIVES BEER TO ␣.')
        self.assertTrue(equal(compile(fused), compile(text)))

    @given(st.integers(min_value = 0, max_value = 10 ** 6))
    @settings(max_examples = 40, deadline = None)
    def test_generated_texts_validate(self, seed):
        text = grammar.generate(seed)
        self.assertFalse(grammar.validate(text, extensions = False))
        self.assertEqual(grammar.generate(seed), text)

    @given(st.integers(min_value = 0, max_value = 10 ** 6))
    @settings(max_examples = 25, deadline = None)
    def test_generated_extension_texts_validate(self, seed):
        self.assertFalse(grammar.validate(grammar.generate(seed, GeneratorConfig(extensions = True))))


class DiagramTestCase(unittest.TestCase):

    def test_single_clause(self):
        text, _ = loadText('alice-runs.hgt')
        d = translate.fromText(text)
        self.assertFalse(validateDiagram(d))
        self.assertEqual(d.count(NodeKind.LABEL), 1)
        self.assertEqual(d.count(NodeKind.IV_INTRO), 1)
        self.assertEqual([x.label for x in d.inputs], ['ALICE'])

    def test_shared_link(self):
        text, _ = loadText('shared-conjunction.hgt')
        d = translate.fromText(text)
        self.assertFalse(validateDiagram(d))
        self.assertEqual(d.count(NodeKind.LINK_OUT), 1)
        self.assertEqual(d.count(NodeKind.LINK_IN), 1)

    def test_copy_is_independent(self):
        text, _ = loadText('alice-runs.hgt')
        d = translate.fromText(text)
        e = d.copy()
        e.removeNode(next(iter(e.nodes)))
        self.assertNotEqual(len(d.nodes), len(e.nodes))

    def test_scope_leak(self):
        d = translate.fromText(parseText('(text (s (scv (np CLAIRE) SEES (scope (iv (np ALICE) RUNS)))))'))
        self.assertFalse(validateDiagram(d))
        label = next(x for x in d.nodes.values() if x.kind is NodeKind.LABEL and x.token == 'RUNS')
        self.assertIsNotNone(label.region)
        label.region = None
        self.assertTrue(validateDiagram(d).has(IssueCode.SCOPE_LEAK))

    def test_unbalanced_nouns(self):
        text, _ = loadText('alice-runs.hgt')
        d = translate.fromText(text)
        output = next(x for x in d.wires.values() if x.type is WireType.NP and x.target is None)
        output.referent = output.referent + '-other'
        self.assertTrue(validateDiagram(d).has(IssueCode.UNBALANCED_NP))

    def test_dissolve_region(self):
        d = translate.fromText(parseText('(text (s (scv (np CLAIRE) SEES (scope (scv (np ALICE) THINKS '
                                         '(scope (iv (np BOB) RUNS)))))))'))
        regionId = next(x for x, y in d.regions.items() if y.kind.isScope and y.parent is None)
        inside = d.members(regionId)
        children = d.children(regionId)
        self.assertTrue(inside)
        self.assertEqual(len(children), 1)
        region = d.dissolveRegion(regionId)
        self.assertIsNone(region.parent)
        self.assertNotIn(regionId, d.regions)
        self.assertTrue(all(d.nodes[x].region is None for x in inside))
        self.assertIsNone(d.regions[children[0]].parent)


class RewriteTestCase(unittest.TestCase):

    def test_single_gate(self):
        c = compileFile('alice-runs.hgt')
        self.assertEqual(len(c.instances), 1)
        self.assertEqual(c.instances[0].op, GateCore.verb('RUNS', 1))
        self.assertTrue(equal(c, txc.load(example('alice-runs.txc'))))

    def test_empty(self):
        self.assertEqual(len(compile(HybridText())), 0)

    def test_stages_in_order(self):
        text, _ = loadText('laughs-at-himself.hgt')
        d = translate.fromText(text)
        d, links = eliminateLinks(d)
        self.assertEqual(d.countWires(WireType.PRONLINK), 0)
        self.assertEqual(links.rules(), [RuleName.REFLEX_INTRO])
        d, reflexive = shrinkReflexive(d)
        d, gates = normaliseGates(d)
        self.assertIn(RuleName.REFLEX_CONTRACT, gates.rules())
        d, scopes = reduceScopes(d)
        self.assertEqual(len(scopes), 0)

    def test_reflexive(self):
        c = compileFile('laughs-at-himself.hgt')
        self.assertTrue(equal(c, txc.load(example('laughs-at-himself.txc'))))
        op = c.instances[0].op
        self.assertIs(op.kind, BoxKind.REFLEXIVE)
        self.assertEqual(op.pairs, ((0, 1),))

    def test_top_level_reflexive(self):
        c = compile(parseText('(text (s (tv (np BOB) LIKES (np BOB))) (link reflexive (0 0) (0 1)))'))
        self.assertFalse(validateCircuit(c))
        self.assertEqual(len(c.wires), 1)
        self.assertEqual(len(c.instances), 1)
        op = c.instances[0].op
        self.assertIs(op.kind, BoxKind.REFLEXIVE)
        self.assertEqual(op.pairs, ((0, 1),))
        self.assertEqual(op.inner.token, 'LIKES')

    def test_reflexive_after_sequential(self):
        text = parseText('(text (s (iv (np BOB) DRINKS)) (s (tv (np BOB) LIKES (np BOB)))'
                         ' (link regular (0 0) (1 0) (1 1)))')
        reference = compile(text)
        self.assertEqual(len(reference.wires), 1)
        ops = [x.op for x in reference.instances]
        self.assertEqual([x.kind for x in ops], [GateKind.VERB, BoxKind.REFLEXIVE])
        self.assertEqual(ops[0].token, 'DRINKS')
        self.assertEqual(ops[1].pairs, ((0, 1),))
        d = translate.fromText(text)
        orders = list(enumerateOrders(d))
        self.assertEqual(len(orders), 1)
        for order in orders:
            self.assertTrue(equal(toCircuit(d, orderChooser(order)), reference))

    def test_shrinking_gives_one_box_per_gate(self):
        text, lexicon = loadText('tells-drinks-likes.hgt')
        self.assertIs(lexicon.classOf('TELLS'), WordClass.TV)
        c = compile(text, lexicon)
        self.assertFalse(validateCircuit(c))
        self.assertEqual(len(c.wires), 1)
        ops = [x.op for x in c.instances]
        self.assertEqual([x.kind for x in ops], [BoxKind.REFLEXIVE, GateKind.VERB, BoxKind.REFLEXIVE])
        self.assertEqual((ops[0].inner.token, ops[0].k, ops[0].pairs), ('TELLS', 3, ((0, 1), (0, 2))))
        self.assertEqual(ops[1].token, 'DRINKS')
        self.assertEqual((ops[2].inner.token, ops[2].pairs), ('LIKES', ((0, 1),)))
        d = translate.fromText(text)
        for order in enumerateOrders(d):
            self.assertTrue(equal(toCircuit(d, orderChooser(order)), c))

    def test_reflexive_link_orders_agree(self):
        found = 0
        for seed in range(20000):
            text = grammar.generate(seed)
            if len(text.links) > 3:
                continue
            d = translate.fromText(text)
            links = [x for x in d.wires.values() if x.type is WireType.PRONLINK]
            if not any(x.reflexive for x in links) or len(links) > 4:
                continue
            reference = compile(text)
            for order in enumerateOrders(d):
                with self.subTest(seed = seed, order = order):
                    self.assertTrue(equal(toCircuit(d, orderChooser(order)), reference))
            found += 1
            if found == 50:
                break
        self.assertEqual(found, 50)

    def test_scope_pairs_differ(self):
        inside = parseText('(text (s (scv (np CLAIRE) SEES (scope (cnj (scope (iv (np ALICE) RUNS)) [&] '
                           '(scope (iv (np BOB) DRINKS)))))))')
        outside = parseText('(text (s (cnj (scope (scv (np CLAIRE) SEES (scope (iv (np ALICE) RUNS)))) [&] '
                            '(scope (iv (np BOB) DRINKS)))))')
        self.assertFalse(equal(compile(inside), compile(outside)))

    def test_reduced_diagrams_have_no_regions(self):
        for seed in range(SEEDS):
            with self.subTest(seed = seed):
                d, _ = reduceDiagram(translate.fromText(grammar.generate(seed)))
                self.assertFalse(d.regions)
                self.assertTrue(all(x.region is None for x in d.nodes.values()))

    def test_fusion_is_invisible(self):
        self.assertTrue(equal(compileFile('relative-split.hgt'), compileFile('relative-fused.hgt')))

    def test_shared_conjunction(self):
        c = compileFile('shared-conjunction.hgt')
        self.assertEqual(len(c.wires), 1)
        op = c.instances[0].op
        self.assertIs(op.kind, BoxKind.CNJ)
        self.assertEqual(op.token, 'BUT')
        self.assertEqual(op.left.referents, op.right.referents)

    def test_trace(self):
        text, _ = loadText('relative-split.hgt')
        c, trace = compileTraced(text)
        self.assertIn(RuleName.LINK_ELIM_1, trace.rules())
        for line in trace.toLines():
            self.assertTrue(line.startswith('STEP '))
            self.assertIn('measure=', line)
        self.assertEqual(len(trace.toLines()), len(trace))

    def test_link_stage_rules(self):
        text, lexicon = loadText('tells-drinks-likes.hgt')
        _, trace = compileTraced(text, lexicon)
        rules = {x.rule for x in trace.steps() if x.stage == 'links'}
        self.assertTrue(rules)
        self.assertLessEqual(rules, {RuleName.LINK_ELIM_1, RuleName.LINK_ELIM_2})
        self.assertTrue(all(x.value != 'LinkElimTwistL' and x.value != 'LinkElimTwistR' for x in RuleName))

    def test_trace_replays(self):
        text, _ = loadText('laughs-at-himself.hgt')
        _, trace = compileTraced(text)
        d = trace.replay(translate.fromText(text))
        self.assertTrue(all(x.kind in (NodeKind.GATE, NodeKind.BOX) for x in d.nodes.values()))

    def test_invalid_text(self):
        with self.assertRaises(InvalidTextError) as cm:
            compile(parseText('(text (s (iv (np ZORK) RUNS)))'))
        self.assertTrue(cm.exception.report.has(IssueCode.UNKNOWN_TOKEN))

    def test_link_orders_agree(self):
        text = parseText('(text (s (tv (np ALICE) LIKES (np BOB))) (s (iv (np BOB) RUNS)) (s (tv (np ALICE) HATES (np BOB)))'
                         ' (link regular (0 0) (2 0)) (link regular (0 1) (1 0) (2 1)))')
        reference = compile(text)
        d = translate.fromText(text)
        orders = list(enumerateOrders(d))
        self.assertEqual(len(orders), 6)
        for order in orders:
            self.assertTrue(equal(toCircuit(d, orderChooser(order)), reference))

    @given(st.integers(min_value = 0, max_value = 10 ** 6))
    @settings(max_examples = 30, deadline = None)
    def test_random_choices_agree(self, seed):
        text = grammar.generate(seed)
        reference = compile(text)
        self.assertTrue(equal(compile(text, options = CompileOptions(rng = random.Random(seed))), reference))

    def test_generated_texts_compile(self):
        for seed in range(SEEDS):
            with self.subTest(seed = seed):
                c = compile(grammar.generate(seed, GeneratorConfig(extensions = True)))
                self.assertFalse(validateCircuit(c))


class ExtensionsTestCase(unittest.TestCase):

    def test_passive(self):
        self.assertTrue(equal(compileFile('passive.hgt'), compileFile('passive-active.hgt')))

    def test_passive_opener_is_bypassed(self):
        text, _ = loadText('passive.hgt')
        d, steps = reducePassive(translate.fromText(text))
        self.assertEqual([x.rule for x in steps], [RuleName.PASSIVE_REDUCE])
        self.assertFalse(d.count(NodeKind.PSV_OPEN))
        self.assertFalse(d.countWires(WireType.TVP_PSV))
        self.assertFalse(validateDiagram(d))

    def test_passive_in_scope(self):
        passive = parseText('(text (s (cnj (scope (tv (np ALICE) (psv LIKED) (np BOB))) SO (scope (iv (np CLAIRE) RUNS)))))')
        active = parseText('(text (s (cnj (scope (tv (np BOB) LIKES (np ALICE))) SO (scope (iv (np CLAIRE) RUNS)))))')
        self.assertTrue(equal(compile(passive), compile(active)))

    def test_copular_gerund(self):
        ing = parseText('(text (s (is (np ALICE) (ing DANCES))))')
        plain = parseText('(text (s (iv (np ALICE) DANCES)))')
        self.assertTrue(equal(compile(ing), compile(plain)))

    def test_possessive(self):
        self.assertTrue(equal(compileFile('possessive.hgt'), compileFile('possessive-split.hgt')))

    def test_gerund(self):
        ing = parseText('(text (s (iv (np BOB) RUNS)) (s (iv (adj (ing DANCES) (np ALICE)) LAUGHS)))')
        plain = parseText('(text (s (iv (np BOB) RUNS)) (s (iv (np ALICE) DANCES)) (s (iv (np ALICE) LAUGHS))'
                          ' (link regular (1 0) (2 0)))')
        self.assertTrue(equal(compile(ing), compile(plain)))

    def test_gerund_becomes_verb(self):
        text = parseText('(text (s (iv (adj (ing DANCES) (np ALICE)) LAUGHS)))')
        d, steps = reduceIng(translate.fromText(text))
        self.assertEqual([x.rule for x in steps], [RuleName.ING_REDUCE])
        self.assertEqual(d.count(NodeKind.ING), 0)
        self.assertEqual(d.count(NodeKind.IV_INTRO), 2)

    def test_possessive_adds_owns(self):
        text, _ = loadText('possessive.hgt')
        d, steps = reducePossessive(translate.fromText(text))
        self.assertEqual(len(steps), 1)
        self.assertEqual(d.count(NodeKind.POSS_OUT, NodeKind.POSS_IN), 0)
        self.assertEqual(d.countWires(WireType.POSSLINK), 0)

    def test_unknown_participle(self):
        text, _ = loadText('passive.hgt')
        d = translate.fromText(text)
        with self.assertRaises(UnknownPassiveForm):
            reducePassive(d, Lexicon([('ALICE', 'n'), ('BOB', 'n')]))

    def test_extension_steps_traced(self):
        text, lexicon = loadText('possessive.hgt')
        d, steps = applyExtensions(translate.fromText(text), lexicon)
        self.assertEqual([x.rule for x in steps], [RuleName.POSSESSIVE_REDUCE])
        self.assertEqual(d.count(NodeKind.POSS_OUT), 0)


class CircuitTestCase(unittest.TestCase):

    def setUp(self):
        self.ab = wires(('a', 'ALICE'), ('b', 'BOB'))

    def test_equal_up_to_renaming(self):
        c1 = TextCircuit.fromSequence(self.ab, [Instance(GateCore.verb('LIKES', 2), ('a', 'b'))])
        c2 = TextCircuit.fromSequence(wires(('y', 'BOB'), ('x', 'ALICE')), [Instance(GateCore.verb('LIKES', 2), ('x', 'y'))])
        self.assertTrue(equal(c1, c2))
        self.assertEqual(canonicalise(c1), canonicalise(c2))

    def test_argument_order_matters(self):
        c1 = TextCircuit.fromSequence(self.ab, [Instance(GateCore.verb('LIKES', 2), ('a', 'b'))])
        c2 = TextCircuit.fromSequence(self.ab, [Instance(GateCore.verb('LIKES', 2), ('b', 'a'))])
        self.assertFalse(equal(c1, c2))

    def test_parallel_order_is_free(self):
        g1 = Instance(GateCore.verb('RUNS'), ('a',))
        g2 = Instance(GateCore.verb('LAUGHS'), ('b',))
        self.assertTrue(equal(TextCircuit.fromSequence(self.ab, [g1, g2]), TextCircuit.fromSequence(self.ab, [g2, g1])))

    def test_sequential_order_matters(self):
        g1 = Instance(GateCore.verb('RUNS'), ('a',))
        g2 = Instance(GateCore.verb('LAUGHS'), ('a',))
        one = wires(('a', 'ALICE'))
        self.assertFalse(equal(TextCircuit.fromSequence(one, [g1, g2]), TextCircuit.fromSequence(one, [g2, g1])))

    def test_exists_is_identity(self):
        bare = TextCircuit.fromSequence(wires(('a', 'ALICE')), [])
        exists = TextCircuit.fromSequence(wires(('a', 'ALICE')), [Instance(GateCore.exists(), ('a',))])
        self.assertTrue(equal(bare, exists))

    def test_composition(self):
        c1 = TextCircuit.fromSequence(wires(('a', 'ALICE')), [Instance(GateCore.verb('RUNS'), ('a',))])
        c2 = TextCircuit.fromSequence(self.ab, [Instance(GateCore.verb('LIKES', 2), ('a', 'b'))])
        seq = composeSeq(c1, c2)
        self.assertEqual(seq.events['a'], (0, 1))
        with self.assertRaises(ReferentClash):
            composePar(c1, c2)
        par = composePar(c1, TextCircuit.fromSequence(wires(('b', 'BOB')), [Instance(GateCore.verb('RUNS'), ('b',))]))
        self.assertEqual(len(par.wires), 2)

    def test_sequential_swap_changes_canonical(self):
        g1 = Instance(GateCore.verb('RUNS'), ('a',))
        g2 = Instance(GateCore.verb('LIKES', 2), ('a', 'b'))
        self.assertNotEqual(canonicalise(TextCircuit.fromSequence(self.ab, [g1, g2])),
                            canonicalise(TextCircuit.fromSequence(self.ab, [g2, g1])))

    def test_compose_seq_associative(self):
        c1 = TextCircuit.fromSequence(wires(('a', 'ALICE')), [Instance(GateCore.verb('RUNS'), ('a',))])
        c2 = TextCircuit.fromSequence(self.ab, [Instance(GateCore.verb('LIKES', 2), ('a', 'b'))])
        c3 = TextCircuit.fromSequence(wires(('b', 'BOB')), [Instance(GateCore.verb('LAUGHS'), ('b',))])
        self.assertTrue(equal(composeSeq(composeSeq(c1, c2), c3), composeSeq(c1, composeSeq(c2, c3))))

    @given(st.integers(min_value = 0, max_value = 10 ** 6), st.integers(min_value = 0, max_value = 1000),
           st.integers(min_value = 0, max_value = 1000))
    @settings(max_examples = 30, deadline = None)
    def test_equal_is_symmetric_and_transitive(self, seed, first, second):
        c1 = freeGenerate(seed)
        c2 = permutedWires(c1, random.Random(first))
        c3 = permutedWires(c2, random.Random(second))
        self.assertEqual(equal(c1, c2), equal(c2, c1))
        self.assertTrue(equal(c1, c2) and equal(c2, c3))
        self.assertTrue(equal(c1, c3))
        other = freeGenerate(seed + 1)
        self.assertEqual(equal(c1, other), equal(other, c1))
        self.assertEqual(equal(c3, other), equal(c1, other))

    def test_label_clash(self):
        c1 = TextCircuit.fromSequence(wires(('a', 'ALICE')), [])
        c2 = TextCircuit.fromSequence(wires(('a', 'BOB')), [])
        with self.assertRaises(ReferentClash):
            composeSeq(c1, c2)

    def test_validation(self):
        c = TextCircuit.fromSequence(self.ab, [Instance(GateCore.verb('LIKES', 2), ('a', 'a'))])
        self.assertTrue(validateCircuit(c).has(IssueCode.DUPLICATE_ARG))
        c = TextCircuit.fromSequence(self.ab, [Instance(GateCore.verb('LIKES', 2), ('a',))])
        self.assertTrue(validateCircuit(c))
        c = TextCircuit(self.ab, [], outputs = ('b', 'a'))
        self.assertTrue(validateCircuit(c).has(IssueCode.WIRE_ORDER_VIOLATION))

    @given(st.integers(min_value = 0, max_value = 10 ** 6))
    @settings(max_examples = 50, deadline = None)
    def test_free_circuits_validate(self, seed):
        c = freeGenerate(seed)
        self.assertFalse(validateCircuit(c))
        self.assertEqual(freeGenerate(seed), c)

    @given(st.integers(min_value = 0, max_value = 10 ** 6), st.integers(min_value = 0, max_value = 1000))
    @settings(max_examples = 50, deadline = None)
    def test_permutation_invariance(self, seed, shuffle):
        c = freeGenerate(seed)
        self.assertTrue(equal(c, permutedWires(c, random.Random(shuffle))))


class TxcTestCase(unittest.TestCase):

    def test_worked_circuit(self):
        c = txc.load(example('worked-textualisation.txc'))
        self.assertEqual(c.referents, ('a', 'b', 'c', 'd', 'e'))
        sees, tells, laughs = c.instances
        self.assertIs(sees.op.kind, BoxKind.SCV)
        self.assertEqual(sees.op.hole.referents, ('b', 'c'))
        self.assertEqual(tells.op.arity, 2)
        self.assertEqual(laughs.op.inner.adpositions, ('AT',))

    def test_reprint(self):
        with open(example('worked-textualisation.txc'), encoding = 'utf-8') as f:
            data = f.read()
        c = txc.loads(data)
        self.assertEqual(txc.dumps(txc.loads(txc.dumps(c))), txc.dumps(c))
        self.assertTrue(equal(txc.loads(txc.dumps(c)), c))

    def test_malformed(self):
        for data in ('txc 2\nend\n', 'txc 1\nwire a ALICE\ngate adj DRUNK a\nend\n', 'txc 1\nwire a ALICE\n'):
            with self.subTest(data = data):
                with self.assertRaises(InvalidCircuitError):
                    txc.loads(data)

    def test_invalid_circuit(self):
        with self.assertRaises(InvalidCircuitError) as cm:
            txc.loads('txc 1\nwire a ALICE\ngate verb LIKES 2 : a\nend\n')
        self.assertTrue(cm.exception.report)


class TextualiseTestCase(unittest.TestCase):

    def test_worked_example(self):
        c = txc.load(example('worked-textualisation.txc'))
        text, lexicon = textualiseWithLexicon(c)
        self.assertFalse(grammar.validate(text, lexicon))
        self.assertEqual(len(text.items), 2)
        self.assertEqual(grammar.yieldText(text, surface = True),
                         'ALICE SEES THAT BOB IS DRUNK AND ALSO THAT CLAIRE EXISTS. '
                         'ALICE TELLS CLAIRE THAT DENNIS HATES DEE AND ALSO THAT DEE LIKES DENNIS, BOB LAUGHS AT BOB.')
        self.assertTrue(equal(compile(text, lexicon), c))

    def test_single_wire(self):
        c = TextCircuit.fromSequence(wires(('a', 'ALICE')), [])
        text = textualise(c)
        self.assertEqual(grammar.yieldText(text), 'ALICE EXISTS.')

    def test_empty(self):
        self.assertEqual(textualise(TextCircuit()).items, ())

    def test_empty_hole(self):
        hole = TextCircuit()
        c = TextCircuit.fromSequence(wires(('a', 'ALICE')), [Instance(HoleBox.scv('SEES', 1, hole), ('a',))])
        with self.assertRaises(UntextualisableError):
            textualise(c)

    def test_class_conflict(self):
        c = TextCircuit.fromSequence(wires(('a', 'RUNS')), [Instance(GateCore.verb('RUNS'), ('a',))])
        with self.assertRaises(UntextualisableError):
            textualise(c)

    def test_new_tokens(self):
        c = TextCircuit.fromSequence(wires(('a', 'ZED')), [Instance(GateCore.verb('ZAPS'), ('a',))])
        text, lexicon = textualiseWithLexicon(c)
        self.assertIs(lexicon.classOf('ZAPS'), WordClass.IV)
        self.assertTrue(equal(compile(text, lexicon), c))

    def test_slices(self):
        one = wires(('a', 'ALICE'))
        sequential = TextCircuit.fromSequence(one, [Instance(GateCore.verb('RUNS'), ('a',)), Instance(GateCore.verb('LAUGHS'), ('a',))])
        self.assertEqual([x.kind for x in sliceCircuit(sequential)], [SliceKind.GATES, SliceKind.GATES])
        two = wires(('a', 'ALICE'), ('b', 'BOB'))
        parallel = TextCircuit.fromSequence(two, [Instance(GateCore.verb('RUNS'), ('a',)), Instance(GateCore.verb('LAUGHS'), ('b',))])
        slices = sliceCircuit(parallel)
        self.assertEqual(len(slices), 1)
        self.assertEqual(len(slices[0].instances), 2)

    def test_twists(self):
        three = wires(('a', 'ALICE'), ('b', 'BOB'), ('c', 'CLAIRE'))
        c = TextCircuit.fromSequence(three, [Instance(GateCore.verb('LIKES', 2), ('c', 'a')), Instance(GateCore.verb('RUNS'), ('b',))])
        slices = sliceCircuit(c)
        self.assertIn(SliceKind.TWIST, [x.kind for x in slices])
        self.assertTrue(equal(fromSlices(three, slices), c))

    @given(st.integers(min_value = 0, max_value = 10 ** 6))
    @settings(max_examples = 60, deadline = None)
    def test_compile_inverts_textualise(self, seed):
        c = freeGenerate(seed)
        text, lexicon = textualiseWithLexicon(c)
        self.assertFalse(grammar.validate(text, lexicon))
        self.assertTrue(equal(compile(text, lexicon), c))

    def test_roundtrip_sweep(self):
        for seed in range(SEEDS):
            with self.subTest(seed = seed):
                c = freeGenerate(seed, CircuitConfig(maxInstances = 10, maxDepth = 3))
                text, lexicon = textualiseWithLexicon(c)
                self.assertTrue(equal(compile(text, lexicon), c))

    def test_equiv(self):
        split, _ = loadText('relative-split.hgt')
        fused, _ = loadText('relative-fused.hgt')
        other, _ = loadText('alice-runs.hgt')
        self.assertTrue(text_circuits.equiv(split, fused))
        self.assertFalse(text_circuits.equiv(split, other))


class DotTestCase(unittest.TestCase):

    def test_circuit(self):
        out = dot.renderCircuit(txc.load(example('worked-textualisation.txc')))
        self.assertTrue(out.startswith('digraph circuit {\n    rankdir=TB;'))
        self.assertIn('subgraph "cluster_i0"', out)
        self.assertIn('"in_a" -> "i0" [label="ALICE"];', out)
        self.assertTrue(out.endswith('}\n'))
        self.assertEqual(out, dot.renderCircuit(txc.load(example('worked-textualisation.txc'))))

    def test_golden(self):
        with open(example('alice-runs.dot')) as f:
            expected = f.read()
        self.assertEqual(dot.renderCircuit(txc.load(example('alice-runs.txc'))), expected)

    def test_diagram(self):
        text, _ = loadText('shared-conjunction.hgt')
        out = dot.renderDiagram(translate.fromText(text))
        self.assertTrue(out.startswith('digraph diagram {'))
        self.assertIn('label="cnj_left"', out)
        self.assertIn('fillcolor=lightyellow', out)


class CommandLineTestCase(unittest.TestCase):

    def test_options(self):
        args = utils.getCommandArgs(['compile', '--trace', example('alice-runs.hgt')])
        self.assertEqual(args.command, 'compile')
        self.assertTrue(args.trace)
        self.assertEqual(args.format, 'txc')
        self.assertEqual(args.extensions, 'on')

    def test_incompatible(self):
        with self.assertRaises(IncompatibleOptionsError):
            utils.getCommandArgs(['textualise', '--format', 'dot', example('alice-runs.txc')])
        with self.assertRaises(IncompatibleOptionsError):
            utils.getCommandArgs(['compile', '--jobs', '0', example('alice-runs.hgt')])

    def test_runtime_requirements(self):
        with open('requirements.txt') as f:
            packages = [x.split('#')[0].strip() for x in f]
        packages = [x for x in packages if x]
        self.assertTrue(any(x.startswith('networkx') for x in packages))
        self.assertFalse(any(x.startswith('hypothesis') for x in packages))

    def test_dev_implies_verbose(self):
        self.assertTrue(utils.getCommandArgs(['--dev', 'compile', example('alice-runs.hgt')]).verbose)

    def run_main(self, *argv):
        from text_circuits import __main__
        out, err = io.StringIO(), io.StringIO()
        with unittest.mock.patch('sys.argv', ['textcirc'] + list(argv)), \
             unittest.mock.patch('sys.stdout', out), unittest.mock.patch('sys.stderr', err), \
             unittest.mock.patch.object(utils, 'setupLogging'):
            with self.assertRaises(SystemExit) as cm:
                __main__.main()
        return cm.exception.code, out.getvalue(), err.getvalue()

    def test_compile(self):
        code, out, err = self.run_main('compile', example('alice-runs.hgt'))
        self.assertEqual(code, constants.EXIT_OK)
        self.assertTrue(equal(txc.loads(out), txc.load(example('alice-runs.txc'))))

    def test_compile_invalid(self):
        with tempfile.TemporaryDirectory() as folder:
            path = os.path.join(folder, 'bad.hgt')
            with open(path, 'w') as f:
                f.write('(text (s (iv (np ALICE) RUNS))')
            code, out, err = self.run_main('compile', path)
        self.assertEqual(code, constants.EXIT_INPUT_ERROR)
        self.assertEqual(out, '')

    def test_equiv(self):
        code, _, _ = self.run_main('equiv', example('relative-split.hgt'), example('relative-fused.hgt'))
        self.assertEqual(code, constants.EXIT_OK)
        code, _, _ = self.run_main('equiv', example('relative-split.hgt'), example('alice-runs.hgt'))
        self.assertEqual(code, constants.EXIT_NOT_EQUIVALENT)

    def test_textualise(self):
        code, out, _ = self.run_main('textualise', '--surface', example('laughs-at-himself.txc'))
        self.assertEqual(code, constants.EXIT_OK)
        self.assertEqual(out, 'BOB LAUGHS AT BOB.\n')

    def test_roundtrip(self):
        code, out, _ = self.run_main('roundtrip', '--seed', '7', '-n', '20')
        self.assertEqual(code, constants.EXIT_OK)
        self.assertEqual(out, '20/20 pass\n')

    def test_roundtrip_to_file(self):
        with tempfile.TemporaryDirectory() as folder:
            path = os.path.join(folder, 'summary.txt')
            code, out, _ = self.run_main('roundtrip', '--seed', '7', '-n', '5', '-o', path)
            with open(path) as f:
                summary = f.read()
        self.assertEqual(code, constants.EXIT_OK)
        self.assertEqual(out, '')
        self.assertEqual(summary, '5/5 pass\n')

    def test_validate(self):
        code, out, _ = self.run_main('validate', example('alice-runs.hgt'), example('alice-runs.txc'))
        self.assertEqual(code, constants.EXIT_OK)
        self.assertTrue(all(x['valid'] for x in json.loads(out).values()))

    def test_render(self):
        code, out, _ = self.run_main('render', example('alice-runs.txc'))
        self.assertEqual(code, constants.EXIT_OK)
        self.assertTrue(out.startswith('digraph circuit {'))

    def test_gen(self):
        code, out, _ = self.run_main('gen', '--seed', '3', '-n', '2', '--circuits')
        self.assertEqual(code, constants.EXIT_OK)
        self.assertEqual(out.count(constants.TXC_HEADER), 2)


if __name__ == "__main__":
    unittest.main(verbosity=2)
