"""
The hybrid grammar: validation, yields, random generation and the relative
pronoun transformations.
"""

import dataclasses
import logging
import random

from . import constants
from .derivation import Fusion, HybridText, NounOccurrence, Phrase, PronominalLink, SelfIntro, \
     Sentence, crossCount, isPossessed, isSubject, itemClauses, npPaths, pairKind, unitPath
from .enums import FusionKind, IssueCode, LinkKind, PairKind, WordClass
from .exceptions import EmptyLexiconClass, PreconditionViolation
from .lexicon import Lexicon, defaultLexicon
from .validation import ValidationReport


logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())


# Validation.

ARITY = {
    constants.RULE_IV: (2,),
    constants.RULE_TV: (3,),
    constants.RULE_IS: (2,),
    constants.RULE_SCV: (3, 4),
    constants.RULE_CNJ: (3,),
    constants.RULE_SCOPE: (1,),
    constants.RULE_NP: (1,),
    constants.RULE_ADJ: (2,),
    constants.RULE_CROSS: (1,),
    constants.RULE_POSS: (1,),
    constants.RULE_ADV: (2,),
    constants.RULE_ADP: (3,),
    constants.RULE_PSV: (1,),
    constants.RULE_ING: (1,),
}

class _Checker:
    """
    Walks one clause and reports every rule violation.
    """

    def __init__(self, lexicon : Lexicon, report : ValidationReport, clause : int, extensions : bool):
        self.lexicon = lexicon
        self.report = report
        self.clause = clause
        self.extensions = extensions

    def where(self, path):
        return (self.clause,) + tuple(path)

    def mismatch(self, path, message):
        self.report.add(IssueCode.RULE_MISMATCH, message, self.where(path))

    def token(self, value, cls : WordClass, path) -> None:
        if isinstance(value, Phrase):
            self.mismatch(path, f'expected a {cls.value} token, found a phrase')
            return
        found = self.lexicon.classOf(value)
        if found is None:
            self.report.add(IssueCode.UNKNOWN_TOKEN, f'{value} is not in the lexicon', self.where(path))
        elif found is not cls:
            self.mismatch(path, f'{value} is a {found.value}, expected a {cls.value}')

    def phrase(self, node, rules, path) -> bool:
        if not isinstance(node, Phrase):
            self.mismatch(path, f'expected one of {sorted(rules)}, found token {node}')
            return False
        if node.rule not in rules:
            self.mismatch(path, f'expected one of {sorted(rules)}, found {node.rule}')
            return False
        if node.rule in constants.EXTENSION_RULES and not self.extensions:
            self.mismatch(path, f'{node.rule} needs the grammar extensions')
            return False
        arity = ARITY[node.rule]
        if len(node.children) not in arity:
            self.mismatch(path, f'{node.rule} takes {" or ".join(str(x) for x in arity)} children, found {len(node.children)}')
            return False
        return True

    def sentence(self, node, path, depth) -> None:
        if not self.phrase(node, constants.SENTENCE_RULES, path):
            return
        c = node.children
        if node.rule == constants.RULE_IV:
            self.np(c[0], path + (0,), depth, depth)
            self.verbPhrase(c[1], WordClass.IV, path + (1,), depth)
        elif node.rule == constants.RULE_TV:
            self.np(c[0], path + (0,), depth, depth)
            self.verbPhrase(c[1], WordClass.TV, path + (1,), depth)
            self.np(c[2], path + (2,), depth, depth)
        elif node.rule == constants.RULE_IS:
            self.np(c[0], path + (0,), depth, depth)
            self.adjective(c[1], path + (1,))
        elif node.rule == constants.RULE_SCV:
            self.np(c[0], path + (0,), depth, depth)
            self.token(c[1], WordClass.SCV, path + (1,))
            if len(c) == 4:
                self.np(c[2], path + (2,), depth, depth)
            self.scope(c[-1], path + (len(c) - 1,), depth)
        else:
            self.scope(c[0], path + (0,), depth)
            self.token(c[1], WordClass.CNJ, path + (1,))
            self.scope(c[2], path + (2,), depth)

    def scope(self, node, path, depth) -> None:
        if self.phrase(node, {constants.RULE_SCOPE}, path):
            self.sentence(node.children[0], path + (0,), depth + 1)

    def np(self, node, path, depth, budget) -> None:
        if not self.phrase(node, constants.NP_RULES, path):
            return
        if node.rule == constants.RULE_NP:
            self.token(node.children[0], WordClass.N, path + (0,))
        elif node.rule == constants.RULE_ADJ:
            self.adjective(node.children[0], path + (0,))
            self.np(node.children[1], path + (1,), depth, budget)
        elif node.rule == constants.RULE_CROSS:
            if budget <= 0:
                self.report.add(IssueCode.SCOPE_VIOLATION, 'a noun phrase may only cross the border of a scope it is inside', self.where(path))
                return
            self.np(node.children[0], path + (0,), depth, budget - 1)
        else:
            self.np(node.children[0], path + (0,), depth, budget)

    def adjective(self, node, path) -> None:
        if isinstance(node, Phrase):
            if self.phrase(node, {constants.RULE_ING}, path):
                self.verbPhrase(node.children[0], WordClass.IV, path + (0,), 0, gerund = True)
        else:
            self.token(node, WordClass.ADJ, path)

    def verbPhrase(self, node, cls : WordClass, path, depth, passive = False, gerund = False) -> None:
        if not isinstance(node, Phrase):
            if passive:
                if self.lexicon.activeForm(node) is None:
                    self.report.add(IssueCode.UNKNOWN_TOKEN, f'{node} is not a known passive participle', self.where(path))
            else:
                self.token(node, cls, path)
            return
        rules = {constants.RULE_ADV, constants.RULE_ADP}
        if cls is WordClass.TV:
            rules.add(constants.RULE_PSV)
        if not self.phrase(node, rules, path):
            return
        if node.rule == constants.RULE_ADV:
            self.token(node.children[0], WordClass.ADV, path + (0,))
            self.verbPhrase(node.children[1], cls, path + (1,), depth, passive, gerund)
        elif node.rule == constants.RULE_ADP:
            if passive or gerund:
                self.mismatch(path, 'adpositions attach outside passive and gerund phrases')
                return
            self.verbPhrase(node.children[0], cls, path + (0,), depth, passive, gerund)
            self.token(node.children[1], WordClass.ADP, path + (1,))
            self.np(node.children[2], path + (2,), depth, depth)
        else:
            if passive:
                self.mismatch(path, 'the passive construction cannot be applied twice')
                return
            self.verbPhrase(node.children[0], cls, path + (0,), depth, True, gerund)


def _checkItem(item, report : ValidationReport, where) -> None:
    if isinstance(item, Sentence):
        if not isinstance(item.body, Phrase):
            report.add(IssueCode.RULE_MISMATCH, 'sentence body must be a phrase', where)
        return
    if isinstance(item, Fusion):
        if not isinstance(item.kind, FusionKind) or len(item.pair) != 2 or len(item.items) not in (1, 2):
            report.add(IssueCode.RULE_MISMATCH, 'malformed relative pronoun record', where)
        for x in item.items:
            _checkItem(x, report, where)
        return
    if isinstance(item, SelfIntro):
        if len(item.pair) != 2:
            report.add(IssueCode.RULE_MISMATCH, 'malformed reflexive pronoun record', where)
        _checkItem(item.item, report, where)
        return
    report.add(IssueCode.RULE_MISMATCH, f'unknown text item {item!r}', where)


def _linkedPairs(text : HybridText) -> set:
    return {x for y in text.links if y.kind is not LinkKind.POSSESSIVE for x in y.pairs()}


def _checkLinks(text : HybridText, report : ValidationReport, extensions : bool) -> None:
    seen = {}
    possessed = set()
    for x, link in enumerate(text.links):
        where = f'link {x}'
        if len(link.chain) < 2:
            report.add(IssueCode.BAD_LINK, 'a chain needs at least two occurrences', where)
            continue
        if any(text.leafPath(y) is None for y in link.chain):
            report.add(IssueCode.BAD_LINK, 'link addresses a noun that does not exist', where)
            continue
        if any(a >= b for a, b in link.pairs()):
            report.add(IssueCode.BAD_LINK, 'occurrences of a chain must be in reading order', where)
            continue
        if link.kind is LinkKind.POSSESSIVE:
            if not extensions:
                report.add(IssueCode.BAD_LINK, 'possessive links need the grammar extensions', where)
                continue
            if len(link.chain) != 2:
                report.add(IssueCode.BAD_LINK, 'a possessive link joins exactly one possessor to one possessed noun', where)
                continue
            a, b = link.chain
            if not isPossessed(text.clauses[b.sentence], text.leafPath(b)):
                report.add(IssueCode.BAD_LINK, 'the possessed noun must be wrapped in poss', where)
            if b in possessed:
                report.add(IssueCode.BAD_LINK, f'{b} is possessed twice', where)
            possessed.add(b)
            continue
        for occ in link.chain:
            if occ in seen:
                report.add(IssueCode.BAD_LINK, f'{occ} appears in links {seen[occ]} and {x}', where)
            seen[occ] = x
        tokens = {text.token(y) for y in link.chain}
        if len(tokens) != 1:
            report.add(IssueCode.BAD_LINK, f'linked nouns must name the same noun, found {sorted(tokens)}', where)
        for a, b in link.pairs():
            kind = pairKind(text, a, b)
            if kind is PairKind.INVALID:
                report.add(IssueCode.BAD_LINK, f'{a} and {b} cannot be linked: neither separate sentences, conjuncts nor one simple sentence', where)
            elif link.kind is LinkKind.REFLEXIVE and kind is not PairKind.REFLEXIVE:
                report.add(IssueCode.BAD_LINK, f'reflexive link between {a} and {b} leaves their simple sentence', where)
            elif kind in (PairKind.SHARED, PairKind.REFLEXIVE) and crossCount(text.clauses[b.sentence], text.leafPath(b)):
                report.add(IssueCode.SCOPE_VIOLATION, f'{b} is linked inside its sentence and may not cross a scope border', where)
    # Poss wrappers with no possessive link.
    for occ in text.occurrences():
        if isPossessed(text.clauses[occ.sentence], text.leafPath(occ)) and occ not in possessed:
            report.add(IssueCode.BAD_LINK, f'{occ} is possessed but no possessive link names its possessor', occ)


def _checkFusions(text : HybridText, report : ValidationReport) -> None:
    linked = _linkedPairs(text)
    reflexive = {x for y in text.links if y.kind is not LinkKind.POSSESSIVE for x in y.pairs()
                 if pairKind(text, *x) is PairKind.REFLEXIVE}

    def visit(item):
        if isinstance(item, Fusion):
            pair = tuple(item.pair)
            if pair not in linked:
                report.add(IssueCode.BAD_LINK, f'relative pronoun record {pair[0]} {pair[1]} names an unlinked pair', 'fusion')
            else:
                try:
                    _checkFusionRoles(text, item.kind, *pair)
                except PreconditionViolation as e:
                    report.add(IssueCode.UNGRAMMATICAL_FUSION, str(e), 'fusion')
            for x in item.items:
                visit(x)
        elif isinstance(item, SelfIntro):
            if tuple(item.pair) not in reflexive:
                report.add(IssueCode.BAD_LINK, 'reflexive pronoun record names a pair that is not a reflexive link', 'self')
            visit(item.item)

    for item in text.items:
        visit(item)


def validate(text : HybridText, lexicon : Lexicon = None, extensions : bool = True) -> ValidationReport:
    """
    Checks every derivation against the rule tables, every link against the
    sentences, the scope border rules and the order of transformations.

    Returns a ValidationReport that is empty iff the text is valid.
    """
    lexicon = lexicon or defaultLexicon()
    report = ValidationReport('text')
    for x, item in enumerate(text.items):
        _checkItem(item, report, f'item {x}')
    if report:
        return report
    for x, clause in enumerate(text.clauses):
        _Checker(lexicon, report, x, extensions).sentence(clause, (), 0)
    if report:
        return report
    _checkLinks(text, report, extensions)
    if report:
        return report
    _checkFusions(text, report)
    report.extend(checkFusionOrder(text))
    return report


# Yields.

def slotPath(clause : Phrase, path : tuple) -> tuple:
    """
    Returns the path of the noun phrase slot holding the NP leaf at
    :param path: (the leaf together with its adjectives and wrappers).
    """
    while path and clause.at(path[:-1]).rule in constants.NP_RULES:
        path = path[:-1]
    return path


class _Renderer:
    """
    Produces the token sequence of a text. In structured mode the artefacts
    `[THAT]`, `[&]`, `!` and the blank are kept; in surface mode they are
    rendered as English.
    """

    def __init__(self, text : HybridText, surface : bool = False, pronouns : bool = False):
        self.text = text
        self.surface = surface
        self.pronouns = pronouns
        self.override = {}
        self.after = {}
        self.occurrence = {}
        for x, clause in enumerate(text.clauses):
            for y, path in enumerate(npPaths(clause)):
                self.occurrence[(x, path)] = NounOccurrence(x, y)
        self.predecessor = {}
        for link in text.links:
            if link.kind is LinkKind.POSSESSIVE:
                continue
            for a, b in link.pairs():
                self.predecessor[b] = a

    def render(self) -> str:
        sentences = []
        start = 0
        for item in self.text.items:
            tokens, start = self.item(item, start)
            sentences.append(self.join(tokens))
        return ' '.join(sentences)

    def join(self, tokens) -> str:
        if self.surface:
            tokens = [x for x in tokens if x not in (constants.ISOLATED, constants.BLANK)]
        out = ' '.join(tokens).replace(' ,', ',')
        return out + constants.PERIOD

    def item(self, item, start : int):
        """
        Returns the tokens of :param item: whose first clause has index
        :param start:, and the index of the next clause.
        """
        if isinstance(item, Sentence):
            return self.sentence(item.body, start, (), 0), start + 1
        if isinstance(item, SelfIntro):
            return self.item(item.item, start)
        count = [len(itemClauses(x)) for x in item.items]
        if len(item.items) == 1:
            return self.item(item.items[0], start)
        a, b = item.pair
        first, second = item.items
        secondStart = start + count[0]
        if item.kind is FusionKind.SUBJECT_SPECIAL:
            return self.special(a, b, first, second, start, secondStart), secondStart + count[1]
        bSlot = self.slot(b)
        if item.kind is FusionKind.SUBJECT:
            self.override[bSlot] = []
            opener = [constants.WHO]
        else:
            self.override[bSlot] = [constants.BLANK]
            opener = [constants.WHO_THAT]
        tokens2, end = self.item(second, secondStart)
        self.after.setdefault(self.slot(a), []).extend(opener + tokens2)
        tokens1, _ = self.item(first, start)
        return tokens1, end

    def special(self, a, b, first, second, start, secondStart):
        clause = self.text.clauses[a.sentence]
        aSlot = self.slot(a)
        front = self.np(clause.at(aSlot[1]), a.sentence, aSlot[1], 0)
        if clause.rule == constants.RULE_IS:
            front = self.adjective(clause.children[1]) + front
            rest1 = []
        else:
            self.override[aSlot] = []
            rest1, _ = self.item(first, start)
        self.override[self.slot(b)] = []
        rest2, _ = self.item(second, secondStart)
        return front + [constants.ISOLATED, constants.WHO] + rest1 + [constants.BLANK] + rest2

    def slot(self, occ : NounOccurrence):
        clause = self.text.clauses[occ.sentence]
        return (occ.sentence, slotPath(clause, self.text.leafPath(occ)))

    def sentence(self, node : Phrase, ci : int, path, depth : int) -> list:
        c = node.children
        rule = node.rule
        if rule == constants.RULE_IV:
            return self.slotNP(c[0], ci, path + (0,), depth) + self.intransitive(c[1], ci, path + (1,), depth)
        if rule == constants.RULE_TV:
            head, tail, passive = self.transitive(c[1], ci, path + (1,), depth)
            by = [constants.BY] if passive else []
            return self.slotNP(c[0], ci, path + (0,), depth) + head + by + self.slotNP(c[2], ci, path + (2,), depth) + tail
        if rule == constants.RULE_IS:
            return self.slotNP(c[0], ci, path + (0,), depth) + [constants.IS] + self.adjective(c[1])
        if rule == constants.RULE_SCV:
            tokens = self.slotNP(c[0], ci, path + (0,), depth) + [c[1]]
            if len(c) == 4:
                tokens += self.slotNP(c[2], ci, path + (2,), depth)
            last = len(c) - 1
            return tokens + [self.that()] + self.sentence(c[last].children[0], ci, path + (last, 0), depth + 1)
        # Conjunction. [&] does not open a new level of nesting.
        inner = depth if c[1] == constants.AMPERSAND else depth + 1
        left = self.sentence(c[0].children[0], ci, path + (0, 0), inner)
        right = self.sentence(c[2].children[0], ci, path + (2, 0), inner)
        if c[1] != constants.AMPERSAND:
            return left + [c[1]] + right
        if depth == 0:
            return left + [constants.SURFACE_AMPERSAND_TOP if self.surface else constants.AMPERSAND] + right
        middle = list(constants.SURFACE_AMPERSAND_NESTED) if self.surface else [constants.AMPERSAND]
        return left + middle + [self.that()] + right

    def that(self) -> str:
        return constants.SURFACE_THAT if self.surface else constants.THAT

    def slotNP(self, node, ci, path, depth) -> list:
        key = (ci, path)
        if key in self.override:
            tokens = list(self.override[key])
        else:
            tokens = self.np(node, ci, path, depth)
        return tokens + self.after.get(key, [])

    def np(self, node, ci, path, depth) -> list:
        if node.rule == constants.RULE_NP:
            return [self.noun(node.children[0], ci, path)]
        if node.rule == constants.RULE_ADJ:
            return self.adjective(node.children[0]) + self.np(node.children[1], ci, path + (1,), depth)
        if node.rule == constants.RULE_POSS:
            return [constants.PRONOUNS['possessive']] + self.np(node.children[0], ci, path + (0,), depth)
        return self.np(node.children[0], ci, path + (0,), depth)

    def noun(self, token, ci, path) -> str:
        if not (self.surface and self.pronouns):
            return token
        occ = self.occurrence.get((ci, path))
        pred = self.predecessor.get(occ)
        if pred is None:
            return token
        kind = pairKind(self.text, pred, occ)
        if kind is PairKind.REFLEXIVE:
            return constants.PRONOUNS['reflexive']
        clause = self.text.clauses[ci]
        return constants.PRONOUNS['subject' if isSubject(clause, path) else 'object']

    def adjective(self, node) -> list:
        if isinstance(node, Phrase):
            tokens = self.intransitive(node.children[0], None, (), 0)
            tokens[-1] = f'{tokens[-1]}-{constants.ING_SUFFIX}'
            return tokens
        return [node]

    def intransitive(self, node, ci, path, depth) -> list:
        if not isinstance(node, Phrase):
            return [node]
        if node.rule == constants.RULE_ADV:
            return [node.children[0]] + self.intransitive(node.children[1], ci, path + (1,), depth)
        return self.intransitive(node.children[0], ci, path + (0,), depth) + [node.children[1]] + \
               self.slotNP(node.children[2], ci, path + (2,), depth)

    def transitive(self, node, ci, path, depth):
        """
        Returns (head tokens, tail tokens, passive) of a TVP. The object sits
        between the head and the tail.
        """
        if not isinstance(node, Phrase):
            return [node], [], False
        if node.rule == constants.RULE_ADV:
            head, tail, passive = self.transitive(node.children[1], ci, path + (1,), depth)
            return [node.children[0]] + head, tail, passive
        if node.rule == constants.RULE_PSV:
            head, tail, _ = self.transitive(node.children[0], ci, path + (0,), depth)
            return [constants.IS] + head, tail, True
        head, tail, passive = self.transitive(node.children[0], ci, path + (0,), depth)
        return head, tail + [node.children[1]] + self.slotNP(node.children[2], ci, path + (2,), depth), passive


def yieldText(text : HybridText, surface : bool = False, pronouns : bool = False) -> str:
    """
    Returns the left to right concatenation of the leaves of every sentence,
    each sentence closed by a period.

    :param surface: render `[THAT]` as THAT, `[&]` as AND ALSO (nested) or
        a comma (top level), and drop the `!` and blank artefacts.
    :param pronouns: with :param surface:, replace later linked nouns with
        pronouns from a fixed table.
    """
    return _Renderer(text, surface, pronouns).render()


# Relative pronoun transformations.

def _pair(text : HybridText, link):
    if isinstance(link, PronominalLink):
        if len(link.chain) != 2:
            raise PreconditionViolation('pass the two occurrences to fuse, not a longer chain')
        pair = tuple(link.chain)
    else:
        pair = tuple(link)
    if len(pair) != 2 or not all(isinstance(x, NounOccurrence) for x in pair):
        raise PreconditionViolation('a fusion needs two noun occurrences')
    if pair not in _linkedPairs(text):
        raise PreconditionViolation(f'{pair[0]} and {pair[1]} are not consecutive in a pronominal link')
    return pair


def _isBare(text : HybridText, occ : NounOccurrence) -> bool:
    clause = text.clauses[occ.sentence]
    path = text.leafPath(occ)
    return slotPath(clause, path) == path


def _isRootSubject(text : HybridText, occ : NounOccurrence) -> bool:
    clause = text.clauses[occ.sentence]
    path = text.leafPath(occ)
    return unitPath(clause, path) == () and isSubject(clause, path)


def _checkFusionRoles(text : HybridText, kind : FusionKind, a : NounOccurrence, b : NounOccurrence) -> None:
    if text.itemOf(a.sentence) > text.itemOf(b.sentence):
        raise PreconditionViolation('the earlier occurrence must come first')
    if a.sentence == b.sentence:
        raise PreconditionViolation('a relative pronoun joins two different sentences')
    ca, pa = text.clauses[a.sentence], text.leafPath(a)
    if not _isBare(text, b):
        raise PreconditionViolation(f'{b} carries adjectives and cannot be replaced by a pronoun')
    if kind is FusionKind.SUBJECT:
        if not _isRootSubject(text, b):
            raise PreconditionViolation(f'{b} is not the subject of its sentence')
        if isSubject(ca, pa):
            raise PreconditionViolation(f'{a} is a subject; use the special subject relative rule')
    elif kind is FusionKind.SUBJECT_SPECIAL:
        if not _isRootSubject(text, b):
            raise PreconditionViolation(f'{b} is not the subject of its sentence')
        if not _isRootSubject(text, a):
            raise PreconditionViolation(f'{a} is not the subject of its sentence')
        if ca.rule == constants.RULE_CNJ:
            raise PreconditionViolation('the special subject relative rule needs a sentence with a subject')
    else:
        if isSubject(text.clauses[b.sentence], text.leafPath(b)):
            raise PreconditionViolation(f'{b} is not an object')
        if isSubject(ca, pa):
            raise PreconditionViolation(f'{a} is not an object')


def _fuse(text : HybridText, link, kind : FusionKind) -> HybridText:
    a, b = _pair(text, link)
    _checkFusionRoles(text, kind, a, b)
    i, j = text.itemOf(a.sentence), text.itemOf(b.sentence)
    items = list(text.items)
    if i == j:
        # A second relative rule on an already fused pair. Recorded as is;
        # checkFusionOrder reports it.
        items[i] = Fusion(kind, (a, b), (items[i],))
    elif j == i + 1:
        if kind is FusionKind.SUBJECT_SPECIAL and not isinstance(items[i], Sentence):
            raise PreconditionViolation('the special subject relative rule fronts a simple sentence')
        items[i:j + 1] = [Fusion(kind, (a, b), (items[i], items[j]))]
    else:
        raise PreconditionViolation('only consecutive sentences can be fused')
    logger.debug(f'fused {a} {b} with {kind.value}')
    return text.withItems(items)


def fuseSubjectRelative(text : HybridText, link) -> HybridText:
    """
    Replaces the later occurrence, the subject of its sentence, with WHO
    and attaches its sentence after the earlier (object) occurrence.

    :param link: the pair (earlier, later), or a two element
        PronominalLink.
    :raises PreconditionViolation: if the occurrences have the wrong roles.
    """
    return _fuse(text, link, FusionKind.SUBJECT)


def fuseSubjectRelativeSpecial(text : HybridText, link) -> HybridText:
    """
    Coordinates a single subject across two subsequent sentences:
    `SOBER ALICE ! WHO ␣ GIVES BEER TO BOB`.

    :raises PreconditionViolation: unless both occurrences are subjects.
    """
    return _fuse(text, link, FusionKind.SUBJECT_SPECIAL)


def fuseObjectRelative(text : HybridText, link) -> HybridText:
    """
    Attaches the later sentence after the earlier object with THAT, its own
    object becoming a blank.

    :raises PreconditionViolation: unless both occurrences are objects.
    """
    return _fuse(text, link, FusionKind.OBJECT)


def introduceReflexive(text : HybridText, link) -> HybridText:
    """
    Records the introduction of a reflexive pronoun for two occurrences of
    one simple sentence. The pair must already be linked.
    """
    a, b = _pair(text, link)
    if pairKind(text, a, b) is not PairKind.REFLEXIVE:
        raise PreconditionViolation(f'{a} and {b} are not in the same simple sentence')
    items = list(text.items)
    i = text.itemOf(a.sentence)
    items[i] = SelfIntro((a, b), items[i])
    return text.withItems(items)


def checkFusionOrder(text : HybridText) -> ValidationReport:
    """
    Reports the two forbidden orders of transformations: a second relative
    pronoun rule on an already fused pair, and a reflexive pronoun introduced
    after a subject relative fusion.
    """
    report = ValidationReport('fusion order')

    def visit(item, where):
        if isinstance(item, Fusion):
            if len(item.items) == 1:
                report.add(IssueCode.UNGRAMMATICAL_FUSION,
                           'cannot apply both the subject and object relative pronoun rules to sentences that were already fused', where)
            for x in item.items:
                visit(x, where)
        elif isinstance(item, SelfIntro):
            inner = item.item
            while isinstance(inner, SelfIntro):
                inner = inner.item
            if isinstance(inner, Fusion) and inner.kind in (FusionKind.SUBJECT, FusionKind.SUBJECT_SPECIAL):
                report.add(IssueCode.UNGRAMMATICAL_FUSION,
                           'a reflexive pronoun cannot be introduced after a subject relative fusion', where)
            visit(item.item, where)

    for x, item in enumerate(text.items):
        visit(item, f'item {x}')
    return report


def decomposeRelativePronouns(text : HybridText) -> HybridText:
    """
    Breaks every fused sentence back into its simple sentences. Links and
    clause indices are unchanged.
    """
    return text.withItems(Sentence(x) for x in text.clauses)


# Generation.

@dataclasses.dataclass
class GeneratorConfig:
    maxSentences : int = 3
    maxDepth : int = 2
    maxLinks : int = 3
    lexicon : Lexicon = None
    extensions : bool = False
    fusions : bool = True
    reflexive : bool = True
    depthDecay : float = constants.DEFAULT_DEPTH_DECAY
    # Relative weights of the sentence rules and probabilities of the
    # optional wrappers.
    weights : dict = dataclasses.field(default_factory = lambda: {
        constants.RULE_IV: 3.0,
        constants.RULE_TV: 3.0,
        constants.RULE_IS: 1.5,
        constants.RULE_SCV: 1.0,
        constants.RULE_CNJ: 1.0,
    })
    adjective : float = 0.15
    adverb : float = 0.2
    adposition : float = 0.2
    cross : float = 0.1
    passive : float = 0.15
    possessive : float = 0.1
    gerund : float = 0.1
    fuse : float = 0.3


class _Generator:
    def __init__(self, rng : random.Random, config : GeneratorConfig, lexicon : Lexicon):
        self.rng = rng
        self.config = config
        self.lexicon = lexicon
        self.words = {x: lexicon.tokens(x) for x in WordClass}
        for required in (WordClass.N, WordClass.IV):
            if not self.words[required]:
                raise EmptyLexiconClass(f'the lexicon has no {required.value} entries')
        self.passives = [x for x in self.words[WordClass.TV] if lexicon.passiveForm(x)]

    def pick(self, cls : WordClass) -> str:
        return self.rng.choice(self.words[cls])

    def chance(self, p) -> bool:
        return self.rng.random() < p

    def sentence(self, depth : int) -> Phrase:
        weights = dict(self.config.weights)
        needs = {
            constants.RULE_TV: WordClass.TV,
            constants.RULE_IS: WordClass.ADJ,
            constants.RULE_SCV: WordClass.SCV,
            constants.RULE_CNJ: WordClass.CNJ,
        }
        for rule, cls in needs.items():
            if not self.words[cls]:
                weights[rule] = 0.0
        if depth >= self.config.maxDepth:
            weights[constants.RULE_SCV] = weights[constants.RULE_CNJ] = 0.0
        else:
            decay = self.config.depthDecay ** depth
            weights[constants.RULE_SCV] *= decay
            weights[constants.RULE_CNJ] *= decay
        rules = sorted(x for x, y in weights.items() if y > 0)
        rule = self.rng.choices(rules, [weights[x] for x in rules])[0]
        if rule == constants.RULE_IV:
            return Phrase(rule, (self.np(depth), self.verbPhrase(WordClass.IV, depth)))
        if rule == constants.RULE_TV:
            return Phrase(rule, (self.np(depth), self.verbPhrase(WordClass.TV, depth), self.np(depth)))
        if rule == constants.RULE_IS:
            return Phrase(rule, (self.np(depth), self.adjective()))
        if rule == constants.RULE_SCV:
            children = [self.np(depth), self.pick(WordClass.SCV)]
            if self.chance(0.3):
                children.append(self.np(depth))
            children.append(Phrase(constants.RULE_SCOPE, (self.sentence(depth + 1),)))
            return Phrase(rule, tuple(children))
        cnj = constants.AMPERSAND if self.chance(0.3) else self.pick(WordClass.CNJ)
        return Phrase(rule, (Phrase(constants.RULE_SCOPE, (self.sentence(depth + 1),)), cnj,
                             Phrase(constants.RULE_SCOPE, (self.sentence(depth + 1),))))

    def np(self, depth : int, budget = None) -> Phrase:
        budget = depth if budget is None else budget
        if budget > 0 and self.chance(self.config.cross):
            return Phrase(constants.RULE_CROSS, (self.np(depth, budget - 1),))
        node = Phrase(constants.RULE_NP, (self.pick(WordClass.N),))
        if self.config.extensions and self.chance(self.config.possessive):
            node = Phrase(constants.RULE_POSS, (node,))
        if self.chance(self.config.adjective) and (self.words[WordClass.ADJ] or self.config.extensions):
            node = Phrase(constants.RULE_ADJ, (self.adjective(), node))
        return node

    def adjective(self):
        if self.config.extensions and self.chance(self.config.gerund) or not self.words[WordClass.ADJ]:
            verb = self.pick(WordClass.IV)
            if self.words[WordClass.ADV] and self.chance(self.config.adverb):
                verb = Phrase(constants.RULE_ADV, (self.pick(WordClass.ADV), verb))
            return Phrase(constants.RULE_ING, (verb,))
        return self.pick(WordClass.ADJ)

    def verbPhrase(self, cls : WordClass, depth : int):
        if cls is WordClass.TV and self.config.extensions and self.passives and self.chance(self.config.passive):
            inner = self.lexicon.passiveForm(self.rng.choice(self.passives))
            if self.words[WordClass.ADV] and self.chance(self.config.adverb):
                inner = Phrase(constants.RULE_ADV, (self.pick(WordClass.ADV), inner))
            node = Phrase(constants.RULE_PSV, (inner,))
        else:
            node = self.pick(cls)
        while self.words[WordClass.ADV] and self.chance(self.config.adverb):
            node = Phrase(constants.RULE_ADV, (self.pick(WordClass.ADV), node))
        while self.words[WordClass.ADP] and self.chance(self.config.adposition):
            node = Phrase(constants.RULE_ADP, (node, self.pick(WordClass.ADP), self.np(depth)))
        return node


def _stripPossessive(clause : Phrase, path : tuple) -> Phrase:
    for x in range(len(path), -1, -1):
        if clause.at(path[:x]).rule == constants.RULE_POSS:
            return clause.replace(path[:x], clause.at(path[:x]).children[0])
    return clause


def generate(seed : int, config : GeneratorConfig = None) -> HybridText:
    """
    Generates a random valid text. Deterministic for a fixed seed.

    :raises EmptyLexiconClass: if the lexicon has no nouns or intransitive
        verbs.
    """
    config = config or GeneratorConfig()
    lexicon = config.lexicon or defaultLexicon()
    rng = random.Random(seed)
    gen = _Generator(rng, config, lexicon)
    count = rng.randint(1, max(1, config.maxSentences))
    clauses = [gen.sentence(0) for _ in range(count)]

    # Possessors. Possessed nouns with nobody before them lose the wrapper.
    links = []
    text = HybridText([Sentence(x) for x in clauses])
    occurrences = text.occurrences()
    possessed = set()
    for occ in occurrences:
        path = text.leafPath(occ)
        if not isPossessed(text.clauses[occ.sentence], path):
            continue
        candidates = [x for x in occurrences if x < occ and x not in possessed
                      and not isPossessed(text.clauses[x.sentence], text.leafPath(x))]
        if candidates:
            links.append(PronominalLink((rng.choice(candidates), occ), LinkKind.POSSESSIVE))
            possessed.add(occ)
        else:
            clauses[occ.sentence] = _stripPossessive(clauses[occ.sentence], path)
            text = HybridText([Sentence(x) for x in clauses])
    possessiveOccs = {x for y in links for x in y.chain}

    # Pronominal links between nouns with the same token.
    candidates = []
    for x, a in enumerate(occurrences):
        for b in occurrences[x + 1:]:
            if text.token(a) != text.token(b) or a in possessiveOccs or b in possessiveOccs:
                continue
            kind = pairKind(text, a, b)
            if kind is PairKind.INVALID or (kind is PairKind.REFLEXIVE and not config.reflexive):
                continue
            if kind is not PairKind.SEQUENTIAL and crossCount(text.clauses[b.sentence], text.leafPath(b)):
                continue
            candidates.append((a, b, kind))
    rng.shuffle(candidates)
    successor, predecessor = {}, {}
    for a, b, kind in candidates:
        if len(successor) >= config.maxLinks:
            break
        if a in successor or b in predecessor:
            continue
        successor[a] = b
        predecessor[b] = a
    for start in sorted(x for x in successor if x not in predecessor):
        chain = [start]
        while chain[-1] in successor:
            chain.append(successor[chain[-1]])
        kinds = {pairKind(text, x, y) for x, y in zip(chain, chain[1:])}
        kind = LinkKind.REFLEXIVE if kinds == {PairKind.REFLEXIVE} else LinkKind.REGULAR
        links.append(PronominalLink(tuple(chain), kind))
    text = HybridText([Sentence(x) for x in clauses], links)

    if config.fusions:
        text = _applyRandomFusions(rng, text, config)
    logger.debug(f'generated text with seed {seed}: {yieldText(text)}')
    return text


def _applyRandomFusions(rng : random.Random, text : HybridText, config : GeneratorConfig) -> HybridText:
    pairs = sorted(x for y in text.links if y.kind is not LinkKind.POSSESSIVE for x in y.pairs())
    # Reflexive records first: introducing them after a subject relative
    # fusion is ungrammatical.
    for a, b in pairs:
        if pairKind(text, a, b) is PairKind.REFLEXIVE and rng.random() < config.fuse:
            item = text.items[text.itemOf(a.sentence)]
            if isinstance(item, Sentence):
                text = introduceReflexive(text, (a, b))
    for a, b in pairs:
        if rng.random() >= config.fuse:
            continue
        i, j = text.itemOf(a.sentence), text.itemOf(b.sentence)
        if j != i + 1:
            continue
        for fuse in (fuseSubjectRelative, fuseSubjectRelativeSpecial, fuseObjectRelative):
            try:
                text = fuse(text, (a, b))
            except PreconditionViolation:
                continue
            break
    return text
