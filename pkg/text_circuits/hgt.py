"""
text_circuits.hgt
~~~~~~~~~~~~~~~~~
Reader and writer for .hgt files: hybrid grammar texts written as
s-expressions. See README.rst for the grammar of the format.
"""

import logging

from . import constants, sexpr
from .derivation import Fusion, HybridText, NounOccurrence, Phrase, PronominalLink, SelfIntro, Sentence
from .enums import FusionKind, LinkKind, WordClass
from .exceptions import InvalidLexiconError, InvalidTextError, SexprError
from .lexicon import RESERVED, Lexicon
from .sexpr import Symbol


logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

PHRASE_HEADS = frozenset(constants.SENTENCE_RULES | constants.NP_RULES | {
    constants.RULE_SCOPE,
    constants.RULE_ADV,
    constants.RULE_ADP,
    constants.RULE_PSV,
    constants.RULE_ING,
})


def _symbol(value, what : str) -> str:
    if not isinstance(value, Symbol):
        raise InvalidTextError(f'expected {what}, found {value!r}')
    return str(value)


def _occurrence(form) -> NounOccurrence:
    if not isinstance(form, list) or len(form) != 2 or not all(isinstance(x, int) and not isinstance(x, bool) for x in form):
        raise InvalidTextError(f'expected a noun occurrence (sentence occurrence), found {form!r}')
    if form[0] < 0 or form[1] < 0:
        raise InvalidTextError(f'noun occurrence indices must not be negative: {form!r}')
    return NounOccurrence(form[0], form[1])


def _phrase(form):
    """
    Converts an s-expression into a Phrase. Leaves become plain strings.
    """
    if isinstance(form, Symbol):
        return str(form)
    if not isinstance(form, list) or not form:
        raise InvalidTextError(f'expected a phrase or a token, found {form!r}')
    head = _symbol(form[0], 'a rule name')
    if head not in PHRASE_HEADS:
        raise InvalidTextError(f'unknown rule {head!r}')
    return Phrase(head, tuple(_phrase(x) for x in form[1:]))


def _item(form, clauses : list):
    if not isinstance(form, list) or not form:
        raise InvalidTextError(f'expected a text item, found {form!r}')
    head = _symbol(form[0], 'an item head')
    if head == constants.ITEM_SENTENCE:
        if len(form) != 2:
            raise InvalidTextError('(s ...) takes exactly one sentence')
        body = _phrase(form[1])
        if not isinstance(body, Phrase):
            raise InvalidTextError(f'a sentence cannot be the bare token {body}')
        clauses.append(body)
        return Sentence(body)
    if head == constants.ITEM_FUSION:
        if len(form) not in (5, 6):
            raise InvalidTextError('(rel KIND OCC OCC ITEM [ITEM]) takes a kind, two occurrences and one or two items')
        try:
            kind = FusionKind(_symbol(form[1], 'a relative pronoun kind'))
        except ValueError:
            raise InvalidTextError(f'unknown relative pronoun kind {form[1]!r}')
        pair = (_occurrence(form[2]), _occurrence(form[3]))
        return Fusion(kind, pair, tuple(_item(x, clauses) for x in form[4:]))
    if head == constants.ITEM_SELF:
        if len(form) != 4:
            raise InvalidTextError('(self OCC OCC ITEM) takes two occurrences and an item')
        return SelfIntro((_occurrence(form[1]), _occurrence(form[2])), _item(form[3], clauses))
    raise InvalidTextError(f'unknown item {head!r}')


def _link(form) -> PronominalLink:
    if len(form) < 3:
        raise InvalidTextError('(link KIND OCC OCC+) needs a kind and at least one occurrence')
    try:
        kind = LinkKind(_symbol(form[1], 'a link kind'))
    except ValueError:
        raise InvalidTextError(f'unknown link kind {form[1]!r}')
    return PronominalLink(tuple(_occurrence(x) for x in form[2:]), kind)


def _lexicon(form) -> Lexicon:
    entries = []
    for entry in form[1:]:
        if not isinstance(entry, list) or len(entry) not in (2, 3):
            raise InvalidTextError(f'expected (TOKEN CLASS [PARTICIPLE]), found {entry!r}')
        token = _symbol(entry[0], 'a token')
        try:
            cls = WordClass(_symbol(entry[1], 'a word class'))
        except ValueError:
            raise InvalidTextError(f'unknown word class {entry[1]!r} for {token}')
        participle = _symbol(entry[2], 'a participle') if len(entry) == 3 else None
        entries.append((token, cls, participle))
    try:
        return Lexicon(entries)
    except InvalidLexiconError as e:
        raise InvalidTextError(f'invalid lexicon: {e}')


def loads(data : str):
    """
    Parses the contents of a .hgt file.

    :returns: a tuple (HybridText, Lexicon). The lexicon is None when the file
        does not declare one.
    :raises InvalidTextError: if the file is not a well formed .hgt text.
    """
    try:
        forms = sexpr.loads(data)
    except SexprError as e:
        raise InvalidTextError(f'malformed s-expression: {e}')
    if not forms:
        return HybridText(), None
    if len(forms) != 1:
        raise InvalidTextError(f'expected a single (text ...) form, found {len(forms)}')
    form = forms[0]
    if not isinstance(form, list) or not form or form[0] != constants.ITEM_TEXT:
        raise InvalidTextError('a .hgt file must contain one (text ...) form')
    lexicon = None
    items = []
    links = []
    clauses = []
    for child in form[1:]:
        if not isinstance(child, list) or not child:
            raise InvalidTextError(f'unexpected {child!r} inside (text ...)')
        head = child[0]
        if head == constants.ITEM_LEXICON:
            if lexicon is not None or items or links:
                raise InvalidTextError('the lexicon must come first and only once')
            lexicon = _lexicon(child)
        elif head == constants.ITEM_LINK:
            links.append(_link(child))
        else:
            if links:
                raise InvalidTextError('links must come after every sentence')
            items.append(_item(child, clauses))
    text = HybridText(items, links)
    logger.debug(f'read {len(text.clauses)} clause(s) and {len(links)} link(s)')
    return text, lexicon


def load(path):
    """
    Reads a .hgt file from :param path:.
    """
    with open(path, 'r', encoding = 'utf-8') as f:
        return loads(f.read())


def _phraseForm(node):
    if isinstance(node, Phrase):
        return [Symbol(node.rule)] + [_phraseForm(x) for x in node.children]
    return Symbol(node)


def _occurrenceForm(occ : NounOccurrence) -> list:
    return [occ.sentence, occ.occurrence]


def _itemForm(item):
    if isinstance(item, Sentence):
        return [Symbol(constants.ITEM_SENTENCE), _phraseForm(item.body)]
    if isinstance(item, Fusion):
        return [Symbol(constants.ITEM_FUSION), Symbol(item.kind.value)] + \
               [_occurrenceForm(x) for x in item.pair] + [_itemForm(x) for x in item.items]
    return [Symbol(constants.ITEM_SELF)] + [_occurrenceForm(x) for x in item.pair] + [_itemForm(item.item)]


def dumps(text : HybridText, lexicon : Lexicon = None) -> str:
    """
    Prints a text (and optionally its lexicon) deterministically: one item or
    link per line, two space indentation, long items broken over several
    lines.
    """
    lines = ['(' + constants.ITEM_TEXT]
    if lexicon is not None:
        reserved = {x[0] for x in RESERVED}
        lines.append('  (' + constants.ITEM_LEXICON)
        passive = lexicon.passiveForms
        for token, cls in lexicon.entries.items():
            if token in reserved:
                continue
            entry = [Symbol(token), Symbol(cls.value)]
            if token in passive:
                entry.append(Symbol(passive[token]))
            lines.append('    ' + sexpr.dumps(entry, 4))
        lines[-1] += ')'
    for item in text.items:
        lines.append('  ' + sexpr.dumps(_itemForm(item), 2))
    for link in text.links:
        form = [Symbol(constants.ITEM_LINK), Symbol(link.kind.value)] + [_occurrenceForm(x) for x in link.chain]
        lines.append('  ' + sexpr.dumps(form, 2))
    lines[-1] += ')'
    return '\n'.join(lines) + '\n'


def dump(text : HybridText, path, lexicon : Lexicon = None) -> None:
    with open(path, 'w', encoding = 'utf-8') as f:
        f.write(dumps(text, lexicon))
