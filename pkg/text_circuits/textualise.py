"""
text_circuits.textualise
~~~~~~~~~~~~~~~~~~~~~~~~
From circuits back to text. Every valid circuit has a text in the core
fragment that compiles back to it; `textualise` builds one deterministically.
"""

import dataclasses
import logging

import networkx as nx

from . import constants
from .circuit import GateCore, HoleBox, TextCircuit, equal, iterOps, iterWires, normalise
from .derivation import HybridText, NounOccurrence, Phrase, PronominalLink, Sentence, npPaths, pairKind
from .enums import BoxKind, GateKind, LinkKind, PairKind, SliceKind, WordClass
from .exceptions import InvalidLexiconError, UntextualisableError
from .lexicon import Lexicon, defaultLexicon


logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

PLACEHOLDER = '#'


@dataclasses.dataclass(frozen = True)
class Slice:
    """
    One step of a sliced circuit. A gate slice holds instances acting on
    pairwise disjoint wires; `holes` carries, for every box of the slice in
    order, the slicing of each of its holes. A twist slice holds the wire
    order it permutes into.
    """
    kind : SliceKind
    instances : tuple = ()
    order : tuple = ()
    holes : tuple = ()


def _generations(c : TextCircuit) -> list:
    """
    Topological generations of the instance graph, each sorted by the
    leftmost wire it touches.
    """
    position = {x: y for y, x in enumerate(c.referents)}
    result = []
    for layer in nx.topological_generations(c.graph()):
        result.append(sorted(layer, key = lambda x: (min(position[y] for y in c.instances[x].args), x)))
    return result


def sliceCircuit(c : TextCircuit) -> list:
    """
    Decomposes :param c: into alternating gate slices and twist slices.
    Composing the slices in order gives back a circuit equal to c.
    """
    c = normalise(c)
    current = list(c.referents)
    slices = []
    for layer in _generations(c):
        instances = [c.instances[x] for x in layer]
        touched = [y for x in instances for y in x.args]
        needed = touched + [x for x in current if x not in touched]
        if needed != current:
            slices.append(Slice(SliceKind.TWIST, order = tuple(needed)))
            current = needed
        holes = tuple(tuple(sliceCircuit(y) for y in x.op.holes())
                      for x in instances if isinstance(x.op, HoleBox))
        slices.append(Slice(SliceKind.GATES, tuple(instances), holes = holes))
    if current != list(c.referents):
        slices.append(Slice(SliceKind.TWIST, order = c.referents))
    logger.log(5, f'sliced {c!r} into {len(slices)} slice(s)')
    return slices


def fromSlices(wires, slices) -> TextCircuit:
    """
    Composes a slicing back into a circuit on :param wires:.
    """
    instances = [x for y in slices if y.kind is SliceKind.GATES for x in y.instances]
    return TextCircuit.fromSequence(wires, instances)


# Clauses. Nouns are written as placeholders naming their referent and
# replaced by labels once the occurrence order is known.

def _np(referent : str) -> Phrase:
    return Phrase(constants.RULE_NP, (PLACEHOLDER + referent,))


def _scope(sentence : Phrase) -> Phrase:
    return Phrase(constants.RULE_SCOPE, (sentence,))


def _ampersand(clauses : list) -> Phrase:
    sentence = clauses[-1]
    for clause in reversed(clauses[:-1]):
        sentence = Phrase(constants.RULE_CNJ, (_scope(clause), constants.AMPERSAND, _scope(sentence)))
    return sentence


def _verbPhrase(core : GateCore, objects) -> object:
    # First adverb and first adposition sit closest to the verb.
    vp = core.token
    for adverb in core.adverbs:
        vp = Phrase(constants.RULE_ADV, (adverb, vp))
    for adposition, referent in zip(core.adpositions, objects):
        vp = Phrase(constants.RULE_ADP, (vp, adposition, _np(referent)))
    return vp


def _gateClause(core : GateCore, args) -> Phrase:
    if core.kind is GateKind.ADJ:
        return Phrase(constants.RULE_IS, (_np(args[0]), core.token))
    if core.kind is GateKind.EXISTS:
        return Phrase(constants.RULE_IV, (_np(args[0]), constants.EXISTS))
    vp = _verbPhrase(core, args[core.arity:])
    if core.arity == 1:
        return Phrase(constants.RULE_IV, (_np(args[0]), vp))
    return Phrase(constants.RULE_TV, (_np(args[0]), vp, _np(args[1])))


def _clause(inst) -> Phrase:
    op = inst.op
    if isinstance(op, GateCore):
        return _gateClause(op, inst.args)
    if op.kind is BoxKind.REFLEXIVE:
        # Every port is restated with the referent of its class.
        classOf = {}
        for index, cls in enumerate(op.classes()):
            for port in cls:
                classOf[port] = inst.args[index]
        return _gateClause(op.inner, [classOf[x] for x in range(op.k)])
    if op.kind is BoxKind.SCV:
        roles = [_np(x) for x in inst.args[:op.arity]]
        return Phrase(constants.RULE_SCV, (roles[0], op.token, *roles[1:], _scope(_sentence(op.hole))))
    return Phrase(constants.RULE_CNJ, (_scope(_sentence(op.left)), op.token, _scope(_sentence(op.right))))


def _sentence(c : TextCircuit) -> Phrase:
    clauses = [_clause(c.instances[x]) for layer in _generations(c) for x in layer]
    if not clauses:
        raise UntextualisableError('a hole without wires has no sentence')
    return _ampersand(clauses)


def _lexiconFor(c : TextCircuit) -> Lexicon:
    """
    Returns the default lexicon extended with the tokens of :param c:, their
    classes read off how they are used. Falls back to a lexicon of those
    tokens alone when they clash with the default entries.

    :raises UntextualisableError: if one token is used in two classes.
    """
    entries = {}

    def add(token, cls):
        if entries.setdefault(token, cls) is not cls:
            raise UntextualisableError(f'{token} is used both as {entries[token].value} and as {cls.value}')

    for _, label in iterWires(c):
        add(label, WordClass.N)
    for op in iterOps(c):
        if isinstance(op, GateCore):
            if op.kind is GateKind.ADJ:
                add(op.token, WordClass.ADJ)
            elif op.kind is GateKind.VERB:
                add(op.token, WordClass.IV if op.arity == 1 else WordClass.TV)
            for x in op.adpositions:
                add(x, WordClass.ADP)
            for x in op.adverbs:
                add(x, WordClass.ADV)
        elif op.kind is BoxKind.SCV:
            add(op.token, WordClass.SCV)
        elif op.kind is BoxKind.CNJ:
            add(op.token, WordClass.CNJ)
    default = defaultLexicon()
    try:
        if all(default.classOf(x) in (None, y) for x, y in entries.items()):
            return default.extended((x, y) for x, y in entries.items() if x not in default)
        logger.info('circuit tokens clash with the default lexicon; using its own lexicon')
        return Lexicon(entries.items())
    except InvalidLexiconError as e:
        raise UntextualisableError(str(e)) from e


def textualiseWithLexicon(c : TextCircuit):
    """
    Returns (text, lexicon): a valid text compiling to a circuit equal to
    :param c: and a lexicon it validates against.

    :raises UntextualisableError: if c has an empty hole or uses a token in
        two classes.
    """
    c = normalise(c)
    lexicon = _lexiconFor(c)
    labels = dict(iterWires(c))
    bodies = [_ampersand([_clause(c.instances[x]) for x in layer]) for layer in _generations(c)]
    occurrences = {}
    clauses = []
    for ci, body in enumerate(bodies):
        for oi, path in enumerate(npPaths(body)):
            referent = body.at(path).children[0][len(PLACEHOLDER):]
            occurrences.setdefault(referent, []).append(NounOccurrence(ci, oi))
            body = body.replace(path, Phrase(constants.RULE_NP, (labels[referent],)))
        clauses.append(body)
    text = HybridText([Sentence(x) for x in clauses])
    links = []
    for chain in sorted((sorted(x) for x in occurrences.values() if len(x) > 1), key = lambda x: x[0]):
        kinds = {pairKind(text, a, b) for a, b in zip(chain, chain[1:])}
        if PairKind.INVALID in kinds:
            raise UntextualisableError(f'no link can join the occurrences {" ".join(map(str, chain))}')
        kind = LinkKind.REFLEXIVE if kinds == {PairKind.REFLEXIVE} else LinkKind.REGULAR
        links.append(PronominalLink(tuple(chain), kind))
    text = text.withLinks(links)
    logger.debug(f'textualised {c!r} into {len(clauses)} sentence(s) with {len(links)} link(s)')
    return text, lexicon


def textualise(c : TextCircuit) -> HybridText:
    """
    Returns a valid text of the core fragment compiling to a circuit equal
    to :param c:.
    """
    return textualiseWithLexicon(c)[0]


def equiv(t1 : HybridText, t2 : HybridText, lexicon : Lexicon = None, options = None) -> bool:
    """
    True if the two texts compile to equal circuits.
    """
    from .rewrite import compile

    return equal(compile(t1, lexicon, options), compile(t2, lexicon, options))
