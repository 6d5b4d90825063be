"""
Derivation trees, noun occurrences, pronominal links and hybrid texts.
"""

import dataclasses
import functools
import logging

from . import constants
from .enums import FusionKind, LinkKind, PairKind


logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())


@dataclasses.dataclass(frozen = True)
class Phrase:
    """
    An internal node of a derivation. `rule` is the .hgt head (`iv`, `tv`,
    `np`, ...) and `children` holds Phrase instances and token strings.
    """
    rule : str
    children : tuple

    def __post_init__(self):
        if not isinstance(self.children, tuple):
            object.__setattr__(self, 'children', tuple(self.children))

    def at(self, path : tuple):
        """
        Returns the descendant reached by following :param path:.
        """
        node = self
        for x in path:
            node = node.children[x]
        return node

    def replace(self, path : tuple, new) -> 'Phrase':
        """
        Returns a copy with the descendant at :param path: replaced.
        """
        if not path:
            return new
        children = list(self.children)
        children[path[0]] = children[path[0]].replace(path[1:], new)
        return Phrase(self.rule, tuple(children))


@dataclasses.dataclass(frozen = True, order = True)
class NounOccurrence:
    sentence : int
    occurrence : int

    def __str__(self):
        return f'({self.sentence} {self.occurrence})'


@dataclasses.dataclass(frozen = True)
class PronominalLink:
    chain : tuple
    kind : LinkKind = LinkKind.REGULAR

    def __post_init__(self):
        if not isinstance(self.chain, tuple):
            object.__setattr__(self, 'chain', tuple(self.chain))

    def pairs(self):
        """
        Consecutive pairs of the chain.
        """
        return list(zip(self.chain, self.chain[1:]))


@dataclasses.dataclass(frozen = True)
class Sentence:
    """
    A top level `(s ...)` item.
    """
    body : Phrase


@dataclasses.dataclass(frozen = True)
class Fusion:
    """
    Records a relative pronoun transformation on the pair (earlier, later).
    Two items means two separate sentences were fused; a single item means
    the rule was applied to an already fused pair.
    """
    kind : FusionKind
    pair : tuple
    items : tuple


@dataclasses.dataclass(frozen = True)
class SelfIntro:
    """
    Records the introduction of a reflexive pronoun for the pair.
    """
    pair : tuple
    item : object


def itemClauses(item) -> list:
    """
    Returns the clauses (sentence bodies) of a top level item in reading
    order.
    """
    if isinstance(item, Sentence):
        return [item.body]
    if isinstance(item, Fusion):
        return [x for y in item.items for x in itemClauses(y)]
    if isinstance(item, SelfIntro):
        return itemClauses(item.item)
    raise TypeError(f'not a text item: {item!r}')


class HybridText:
    """
    A parsed text: top level items (sentences, possibly wrapped in fusion
    records), pronominal links and the referents those links induce.
    """

    def __init__(self, items = (), links = ()):
        self.__items = tuple(items)
        self.__links = tuple(links)
        self.__clauses = tuple(x for y in self.__items for x in itemClauses(y))
        starts = []
        n = 0
        for item in self.__items:
            starts.append(n)
            n += len(itemClauses(item))
        self.__itemStarts = tuple(starts)

    def __eq__(self, other):
        if not isinstance(other, HybridText):
            return NotImplemented
        return self.__items == other.items and self.__links == other.links

    def __hash__(self):
        return hash((self.__items, self.__links))

    def __repr__(self):
        return f'HybridText({len(self.__clauses)} clause(s), {len(self.__links)} link(s))'

    def itemOf(self, clause : int) -> int:
        """
        Returns the index of the top level item containing clause
        :param clause:.
        """
        for x in range(len(self.__itemStarts) - 1, -1, -1):
            if self.__itemStarts[x] <= clause:
                return x
        raise IndexError(clause)

    def leafPath(self, occ : NounOccurrence):
        """
        Returns the path of the NP leaf addressed by :param occ:, or None if
        it does not exist.
        """
        if not 0 <= occ.sentence < len(self.__clauses):
            return None
        paths = npPaths(self.__clauses[occ.sentence])
        if not 0 <= occ.occurrence < len(paths):
            return None
        return paths[occ.occurrence]

    def occurrences(self) -> list:
        """
        Every NounOccurrence of the text, in reading order.
        """
        return [NounOccurrence(x, y) for x, clause in enumerate(self.__clauses) for y in range(len(npPaths(clause)))]

    def referentOf(self, occ : NounOccurrence) -> str:
        return self.referentMap[occ]

    def token(self, occ : NounOccurrence) -> str:
        """
        Returns the noun token of an occurrence.
        """
        return self.__clauses[occ.sentence].at(self.leafPath(occ)).children[0]

    def withItems(self, items) -> 'HybridText':
        return HybridText(items, self.__links)

    def withLinks(self, links) -> 'HybridText':
        return HybridText(self.__items, links)

    @property
    def clauses(self) -> tuple:
        """
        The sentence bodies with every fusion record flattened away. This is
        the list NounOccurrence.sentence indexes.
        """
        return self.__clauses

    @property
    def items(self) -> tuple:
        return self.__items

    @property
    def links(self) -> tuple:
        return self.__links

    @functools.cached_property
    def referentMap(self) -> dict:
        """
        Maps every NounOccurrence to its referent-ID. Each regular or
        reflexive chain shares one ID; every other leaf gets its own. IDs
        are numbered in order of first occurrence.
        """
        parent = {x: x for x in self.occurrences()}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for link in self.__links:
            if link.kind is LinkKind.POSSESSIVE:
                continue
            for a, b in link.pairs():
                if a in parent and b in parent:
                    parent[find(b)] = find(a)
        ids = {}
        result = {}
        for occ in self.occurrences():
            root = find(occ)
            if root not in ids:
                ids[root] = f'r{len(ids)}'
            result[occ] = ids[root]
        return result


# Traversal helpers. Paths are tuples of child indices from a clause root.

def npPaths(clause : Phrase) -> list:
    """
    Returns the paths of the `np` leaves of :param clause: in yield order.
    """
    result = []
    _npOrder(clause, (), result)
    return result


def _npOrder(node, path, out) -> None:
    rule = node.rule
    if rule == constants.RULE_NP:
        out.append(path)
    elif rule == constants.RULE_ADJ:
        _npOrder(node.children[1], path + (1,), out)
    elif rule in (constants.RULE_CROSS, constants.RULE_POSS, constants.RULE_SCOPE):
        _npOrder(node.children[0], path + (0,), out)
    elif rule == constants.RULE_IV:
        _npOrder(node.children[0], path + (0,), out)
        _vpTail(node.children[1], path + (1,), out)
    elif rule == constants.RULE_TV:
        _npOrder(node.children[0], path + (0,), out)
        _npOrder(node.children[2], path + (2,), out)
        _vpTail(node.children[1], path + (1,), out)
    elif rule == constants.RULE_IS:
        _npOrder(node.children[0], path + (0,), out)
    elif rule == constants.RULE_SCV:
        for x, child in enumerate(node.children):
            if isinstance(child, Phrase):
                _npOrder(child, path + (x,), out)
    elif rule == constants.RULE_CNJ:
        _npOrder(node.children[0], path + (0,), out)
        _npOrder(node.children[2], path + (2,), out)


def _vpTail(node, path, out) -> None:
    """
    NPs of a verb phrase: the objects of its adpositions, innermost first.
    """
    if not isinstance(node, Phrase):
        return
    if node.rule == constants.RULE_ADV:
        _vpTail(node.children[1], path + (1,), out)
    elif node.rule == constants.RULE_ADP:
        _vpTail(node.children[0], path + (0,), out)
        _npOrder(node.children[2], path + (2,), out)
    elif node.rule == constants.RULE_PSV:
        _vpTail(node.children[0], path + (0,), out)


def sentenceAncestors(clause : Phrase, path : tuple) -> list:
    """
    Returns the paths of the sentence nodes on the way from the clause root
    to :param path:, outermost first.
    """
    result = []
    node = clause
    for x in range(len(path) + 1):
        if isinstance(node, Phrase) and node.rule in constants.SENTENCE_RULES:
            result.append(path[:x])
        if x < len(path):
            node = node.children[path[x]]
    return result


def unitPath(clause : Phrase, path : tuple) -> tuple:
    """
    The simple unit of an NP leaf: the innermost sentence node holding it.
    """
    return sentenceAncestors(clause, path)[-1]


def crossCount(clause : Phrase, path : tuple) -> int:
    """
    Number of `cross` wrappers above the NP leaf at :param path:.
    """
    node = clause
    count = 0
    for x in path:
        if node.rule == constants.RULE_CROSS:
            count += 1
        node = node.children[x]
    return count


def isPossessed(clause : Phrase, path : tuple) -> bool:
    """
    Whether the NP leaf at :param path: sits under a `poss` wrapper.
    """
    node = clause
    for x in path:
        if node.rule == constants.RULE_POSS:
            return True
        node = node.children[x]
    return False


def pairKind(text : HybridText, a : NounOccurrence, b : NounOccurrence) -> PairKind:
    """
    Classifies two occurrences a (earlier) and b (later).
    """
    if a.sentence != b.sentence:
        return PairKind.SEQUENTIAL
    clause = text.clauses[a.sentence]
    pa, pb = text.leafPath(a), text.leafPath(b)
    if pa is None or pb is None or pa == pb:
        return PairKind.INVALID
    ua, ub = unitPath(clause, pa), unitPath(clause, pb)
    if ua == ub:
        if clause.at(ua).rule in (constants.RULE_IV, constants.RULE_TV):
            return PairKind.REFLEXIVE
        return PairKind.INVALID
    common = 0
    while common < min(len(pa), len(pb)) and pa[common] == pb[common]:
        common += 1
    prefix = pa[:common]
    owner = sentenceAncestors(clause, prefix)[-1]
    node = clause.at(owner)
    if node.rule == constants.RULE_CNJ and len(owner) < len(pa) and pa[len(owner)] == 0 and pb[len(owner)] == 2:
        return PairKind.SHARED
    return PairKind.INVALID


def isSubject(clause : Phrase, path : tuple) -> bool:
    """
    Whether the NP leaf at :param path: is the subject of its unit.
    """
    unit = unitPath(clause, path)
    rest = path[len(unit):]
    if not rest or rest[0] != 0:
        return False
    node = clause.at(unit + (0,))
    for x in rest[1:]:
        if node.rule not in constants.NP_RULES:
            return False
        node = node.children[x]
    return clause.at(unit).rule != constants.RULE_CNJ
