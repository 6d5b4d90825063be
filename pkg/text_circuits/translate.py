"""
text_circuits.translate
~~~~~~~~~~~~~~~~~~~~~~~
Translation of validated hybrid grammar texts into text diagrams.

Every noun occurrence becomes a strand: it starts at a dangling input (or a
LinkIn when an earlier occurrence is linked to it), enters the phrase scopes
it is used in, runs through the nodes of its clause and leaves the scopes
again. Linked strands are joined later by the rewrite stages.
"""

import logging

from . import constants
from .derivation import HybridText, NounOccurrence, Phrase, npPaths, pairKind
from .diagram import PortRecord, TextDiagram
from .enums import LinkKind, NodeKind, PairKind, RegionKind, WireType


logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

# Position suffix for the nodes added once every clause is built.
LATE = 1 << 20


class _Translator:
    def __init__(self, text : HybridText):
        self.text = text
        self.d = TextDiagram()
        self.prev = {}
        self.next = {}
        for link in text.links:
            if link.kind is LinkKind.POSSESSIVE:
                continue
            for a, b in link.pairs():
                kind = pairKind(text, a, b)
                self.prev[b] = (a, kind)
                self.next[a] = (b, kind)
        self.linkIns = {}
        self.linkOuts = {}
        self.ends = {}
        self.records = {}
        self.ci = 0
        self.paths = {}

    def pos(self, path) -> tuple:
        return (self.ci,) + tuple(path)

    def out(self, nodeId : int, port : int, like : int, type : WireType = None) -> int:
        """
        Adds a wire leaving :param nodeId: that carries the same strand as
        wire :param like:.
        """
        model = self.d.wires[like]
        return self.d.addWire(type or model.type, (nodeId, port), None, model.referent, model.label).id

    def enter(self, regionId : int, wireId : int, position) -> int:
        kind = NodeKind.SCOPE_ENTER_L if self.d.regions[regionId].kind is RegionKind.CNJ_LEFT else NodeKind.SCOPE_ENTER_R
        node = self.d.addNode(kind, ins = 1, outs = 1, passes = [(0, 0)], region = regionId, position = position)
        self.d.setTarget(wireId, node.id, 0)
        return self.out(node.id, 0, wireId)

    def exit(self, regionId : int, wireId : int, position) -> int:
        kind = NodeKind.SCOPE_EXIT_L if self.d.regions[regionId].kind is RegionKind.CNJ_LEFT else NodeKind.SCOPE_EXIT_R
        node = self.d.addNode(kind, ins = 1, outs = 1, passes = [(0, 0)], region = regionId, position = position)
        self.d.setTarget(wireId, node.id, 0)
        return self.out(node.id, 0, wireId)

    def start(self, occ : NounOccurrence, token : str, regionId, path) -> int:
        """
        Starts the strand of an occurrence and brings it down to the region
        it is used in.
        """
        referent = self.text.referentOf(occ)
        prev = self.prev.get(occ)
        if prev is not None and prev[1] is PairKind.REFLEXIVE:
            node = self.d.addNode(NodeKind.LINK_IN, ins = 1, outs = 1, region = regionId, position = self.pos(path))
            self.linkIns[occ] = node.id
            return self.d.addWire(WireType.NP, (node.id, 0), None, referent, token).id
        if prev is not None:
            node = self.d.addNode(NodeKind.LINK_IN, ins = 1, outs = 1, position = self.pos(path))
            self.linkIns[occ] = node.id
            wireId = self.d.addWire(WireType.NP, (node.id, 0), None, referent, token).id
        else:
            wireId = self.d.addWire(WireType.NP, None, None, referent, token).id
            self.records[referent] = PortRecord(referent, token, regionId is not None)
        for x in self.d.scopeChain(regionId):
            wireId = self.enter(x, wireId, self.pos(path))
        return wireId

    def np(self, node : Phrase, path, regionId):
        """
        Builds an NP used in :param regionId:. Returns the strand cursor
        (occurrence, wire id).
        """
        rule = node.rule
        if rule == constants.RULE_NP:
            occ = NounOccurrence(self.ci, self.paths[path])
            return occ, self.start(occ, node.children[0], regionId, path)
        if rule == constants.RULE_ADJ:
            occ, wireId = self.np(node.children[1], path + (1,), regionId)
            return occ, self.adjective(node.children[0], path, wireId, regionId)
        if rule == constants.RULE_CROSS:
            occ, wireId = self.np(node.children[0], path + (0,), self.d.regions[regionId].parent)
            return occ, self.enter(regionId, wireId, self.pos(path))
        return self.np(node.children[0], path + (0,), regionId)

    def adjective(self, adj, path, wireId : int, regionId, copular : bool = False) -> int:
        if isinstance(adj, Phrase):
            vp, _ = self.verbPhrase(adj.children[0], path + (0,), regionId, WireType.IVP)
            node = self.d.addNode(NodeKind.ING, ins = 2, outs = 1, passes = [(0, 0)], region = regionId, position = self.pos(path))
            self.d.setTarget(vp, node.id, 1)
        else:
            kind = NodeKind.ADJ_IS_INTRO if copular else NodeKind.ADJ_INTRO
            node = self.d.addNode(kind, adj, 1, 1, [(0, 0)], regionId, self.pos(path))
        self.d.setTarget(wireId, node.id, 0)
        return self.out(node.id, 0, wireId)

    def verbPhrase(self, node, path, regionId, type : WireType):
        """
        Builds a verb phrase. Returns the verb wire and the cursors of the
        adposition objects.
        """
        if not isinstance(node, Phrase):
            label = self.d.addNode(NodeKind.LABEL, node, outs = 1, region = regionId, position = self.pos(path),
                                   payload = {'adps': [], 'advs': []})
            return self.d.addWire(type, (label.id, 0)).id, []
        rule = node.rule
        if rule == constants.RULE_ADV:
            inner, adps = self.verbPhrase(node.children[1], path + (1,), regionId, type)
            innerType = self.d.wires[inner].type
            kind = NodeKind.ADV_IV if innerType is WireType.IVP else NodeKind.ADV_TV
            modifier = self.d.addNode(kind, node.children[0], 1, 1, (), regionId, self.pos(path),
                                      [(self.pos(path), node.children[0])])
            self.d.setTarget(inner, modifier.id, 0)
            return self.d.addWire(innerType, (modifier.id, 0)).id, adps
        if rule == constants.RULE_ADP:
            inner, adps = self.verbPhrase(node.children[0], path + (0,), regionId, type)
            occ, obj = self.np(node.children[2], path + (2,), regionId)
            innerType = self.d.wires[inner].type
            kind = NodeKind.ADP_IV if innerType is WireType.IVP else NodeKind.ADP_TV
            position = self.pos(path + (2,))
            modifier = self.d.addNode(kind, node.children[1], 2, 2, [(1, 1)], regionId, position,
                                      [(position, node.children[1])])
            self.d.setTarget(inner, modifier.id, 0)
            self.d.setTarget(obj, modifier.id, 1)
            vp = self.d.addWire(innerType, (modifier.id, 0)).id
            return vp, adps + [(occ, self.out(modifier.id, 1, obj))]
        # psv
        passive = self.d.addRegion(RegionKind.PASSIVE, regionId)
        inner, adps = self.verbPhrase(node.children[0], path + (0,), passive.id, WireType.TVP)
        opener = self.d.addNode(NodeKind.PSV_OPEN, ins = 1, outs = 1, passes = [(0, 0)], region = passive.id, position = self.pos(path))
        passive.owner = opener.id
        self.d.setTarget(inner, opener.id, 0)
        return self.d.addWire(WireType.TVP_PSV, (opener.id, 0)).id, adps

    def closeUnit(self, live : list, regionId) -> list:
        """
        Ends the strands of earlier occurrences of reflexive pairs right
        after their simple sentence.
        """
        kept = []
        for occ, wireId in live:
            follower = self.next.get(occ)
            if follower is not None and follower[1] is PairKind.REFLEXIVE:
                node = self.d.addNode(NodeKind.LINK_OUT, ins = 1, outs = 1, region = regionId,
                                      position = self.pos(self.text.leafPath(occ)))
                self.d.setTarget(wireId, node.id, 0)
                self.linkOuts[occ] = node.id
            else:
                kept.append((occ, wireId))
        return kept

    def scope(self, scope : Phrase, path, regionId : int) -> list:
        """
        Builds the sentence of a scope and brings its strands back out.
        """
        inner = self.sentence(scope.children[0], path + (0,), regionId)
        return [(occ, self.exit(regionId, wireId, self.pos(path))) for occ, wireId in inner]

    def sentence(self, node : Phrase, path, regionId) -> list:
        """
        Builds a sentence inside :param regionId:. Returns the cursors of the
        strands that leave it.
        """
        rule = node.rule
        c = node.children
        if rule == constants.RULE_IV:
            occ, subj = self.np(c[0], path + (0,), regionId)
            vp, adps = self.verbPhrase(c[1], path + (1,), regionId, WireType.IVP)
            intro = self.d.addNode(NodeKind.IV_INTRO, ins = 2, outs = 1, passes = [(0, 0)], region = regionId,
                                   position = self.pos(path))
            self.d.setTarget(subj, intro.id, 0)
            self.d.setTarget(vp, intro.id, 1)
            return self.closeUnit([(occ, self.out(intro.id, 0, subj))] + adps, regionId)
        if rule == constants.RULE_TV:
            occ, subj = self.np(c[0], path + (0,), regionId)
            objOcc, obj = self.np(c[2], path + (2,), regionId)
            vp, adps = self.verbPhrase(c[1], path + (1,), regionId, WireType.TVP)
            kind = NodeKind.PSV_CLOSE if self.d.wires[vp].type is WireType.TVP_PSV else NodeKind.TV_INTRO
            intro = self.d.addNode(kind, ins = 3, outs = 2, passes = [(0, 0), (2, 1)], region = regionId,
                                   position = self.pos(path))
            self.d.setTarget(subj, intro.id, 0)
            self.d.setTarget(vp, intro.id, 1)
            self.d.setTarget(obj, intro.id, 2)
            live = [(occ, self.out(intro.id, 0, subj)), (objOcc, self.out(intro.id, 1, obj))]
            return self.closeUnit(live + adps, regionId)
        if rule == constants.RULE_IS:
            occ, subj = self.np(c[0], path + (0,), regionId)
            return self.closeUnit([(occ, self.adjective(c[1], path + (1,), subj, regionId, True))], regionId)
        if rule == constants.RULE_SCV:
            cursors = [self.np(c[0], path + (0,), regionId)]
            if len(c) == 4:
                cursors.append(self.np(c[2], path + (2,), regionId))
            n = len(cursors)
            intro = self.d.addNode(NodeKind.SCV_INTRO, c[1], n, n, [(x, x) for x in range(n)], regionId, self.pos(path))
            live = []
            for x, (occ, wireId) in enumerate(cursors):
                self.d.setTarget(wireId, intro.id, x)
                live.append((occ, self.out(intro.id, x, wireId)))
            region = self.d.addRegion(RegionKind.SCV_COMPLEMENT, regionId, intro.id)
            return live + self.scope(c[-1], path + (len(c) - 1,), region.id)
        # cnj
        intro = self.d.addNode(NodeKind.CNJ_INTRO, c[1], region = regionId, position = self.pos(path))
        left = self.d.addRegion(RegionKind.CNJ_LEFT, regionId, intro.id)
        right = self.d.addRegion(RegionKind.CNJ_RIGHT, regionId, intro.id)
        return self.scope(c[0], path + (0,), left.id) + self.scope(c[2], path + (2,), right.id)

    def clause(self, ci : int, body : Phrase) -> None:
        self.ci = ci
        self.paths = {x: y for y, x in enumerate(npPaths(body))}
        for occ, wireId in self.sentence(body, (), None):
            self.ends[occ] = wireId

    def lastEnd(self, referent : str, upTo : int, fallback : NounOccurrence) -> NounOccurrence:
        """
        The last occurrence of :param referent: whose strand ends at top
        level in a clause no later than :param upTo:.
        """
        found = [x for x in self.ends if x.sentence <= upTo and self.text.referentOf(x) == referent]
        return max(found) if found else fallback

    def possessives(self) -> None:
        for link in self.text.links:
            if link.kind is not LinkKind.POSSESSIVE:
                continue
            a, b = link.chain
            owner = self.lastEnd(self.text.referentOf(a), b.sentence, a)
            owned = self.lastEnd(self.text.referentOf(b), b.sentence, b)
            position = (b.sentence, LATE, b.occurrence)
            po = self.d.addNode(NodeKind.POSS_OUT, ins = 1, outs = 2, passes = [(0, 0)], position = position)
            pi = self.d.addNode(NodeKind.POSS_IN, ins = 2, outs = 1, passes = [(0, 0)], position = position + (1,))
            self.d.setTarget(self.ends[owner], po.id, 0)
            self.ends[owner] = self.out(po.id, 0, self.ends[owner])
            self.d.setTarget(self.ends[owned], pi.id, 0)
            self.ends[owned] = self.out(pi.id, 0, self.ends[owned])
            self.d.addWire(WireType.POSSLINK, (po.id, 1), (pi.id, 1))

    def links(self) -> None:
        for occ, (follower, kind) in sorted(self.next.items()):
            if kind is PairKind.REFLEXIVE:
                self.d.addWire(WireType.PRONLINK, (self.linkOuts[occ], 0), (self.linkIns[follower], 0), reflexive = True)
                continue
            node = self.d.addNode(NodeKind.LINK_OUT, ins = 1, outs = 1, position = (occ.sentence, LATE, occ.occurrence, 2))
            self.d.setTarget(self.ends.pop(occ), node.id, 0)
            self.d.addWire(WireType.PRONLINK, (node.id, 0), (self.linkIns[follower], 0))

    def translate(self) -> TextDiagram:
        for ci, body in enumerate(self.text.clauses):
            self.clause(ci, body)
        self.possessives()
        self.links()
        order = list(dict.fromkeys(self.text.referentOf(x) for x in self.text.occurrences()))
        self.d.inputs = [self.records[x] for x in order]
        self.d.outputs = [PortRecord(x, self.records[x].label) for x in order]
        return self.d


def fromText(text : HybridText) -> TextDiagram:
    """
    Translates a validated text into a text diagram.
    """
    d = _Translator(text).translate()
    logger.info(f'translated {len(text.clauses)} clause(s) into {d!r}')
    return d
