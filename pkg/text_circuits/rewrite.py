"""
text_circuits.rewrite
~~~~~~~~~~~~~~~~~~~~~
The staged rewrite engine. A text diagram becomes a text circuit in four
stages, each run to a fixpoint:

    1. eliminateLinks: reflexive links become reflexive regions, then the
       regular links are joined into plain wire composition.
    2. shrinkReflexive: reflexive regions are merged and emptied until they
       hold a single verb cluster.
    3. normaliseGates: every verb or adjective cluster is contracted into one
       gate in normal form.
    4. reduceScopes: phrase scopes become boxes with holes, innermost first.

Every stage takes a `chooser`, a callable picking the index of the match to
rewrite next out of the list it is given. The default picks the first one.
"""

import dataclasses
import functools
import itertools
import logging
import random

import networkx as nx

from . import constants
from .circuit import GateCore, HoleBox, Instance, NounWire, TextCircuit
from .diagram import TextDiagram
from .enums import NodeKind, RegionKind, RuleName, WireType
from .exceptions import CyclicLink, InvalidTextError, InvariantBreach
from .lexicon import Lexicon, defaultLexicon


logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())


@dataclasses.dataclass(frozen = True)
class TraceStep:
    """
    One rule application. `measure` is the termination measure of the stage
    after the step and `choice` the index the chooser returned.
    """
    rule : RuleName
    nodes : tuple
    measure : int
    stage : str
    choice : int = 0

    def __str__(self):
        return f'{self.rule.value} {",".join(str(x) for x in self.nodes)} measure={self.measure}'


class RewriteTrace:
    """
    The ordered rule applications of a compilation.
    """

    def __init__(self, steps = ()):
        self.__steps = list(steps)

    def __iter__(self):
        return iter(self.__steps)

    def __len__(self):
        return len(self.__steps)

    def __repr__(self):
        return f'RewriteTrace({len(self.__steps)} step(s))'

    def append(self, step : TraceStep) -> None:
        self.__steps.append(step)

    def extend(self, steps) -> None:
        self.__steps.extend(steps)

    def rules(self) -> list:
        return [x.rule for x in self.__steps]

    def toLines(self) -> list:
        """
        Returns the trace in the `--trace` line format.
        """
        return [f'STEP {x} {y}' for x, y in enumerate(self.__steps, 1)]

    def replay(self, d : TextDiagram, lexicon : Lexicon = None) -> TextDiagram:
        """
        Re-runs the recorded choices on :param d:, the diagram the trace
        started from.

        :raises InvariantBreach: if the replay applies different rules.
        :returns: the final diagram.
        """
        from .extensions import STAGE, applyExtensions
        steps = RewriteTrace()
        if any(x.stage == STAGE for x in self.__steps):
            d, more = applyExtensions(d, lexicon)
            steps.extend(more)
        choices = [x.choice for x in self.__steps if x.stage != STAGE]

        def choose(matches):
            if not choices:
                raise InvariantBreach('the replay needs more steps than were recorded')
            return choices.pop(0)

        d, more = reduceDiagram(d, choose)
        steps.extend(more)
        if [(x.rule, x.nodes) for x in steps] != [(x.rule, x.nodes) for x in self.__steps]:
            raise InvariantBreach('replaying the trace applied different rules')
        return d

    @property
    def steps(self) -> list:
        return list(self.__steps)


@dataclasses.dataclass
class CompileOptions:
    """
    :param extensions: accept and reduce the passive, possessive and gerund
        extensions.
    :param trace: log the full rewrite trace at DEVELOPER level.
    :param rng: if set, matches are picked at random instead of in order.
    """
    extensions : bool = True
    trace : bool = False
    rng : random.Random = None


@dataclasses.dataclass
class _Match:
    rule : RuleName
    nodes : tuple
    apply : object
    key : object = None


def firstMatch(matches : list) -> int:
    return 0


def randomChooser(rng : random.Random):
    """
    Returns a chooser picking matches at random.
    """
    return lambda matches: rng.randrange(len(matches))


def orderChooser(order):
    """
    Returns a chooser that eliminates the link wires in :param order: and
    picks the first match everywhere else.
    """
    pending = list(order)

    def choose(matches):
        if pending and matches[0].key is not None:
            for x, match in enumerate(matches):
                if match.key == pending[0]:
                    pending.pop(0)
                    return x
        return 0

    return choose


def _runStage(d : TextDiagram, stage : str, candidates, measure, chooser, trace : RewriteTrace) -> TextDiagram:
    current = measure(d)
    while True:
        matches = candidates(d)
        if not matches:
            break
        choice = chooser(matches)
        match = matches[choice]
        match.apply(d)
        after = measure(d)
        if after >= current:
            raise InvariantBreach(f'{match.rule.value} on {match.nodes} did not decrease the {stage} measure ({current} -> {after})')
        current = after
        step = TraceStep(match.rule, match.nodes, after, stage, choice)
        trace.append(step)
        logger.debug(f'{stage}: {step}')
    d.check()
    return d


# Helpers on verb clusters. A cluster is an intro node and the chain of
# modifiers between it and its label.

def _textOrder(position : tuple) -> tuple:
    """
    Sort key putting inner (earlier applied) modifiers first.
    """
    return (-len(position), position)


def _verbChain(d : TextDiagram, intro) -> list:
    chain = []
    node = d.node(intro.ins[1], 'source')
    while node is not None:
        chain.append(node.id)
        if node.kind is NodeKind.LABEL:
            break
        node = d.node(node.ins[0], 'source')
    return chain


def _introOf(d : TextDiagram, node):
    while not node.kind.isIntro:
        node = d.node(node.outs[0])
    return node


def _cluster(d : TextDiagram, intro) -> list:
    return [intro.id] + _verbChain(d, intro)


def _transferOwnership(d : TextDiagram, old : int, new : int) -> None:
    for region in d.regions.values():
        if region.owner == old:
            region.owner = new


# Stage 1: links.

def _reflexIntro(d : TextDiagram, wireId : int) -> None:
    """
    Doubles the earlier occurrence's wire back into the unit and wraps the
    unit and the doubled wire in a reflexive region.
    """
    lo, li = d.node(wireId, 'source'), d.node(wireId, 'target')
    a, b = lo.ins[0], li.outs[0]
    unit = _introOf(d, d.node(a, 'source'))
    d.removeWire(wireId)
    d.removeNode(lo.id)
    d.removeNode(li.id)
    d.joinWires(a, b)
    cluster = set(_cluster(d, unit))
    back = []
    wire = a
    while True:
        node = d.node(wire)
        if node.id in cluster:
            break
        back.append(node.id)
        if node.kind is NodeKind.IV_INTRO:
            back.extend(_verbChain(d, node))
        wire = node.outs[node.nextPort(d.wires[wire].target[1])]
    current = d.regions.get(unit.region)
    if current is not None and current.kind is RegionKind.REFLEXIVE and current.owner == unit.id:
        region = d.addRegion(RegionKind.REFLEXIVE, current.id, unit.id)
        moved = back
    else:
        region = d.addRegion(RegionKind.REFLEXIVE, unit.region, unit.id)
        moved = sorted(cluster) + back
    for nodeId in moved:
        d.nodes[nodeId].region = region.id


def _strandBorders(d : TextDiagram, wireId : int):
    """
    Returns the exit nodes before a LinkOut and the enter nodes after its
    LinkIn, both outermost first.
    """
    lo, li = d.node(wireId, 'source'), d.node(wireId, 'target')
    exits = []
    node = d.node(lo.ins[0], 'source')
    while node is not None and node.kind.isExit:
        exits.append(node.id)
        node = d.node(node.ins[0], 'source')
    enters = []
    node = d.node(li.outs[0])
    while node is not None and node.kind.isEnter:
        enters.append(node.id)
        node = d.node(node.outs[0])
    return exits, enters


def _linkRule(d : TextDiagram, wireId : int):
    """
    Classifies a regular link. A link from the left conjunct of a
    conjunction into its right conjunct meets at the conjunction; every
    other link is plain composition.

    :returns: (rule, number of shared outer scopes).
    """
    exits, enters = _strandBorders(d, wireId)
    x = 0
    while x < min(len(exits), len(enters)) and d.nodes[exits[x]].region == d.nodes[enters[x]].region:
        x += 1
    if x < min(len(exits), len(enters)):
        left, right = d.nodes[exits[x]], d.nodes[enters[x]]
        if left.kind is NodeKind.SCOPE_EXIT_L and right.kind is NodeKind.SCOPE_ENTER_R \
           and d.regions[left.region].owner == d.regions[right.region].owner:
            return RuleName.LINK_ELIM_2, x
    return RuleName.LINK_ELIM_1, x


def _linkElim(d : TextDiagram, wireId : int) -> None:
    rule, shared = _linkRule(d, wireId)
    exits, enters = _strandBorders(d, wireId)
    lo, li = d.node(wireId, 'source'), d.node(wireId, 'target')
    a, b = lo.ins[0], li.outs[0]
    d.removeWire(wireId)
    d.removeNode(lo.id)
    d.removeNode(li.id)
    if rule is RuleName.LINK_ELIM_2:
        for nodeId in exits[:shared] + enters[:shared]:
            d.bypass(nodeId)
        d.joinWires(d.nodes[exits[shared]].outs[0], d.nodes[enters[shared]].ins[0])
        return
    source, target = d.node(a, 'source'), d.node(b)
    if source is not None and target is not None and nx.has_path(d.graph(), target.id, source.id):
        raise CyclicLink(f'joining n{source.id} to n{target.id} closes a cycle')
    d.joinWires(a, b)


def _linkMatches(d : TextDiagram) -> list:
    links = sorted(x for x, y in d.wires.items() if y.type is WireType.PRONLINK)
    reflexive = [x for x in links if d.wires[x].reflexive]
    matches = []
    for wireId in reflexive or links:
        nodes = (d.wires[wireId].source[0], d.wires[wireId].target[0])
        if reflexive:
            matches.append(_Match(RuleName.REFLEX_INTRO, nodes, functools.partial(_reflexIntro, wireId = wireId), wireId))
        else:
            rule = _linkRule(d, wireId)[0]
            matches.append(_Match(rule, nodes, functools.partial(_linkElim, wireId = wireId), wireId))
    return matches


def _linkMeasure(d : TextDiagram) -> int:
    return d.countWires(WireType.PRONLINK)


def eliminateLinks(d : TextDiagram, chooser = None):
    """
    Removes every pronominal link wire, reflexive ones first.

    :raises CyclicLink: if a regular link would close a cycle.
    :returns: the new diagram and its RewriteTrace.
    """
    trace = RewriteTrace()
    d = _runStage(d.copy(), 'links', _linkMatches, _linkMeasure, chooser or firstMatch, trace)
    return d, trace


# Stage 2: reflexive regions.

def _reflexAssoc(d : TextDiagram, regionId : int) -> None:
    d.dissolveRegion(regionId)


def _classEntry(d : TextDiagram, regionId : int, head : int, port : int) -> int:
    """
    Walks back from out port :param port: of a cluster node to the wire on
    which the noun enters the reflexive region.
    """
    node = d.nodes[head]
    wireId = node.ins[node.prevPort(port)]
    while True:
        source = d.node(wireId, 'source')
        if source is None or source.region != regionId:
            return wireId
        wireId = source.ins[source.prevPort(d.wires[wireId].source[1])]


def _reflexSlide(d : TextDiagram, regionId : int, nodeId : int, head : int, port : int) -> None:
    """
    Moves a one wire gate off the doubled wire onto the wire entering the
    region.
    """
    region = d.regions[regionId]
    node = d.nodes[nodeId]
    moved = [nodeId] + (_verbChain(d, node) if node.kind is NodeKind.IV_INTRO else [])
    d.joinWires(node.ins[0], node.outs[0])
    d.splice(_classEntry(d, regionId, head, port), nodeId)
    for x in moved:
        d.nodes[x].region = region.parent


def _reflexMatches(d : TextDiagram) -> list:
    matches = []
    for regionId in sorted(d.regions):
        region = d.regions[regionId]
        if region.kind is not RegionKind.REFLEXIVE:
            continue
        parent = d.regions.get(region.parent)
        if parent is not None and parent.kind is RegionKind.REFLEXIVE and parent.owner == region.owner:
            matches.append(_Match(RuleName.REFLEX_ASSOC, (region.owner,), functools.partial(_reflexAssoc, regionId = regionId)))
            continue
        if d.children(regionId):
            continue
        cluster = set(_cluster(d, d.nodes[region.owner]))
        for head in sorted(cluster):
            for port, wireId in enumerate(d.nodes[head].outs):
                if wireId is None or d.wires[wireId].type is not WireType.NP:
                    continue
                node = d.node(wireId)
                if node is None or node.id in cluster or node.region != regionId:
                    continue
                if node.kind in (NodeKind.ADJ_INTRO, NodeKind.IV_INTRO):
                    apply = functools.partial(_reflexSlide, regionId = regionId, nodeId = node.id, head = head, port = port)
                    matches.append(_Match(RuleName.REFLEX_SLIDE, (region.owner, node.id), apply))
    return matches


def _reflexMeasure(d : TextDiagram) -> int:
    regions = sum(1 for x in d.regions.values() if x.kind is RegionKind.REFLEXIVE)
    return regions + sum(1 for x in d.nodes.values() if d.reflexiveRoot(x.region) is not None)


def shrinkReflexive(d : TextDiagram, chooser = None):
    """
    Merges nested reflexive regions of one unit and slides the one wire
    gates on doubled wires out, until every reflexive region holds exactly
    one verb cluster.
    """
    trace = RewriteTrace()
    d = _runStage(d.copy(), 'reflexive', _reflexMatches, _reflexMeasure, chooser or firstMatch, trace)
    return d, trace


# Stage 3: gate normal form.

# Marks a region argument left out, since None is the top level.
_INHERIT = object()


def _newGate(d : TextDiagram, old, payload, ins : list, outs : list, kind : NodeKind = NodeKind.GATE, region = _INHERIT):
    """
    Adds a node taking over :param ins: and :param outs: from the nodes it
    replaces.
    """
    region = old.region if region is _INHERIT else region
    node = d.addNode(kind, getattr(payload, 'token', None), len(ins), len(outs), [(x, x) for x in range(len(ins))],
                     region, old.position, payload)
    for x, wireId in enumerate(ins):
        d.setTarget(wireId, node.id, x)
    for x, wireId in enumerate(outs):
        d.setSource(wireId, node.id, x)
    _transferOwnership(d, old.id, node.id)
    return node


def _isElimination(d : TextDiagram, nodeId : int) -> None:
    d.nodes[nodeId].kind = NodeKind.ADJ_INTRO


def _ancilla(d : TextDiagram, nodeId : int) -> None:
    """
    Routes the adposition's object through the intro node on an ancillary
    wire.
    """
    node = d.nodes[nodeId]
    intro = _introOf(d, node)
    for port in range(1, len(node.outs)):
        wire = d.wires[node.outs[port]]
        if wire.type is not WireType.NP:
            continue
        inPort, outPort = len(intro.ins), len(intro.outs)
        d.setSource(wire.id, intro.id, outPort)
        d.addWire(WireType.ADP_ANC, (node.id, port), (intro.id, inPort), wire.referent, wire.label)
        intro.passes.append((inPort, outPort))


def _adpAdvOrder(d : TextDiagram, advId : int, adpId : int) -> None:
    adv, adp = d.nodes[advId], d.nodes[adpId]
    above, middle, below = adv.ins[0], adv.outs[0], adp.outs[0]
    d.setTarget(above, adpId, 0)
    d.setSource(middle, adpId, 0)
    d.setTarget(middle, advId, 0)
    d.setSource(below, advId, 0)


def _absorbAdps(d : TextDiagram, into, other) -> None:
    for port in range(1, len(other.ins)):
        inPort, outPort = len(into.ins), len(into.outs)
        d.setTarget(other.ins[port], into.id, inPort)
        d.setSource(other.outs[port], into.id, outPort)
        into.passes.append((inPort, outPort))


def _adpGather(d : TextDiagram, adpId : int) -> None:
    adp = d.nodes[adpId]
    label = d.node(adp.ins[0], 'source')
    below = adp.outs[0]
    d.removeWire(adp.ins[0])
    d.setSource(below, label.id, 0)
    _absorbAdps(d, label, adp)
    label.payload['adps'].extend(adp.payload)
    del d.nodes[adpId]


def _adpAssoc(d : TextDiagram, upperId : int, lowerId : int) -> None:
    upper, lower = d.nodes[upperId], d.nodes[lowerId]
    below = lower.outs[0]
    d.removeWire(upper.outs[0])
    d.setSource(below, upperId, 0)
    _absorbAdps(d, upper, lower)
    upper.payload = upper.payload + lower.payload
    del d.nodes[lowerId]


def _advGather(d : TextDiagram, advId : int) -> None:
    adv = d.nodes[advId]
    label = d.node(adv.ins[0], 'source')
    below = adv.outs[0]
    d.removeWire(adv.ins[0])
    d.setSource(below, label.id, 0)
    label.payload['advs'].extend(adv.payload)
    del d.nodes[advId]


def _advAssoc(d : TextDiagram, upperId : int, lowerId : int) -> None:
    upper, lower = d.nodes[upperId], d.nodes[lowerId]
    below = lower.outs[0]
    d.removeWire(upper.outs[0])
    d.setSource(below, upperId, 0)
    upper.payload = upper.payload + lower.payload
    del d.nodes[lowerId]


def _contractAdjective(d : TextDiagram, nodeId : int) -> None:
    node = d.nodes[nodeId]
    _newGate(d, node, GateCore.adjective(node.token), [node.ins[0]], [node.outs[0]])
    del d.nodes[nodeId]


def _contractVerb(d : TextDiagram, introId : int) -> None:
    """
    Contracts an intro node and the label holding every modifier into one
    verb gate. Gate ports are the subject, the object and the adposition
    objects from the innermost adposition out.
    """
    intro = d.nodes[introId]
    label = d.node(intro.ins[1], 'source')
    arity = 1 if intro.kind is NodeKind.IV_INTRO else 2
    base = arity + 1
    ins = [intro.ins[0]] + ([intro.ins[2]] if arity == 2 else [])
    outs = list(intro.outs[:arity])
    adps = []
    ancillas = []
    for port in range(base, len(intro.ins)):
        ancilla = intro.ins[port]
        inPort = label.prevPort(d.wires[ancilla].source[1])
        position, token = label.payload['adps'][inPort]
        adps.append((_textOrder(position), token, label.ins[inPort], intro.outs[intro.nextPort(port)]))
        ancillas.append(ancilla)
    adps.sort()
    advs = [y for x, y in sorted(label.payload['advs'], key = lambda x: _textOrder(x[0]))]
    core = GateCore.verb(label.token, arity, [x[1] for x in adps], advs)
    for wireId in ancillas + [intro.ins[1]]:
        d.removeWire(wireId)
    _newGate(d, intro, core, ins + [x[2] for x in adps], outs + [x[3] for x in adps])
    d.removeNode(label.id)
    d.removeNode(introId)


def _reflexContract(d : TextDiagram, regionId : int) -> None:
    """
    Turns a reflexive region around a single gate into a reflexive box. The
    doubled wires give the identified ports.
    """
    region = d.regions[regionId]
    gate = d.nodes[d.members(regionId)[0]]
    n = len(gate.ins)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    back = []
    for port, wireId in enumerate(gate.outs):
        target = d.wires[wireId].target
        if target is not None and target[0] == gate.id:
            a, b = find(port), find(target[1])
            parent[max(a, b)] = min(a, b)
            back.append(wireId)
    groups = {}
    for x in range(n):
        groups.setdefault(find(x), []).append(x)
    classes = sorted(groups.values())
    ins, outs = [], []
    for cls in classes:
        ins.append(next(gate.ins[x] for x in cls if gate.ins[x] not in back))
        outs.append(next(gate.outs[x] for x in cls if gate.outs[x] not in back))
    pairs = [(cls[0], x) for cls in classes for x in cls[1:]]
    box = HoleBox.reflexive(n, pairs, gate.payload)
    for wireId in back:
        d.removeWire(wireId)
    _newGate(d, gate, box, ins, outs, NodeKind.BOX, region.parent)
    del d.nodes[gate.id]
    d.dissolveRegion(regionId)


def _chainHasAdp(d : TextDiagram, label) -> bool:
    node = d.node(label.outs[0])
    while node is not None and node.kind.isModifier:
        if node.kind in (NodeKind.ADP_IV, NodeKind.ADP_TV):
            return True
        node = d.node(node.outs[0])
    return False


def _gateMatches(d : TextDiagram) -> list:
    matches = []
    adps = (NodeKind.ADP_IV, NodeKind.ADP_TV)
    advs = (NodeKind.ADV_IV, NodeKind.ADV_TV)
    for nodeId in sorted(d.nodes):
        node = d.nodes[nodeId]
        kind = node.kind
        if kind is NodeKind.ADJ_IS_INTRO:
            matches.append(_Match(RuleName.IS_ELIMINATION, (nodeId,), functools.partial(_isElimination, nodeId = nodeId)))
        elif kind is NodeKind.ADJ_INTRO:
            matches.append(_Match(RuleName.GATE_CONTRACT, (nodeId,), functools.partial(_contractAdjective, nodeId = nodeId)))
        elif kind in adps:
            if any(d.wires[x].type is WireType.NP for x in node.outs[1:]):
                rule = RuleName.ADP_IV_ANCILLA if kind is NodeKind.ADP_IV else RuleName.ADP_TV_ANCILLA
                matches.append(_Match(rule, (nodeId,), functools.partial(_ancilla, nodeId = nodeId)))
                continue
            above = d.node(node.ins[0], 'source')
            if above.kind is NodeKind.LABEL:
                matches.append(_Match(RuleName.ADP_GATHER, (above.id, nodeId), functools.partial(_adpGather, adpId = nodeId)))
            elif above.kind in adps and all(d.wires[x].type is WireType.ADP_ANC for x in above.outs[1:]):
                apply = functools.partial(_adpAssoc, upperId = above.id, lowerId = nodeId)
                matches.append(_Match(RuleName.ADP_ASSOC, (above.id, nodeId), apply))
        elif kind in advs:
            above = d.node(node.ins[0], 'source')
            below = d.node(node.outs[0])
            if below.kind in adps:
                apply = functools.partial(_adpAdvOrder, advId = nodeId, adpId = below.id)
                matches.append(_Match(RuleName.ADP_ADV_ORDER, (nodeId, below.id), apply))
            if above.kind is NodeKind.LABEL and not _chainHasAdp(d, above):
                matches.append(_Match(RuleName.ADV_GATHER, (above.id, nodeId), functools.partial(_advGather, advId = nodeId)))
            elif above.kind in advs:
                apply = functools.partial(_advAssoc, upperId = above.id, lowerId = nodeId)
                matches.append(_Match(RuleName.ADV_ASSOC, (above.id, nodeId), apply))
        elif kind.isIntro and d.node(node.ins[1], 'source').kind is NodeKind.LABEL:
            matches.append(_Match(RuleName.GATE_CONTRACT, (nodeId,), functools.partial(_contractVerb, introId = nodeId)))
    for regionId in sorted(d.regions):
        region = d.regions[regionId]
        members = d.members(regionId, True)
        if region.kind is RegionKind.REFLEXIVE and len(members) == 1 and d.nodes[members[0]].kind is NodeKind.GATE:
            matches.append(_Match(RuleName.REFLEX_CONTRACT, (members[0],), functools.partial(_reflexContract, regionId = regionId)))
    matches.sort(key = lambda x: -d.regionDepth(d.nodes[x.nodes[-1]].region))
    return matches


def _advsAbove(d : TextDiagram, node) -> int:
    count = 0
    above = d.node(node.ins[0], 'source')
    while above is not None and above.kind is not NodeKind.LABEL:
        if above.kind in (NodeKind.ADV_IV, NodeKind.ADV_TV):
            count += 1
        above = d.node(above.ins[0], 'source')
    return count


def _gateMeasure(d : TextDiagram) -> int:
    total = sum(1 for x in d.regions.values() if x.kind is RegionKind.REFLEXIVE)
    for node in d.nodes.values():
        kind = node.kind
        if kind is NodeKind.ADJ_IS_INTRO:
            total += 2
        elif kind in (NodeKind.ADJ_INTRO, NodeKind.LABEL) or kind.isIntro:
            total += 1
        elif kind.isModifier:
            total += 2 + sum(1 for x in node.outs[1:] if d.wires[x].type is WireType.NP)
            if kind in (NodeKind.ADP_IV, NodeKind.ADP_TV):
                total += _advsAbove(d, node)
    return total


def normaliseGates(d : TextDiagram, chooser = None):
    """
    Brings every cluster into gate normal form: the copula is eliminated,
    adpositions are routed through ancillary wires and gathered above the
    adverbs, and the cluster is contracted into a single gate. Matches in
    deeper regions come first in the list given to the chooser.
    """
    trace = RewriteTrace()
    d = _runStage(d.copy(), 'gates', _gateMatches, _gateMeasure, chooser or firstMatch, trace)
    return d, trace


# Stage 4: phrase scopes.

def _existsIntro(d : TextDiagram, enterId : int) -> None:
    enter = d.nodes[enterId]
    gate = d.addNode(NodeKind.GATE, constants.EXISTS, 1, 1, [(0, 0)], enter.region, enter.position, GateCore.exists())
    d.splice(enter.outs[0], gate.id)


def _strandExit(d : TextDiagram, wireId : int, regionId : int):
    """
    Follows a strand through a region to the node where it leaves.
    """
    node = d.node(wireId)
    while node is not None and not (node.kind.isExit and node.region == regionId):
        wireId = node.outs[node.nextPort(d.wires[wireId].target[1])]
        node = d.node(wireId)
    if node is None:
        raise InvariantBreach(f'a strand leaves region g{regionId} without an exit')
    return node


def _enters(d : TextDiagram, regionId : int) -> list:
    enters = [d.nodes[x] for x in d.members(regionId) if d.nodes[x].kind.isEnter]
    return sorted(enters, key = lambda x: (x.position, x.id))


def _hole(d : TextDiagram, regionId : int, enters : list) -> TextCircuit:
    """
    Reads the circuit inside a reduced region.
    """
    wires = [NounWire(d.wires[x.outs[0]].referent, d.wires[x.outs[0]].label) for x in enters]
    members = [x for x in d.members(regionId) if not (d.nodes[x].kind.isEnter or d.nodes[x].kind.isExit)]
    for x in members:
        if d.nodes[x].kind not in (NodeKind.GATE, NodeKind.BOX):
            raise InvariantBreach(f'{d.nodes[x].kind.value} node n{x} left in region g{regionId}')
    instances = [Instance(d.nodes[x].payload, [d.wires[y].referent for y in d.nodes[x].ins]) for x in d.topological(members)]
    return TextCircuit.fromSequence(wires, instances)


def _replace(d : TextDiagram, nodeIds, owner, box : HoleBox, ins : list, outs : list) -> None:
    boundary = set(ins) | set(outs)
    _newGate(d, owner, box, ins, outs, NodeKind.BOX)
    for nodeId in nodeIds:
        node = d.nodes.pop(nodeId)
        for wireId in node.ins + node.outs:
            if wireId is not None and wireId in d.wires and wireId not in boundary:
                d.removeWire(wireId)


def _scvReduce(d : TextDiagram, regionId : int) -> None:
    region = d.regions[regionId]
    owner = d.nodes[region.owner]
    enters = _enters(d, regionId)
    hole = _hole(d, regionId, enters)
    ins = list(owner.ins) + [x.ins[0] for x in enters]
    outs = list(owner.outs) + [_strandExit(d, x.outs[0], regionId).outs[0] for x in enters]
    box = HoleBox.scv(owner.token, len(owner.ins), hole)
    _replace(d, d.members(regionId) + [owner.id], owner, box, ins, outs)
    d.dissolveRegion(regionId)


def _cnjReduce(d : TextDiagram, leftId : int, rightId : int) -> None:
    owner = d.nodes[d.regions[leftId].owner]
    lefts, rights = _enters(d, leftId), _enters(d, rightId)
    shared = set()
    outs = []
    for enter in lefts:
        leaving = _strandExit(d, enter.outs[0], leftId)
        following = d.node(leaving.outs[0])
        if following is not None and following.kind is NodeKind.SCOPE_ENTER_R and following.region == rightId:
            shared.add(following.id)
            leaving = _strandExit(d, following.outs[0], rightId)
        outs.append(leaving.outs[0])
    rightOnly = [x for x in rights if x.id not in shared]
    outs += [_strandExit(d, x.outs[0], rightId).outs[0] for x in rightOnly]
    ins = [x.ins[0] for x in lefts] + [x.ins[0] for x in rightOnly]
    box = HoleBox.cnj(owner.token, _hole(d, leftId, lefts), _hole(d, rightId, rights))
    _replace(d, d.members(leftId) + d.members(rightId) + [owner.id], owner, box, ins, outs)
    d.dissolveRegion(leftId)
    d.dissolveRegion(rightId)


def _ampersandReduce(d : TextDiagram, leftId : int, rightId : int) -> None:
    """
    `[&]` is plain composition: its scopes dissolve into the parent.
    """
    ownerId = d.regions[leftId].owner
    for regionId in (leftId, rightId):
        parent = d.regions[regionId].parent
        for nodeId in d.members(regionId):
            node = d.nodes[nodeId]
            if node.kind.isEnter or node.kind.isExit:
                d.bypass(nodeId)
            else:
                node.region = parent
        d.dissolveRegion(regionId)
    d.removeNode(ownerId)


def _scopeMatches(d : TextDiagram) -> list:
    matches = []
    for nodeId in sorted(d.nodes):
        node = d.nodes[nodeId]
        if node.kind.isEnter:
            following = d.node(node.outs[0])
            if following is not None and following.kind.isExit and following.region == node.region:
                matches.append(_Match(RuleName.EXISTS_INTRO, (nodeId,), functools.partial(_existsIntro, enterId = nodeId)))
    leaves = {x for x in d.regions if not d.children(x)}
    for regionId in sorted(leaves):
        region = d.regions[regionId]
        if region.kind is RegionKind.SCV_COMPLEMENT:
            matches.append(_Match(RuleName.SCV_REDUCE, (region.owner,), functools.partial(_scvReduce, regionId = regionId)))
        elif region.kind is RegionKind.CNJ_LEFT:
            right = next((x for x, y in d.regions.items() if y.kind is RegionKind.CNJ_RIGHT and y.owner == region.owner), None)
            if right not in leaves:
                continue
            if d.nodes[region.owner].token == constants.AMPERSAND:
                apply = functools.partial(_ampersandReduce, leftId = regionId, rightId = right)
                matches.append(_Match(RuleName.AMPERSAND_REDUCE, (region.owner,), apply))
                continue
            shared = any(d.node(x.ins[0], 'source') is not None and d.node(x.ins[0], 'source').kind is NodeKind.SCOPE_EXIT_L
                         for x in _enters(d, right))
            rule = RuleName.CNJ_SHARED_REDUCE if shared else RuleName.CNJ_REDUCE
            matches.append(_Match(rule, (region.owner,), functools.partial(_cnjReduce, leftId = regionId, rightId = right)))
        elif region.kind is not RegionKind.CNJ_RIGHT:
            raise InvariantBreach(f'{region.kind.value} region g{regionId} survived to scope reduction')
    return matches


def _scopeMeasure(d : TextDiagram) -> int:
    direct = 0
    for node in d.nodes.values():
        if node.kind.isEnter:
            following = d.node(node.outs[0])
            if following is not None and following.kind.isExit and following.region == node.region:
                direct += 1
    return 2 * len(d.regions) + direct


def reduceScopes(d : TextDiagram, chooser = None):
    """
    Reduces phrase scopes to boxes with holes, innermost first. Untouched
    wires inside a scope get an EXISTS gate, `[&]` scopes dissolve, and
    the other conjunctions and the sentential complement verbs become boxes.
    """
    trace = RewriteTrace()
    d = _runStage(d.copy(), 'scopes', _scopeMatches, _scopeMeasure, chooser or firstMatch, trace)
    return d, trace


# Pipeline.

def reduceDiagram(d : TextDiagram, chooser = None):
    """
    Runs the four stages on :param d:. The result holds only gate and box
    nodes.

    :returns: the reduced diagram and the RewriteTrace.
    """
    d.check()
    trace = RewriteTrace()
    for stage in (eliminateLinks, shrinkReflexive, normaliseGates, reduceScopes):
        d, more = stage(d, chooser)
        trace.extend(more)
        logger.debug(f'{stage.__name__}: {len(more)} step(s), {d!r}')
    return d, trace


def extract(d : TextDiagram) -> TextCircuit:
    """
    Reads the circuit off a fully reduced diagram.

    :raises InvariantBreach: if anything but top level gates and boxes is
        left.
    """
    for node in d.nodes.values():
        if node.kind not in (NodeKind.GATE, NodeKind.BOX) or node.region is not None:
            raise InvariantBreach(f'{node.kind.value} node n{node.id} left after reduction')
    wires = [NounWire(x.referent, x.label) for x in d.inputs]
    instances = [Instance(d.nodes[x].payload, [d.wires[y].referent for y in d.nodes[x].ins]) for x in d.topological(list(d.nodes))]
    return TextCircuit.fromSequence(wires, instances)


def toCircuit(d : TextDiagram, chooser = None) -> TextCircuit:
    """
    Turns a valid text diagram into its text circuit.
    """
    d, _ = reduceDiagram(d, chooser)
    return extract(d)


def enumerateOrders(d : TextDiagram, limit : int = None):
    """
    Yields the link elimination orders that follow the policy: every
    reflexive link first, then the regular links, each group in any order.
    Use with `orderChooser`.
    """
    links = sorted(x for x, y in d.wires.items() if y.type is WireType.PRONLINK)
    reflexive = [x for x in links if d.wires[x].reflexive]
    regular = [x for x in links if not d.wires[x].reflexive]
    count = 0
    for first in itertools.permutations(reflexive):
        for second in itertools.permutations(regular):
            yield first + second
            count += 1
            if limit is not None and count >= limit:
                return


def compileTraced(text, lexicon : Lexicon = None, options : CompileOptions = None):
    """
    Validates, translates and reduces :param text:.

    :raises InvalidTextError: if the text does not validate.
    :returns: the circuit and the RewriteTrace.
    """
    from . import extensions, grammar, translate
    options = options or CompileOptions()
    lexicon = lexicon or defaultLexicon()
    report = grammar.validate(text, lexicon, options.extensions)
    if report:
        raise InvalidTextError(f'invalid text:\n{report}', report)
    d = translate.fromText(text)
    trace = RewriteTrace()
    if options.extensions:
        d, steps = extensions.applyExtensions(d, lexicon)
        trace.extend(steps)
    d, more = reduceDiagram(d, randomChooser(options.rng) if options.rng is not None else None)
    trace.extend(more)
    c = extract(d)
    logger.info(f'compiled {text!r} into {c!r} in {len(trace)} step(s)')
    if options.trace:
        for line in trace.toLines():
            logger.log(5, line)
    return c, trace


def compile(text, lexicon : Lexicon = None, options : CompileOptions = None) -> TextCircuit:
    """
    Compiles a hybrid grammar text into its text circuit.

    :raises InvalidTextError: if the text does not validate.
    """
    return compileTraced(text, lexicon, options)[0]
