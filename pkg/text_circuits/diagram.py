"""
text_circuits.diagram
~~~~~~~~~~~~~~~~~~~~~
The text diagram IR: typed port graphs with noun strands, pronominal link
wires and nested regions. Only connectivity is stored; there is no planar
embedding.
"""

import copy
import dataclasses
import logging

import networkx as nx

from .enums import IssueCode, NodeKind, RegionKind, WireType
from .exceptions import InvariantBreach
from .validation import ValidationReport


logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())


@dataclasses.dataclass
class Wire:
    """
    A typed wire. `source` and `target` are (node id, port) pairs, or None
    for a dangling input or output end.
    """
    id : int
    type : WireType
    source : tuple = None
    target : tuple = None
    referent : str = None
    label : str = None
    reflexive : bool = False


@dataclasses.dataclass
class DiagramNode:
    """
    A node. `ins` and `outs` hold wire ids by port. `passes` lists the
    (in port, out port) pairs a noun strand runs through.
    """
    id : int
    kind : NodeKind
    token : str = None
    ins : list = dataclasses.field(default_factory = list)
    outs : list = dataclasses.field(default_factory = list)
    passes : list = dataclasses.field(default_factory = list)
    region : int = None
    position : tuple = ()
    payload : object = None

    def nextPort(self, port : int):
        """
        The out port a strand entering on in port :param port: leaves by.
        """
        for x, y in self.passes:
            if x == port:
                return y
        return None

    def prevPort(self, port : int):
        for x, y in self.passes:
            if y == port:
                return x
        return None


@dataclasses.dataclass
class Region:
    id : int
    kind : RegionKind
    parent : int = None
    owner : int = None


@dataclasses.dataclass
class PortRecord:
    """
    A dangling noun port. `inside` is set for nouns first used inside a
    phrase scope.
    """
    referent : str
    label : str
    inside : bool = False


_VERB = (WireType.IVP, WireType.TVP, WireType.TVP_PSV)
_NOUN = (WireType.NP, WireType.ADP_ANC)

# Expected wire types by port for fixed shape nodes. Variable shape nodes are
# checked in _expectedTypes.
_PORT_TYPES = {
    NodeKind.ADJ_INTRO: ([WireType.NP], [WireType.NP]),
    NodeKind.ADJ_IS_INTRO: ([WireType.NP], [WireType.NP]),
    NodeKind.SCOPE_ENTER_L: ([WireType.NP], [WireType.NP]),
    NodeKind.SCOPE_EXIT_L: ([WireType.NP], [WireType.NP]),
    NodeKind.SCOPE_ENTER_R: ([WireType.NP], [WireType.NP]),
    NodeKind.SCOPE_EXIT_R: ([WireType.NP], [WireType.NP]),
    NodeKind.LINK_OUT: ([WireType.NP], [WireType.PRONLINK]),
    NodeKind.LINK_IN: ([WireType.PRONLINK], [WireType.NP]),
    NodeKind.PSV_OPEN: ([WireType.TVP], [WireType.TVP_PSV]),
    NodeKind.PSV_CLOSE: ([WireType.NP, WireType.TVP_PSV, WireType.NP], [WireType.NP, WireType.NP]),
    NodeKind.POSS_OUT: ([WireType.NP], [WireType.NP, WireType.POSSLINK]),
    NodeKind.POSS_IN: ([WireType.NP, WireType.POSSLINK], [WireType.NP]),
    NodeKind.ING: ([WireType.NP, WireType.IVP], [WireType.NP]),
    NodeKind.ADV_IV: ([WireType.IVP], [WireType.IVP]),
}


def _expectedTypes(node : DiagramNode):
    """
    Returns (ins, outs): for every port a tuple of acceptable wire types.
    """
    n, m = len(node.ins), len(node.outs)
    if node.kind in _PORT_TYPES:
        ins, outs = _PORT_TYPES[node.kind]
        return [(x,) for x in ins], [(x,) for x in outs]
    if node.kind is NodeKind.ADV_TV:
        return [(WireType.TVP, WireType.TVP_PSV)], [(WireType.TVP, WireType.TVP_PSV)]
    if node.kind is NodeKind.LABEL:
        return [(WireType.NP,)] * n, [_VERB] + [(WireType.ADP_ANC,)] * (m - 1)
    if node.kind in (NodeKind.ADP_IV, NodeKind.ADP_TV):
        verb = (WireType.IVP,) if node.kind is NodeKind.ADP_IV else (WireType.TVP, WireType.TVP_PSV)
        return [verb] + [(WireType.NP,)] * (n - 1), [verb] + [_NOUN] * (m - 1)
    if node.kind is NodeKind.IV_INTRO:
        return [(WireType.NP,), (WireType.IVP,)] + [(WireType.ADP_ANC,)] * (n - 2), [(WireType.NP,)] * m
    if node.kind is NodeKind.TV_INTRO:
        return [(WireType.NP,), (WireType.TVP,), (WireType.NP,)] + [(WireType.ADP_ANC,)] * (n - 3), [(WireType.NP,)] * m
    return [(WireType.NP,)] * n, [(WireType.NP,)] * m


class TextDiagram:
    """
    A text diagram. Library functions never modify a diagram they are given;
    they work on a `copy()`.
    """

    def __init__(self):
        self.nodes = {}
        self.wires = {}
        self.regions = {}
        self.inputs = []
        self.outputs = []
        self.__counter = 0

    def __repr__(self):
        return f'TextDiagram({len(self.nodes)} node(s), {len(self.wires)} wire(s), {len(self.regions)} region(s))'

    def newId(self) -> int:
        self.__counter += 1
        return self.__counter

    def copy(self) -> 'TextDiagram':
        return copy.deepcopy(self)

    # Construction.

    def addNode(self, kind : NodeKind, token = None, ins : int = 0, outs : int = 0, passes = (),
                region = None, position = (), payload = None) -> DiagramNode:
        node = DiagramNode(self.newId(), kind, token, [None] * ins, [None] * outs, list(passes), region, tuple(position), payload)
        self.nodes[node.id] = node
        return node

    def addWire(self, type : WireType, source = None, target = None, referent = None, label = None,
                reflexive = False) -> Wire:
        wire = Wire(self.newId(), type, None, None, referent, label, reflexive)
        self.wires[wire.id] = wire
        if source is not None:
            self.setSource(wire.id, *source)
        if target is not None:
            self.setTarget(wire.id, *target)
        return wire

    def addRegion(self, kind : RegionKind, parent = None, owner = None) -> Region:
        region = Region(self.newId(), kind, parent, owner)
        self.regions[region.id] = region
        return region

    def setSource(self, wireId : int, nodeId, port : int) -> None:
        wire = self.wires[wireId]
        if nodeId is None:
            wire.source = None
            return
        node = self.nodes[nodeId]
        while len(node.outs) <= port:
            node.outs.append(None)
        node.outs[port] = wireId
        wire.source = (nodeId, port)

    def setTarget(self, wireId : int, nodeId, port : int) -> None:
        wire = self.wires[wireId]
        if nodeId is None:
            wire.target = None
            return
        node = self.nodes[nodeId]
        while len(node.ins) <= port:
            node.ins.append(None)
        node.ins[port] = wireId
        wire.target = (nodeId, port)

    def removeWire(self, wireId : int) -> None:
        wire = self.wires.pop(wireId)
        if wire.source is not None and wire.source[0] in self.nodes:
            self.nodes[wire.source[0]].outs[wire.source[1]] = None
        if wire.target is not None and wire.target[0] in self.nodes:
            self.nodes[wire.target[0]].ins[wire.target[1]] = None

    def removeNode(self, nodeId : int) -> None:
        node = self.nodes.pop(nodeId)
        for wireId in node.ins:
            if wireId is not None and wireId in self.wires and self.wires[wireId].target == (nodeId, node.ins.index(wireId)):
                self.wires[wireId].target = None
        for wireId in node.outs:
            if wireId is not None and wireId in self.wires and self.wires[wireId].source == (nodeId, node.outs.index(wireId)):
                self.wires[wireId].source = None

    def joinWires(self, a : int, b : int) -> int:
        """
        Connects wire :param a: straight to the target of wire :param b:,
        removing b. Returns a.
        """
        target = self.wires[b].target
        self.removeWire(b)
        old = self.wires[a].target
        if old is not None and old[0] in self.nodes and self.nodes[old[0]].ins[old[1]] == a:
            self.nodes[old[0]].ins[old[1]] = None
        self.wires[a].target = None
        if target is not None:
            self.setTarget(a, *target)
        return a

    def bypass(self, nodeId : int) -> int:
        """
        Removes a node with one strand through it, joining the wires on
        either side. Returns the surviving wire.
        """
        node = self.nodes[nodeId]
        inPort, outPort = node.passes[0]
        a, b = node.ins[inPort], node.outs[outPort]
        for wireId in node.ins + node.outs:
            if wireId not in (a, b, None):
                self.removeWire(wireId)
        self.wires[a].target = None
        self.wires[b].source = None
        del self.nodes[nodeId]
        return self.joinWires(a, b)

    def splice(self, wireId : int, nodeId : int, inPort : int = 0, outPort : int = 0) -> int:
        """
        Inserts a node on a wire. The wire keeps its target and now starts at
        the node; a new wire feeds the node. Returns the new wire's id.
        """
        wire = self.wires[wireId]
        upstream = self.addWire(wire.type, None, (nodeId, inPort), wire.referent, wire.label)
        if wire.source is not None:
            self.setSource(upstream.id, *wire.source)
        self.setSource(wireId, nodeId, outPort)
        return upstream.id

    def dissolveRegion(self, regionId : int) -> Region:
        """
        Deletes a region, handing the nodes and child regions left in it to
        its parent. Returns the removed region.
        """
        region = self.regions.pop(regionId)
        for node in self.nodes.values():
            if node.region == regionId:
                node.region = region.parent
        for other in self.regions.values():
            if other.parent == regionId:
                other.parent = region.parent
        return region

    # Navigation.

    def node(self, wireId : int, end : str = 'target'):
        """
        Returns the node at one end of a wire, or None if it dangles.
        """
        at = getattr(self.wires[wireId], end)
        return None if at is None else self.nodes[at[0]]

    def regionChain(self, regionId) -> tuple:
        """
        Returns the region ids from the outermost to :param regionId:.
        """
        chain = []
        while regionId is not None:
            chain.append(regionId)
            regionId = self.regions[regionId].parent
        return tuple(reversed(chain))

    def scopeChain(self, regionId) -> tuple:
        return tuple(x for x in self.regionChain(regionId) if self.regions[x].kind.isScope)

    def reflexiveRoot(self, regionId):
        """
        The outermost reflexive region enclosing :param regionId:, or None.
        """
        for x in self.regionChain(regionId):
            if self.regions[x].kind is RegionKind.REFLEXIVE:
                return x
        return None

    def regionDepth(self, regionId) -> int:
        return len(self.regionChain(regionId))

    def within(self, nodeId : int, regionId : int) -> bool:
        """
        Whether a node lies in :param regionId: or one of its descendants.
        """
        return regionId in self.regionChain(self.nodes[nodeId].region)

    def members(self, regionId, deep : bool = False) -> list:
        if deep:
            return sorted(x for x in self.nodes if self.within(x, regionId))
        return sorted(x for x, y in self.nodes.items() if y.region == regionId)

    def children(self, regionId) -> list:
        return sorted(x for x, y in self.regions.items() if y.parent == regionId)

    def graph(self) -> nx.DiGraph:
        """
        Returns the node graph used for cycle checks. Wires flagged
        reflexive and wires inside reflexive regions are left out.
        """
        g = nx.DiGraph()
        g.add_nodes_from(self.nodes)
        for wire in self.wires.values():
            if wire.source is None or wire.target is None or wire.reflexive:
                continue
            root = self.reflexiveRoot(self.nodes[wire.source[0]].region)
            if root is not None and root == self.reflexiveRoot(self.nodes[wire.target[0]].region):
                continue
            g.add_edge(wire.source[0], wire.target[0])
        return g

    def topological(self, nodeIds) -> list:
        """
        Orders :param nodeIds: topologically, ties broken by position.
        """
        g = self.graph().subgraph(nodeIds)
        return list(nx.lexicographical_topological_sort(g, key = lambda x: (self.nodes[x].position, x)))

    def count(self, *kinds) -> int:
        return sum(1 for x in self.nodes.values() if x.kind in kinds)

    def countWires(self, type : WireType) -> int:
        return sum(1 for x in self.wires.values() if x.type is type)

    def toLines(self) -> list:
        """
        Returns the line based debug form of the diagram.
        """
        def pos(x):
            return '.'.join(str(y) for y in x) or '-'

        def ref(x):
            return '-' if x is None else str(x)

        def end(x):
            return '-' if x is None else f'n{x[0]}:{x[1]}'

        lines = ['diagram']
        for record in self.inputs:
            lines.append(f'input {record.referent} {record.label} inside={int(record.inside)}')
        for record in self.outputs:
            lines.append(f'output {record.referent} {record.label}')
        for x in sorted(self.regions):
            region = self.regions[x]
            lines.append(f'region g{x} {region.kind.value} parent={ref(region.parent)} owner={ref(region.owner)}')
        for x in sorted(self.nodes):
            node = self.nodes[x]
            payload = '' if node.payload is None else f' payload={node.payload!r}'
            lines.append(f'node n{x} {node.kind.value} {node.token or "-"} region={ref(node.region)} pos={pos(node.position)} '
                         f'ins={",".join(ref(y) for y in node.ins)} outs={",".join(ref(y) for y in node.outs)}{payload}')
        for x in sorted(self.wires):
            wire = self.wires[x]
            flag = ' reflexive' if wire.reflexive else ''
            lines.append(f'wire w{x} {wire.type.value} {end(wire.source)} -> {end(wire.target)} '
                         f'ref={ref(wire.referent)} label={ref(wire.label)}{flag}')
        return lines

    def check(self) -> None:
        """
        :raises InvariantBreach: if the diagram does not validate.
        """
        report = validateDiagram(self)
        if report:
            raise InvariantBreach(f'diagram invariant failed:\n{report}')


def _effectiveRegion(d : TextDiagram, node : DiagramNode, side : str):
    """
    The region a wire end lives in. The outside ends of enter and exit nodes
    belong to the parent of their region.
    """
    if node is None:
        return None
    if (side == 'target' and node.kind.isEnter) or (side == 'source' and node.kind.isExit):
        return d.regions[node.region].parent
    return node.region


def validateDiagram(d : TextDiagram) -> ValidationReport:
    """
    Checks port types, endpoint consistency, scope borders, the balance of
    dangling noun ports and acyclicity.
    """
    report = ValidationReport('diagram')
    for wire in d.wires.values():
        for side, ports in (('source', 'outs'), ('target', 'ins')):
            at = getattr(wire, side)
            if at is None:
                continue
            if at[0] not in d.nodes:
                report.add(IssueCode.TYPE_MISMATCH, f'wire w{wire.id} ends at missing node n{at[0]}', wire.id)
            elif getattr(d.nodes[at[0]], ports)[at[1]] != wire.id:
                report.add(IssueCode.TYPE_MISMATCH, f'wire w{wire.id} and node n{at[0]} disagree on port {at[1]}', wire.id)
    if report:
        return report
    for node in d.nodes.values():
        if node.region is not None and node.region not in d.regions:
            report.add(IssueCode.SCOPE_LEAK, f'node n{node.id} lies in missing region g{node.region}', node.id)
        expectedIns, expectedOuts = _expectedTypes(node)
        for ports, expected, name in ((node.ins, expectedIns, 'in'), (node.outs, expectedOuts, 'out')):
            if len(ports) != len(expected):
                report.add(IssueCode.TYPE_MISMATCH, f'n{node.id} {node.kind.value} has {len(ports)} {name} port(s)', node.id)
                continue
            for x, (wireId, types) in enumerate(zip(ports, expected)):
                if wireId is None:
                    report.add(IssueCode.TYPE_MISMATCH, f'n{node.id} {node.kind.value} {name} port {x} is unconnected', node.id)
                elif d.wires[wireId].type not in types:
                    report.add(IssueCode.TYPE_MISMATCH, f'n{node.id} {node.kind.value} {name} port {x} carries {d.wires[wireId].type.value}', node.id)
    if report:
        return report
    for wire in d.wires.values():
        if wire.type in (WireType.PRONLINK, WireType.POSSLINK):
            continue
        a, b = d.node(wire.id, 'source'), d.node(wire.id, 'target')
        if wire.type is WireType.NP:
            ra, rb = _effectiveRegion(d, a, 'source'), _effectiveRegion(d, b, 'target')
        else:
            ra, rb = (a.region if a else None), (b.region if b else None)
        if d.scopeChain(ra) != d.scopeChain(rb):
            report.add(IssueCode.SCOPE_LEAK, f'{wire.type.value} wire w{wire.id} crosses a phrase scope border', wire.id)
    inputs = sorted(x.referent for x in d.wires.values() if x.source is None and x.type is WireType.NP)
    outputs = sorted(x.referent for x in d.wires.values() if x.target is None and x.type is WireType.NP)
    if inputs != outputs:
        report.add(IssueCode.UNBALANCED_NP, f'{len(inputs)} dangling input(s) {inputs} against {len(outputs)} output(s) {outputs}')
    if not nx.is_directed_acyclic_graph(d.graph()):
        report.add(IssueCode.CYCLE_DETECTED, 'the diagram has a cycle outside reflexive regions')
    return report


def fromText(text) -> TextDiagram:
    """
    Translates a validated text into a diagram. See `translate.fromText`.
    """
    from .translate import fromText as translateText
    return translateText(text)
