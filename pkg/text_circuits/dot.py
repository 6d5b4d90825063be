"""
text_circuits.dot
~~~~~~~~~~~~~~~~~
Graphviz DOT output for circuits and text diagrams. The output is
deterministic so that it can be compared against committed files.
"""

import logging

from .circuit import GateCore, HoleBox, TextCircuit
from .diagram import TextDiagram
from .enums import BoxKind, GateKind, NodeKind, RegionKind


logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

KIND_COLORS = {
    NodeKind.LABEL: 'lightyellow',
    NodeKind.IV_INTRO: 'lightblue',
    NodeKind.TV_INTRO: 'lightblue',
    NodeKind.ADJ_INTRO: 'palegreen',
    NodeKind.ADJ_IS_INTRO: 'palegreen',
    NodeKind.ADV_IV: 'khaki',
    NodeKind.ADV_TV: 'khaki',
    NodeKind.ADP_IV: 'wheat',
    NodeKind.ADP_TV: 'wheat',
    NodeKind.SCV_INTRO: 'plum',
    NodeKind.CNJ_INTRO: 'plum',
    NodeKind.LINK_OUT: 'lightgrey',
    NodeKind.LINK_IN: 'lightgrey',
    NodeKind.GATE: 'lightsalmon',
    NodeKind.BOX: 'salmon',
}

REGION_STYLES = {
    RegionKind.REFLEXIVE: 'dashed',
    RegionKind.PASSIVE: 'dotted',
}


def _gvquote(s) -> str:
    return '"{}"'.format(str(s).replace('"', r'\"'))


def _opLabel(op) -> str:
    if isinstance(op, GateCore):
        if op.kind is GateKind.EXISTS:
            return 'EXISTS'
        parts = [op.token] + list(op.adverbs) + list(op.adpositions)
        return ' '.join(parts)
    if op.kind is BoxKind.REFLEXIVE:
        pairs = ' '.join(f'{x}={y}' for x, y in op.pairs)
        return f'{_opLabel(op.inner)} [{pairs}]'
    return op.token


def _circuitLines(c : TextCircuit, prefix : str, indent : str):
    for wire in c.wires:
        yield f'{indent}{_gvquote(prefix + "in_" + wire.referent)} [shape=plaintext, label={_gvquote(wire.label)}];'
        yield f'{indent}{_gvquote(prefix + "out_" + wire.referent)} [shape=plaintext, label={_gvquote(wire.label)}];'
    for index, inst in enumerate(c.instances):
        name = f'{prefix}i{index}'
        op = inst.op
        if isinstance(op, HoleBox) and op.kind is not BoxKind.REFLEXIVE:
            yield f'{indent}subgraph {_gvquote("cluster_" + name)} {{'
            yield f'{indent}    label={_gvquote(op.token)};'
            yield f'{indent}    {_gvquote(name)} [shape=box, style=bold, label={_gvquote(op.token)}];'
            for x, hole in enumerate(op.holes()):
                yield f'{indent}    subgraph {_gvquote(f"cluster_{name}_h{x}")} {{'
                yield f'{indent}        label="";'
                yield from _circuitLines(hole, f'{name}_h{x}_', indent + '        ')
                yield f'{indent}    }}'
            yield f'{indent}}}'
        else:
            yield f'{indent}{_gvquote(name)} [shape=box, label={_gvquote(_opLabel(op))}];'
    for wire in c.wires:
        path = [prefix + 'in_' + wire.referent]
        path += [f'{prefix}i{x}' for x in c.events.get(wire.referent, ())]
        path.append(prefix + 'out_' + wire.referent)
        for a, b in zip(path, path[1:]):
            yield f'{indent}{_gvquote(a)} -> {_gvquote(b)} [label={_gvquote(wire.label)}];'


def iterCircuit(c : TextCircuit):
    """
    Yields the lines of the DOT rendering of :param c:.
    """
    yield 'digraph circuit {'
    yield '    rankdir=TB;'
    yield '    node [fontname="Helvetica"];'
    yield from _circuitLines(c, '', '    ')
    yield '}'


def renderCircuit(c : TextCircuit) -> str:
    """
    Returns the DOT text of :param c:: wires run top to bottom between
    plaintext input and output nodes, gates are boxes and every hole is a
    cluster nested inside the cluster of its box.
    """
    return '\n'.join(iterCircuit(c)) + '\n'


def _nodeLine(d : TextDiagram, nodeId : int, indent : str) -> str:
    node = d.nodes[nodeId]
    label = node.kind.value if node.token is None else f'{node.kind.value}\\n{node.token}'
    color = KIND_COLORS.get(node.kind, 'white')
    return f'{indent}{_gvquote(f"n{nodeId}")} [shape=box, style=filled, fillcolor={color}, label={_gvquote(label)}];'


def _regionLines(d : TextDiagram, regionId : int, indent : str):
    region = d.regions[regionId]
    yield f'{indent}subgraph {_gvquote(f"cluster_r{regionId}")} {{'
    yield f'{indent}    label={_gvquote(region.kind.value)};'
    yield f'{indent}    style={REGION_STYLES.get(region.kind, "solid")};'
    for nodeId in sorted(d.members(regionId)):
        yield _nodeLine(d, nodeId, indent + '    ')
    for child in sorted(d.children(regionId)):
        yield from _regionLines(d, child, indent + '    ')
    yield f'{indent}}}'


def iterDiagram(d : TextDiagram):
    """
    Yields the lines of the DOT rendering of :param d:.
    """
    yield 'digraph diagram {'
    yield '    rankdir=TB;'
    yield '    node [fontname="Helvetica"];'
    for nodeId in sorted(x for x, y in d.nodes.items() if y.region is None):
        yield _nodeLine(d, nodeId, '    ')
    for regionId in sorted(x for x, y in d.regions.items() if y.parent is None):
        yield from _regionLines(d, regionId, '    ')
    for wireId in sorted(d.wires):
        wire = d.wires[wireId]
        source = f'n{wire.source[0]}' if wire.source is not None else f'in_w{wireId}'
        target = f'n{wire.target[0]}' if wire.target is not None else f'out_w{wireId}'
        for end, missing in ((source, wire.source), (target, wire.target)):
            if missing is None:
                yield f'    {_gvquote(end)} [shape=plaintext, label={_gvquote(wire.label or wire.type.value)}];'
        style = ', style=dashed' if wire.reflexive else ''
        label = wire.label or wire.type.value
        yield f'    {_gvquote(source)} -> {_gvquote(target)} [label={_gvquote(label)}{style}];'
    yield '}'


def renderDiagram(d : TextDiagram) -> str:
    """
    Returns the DOT text of :param d:: nodes filled by kind and regions as
    nested clusters.
    """
    return '\n'.join(iterDiagram(d)) + '\n'
