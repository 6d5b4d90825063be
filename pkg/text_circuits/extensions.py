"""
text_circuits.extensions
~~~~~~~~~~~~~~~~~~~~~~~~
Reductions for the grammar extensions: passive voice, possessive pronouns and
gerunds. Each one rewrites its extension pieces into pieces of the core
fragment, so the main pipeline never sees them.
"""

import logging

from . import constants
from .diagram import TextDiagram
from .enums import NodeKind, RegionKind, RuleName, WireType
from .exceptions import DanglingPossessive, UnknownPassiveForm
from .lexicon import Lexicon, defaultLexicon
from .rewrite import TraceStep


logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

STAGE = 'extensions'


def _passiveCloser(d : TextDiagram, wireId : int):
    """
    Follows a verb wire through its modifiers to the node closing the
    passive.
    """
    node = d.node(wireId)
    while node.kind is not NodeKind.PSV_CLOSE:
        node = d.node(node.outs[0])
    return node


def reducePassive(d : TextDiagram, lexicon : Lexicon = None):
    """
    Rewrites every passive region into the active clause: participles become
    their active verbs and the subject and object swap places.

    :raises UnknownPassiveForm: if a participle has no active form.
    :returns: the new diagram and its list of TraceStep.
    """
    lexicon = lexicon or defaultLexicon()
    d = d.copy()
    steps = []
    passives = sorted(x for x, y in d.regions.items() if y.kind is RegionKind.PASSIVE)
    for regionId in passives:
        region = d.regions[regionId]
        opener = d.nodes[region.owner]
        for nodeId in d.members(regionId):
            node = d.nodes[nodeId]
            if node.kind is NodeKind.LABEL:
                active = lexicon.activeForm(node.token)
                if active is None:
                    raise UnknownPassiveForm(node.token)
                node.token = active
        wireId = d.bypass(opener.id)
        closer = _passiveCloser(d, wireId)
        subj, obj = closer.ins[0], closer.ins[2]
        subjOut, objOut = closer.outs[0], closer.outs[1]
        d.setTarget(obj, closer.id, 0)
        d.setTarget(subj, closer.id, 2)
        d.setSource(objOut, closer.id, 0)
        d.setSource(subjOut, closer.id, 1)
        closer.kind = NodeKind.TV_INTRO
        d.dissolveRegion(regionId)
        steps.append(TraceStep(RuleName.PASSIVE_REDUCE, (opener.id, closer.id), len(passives) - len(steps) - 1, STAGE))
    for wire in d.wires.values():
        if wire.type is WireType.TVP_PSV:
            wire.type = WireType.TVP
    return d, steps


def reducePossessive(d : TextDiagram):
    """
    Replaces every possessive link by an OWNS clause on the possessor and
    the possessed noun.

    :raises DanglingPossessive: if a possessive piece has no partner.
    """
    d = d.copy()
    steps = []
    for node in d.nodes.values():
        if node.kind is NodeKind.POSS_OUT and (len(node.outs) < 2 or node.outs[1] is None):
            raise DanglingPossessive(f'possessor piece n{node.id} has no possessive link')
        if node.kind is NodeKind.POSS_IN and (len(node.ins) < 2 or node.ins[1] is None):
            raise DanglingPossessive(f'possessed piece n{node.id} has no possessive link')
    links = sorted(x for x, y in d.wires.items() if y.type is WireType.POSSLINK)
    for count, wireId in enumerate(links, 1):
        owner, owned = d.node(wireId, 'source'), d.node(wireId, 'target')
        if owner is None or owned is None:
            raise DanglingPossessive(f'possessive link w{wireId} is missing an end')
        d.removeWire(wireId)
        ownerIn, ownerOut = owner.ins[0], owner.outs[0]
        ownedIn, ownedOut = owned.ins[0], owned.outs[0]
        label = d.addNode(NodeKind.LABEL, constants.OWNS, outs = 1, region = owned.region, position = owned.position,
                          payload = {'adps': [], 'advs': []})
        intro = d.addNode(NodeKind.TV_INTRO, ins = 3, outs = 2, passes = [(0, 0), (2, 1)], region = owned.region,
                          position = owned.position)
        d.addWire(WireType.TVP, (label.id, 0), (intro.id, 1))
        d.setTarget(ownerIn, intro.id, 0)
        d.setSource(ownerOut, intro.id, 0)
        d.setTarget(ownedIn, intro.id, 2)
        d.setSource(ownedOut, intro.id, 1)
        del d.nodes[owner.id]
        del d.nodes[owned.id]
        steps.append(TraceStep(RuleName.POSSESSIVE_REDUCE, (owner.id, owned.id), len(links) - count, STAGE))
    return d, steps


def reduceIng(d : TextDiagram):
    """
    A gerund used as an adjective is the intransitive verb acting on its
    noun.
    """
    d = d.copy()
    steps = []
    gerunds = sorted(x for x, y in d.nodes.items() if y.kind is NodeKind.ING)
    for count, nodeId in enumerate(gerunds, 1):
        d.nodes[nodeId].kind = NodeKind.IV_INTRO
        steps.append(TraceStep(RuleName.ING_REDUCE, (nodeId,), len(gerunds) - count, STAGE))
    return d, steps


def applyExtensions(d : TextDiagram, lexicon : Lexicon = None):
    """
    Runs the passive, possessive and gerund reductions in that order.

    :returns: the reduced diagram and the list of TraceStep.
    """
    d, steps = reducePassive(d, lexicon)
    d, more = reducePossessive(d)
    steps += more
    d, more = reduceIng(d)
    steps += more
    if steps:
        logger.debug(f'extension pre-pass applied {len(steps)} reduction(s)')
    return d, steps
