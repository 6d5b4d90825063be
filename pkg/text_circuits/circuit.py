"""
The text circuit data model: noun wires acted on by gates and boxes with
holes. Circuits are equal when their gate connectivity is the same, which
`canonicalise` turns into byte equality.
"""

import dataclasses
import functools
import logging
import random

import networkx as nx

from . import constants
from .enums import BoxKind, GateKind, IssueCode, WordClass
from .exceptions import InvalidCircuitError, ReferentClash
from .lexicon import Lexicon, defaultLexicon
from .validation import ValidationReport


logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())


@dataclasses.dataclass(frozen = True, order = True)
class NounWire:
    referent : str
    label : str


@dataclasses.dataclass(frozen = True)
class GateCore:
    """
    A gate in normal form: an adjective, EXISTS, or a verb with its
    adpositions (each adding one wire) and adverbs.
    """
    kind : GateKind
    token : str = None
    arity : int = 1
    adpositions : tuple = ()
    adverbs : tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'adpositions', tuple(self.adpositions))
        object.__setattr__(self, 'adverbs', tuple(self.adverbs))

    @classmethod
    def adjective(cls, token : str) -> 'GateCore':
        return cls(GateKind.ADJ, token)

    @classmethod
    def exists(cls) -> 'GateCore':
        return cls(GateKind.EXISTS, constants.EXISTS)

    @classmethod
    def verb(cls, token : str, arity : int = 1, adpositions = (), adverbs = ()) -> 'GateCore':
        return cls(GateKind.VERB, token, arity, tuple(adpositions), tuple(adverbs))

    def normalised(self) -> 'GateCore':
        """
        EXISTS used as a plain intransitive verb is the EXISTS gate.
        """
        if self.kind is GateKind.VERB and self.token == constants.EXISTS and self.arity == 1 \
           and not self.adpositions and not self.adverbs:
            return GateCore.exists()
        return self

    @property
    def ports(self) -> int:
        """
        Number of wires the gate acts on.
        """
        return self.arity + len(self.adpositions)


@dataclasses.dataclass(frozen = True)
class HoleBox:
    """
    A box. `scv` boxes hold one hole and act on `arity` role wires (subject,
    optionally object) besides the hole's wires. `cnj` boxes hold two holes
    whose wires may overlap. `refl` boxes identify the ports of an inner gate
    listed in `pairs`.
    """
    kind : BoxKind
    token : str = None
    arity : int = 1
    hole : 'TextCircuit' = None
    left : 'TextCircuit' = None
    right : 'TextCircuit' = None
    k : int = 0
    pairs : tuple = ()
    inner : GateCore = None

    @classmethod
    def scv(cls, token : str, arity : int, hole : 'TextCircuit') -> 'HoleBox':
        return cls(BoxKind.SCV, token, arity, hole = hole)

    @classmethod
    def cnj(cls, token : str, left : 'TextCircuit', right : 'TextCircuit') -> 'HoleBox':
        return cls(BoxKind.CNJ, token, 0, left = left, right = right)

    @classmethod
    def reflexive(cls, k : int, pairs, inner : GateCore) -> 'HoleBox':
        return cls(BoxKind.REFLEXIVE, None, 0, k = k, pairs = tuple(sorted(tuple(x) for x in pairs)), inner = inner)

    def classes(self) -> list:
        """
        The ports of a reflexive box grouped by the identifications, ordered
        by their smallest port.
        """
        parent = list(range(self.k))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, j in self.pairs:
            a, b = find(i), find(j)
            parent[max(a, b)] = min(a, b)
        groups = {}
        for x in range(self.k):
            groups.setdefault(find(x), []).append(x)
        return sorted(groups.values())

    def holes(self) -> tuple:
        if self.kind is BoxKind.SCV:
            return (self.hole,)
        if self.kind is BoxKind.CNJ:
            return (self.left, self.right)
        return ()

    @property
    def ports(self) -> int:
        if self.kind is BoxKind.SCV:
            return self.arity + len(self.hole.wires)
        if self.kind is BoxKind.CNJ:
            return len(self.left.wires) + len([x for x in self.right.referents if x not in self.left.referents])
        return len(self.classes())


@dataclasses.dataclass(frozen = True)
class Instance:
    """
    One use of a gate or box on an ordered tuple of wire referents.
    """
    op : object
    args : tuple

    def __post_init__(self):
        object.__setattr__(self, 'args', tuple(self.args))


class TextCircuit:
    """
    Noun wires with, for every wire, the sequence of instances acting on it.
    `==` is structural; use `equal` for equality up to connectivity.
    """

    def __init__(self, wires = (), instances = (), events = None, outputs = None):
        """
        :param events: mapping of referent to the tuple of instance indices
            acting on it, in order. Derived from the instance order if None.
        :param outputs: output wire order, if it differs from the input order.
            Such a circuit never validates; the field exists to represent it.
        """
        self.__wires = tuple(wires)
        self.__instances = tuple(instances)
        if events is None:
            events = {x.referent: [] for x in self.__wires}
            for index, inst in enumerate(self.__instances):
                for ref in inst.args:
                    events.setdefault(ref, []).append(index)
        self.__events = {x: tuple(y) for x, y in events.items()}
        self.__outputs = tuple(outputs) if outputs is not None else None

    @classmethod
    def fromSequence(cls, wires, instances, outputs = None) -> 'TextCircuit':
        """
        Builds a circuit whose per-wire event sequences follow the order of
        :param instances:, which must be topological.
        """
        return cls(wires, instances, None, outputs)

    def __eq__(self, other):
        if not isinstance(other, TextCircuit):
            return NotImplemented
        return (self.__wires, self.__instances, self.__events, self.__outputs) == \
               (other.wires, other.instances, other.events, other.declaredOutputs)

    def __hash__(self):
        return hash((self.__wires, self.__instances, tuple(sorted(self.__events.items())), self.__outputs))

    def __len__(self):
        return len(self.__instances)

    def __repr__(self):
        return f'TextCircuit({len(self.__wires)} wire(s), {len(self.__instances)} instance(s))'

    def graph(self) -> nx.DiGraph:
        """
        Returns the precedence graph of the instances: an edge joins
        consecutive events of every wire.
        """
        g = nx.DiGraph()
        g.add_nodes_from(range(len(self.__instances)))
        for seq in self.__events.values():
            for a, b in zip(seq, seq[1:]):
                g.add_edge(a, b)
        return g

    def layers(self) -> list:
        """
        Returns the earliest possible layer of every instance.
        """
        g = self.graph()
        layer = [0] * len(self.__instances)
        for index in nx.topological_sort(g):
            for pred in g.predecessors(index):
                layer[index] = max(layer[index], layer[pred] + 1)
        return layer

    def ordered(self) -> list:
        """
        Returns the instances in a deterministic topological order.
        """
        order = nx.lexicographical_topological_sort(self.graph())
        return [self.__instances[x] for x in order]

    def renamed(self, mapping : dict) -> 'TextCircuit':
        """
        Returns a copy with referents renamed through :param mapping:,
        inside holes too.
        """
        def ren(x):
            return mapping.get(x, x)

        wires = [NounWire(ren(x.referent), x.label) for x in self.__wires]
        instances = [Instance(_renameOp(x.op, mapping), [ren(y) for y in x.args]) for x in self.__instances]
        events = {ren(x): y for x, y in self.__events.items()}
        outputs = None if self.__outputs is None else [ren(x) for x in self.__outputs]
        return TextCircuit(wires, instances, events, outputs)

    def wire(self, referent : str) -> NounWire:
        for x in self.__wires:
            if x.referent == referent:
                return x
        raise KeyError(referent)

    @property
    def declaredOutputs(self):
        """
        The explicit output order, or None when it is the input order.
        """
        return self.__outputs

    @property
    def events(self) -> dict:
        return dict(self.__events)

    @property
    def instances(self) -> tuple:
        return self.__instances

    @property
    def outputs(self) -> tuple:
        """
        The output wire order.
        """
        return self.__outputs if self.__outputs is not None else self.referents

    @property
    def referents(self) -> tuple:
        return tuple(x.referent for x in self.__wires)

    @property
    def wires(self) -> tuple:
        return self.__wires


def _renameOp(op, mapping : dict):
    if not isinstance(op, HoleBox) or op.kind is BoxKind.REFLEXIVE:
        return op
    if op.kind is BoxKind.SCV:
        return dataclasses.replace(op, hole = op.hole.renamed(mapping))
    return dataclasses.replace(op, left = op.left.renamed(mapping), right = op.right.renamed(mapping))


# Validation.

def _validateOp(op, args, report : ValidationReport, where, labels : dict) -> None:
    if isinstance(op, GateCore):
        if op.kind in (GateKind.ADJ, GateKind.EXISTS) and (op.arity != 1 or op.adpositions or op.adverbs):
            report.add(IssueCode.TYPE_MISMATCH, f'{op.kind.value} gates act on one wire and take no modifiers', where)
        if op.kind is GateKind.VERB and op.arity not in (1, 2):
            report.add(IssueCode.TYPE_MISMATCH, f'verb {op.token} has arity {op.arity}', where)
        if len(args) != op.ports:
            report.add(IssueCode.TYPE_MISMATCH, f'{op.token} acts on {op.ports} wire(s), given {len(args)}', where)
        return
    if not isinstance(op, HoleBox):
        report.add(IssueCode.TYPE_MISMATCH, f'unknown operation {op!r}', where)
        return
    if op.kind is BoxKind.REFLEXIVE:
        if not isinstance(op.inner, GateCore):
            report.add(IssueCode.TYPE_MISMATCH, 'reflexive boxes hold a single gate', where)
            return
        if op.k != op.inner.ports:
            report.add(IssueCode.TYPE_MISMATCH, f'reflexive box of size {op.k} around a gate with {op.inner.ports} port(s)', where)
            return
        if any(not 0 <= i < j < op.k for i, j in op.pairs):
            report.add(IssueCode.TYPE_MISMATCH, f'reflexive pairs {op.pairs} out of range', where)
            return
        _validateOp(op.inner, range(op.k), report, where, labels)
        if len(args) != len(op.classes()):
            report.add(IssueCode.TYPE_MISMATCH, f'reflexive box joins {len(op.classes())} wire(s), given {len(args)}', where)
        return
    for name, hole in zip(('hole', 'left', 'right'), op.holes()):
        if not isinstance(hole, TextCircuit):
            report.add(IssueCode.TYPE_MISMATCH, f'{op.token} has no {name}', where)
            return
        for wire in hole.wires:
            if labels.get(wire.referent, wire.label) != wire.label:
                report.add(IssueCode.TYPE_MISMATCH, f'hole wire {wire.referent} is labelled {wire.label}, outside it is {labels[wire.referent]}', where)
        _validate(hole, report, f'{where}/{name}', labels)
    if op.kind is BoxKind.SCV:
        if op.arity not in (1, 2):
            report.add(IssueCode.TYPE_MISMATCH, f'{op.token} has {op.arity} role wire(s)', where)
            return
        holeArgs = tuple(args[op.arity:])
        if set(holeArgs) != set(op.hole.referents) or len(holeArgs) != len(op.hole.referents):
            report.add(IssueCode.TYPE_MISMATCH, f'{op.token} passes {holeArgs} into a hole over {op.hole.referents}', where)
        elif holeArgs != op.hole.referents:
            report.add(IssueCode.WIRE_ORDER_VIOLATION, f'{op.token} orders its hole wires {holeArgs}, the hole orders them {op.hole.referents}', where)
        return
    expected = op.left.referents + tuple(x for x in op.right.referents if x not in op.left.referents)
    if set(expected) != set(args) or len(args) != len(expected):
        report.add(IssueCode.TYPE_MISMATCH, f'{op.token} acts on {tuple(args)}, its holes on {expected}', where)
    elif tuple(args) != expected:
        report.add(IssueCode.WIRE_ORDER_VIOLATION, f'{op.token} lists its wires as {tuple(args)}, expected {expected}', where)


def _validate(c : TextCircuit, report : ValidationReport, where : str, labels : dict) -> None:
    refs = c.referents
    if len(set(refs)) != len(refs):
        report.add(IssueCode.DUPLICATE_ARG, f'a referent names two wires in {refs}', where)
        return
    labels = dict(labels)
    labels.update({x.referent: x.label for x in c.wires})
    if c.declaredOutputs is not None:
        if sorted(c.declaredOutputs) != sorted(refs):
            report.add(IssueCode.TYPE_MISMATCH, f'outputs {c.declaredOutputs} do not match inputs {refs}', where)
        elif tuple(c.declaredOutputs) != refs:
            report.add(IssueCode.WIRE_ORDER_VIOLATION, f'inputs are ordered {refs} but outputs {tuple(c.declaredOutputs)}', where)
    expected = {x: [] for x in refs}
    for index, inst in enumerate(c.instances):
        at = f'{where}#{index}'
        if len(set(inst.args)) != len(inst.args):
            report.add(IssueCode.DUPLICATE_ARG, f'instance lists a wire twice: {inst.args}', at)
        for ref in inst.args:
            if ref not in expected:
                report.add(IssueCode.TYPE_MISMATCH, f'instance acts on unknown wire {ref}', at)
            elif index not in expected[ref]:
                expected[ref].append(index)
        _validateOp(inst.op, inst.args, report, at, labels)
    events = c.events
    for ref, indices in expected.items():
        if sorted(events.get(ref, ())) != sorted(indices) or len(events.get(ref, ())) != len(indices):
            report.add(IssueCode.TYPE_MISMATCH, f'events of {ref} do not match the instances acting on it', where)
    if not nx.is_directed_acyclic_graph(c.graph()):
        report.add(IssueCode.CYCLE_DETECTED, 'the event sequences order the instances cyclically', where)


def validateCircuit(c : TextCircuit) -> ValidationReport:
    """
    Checks every structural invariant of a circuit, recursively inside
    holes. Returns a ValidationReport that is empty iff the circuit is valid.
    """
    report = ValidationReport('circuit')
    _validate(c, report, 'top', {})
    return report


# Normal form.

def _normaliseOp(op):
    if isinstance(op, GateCore):
        return op.normalised()
    if op.kind is BoxKind.REFLEXIVE:
        inner = op.inner.normalised()
        if not op.pairs:
            return inner
        return dataclasses.replace(op, inner = inner)
    if op.kind is BoxKind.SCV:
        return dataclasses.replace(op, hole = normalise(op.hole))
    return dataclasses.replace(op, left = normalise(op.left), right = normalise(op.right))


def normalise(c : TextCircuit) -> TextCircuit:
    """
    Returns the representative used for comparisons: EXISTS gates on every
    wire without events (holes included), reflexive boxes without
    identifications unwrapped, and instances in a deterministic topological
    order.
    """
    instances = [Instance(_normaliseOp(x.op), x.args) for x in c.ordered()]
    used = {y for x in instances for y in x.args}
    for wire in c.wires:
        if wire.referent not in used:
            instances.append(Instance(GateCore.exists(), (wire.referent,)))
    return TextCircuit.fromSequence(c.wires, instances)


# Canonical form.

def _holeWires(op, args) -> tuple:
    """
    The arguments of a box that are hole wires, whose relative order carries
    no meaning.
    """
    if isinstance(op, HoleBox) and op.kind is BoxKind.SCV:
        return tuple(args[op.arity:])
    if isinstance(op, HoleBox) and op.kind is BoxKind.CNJ:
        return tuple(args)
    return ()


def _coreText(core : GateCore) -> str:
    if core.kind is GateKind.ADJ:
        return f'adj {core.token}'
    if core.kind is GateKind.EXISTS:
        return 'exists'
    parts = [f'verb {core.token} {core.arity}']
    parts.extend(f'adp {x}' for x in core.adpositions)
    parts.extend(f'adv {x}' for x in core.adverbs)
    return ' '.join(parts)


def _describe(c : TextCircuit, color : dict) -> tuple:
    """
    An isomorphism invariant description of :param c: given a colouring of
    its referents.
    """
    layers = c.layers()
    return tuple(sorted((layers[x], _describeInstance(inst, color)) for x, inst in enumerate(c.instances)))


def _describeInstance(inst : Instance, color : dict):
    op = inst.op
    if isinstance(op, GateCore):
        return ('gate', _coreText(op), tuple(color[x] for x in inst.args))
    if op.kind is BoxKind.REFLEXIVE:
        return ('refl', op.k, op.pairs, _coreText(op.inner), tuple(color[x] for x in inst.args))
    if op.kind is BoxKind.SCV:
        return ('scv', op.token, op.arity, tuple(color[x] for x in inst.args[:op.arity]),
                tuple(sorted(color[x] for x in inst.args[op.arity:])), _describe(op.hole, color))
    return ('cnj', op.token, tuple(sorted(color[x] for x in op.left.referents)),
            tuple(sorted(color[x] for x in op.right.referents)),
            _describe(op.left, color), _describe(op.right, color))


def _refine(c : TextCircuit, cells : list) -> list:
    """
    Splits the cells of an ordered partition of the referents until every
    referent in a cell has the same view of the circuit.
    """
    layers = c.layers()
    events = c.events
    while True:
        color = {r: x for x, cell in enumerate(cells) for r in cell}
        signature = {}
        for cell in cells:
            for r in cell:
                view = []
                for index in events.get(r, ()):
                    inst = c.instances[index]
                    position = -1 if r in _holeWires(inst.op, inst.args) else inst.args.index(r)
                    view.append((layers[index], position, _describeInstance(inst, color)))
                signature[r] = (color[r], tuple(sorted(view)))
        refined = []
        for cell in cells:
            groups = {}
            for r in cell:
                groups.setdefault(signature[r], []).append(r)
            refined.extend(groups[x] for x in sorted(groups))
        if len(refined) == len(cells):
            return refined
        cells = refined


def _canonicalOp(op, args, rank : dict):
    """
    Returns (op, args) with hole wires sorted by rank and holes rebuilt in
    canonical order. Referents are renamed by the caller.
    """
    if not isinstance(op, HoleBox) or op.kind is BoxKind.REFLEXIVE:
        return op, tuple(args)
    if op.kind is BoxKind.SCV:
        holeArgs = tuple(sorted(args[op.arity:], key = lambda x: rank[x]))
        return dataclasses.replace(op, hole = _canonicalCircuit(op.hole, rank, holeArgs)), tuple(args[:op.arity]) + holeArgs
    left = tuple(sorted(op.left.referents, key = lambda x: rank[x]))
    rightOnly = tuple(sorted((x for x in op.right.referents if x not in op.left.referents), key = lambda x: rank[x]))
    right = tuple(sorted(op.right.referents, key = lambda x: rank[x]))
    box = dataclasses.replace(op, left = _canonicalCircuit(op.left, rank, left),
                              right = _canonicalCircuit(op.right, rank, right))
    return box, left + rightOnly


def _canonicalCircuit(c : TextCircuit, rank : dict, order) -> TextCircuit:
    wires = [c.wire(x) for x in order]
    layers = c.layers()
    indices = sorted(range(len(c.instances)),
                     key = lambda x: (layers[x], tuple(sorted(rank[y] for y in c.instances[x].args))))
    instances = []
    for index in indices:
        op, args = _canonicalOp(c.instances[index].op, c.instances[index].args, rank)
        instances.append(Instance(op, args))
    return TextCircuit.fromSequence(wires, instances)


def _encode(c : TextCircuit, order : list) -> str:
    from . import txc
    rank = {x: y for y, x in enumerate(order)}
    canonical = _canonicalCircuit(c, rank, order)
    return txc.dumps(canonical.renamed({x: f'w{y}' for x, y in rank.items()}))


def _search(c : TextCircuit, cells : list) -> str:
    cells = _refine(c, cells)
    for x, cell in enumerate(cells):
        if len(cell) > 1:
            break
    else:
        return _encode(c, [cell[0] for cell in cells])
    best = None
    for r in sorted(cell):
        candidate = _search(c, cells[:x] + [[r], [y for y in cell if y != r]] + cells[x + 1:])
        if best is None or candidate < best:
            best = candidate
    return best


def canonicalText(c : TextCircuit) -> str:
    """
    Returns the canonical .txc text of :param c:.
    """
    c = normalise(c)
    byLabel = {}
    for wire in c.wires:
        byLabel.setdefault(wire.label, []).append(wire.referent)
    cells = [byLabel[x] for x in sorted(byLabel)]
    return _search(c, cells)


@functools.lru_cache(maxsize = 1024)
def canonicalise(c : TextCircuit) -> bytes:
    """
    Returns the CanonicalCircuit of :param c:: a byte string that two
    circuits share exactly when they are equal up to connectivity.
    """
    return canonicalText(c).encode('utf-8')


def equal(c1 : TextCircuit, c2 : TextCircuit) -> bool:
    """
    Whether the circuits are the same up to connectivity: a label preserving
    bijection of referents that preserves every wire's event order, argument
    positions and hole contents.
    """
    return canonicalise(c1) == canonicalise(c2)


# Composition.

def _checkLabels(c1 : TextCircuit, c2 : TextCircuit) -> set:
    labels = {x.referent: x.label for x in c1.wires}
    shared = set()
    for wire in c2.wires:
        if wire.referent in labels:
            if labels[wire.referent] != wire.label:
                raise ReferentClash(f'{wire.referent} is {labels[wire.referent]} on one side and {wire.label} on the other')
            shared.add(wire.referent)
    return shared


def composeSeq(c1 : TextCircuit, c2 : TextCircuit) -> TextCircuit:
    """
    Sequential composition: :param c2: follows :param c1: on every referent
    they share.

    :raises ReferentClash: if a shared referent has different labels.
    """
    shared = _checkLabels(c1, c2)
    wires = list(c1.wires) + [x for x in c2.wires if x.referent not in shared]
    return TextCircuit.fromSequence(wires, c1.ordered() + c2.ordered())


def composePar(c1 : TextCircuit, c2 : TextCircuit) -> TextCircuit:
    """
    Parallel composition of circuits on disjoint referents.

    :raises ReferentClash: if the circuits share a referent.
    """
    shared = _checkLabels(c1, c2) | (set(c1.referents) & set(c2.referents))
    if shared:
        raise ReferentClash(f'parallel composition over shared referent(s) {sorted(shared)}')
    return TextCircuit.fromSequence(c1.wires + c2.wires, c1.ordered() + c2.ordered())


# Free generation.

@dataclasses.dataclass
class CircuitConfig:
    maxWires : int = 6
    maxInstances : int = 8
    maxDepth : int = 2
    lexicon : Lexicon = None
    depthDecay : float = constants.DEFAULT_DEPTH_DECAY
    maxAdpositions : int = 2
    maxAdverbs : int = 2
    weights : dict = dataclasses.field(default_factory = lambda: {
        'adj': 2.0,
        'iv': 2.0,
        'tv': 2.0,
        'exists': 0.5,
        'refl': 1.0,
        'scv': 1.0,
        'cnj': 1.0,
    })


class _CircuitGenerator:
    def __init__(self, rng : random.Random, config : CircuitConfig, lexicon : Lexicon):
        self.rng = rng
        self.config = config
        self.words = {x: lexicon.tokens(x) for x in WordClass}

    def core(self, wires : int):
        """
        Returns a random verb gate using at most :param wires: ports, or None.
        """
        arity = 2 if wires >= 2 and self.words[WordClass.TV] and self.rng.random() < 0.5 else 1
        cls = WordClass.TV if arity == 2 else WordClass.IV
        if not self.words[cls]:
            return None
        extra = min(wires - arity, self.config.maxAdpositions) if self.words[WordClass.ADP] else 0
        adps = [self.rng.choice(self.words[WordClass.ADP]) for _ in range(self.rng.randint(0, max(0, extra)))]
        advs = []
        if self.words[WordClass.ADV]:
            advs = [self.rng.choice(self.words[WordClass.ADV]) for _ in range(self.rng.randint(0, self.config.maxAdverbs))]
        return GateCore.verb(self.rng.choice(self.words[cls]), arity, adps, advs)

    def instance(self, refs : list, depth : int):
        rng = self.rng
        weights = dict(self.config.weights)
        if not self.words[WordClass.ADJ]:
            weights['adj'] = 0
        if not self.words[WordClass.TV] or len(refs) < 2:
            weights['tv'] = 0
        if len(refs) < 2 and not self.words[WordClass.ADP]:
            weights['refl'] = 0
        decay = self.config.depthDecay ** depth
        weights['scv'] = weights['scv'] * decay if depth < self.config.maxDepth and self.words[WordClass.SCV] and len(refs) >= 2 else 0
        weights['cnj'] = weights['cnj'] * decay if depth < self.config.maxDepth and self.words[WordClass.CNJ] else 0
        kinds = sorted(x for x, y in weights.items() if y > 0)
        kind = rng.choices(kinds, [weights[x] for x in kinds])[0]
        if kind == 'adj':
            return Instance(GateCore.adjective(rng.choice(self.words[WordClass.ADJ])), [rng.choice(refs)])
        if kind == 'exists':
            return Instance(GateCore.exists(), [rng.choice(refs)])
        if kind in ('iv', 'tv'):
            core = self.core(len(refs) if kind == 'tv' else 1 + (min(len(refs) - 1, self.config.maxAdpositions)))
            if core is None:
                return Instance(GateCore.exists(), [rng.choice(refs)])
            return Instance(core, rng.sample(refs, core.ports))
        if kind == 'refl':
            core = self.core(len(refs) + 1)
            if core is None or core.ports < 2:
                return Instance(GateCore.exists(), [rng.choice(refs)])
            ports = list(range(core.ports))
            classes = rng.randint(1, min(core.ports - 1, len(refs)))
            # Every class gets one port, the rest are spread out.
            assignment = list(range(classes)) + [rng.randrange(classes) for _ in range(core.ports - classes)]
            rng.shuffle(assignment)
            pairs = []
            for cls in range(classes):
                members = [x for x in ports if assignment[x] == cls]
                pairs.extend((members[0], x) for x in members[1:])
            box = HoleBox.reflexive(core.ports, pairs, core)
            return Instance(box, rng.sample(refs, len(box.classes())))
        if kind == 'scv':
            arity = 2 if len(refs) >= 3 and rng.random() < 0.3 else 1
            chosen = rng.sample(refs, rng.randint(arity + 1, len(refs)))
            hole = self.circuit(chosen[arity:], depth + 1)
            return Instance(HoleBox.scv(rng.choice(self.words[WordClass.SCV]), arity, hole), chosen)
        chosen = rng.sample(refs, rng.randint(1, len(refs)))
        left = rng.sample(chosen, rng.randint(1, len(chosen)))
        rest = [x for x in chosen if x not in left]
        right = rest + rng.sample(left, rng.randint(0 if rest else 1, len(left)))
        right = [x for x in chosen if x in right]
        box = HoleBox.cnj(rng.choice(self.words[WordClass.CNJ]), self.circuit(left, depth + 1), self.circuit(right, depth + 1))
        return Instance(box, left + [x for x in right if x not in left])

    def circuit(self, refs : list, depth : int) -> TextCircuit:
        wires = [self.wireOf[x] for x in refs]
        count = self.rng.randint(1 if depth else 0, max(1, self.config.maxInstances // (2 ** depth)))
        return TextCircuit.fromSequence(wires, [self.instance(refs, depth) for _ in range(count)])


def freeGenerate(seed : int, config : CircuitConfig = None) -> TextCircuit:
    """
    Generates a random valid circuit by freely composing gates and boxes.
    Deterministic for a fixed seed.
    """
    config = config or CircuitConfig()
    lexicon = config.lexicon or defaultLexicon()
    rng = random.Random(seed)
    gen = _CircuitGenerator(rng, config, lexicon)
    nouns = gen.words[WordClass.N]
    if not nouns:
        raise InvalidCircuitError('cannot generate circuits without nouns')
    count = rng.randint(1, max(1, config.maxWires))
    gen.wireOf = {f'r{x}': NounWire(f'r{x}', rng.choice(nouns)) for x in range(count)}
    c = gen.circuit(list(gen.wireOf), 0)
    logger.debug(f'generated circuit with seed {seed}: {c!r}')
    return c


def iterWires(c : TextCircuit):
    """
    Yields (referent, label) for every wire of :param c: and of its holes.
    """
    for wire in c.wires:
        yield wire.referent, wire.label
    for inst in c.instances:
        if isinstance(inst.op, HoleBox):
            for hole in inst.op.holes():
                yield from iterWires(hole)


def iterOps(c : TextCircuit):
    """
    Yields every operation of :param c:, holes and reflexive boxes
    included.
    """
    for inst in c.instances:
        yield inst.op
        if isinstance(inst.op, HoleBox):
            if inst.op.inner is not None:
                yield inst.op.inner
            for hole in inst.op.holes():
                yield from iterOps(hole)


def permutedWires(c : TextCircuit, rng : random.Random) -> TextCircuit:
    """
    Returns :param c: with its wires listed in a random order and its
    instances in a random topological order. The result is equal to c.
    """
    wires = list(c.wires)
    rng.shuffle(wires)
    g = c.graph()
    order = []
    ready = sorted(x for x in g if g.in_degree(x) == 0)
    indegree = dict(g.in_degree())
    while ready:
        index = ready.pop(rng.randrange(len(ready)))
        order.append(index)
        for succ in g.successors(index):
            indegree[succ] -= 1
            if indegree[succ] == 0:
                ready.append(succ)
    return TextCircuit.fromSequence(wires, [c.instances[x] for x in order])
