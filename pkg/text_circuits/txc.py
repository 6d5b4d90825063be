"""
text_circuits.txc
~~~~~~~~~~~~~~~~~
Reader and writer for .txc files, the line based text circuit format. The
canonical form of a circuit is this format with its referents renamed
`w0`, `w1`, ... See README.rst for the grammar.
"""

import logging

from . import constants
from .circuit import GateCore, HoleBox, Instance, NounWire, TextCircuit, validateCircuit
from .enums import BoxKind, GateKind
from .exceptions import InvalidCircuitError


logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

INDENT = '  '


def _coreWords(core : GateCore) -> list:
    if core.kind is GateKind.ADJ:
        return ['adj', core.token]
    if core.kind is GateKind.EXISTS:
        return ['exists']
    words = ['verb', core.token, str(core.arity)]
    for adp in core.adpositions:
        words += ['adp', adp]
    for adv in core.adverbs:
        words += ['adv', adv]
    return words


def _pairsWord(pairs) -> str:
    if not pairs:
        return '-'
    return ','.join(f'{x}-{y}' for x, y in pairs)


def _dumpInstances(c : TextCircuit, depth : int, lines : list) -> None:
    pad = INDENT * depth
    for inst in c.ordered():
        op = inst.op
        refs = ' '.join(inst.args)
        if isinstance(op, GateCore):
            lines.append(f'{pad}gate {" ".join(_coreWords(op))} : {refs}')
        elif op.kind is BoxKind.REFLEXIVE:
            lines.append(f'{pad}refl {op.k} {_pairsWord(op.pairs)} {" ".join(_coreWords(op.inner))} : {refs}')
        elif op.kind is BoxKind.SCV:
            lines.append(f'{pad}box scv {op.token} {op.arity} : {refs} {{')
            _dumpInstances(op.hole, depth + 1, lines)
            lines.append(f'{pad}}}')
        else:
            lines.append(f'{pad}box cnj {op.token} : {refs} {{')
            lines.append(f'{pad}left {" ".join(op.left.referents)}'.rstrip())
            _dumpInstances(op.left, depth + 1, lines)
            lines.append(f'{pad}right {" ".join(op.right.referents)}'.rstrip())
            _dumpInstances(op.right, depth + 1, lines)
            lines.append(f'{pad}}}')


def dumps(c : TextCircuit) -> str:
    """
    Prints :param c: in the .txc format.
    """
    lines = [constants.TXC_HEADER]
    for wire in c.wires:
        lines.append(f'wire {wire.referent} {wire.label}')
    if c.declaredOutputs is not None and tuple(c.declaredOutputs) != c.referents:
        lines.append(' '.join(['outputs'] + list(c.declaredOutputs)))
    _dumpInstances(c, 0, lines)
    lines.append(constants.TXC_END)
    return '\n'.join(lines) + '\n'


def dump(c : TextCircuit, path) -> None:
    with open(path, 'w', encoding = 'utf-8') as f:
        f.write(dumps(c))


class _Reader:
    """
    Reads the instance lines of a .txc file. Indentation is not significant.
    """

    def __init__(self, lines : list, labels : dict):
        self.lines = lines
        self.labels = labels
        self.pos = 0

    def error(self, message : str):
        line = self.lines[self.pos - 1][0] if 0 < self.pos <= len(self.lines) else '?'
        return InvalidCircuitError(f'line {line}: {message}')

    def next(self) -> list:
        if self.pos >= len(self.lines):
            raise InvalidCircuitError(f'unexpected end of file, missing `{constants.TXC_END}`')
        self.pos += 1
        return self.lines[self.pos - 1][1]

    def peek(self) -> list:
        if self.pos >= len(self.lines):
            raise InvalidCircuitError(f'unexpected end of file, missing `{constants.TXC_END}`')
        return self.lines[self.pos][1]

    def wires(self, refs) -> list:
        result = []
        for ref in refs:
            if ref not in self.labels:
                raise self.error(f'unknown wire {ref}')
            result.append(NounWire(ref, self.labels[ref]))
        return result

    def core(self, words : list) -> GateCore:
        if not words:
            raise self.error('missing gate')
        if words[0] == 'exists' and len(words) == 1:
            return GateCore.exists()
        if words[0] == 'adj' and len(words) == 2:
            return GateCore.adjective(words[1])
        if words[0] != 'verb' or len(words) < 3 or len(words) % 2 == 0:
            raise self.error(f'malformed gate {" ".join(words)!r}')
        try:
            arity = int(words[2])
        except ValueError:
            raise self.error(f'malformed arity {words[2]!r}')
        adps = []
        advs = []
        for kind, token in zip(words[3::2], words[4::2]):
            if kind == 'adp' and not advs:
                adps.append(token)
            elif kind == 'adv':
                advs.append(token)
            else:
                raise self.error(f'unexpected modifier {kind!r}')
        return GateCore.verb(words[1], arity, adps, advs)

    def pairs(self, word : str) -> list:
        if word == '-':
            return []
        try:
            return [tuple(int(y) for y in x.split('-')) for x in word.split(',')]
        except ValueError:
            raise self.error(f'malformed reflexive pairs {word!r}')

    def split(self, words : list, opens : bool):
        """
        Splits an instance line at the colon into the head and the arguments.
        """
        if ':' not in words:
            raise self.error('missing `:` before the arguments')
        at = words.index(':')
        refs = words[at + 1:]
        if opens:
            if not refs or refs[-1] != '{':
                raise self.error('a box must open a `{` block')
            refs = refs[:-1]
        if not refs:
            raise self.error('an instance needs at least one argument')
        return words[:at], refs

    def hole(self, refs, stops) -> TextCircuit:
        instances = self.block(stops)
        return TextCircuit.fromSequence(self.wires(refs), instances)

    def block(self, stops) -> list:
        """
        Reads instances until a line whose first word is in :param stops:.
        The stop line is left unread.
        """
        instances = []
        while self.peek()[0] not in stops:
            instances.append(self.instance(self.next()))
        return instances

    def instance(self, words : list) -> Instance:
        if words[0] == 'gate':
            head, refs = self.split(words, False)
            return Instance(self.core(head[1:]), refs)
        if words[0] == 'refl':
            head, refs = self.split(words, False)
            if len(head) < 4:
                raise self.error('malformed reflexive box')
            try:
                k = int(head[1])
            except ValueError:
                raise self.error(f'malformed reflexive size {head[1]!r}')
            return Instance(HoleBox.reflexive(k, self.pairs(head[2]), self.core(head[3:])), refs)
        if words[0] == 'box' and len(words) > 1 and words[1] == 'scv':
            head, refs = self.split(words, True)
            if len(head) != 4:
                raise self.error('malformed scv box')
            try:
                arity = int(head[3])
            except ValueError:
                raise self.error(f'malformed arity {head[3]!r}')
            hole = self.hole(refs[arity:], ('}',))
            self.next()
            return Instance(HoleBox.scv(head[2], arity, hole), refs)
        if words[0] == 'box' and len(words) > 1 and words[1] == 'cnj':
            head, refs = self.split(words, True)
            if len(head) != 3:
                raise self.error('malformed cnj box')
            line = self.next()
            if line[0] != 'left':
                raise self.error('a cnj box starts with its `left` hole')
            left = self.hole(line[1:], ('right', '}'))
            line = self.next()
            if line[0] != 'right':
                raise self.error('a cnj box needs a `right` hole')
            right = self.hole(line[1:], ('}',))
            self.next()
            return Instance(HoleBox.cnj(head[2], left, right), refs)
        raise self.error(f'unknown instance {words[0]!r}')


def loads(data : str, validate : bool = True) -> TextCircuit:
    """
    Parses the contents of a .txc file. An empty input is the empty circuit.

    :param validate: if True, also run validateCircuit on the result.
    :raises InvalidCircuitError: if the input is malformed or the circuit is
        invalid. In the latter case the report is attached.
    """
    lines = [(x + 1, y.split()) for x, y in enumerate(data.splitlines()) if y.strip()]
    if not lines:
        return TextCircuit()
    if ' '.join(lines[0][1]) != constants.TXC_HEADER:
        raise InvalidCircuitError(f'expected `{constants.TXC_HEADER}` on the first line')
    wires = []
    pos = 1
    while pos < len(lines) and lines[pos][1][0] == 'wire':
        words = lines[pos][1]
        if len(words) != 3:
            raise InvalidCircuitError(f'line {lines[pos][0]}: expected `wire REF LABEL`')
        wires.append(NounWire(words[1], words[2]))
        pos += 1
    outputs = None
    if pos < len(lines) and lines[pos][1][0] == 'outputs':
        outputs = lines[pos][1][1:]
        pos += 1
    reader = _Reader(lines[pos:], {x.referent: x.label for x in wires})
    instances = reader.block((constants.TXC_END,))
    reader.next()
    if reader.pos != len(reader.lines):
        raise reader.error(f'unexpected content after `{constants.TXC_END}`')
    c = TextCircuit.fromSequence(wires, instances, outputs)
    if validate:
        report = validateCircuit(c)
        if report:
            raise InvalidCircuitError(f'invalid circuit:\n{report}', report)
    logger.debug(f'read {c!r}')
    return c


def load(path, validate : bool = True) -> TextCircuit:
    with open(path, 'r', encoding = 'utf-8') as f:
        return loads(f.read(), validate)
