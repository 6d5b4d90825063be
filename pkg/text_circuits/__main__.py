import json
import logging
import multiprocessing
import pathlib
import sys
import traceback

from text_circuits import constants, utils
from text_circuits.circuit import CircuitConfig, equal, freeGenerate, validateCircuit
from text_circuits.exceptions import IncompatibleOptionsError, InvariantBreach, TextCircuitsError


logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

SUFFIXES = {'txc': '.txc', 'dot': '.dot', 'text': '.txt', 'hgt': '.hgt'}


def _options(args):
    from text_circuits.rewrite import CompileOptions
    return CompileOptions(extensions = args.extensions == 'on', trace = getattr(args, 'trace', False))


def _compileFile(job):
    """
    Worker for one compile input. Returns (path, exit code, output,
    diagnostics).
    """
    from text_circuits import dot, hgt, translate, txc
    from text_circuits.extensions import applyExtensions
    from text_circuits.rewrite import compileTraced, enumerateOrders, orderChooser, toCircuit

    path, options, fmt, orders = job
    try:
        text, lexicon = hgt.load(path)
        c, trace = compileTraced(text, lexicon, options)
        messages = trace.toLines() if options.trace else []
        if orders:
            count = 0
            d = translate.fromText(text)
            if options.extensions:
                d, _ = applyExtensions(d, lexicon)
            for count, order in enumerate(enumerateOrders(d, orders), 1):
                if not equal(c, toCircuit(d, orderChooser(order))):
                    raise InvariantBreach(f'link order {order} gives a different circuit')
            messages.append(f'{count} link order(s) agree')
        output = dot.renderCircuit(c) if fmt == 'dot' else txc.dumps(c)
        return path, constants.EXIT_OK, output, messages
    except InvariantBreach:
        return path, constants.EXIT_INTERNAL_ERROR, None, [traceback.format_exc()]
    except (TextCircuitsError, OSError) as e:
        return path, constants.EXIT_INPUT_ERROR, None, [str(e)]


def _runJobs(worker, jobs, count : int):
    if count > 1 and len(jobs) > 1:
        with multiprocessing.Pool(count) as pool:
            return pool.map(worker, jobs)
    return [worker(x) for x in jobs]


def _emit(results, args, suffix : str) -> int:
    """
    Writes the outputs of per-file results and returns the worst exit code.
    With several inputs, -o names a directory.
    """
    code = constants.EXIT_OK
    for path, status, output, messages in results:
        for message in messages:
            utils.diagnostic(f'{path}: {message}', 'yellow' if status == constants.EXIT_OK else 'red')
        code = max(code, status)
        if output is None:
            continue
        if args.out_path and len(results) > 1:
            utils.writeOutput(output, pathlib.Path(args.out_path) / (pathlib.Path(path).stem + suffix))
        else:
            utils.writeOutput(output, args.out_path)
    return code


def compileCommand(args) -> int:
    jobs = [(x, _options(args), args.format, args.enumerate_orders) for x in args.inputs]
    return _emit(_runJobs(_compileFile, jobs, args.jobs), args, SUFFIXES[args.format])


def textualiseCommand(args) -> int:
    from text_circuits import grammar, hgt, txc
    from text_circuits.textualise import textualiseWithLexicon

    results = []
    for path in args.inputs:
        c = txc.load(path)
        text, lexicon = textualiseWithLexicon(c)
        output = grammar.yieldText(text, surface = True) + '\n' if args.surface else hgt.dumps(text, lexicon)
        results.append((path, constants.EXIT_OK, output, []))
    return _emit(results, args, '.txt' if args.surface else '.hgt')


def _circuitOf(path, options):
    from text_circuits.rewrite import compile
    kind, value = utils.readInput(path)
    if kind == 'circuit':
        return value
    text, lexicon = value
    return compile(text, lexicon, options)


def equivCommand(args) -> int:
    options = _options(args)
    if equal(_circuitOf(args.first, options), _circuitOf(args.second, options)):
        utils.diagnostic('equivalent', 'green')
        return constants.EXIT_OK
    utils.diagnostic('not equivalent', 'red')
    return constants.EXIT_NOT_EQUIVALENT


def genCommand(args) -> int:
    from text_circuits import hgt, txc
    from text_circuits.grammar import GeneratorConfig, generate

    for seed in range(args.seed, args.seed + args.count):
        if args.circuits:
            output, suffix = txc.dumps(freeGenerate(seed, CircuitConfig())), '.txc'
        else:
            output = hgt.dumps(generate(seed, GeneratorConfig(extensions = args.extensions == 'on')))
            suffix = '.hgt'
        if args.out_path:
            utils.writeOutput(output, pathlib.Path(args.out_path) / f'gen-{seed}{suffix}')
        else:
            utils.writeOutput(output + '\n')
    return constants.EXIT_OK


def renderCommand(args) -> int:
    from text_circuits import dot, translate, txc
    from text_circuits.extensions import applyExtensions

    results = []
    for path in args.inputs:
        kind, value = utils.readInput(path)
        if kind == 'circuit':
            output = dot.renderCircuit(value) if args.format == 'dot' else txc.dumps(value)
        else:
            text, lexicon = value
            d = translate.fromText(text)
            if args.extensions == 'on':
                d, _ = applyExtensions(d, lexicon)
            if args.format == 'txc':
                raise IncompatibleOptionsError('render writes diagrams as dot or text; use compile for txc')
            output = dot.renderDiagram(d) if args.format == 'dot' else '\n'.join(d.toLines()) + '\n'
        results.append((path, constants.EXIT_OK, output, []))
    return _emit(results, args, SUFFIXES[args.format])


def _roundtripSeed(job):
    from text_circuits.rewrite import compile
    from text_circuits.textualise import textualiseWithLexicon

    seed, options = job
    c = freeGenerate(seed, CircuitConfig())
    try:
        text, lexicon = textualiseWithLexicon(c)
        return seed, equal(compile(text, lexicon, options), c), None
    except TextCircuitsError as e:
        return seed, False, str(e)


def roundtripCommand(args) -> int:
    jobs = [(x, _options(args)) for x in range(args.seed, args.seed + args.count)]
    results = _runJobs(_roundtripSeed, jobs, args.jobs)
    failed = [x for x in results if not x[1]]
    for seed, _, message in failed:
        utils.diagnostic(f'seed {seed}: ' + (message or 'textualised circuit compiles to a different circuit'))
    summary = f'{len(results) - len(failed)}/{len(results)} pass'
    utils.writeOutput(summary + '\n', args.out_path)
    return constants.EXIT_INTERNAL_ERROR if failed else constants.EXIT_OK


def validateCommand(args) -> int:
    from text_circuits import grammar, hgt, txc

    reports = {}
    for path in args.inputs:
        if utils.isCircuitFile(path):
            report = validateCircuit(txc.load(path, validate = False))
        else:
            text, lexicon = hgt.load(path)
            report = grammar.validate(text, lexicon, args.extensions == 'on')
        reports[path] = report.toDict()
    utils.writeOutput(json.dumps(reports, indent = 2) + '\n', args.out_path)
    return constants.EXIT_OK if all(x['valid'] for x in reports.values()) else constants.EXIT_INPUT_ERROR


COMMANDS = {
    'compile': compileCommand,
    'textualise': textualiseCommand,
    'equiv': equivCommand,
    'gen': genCommand,
    'render': renderCommand,
    'roundtrip': roundtripCommand,
    'validate': validateCommand,
}


def main() -> None:
    try:
        args = utils.getCommandArgs(sys.argv[1:])
    except IncompatibleOptionsError as e:
        utils.diagnostic(f'error: {e}')
        sys.exit(constants.EXIT_INPUT_ERROR)
    level = logging.INFO if args.verbose else logging.WARNING

    if args.dev:
        import text_circuits.dev
        text_circuits.dev.main(args, sys.argv[1:])
        sys.exit(constants.EXIT_OK)

    utils.setupLogging(args.config_path, level, args.log, args.file_logging)
    try:
        code = COMMANDS[args.command](args)
    except InvariantBreach:
        utils.diagnostic(f'internal error: {traceback.format_exc()}')
        code = constants.EXIT_INTERNAL_ERROR
    except (TextCircuitsError, OSError) as e:
        utils.diagnostic(f'error: {e}')
        code = constants.EXIT_INPUT_ERROR
    except Exception:
        utils.diagnostic(f'internal error: {traceback.format_exc()}')
        code = constants.EXIT_INTERNAL_ERROR
    sys.exit(code)


if __name__ == '__main__':
    main()
