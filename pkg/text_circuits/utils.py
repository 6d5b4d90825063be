"""
Utility functions of text_circuits.
"""

import argparse
import json
import logging
import logging.config
import os
import pathlib
import sys

import colorama

from . import constants
from .exceptions import IncompatibleOptionsError


logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())
logging.addLevelName(5, 'DEVELOPER')

COMMANDS = ('compile', 'textualise', 'equiv', 'gen', 'render', 'roundtrip', 'validate')


def color(text : str, c : str) -> str:
    """
    Returns colored text, if colors are enabled for stderr.
    """
    if not useColor():
        return text
    if c == 'red':
        return colorama.Fore.RED + text + colorama.Fore.RESET
    elif c == 'green':
        return colorama.Fore.GREEN + text + colorama.Fore.RESET
    elif c == 'yellow':
        return colorama.Fore.YELLOW + text + colorama.Fore.RESET
    raise ValueError(f'unknown color {c!r}')


def diagnostic(message : str, c : str = 'red') -> None:
    """
    Writes a diagnostic line to stderr. Stdout is reserved for output.
    """
    print(color(message, c), file = sys.stderr)


def getCommandArgs(args):
    """
    Parse command-line arguments.

    :raises IncompatibleOptionsError: if options are provided that are
        incompatible.
    """
    parser = argparse.ArgumentParser(description = constants.MAINDOC, prog = 'textcirc')
    # --verbose
    parser.add_argument('--verbose', dest='verbose', action='store_true',
                        help='Turns on console logging.')
    # --dev
    parser.add_argument('--dev', dest='dev', action='store_true',
                        help='Changes to use developer mode. Automatically enables the --verbose flag.')
    # --log PATH
    parser.add_argument('--log', dest='log',
                        help='Set the path to write the file log to.')
    # --config PATH
    parser.add_argument('--config', dest='config_path',
                        help='Set the path to load the logging config from.')
    # --file-logging
    parser.add_argument('--file-logging', dest='file_logging', action='store_true',
                        help='Enables file logging. Implies --verbose.')

    common = argparse.ArgumentParser(add_help = False)
    # --extensions on|off
    common.add_argument('--extensions', dest='extensions', choices=('on', 'off'), default='on',
                        help='Whether the passive, possessive and gerund forms are accepted. (Default: on)')
    # --jobs N
    common.add_argument('--jobs', dest='jobs', type=int, default=1,
                        help='Number of worker processes used across independent inputs. (Default: 1)')
    # -o, --out PATH
    common.add_argument('-o', '--out', dest='out_path',
                        help='Write the output to this path instead of stdout.')

    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True

    p = sub.add_parser('compile', parents=[common], help='Compile .hgt texts into circuits.')
    # --trace
    p.add_argument('--trace', dest='trace', action='store_true',
                   help='Print the rewrite trace to stderr.')
    # --format txc|dot
    p.add_argument('--format', dest='format', choices=('txc', 'dot', 'text'), default='txc',
                   help='Output format of the circuit. (Default: txc)')
    # --enumerate-orders N
    p.add_argument('--enumerate-orders', dest='enumerate_orders', type=int, default=0,
                   help='Compile under N different rule orders and check they agree.')
    p.add_argument('inputs', metavar='IN', nargs='+', help='A .hgt file to compile.')

    p = sub.add_parser('textualise', parents=[common], help='Turn a .txc circuit into a .hgt text.')
    # --surface
    p.add_argument('--surface', dest='surface', action='store_true',
                   help='Print the pretty English rendering instead of the .hgt text.')
    # --format text
    p.add_argument('--format', dest='format', choices=('txc', 'dot', 'text'), default='text',
                   help='Only text is supported.')
    p.add_argument('inputs', metavar='IN', nargs='+', help='A .txc file to textualise.')

    p = sub.add_parser('equiv', parents=[common], help='Check whether two texts are equivalent.')
    p.add_argument('first', metavar='A', help='A .hgt or .txc file.')
    p.add_argument('second', metavar='B', help='A .hgt or .txc file.')

    p = sub.add_parser('gen', parents=[common], help='Generate random texts or circuits.')
    # --seed N
    p.add_argument('--seed', dest='seed', type=int, default=0,
                   help='First seed to use. (Default: 0)')
    # -n N
    p.add_argument('-n', dest='count', type=int, default=1,
                   help='Number of seeds. (Default: 1)')
    # --circuits
    p.add_argument('--circuits', dest='circuits', action='store_true',
                   help='Generate .txc circuits instead of .hgt texts.')

    p = sub.add_parser('render', parents=[common], help='Render a text diagram or circuit.')
    # --format dot|text|txc
    p.add_argument('--format', dest='format', choices=('txc', 'dot', 'text'), default='dot',
                   help='dot for Graphviz, text for the line based debug form. (Default: dot)')
    p.add_argument('inputs', metavar='IN', nargs='+', help='A .hgt or .txc file.')

    p = sub.add_parser('roundtrip', parents=[common], help='Check that compiling a textualised circuit gives it back.')
    # --seed N
    p.add_argument('--seed', dest='seed', type=int, default=0,
                   help='First seed to use. (Default: 0)')
    # -n N
    p.add_argument('-n', dest='count', type=int, default=100,
                   help='Number of seeds. (Default: 100)')

    p = sub.add_parser('validate', parents=[common], help='Validate .hgt texts or .txc circuits.')
    p.add_argument('inputs', metavar='IN', nargs='+', help='A .hgt or .txc file.')

    options = parser.parse_args(args)

    if options.jobs < 1:
        raise IncompatibleOptionsError('--jobs must be at least 1')
    if options.command == 'textualise' and options.format != 'text':
        raise IncompatibleOptionsError('textualise only writes text; --format txc and --format dot are not available')
    if options.command == 'compile' and options.enumerate_orders < 0:
        raise IncompatibleOptionsError('--enumerate-orders must not be negative')
    if options.command == 'compile' and options.format == 'text':
        raise IncompatibleOptionsError('compile writes txc or dot; use render for the text form of a diagram')
    if options.command in ('gen', 'roundtrip') and options.count < 0:
        raise IncompatibleOptionsError('-n must not be negative')
    if options.command == 'gen' and options.circuits and options.extensions == 'off':
        logger.warning('--extensions has no effect on generated circuits')

    if options.dev or options.file_logging:
        options.verbose = True

    return options


def isCircuitFile(path) -> bool:
    return pathlib.Path(path).suffix.lower() == '.txc'


def readInput(path):
    """
    Reads a .hgt or .txc file, told apart by the suffix.

    :returns: ('text', (HybridText, Lexicon)) or ('circuit', TextCircuit).
    """
    from . import hgt, txc
    if isCircuitFile(path):
        return 'circuit', txc.load(path)
    return 'text', hgt.load(path)


def setupLogging(defaultPath = None, defaultLevel = logging.WARN, logfile = None, enableFileLogging : bool = False,
                 env_key = constants.ENV_LOG_CFG) -> bool:
    """
    Setup logging configuration

    Args:
    :param defaultPath: Default path to use for the logging configuration file.
    :param defaultLevel: Default logging level.
    :param env_key: Environment variable name to search for, for setting logfile
        path.
    :param enableFileLogging: Whether to use a file to log or not.

    Returns:
        bool: True if the configuration file was found and applied, False otherwise
    """
    shippedConfig = pathlib.Path(__file__).parent / 'logging-config'
    if os.name == 'nt':
        null = 'NUL'
        shippedConfig /= 'logging-nt.json'
    else:
        null = '/dev/null'
        shippedConfig /= 'logging-posix.json'
    # Find logging.json if not provided
    defaultPath = pathlib.Path(defaultPath) if defaultPath else shippedConfig

    paths = [
        defaultPath,
        pathlib.Path('logging.json'),
        pathlib.Path('../logging.json'),
        pathlib.Path('../../logging.json'),
        shippedConfig,
    ]

    path = None

    for configPath in paths:
        if configPath.exists():
            path = configPath
            break

    value = os.getenv(env_key, None)
    if value and os.path.exists(value) and os.path.isfile(value):
        path = pathlib.Path(value)

    if not path:
        print('Unable to find logging.json configuration file', file = sys.stderr)
        print('Make sure a valid logging configuration file is referenced in the defaultPath'
              ' argument, is inside the text_circuits install location, or is available at one '
              'of the following file-paths:', file = sys.stderr)
        print(str(paths[1:]), file = sys.stderr)
        logging.basicConfig(level = defaultLevel)
        logging.warning('The text_circuits logging configuration was not found - using a basic configuration.'
                        f'Please check the text_circuits installation directory for "logging-{os.name}.json".')
        return False

    with open(path, 'rt') as f:
        config = json.load(f)

    for x in config['handlers']:
        if 'filename' in config['handlers'][x]:
            if enableFileLogging:
                config['handlers'][x]['filename'] = tmp = os.path.expanduser(
                    os.path.expandvars(logfile if logfile else config['handlers'][x]['filename']))
                tmp = pathlib.Path(tmp).parent
                if not tmp.exists():
                    os.makedirs(tmp)
            else:
                config['handlers'][x]['filename'] = null

    try:
        logging.config.dictConfig(config)
    except ValueError as e:
        print('Failed to configure the logger. Did your installation get messed up?', file = sys.stderr)
        print(e, file = sys.stderr)

    logging.getLogger().setLevel(defaultLevel)
    return True


def useColor() -> bool:
    """
    Reads TEXTCIRC_COLOR: `always`, `never`, or `auto` (color only when
    stderr is a terminal).
    """
    value = os.getenv(constants.ENV_COLOR, 'auto').lower()
    if value == 'always':
        return True
    if value == 'never':
        return False
    return sys.stderr.isatty()


def writeOutput(data : str, path = None) -> None:
    """
    Writes :param data: to :param path:, or to stdout if no path is given.
    """
    if path is None:
        sys.stdout.write(data)
        return
    path = pathlib.Path(path)
    if path.parent and not path.parent.exists():
        os.makedirs(path.parent)
    with open(path, 'w', encoding = 'utf-8') as f:
        f.write(data)
