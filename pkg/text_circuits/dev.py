"""
Module for collecting data to be sent to the developer.
"""

# NOTE: Order of tasks:
#    1. Check for exceptions:
#        * Compile every file and log anything raised. If nothing is, log
#        "No exceptions raised."
#    2. Log the rewrite trace and the intermediate diagrams of each stage.


import logging

from . import hgt, rewrite, translate, utils
from .extensions import applyExtensions


logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())


def setupDevLogger(defaultPath = None, logfile = None, envKey = 'TEXT_CIRCUITS_LOG_CFG'):
    utils.setupLogging(defaultPath, 5, logfile, True, envKey)


def _stageDump(d, name : str) -> None:
    logger.log(5, f'DIAGRAM AFTER {name}:')
    for line in d.toLines():
        logger.log(5, line)


def main(args, argv):
    """
    Please only run this from the command line. :param args: is the
    namespace returned by `text_circuits.utils.getCommandArgs`. :param argv:
    is the list of arguments that were the input to that function.
    """
    setupDevLogger(args.config_path, args.log)
    logger.log(5, f'ARGV: {argv}')
    extensions = getattr(args, 'extensions', 'on') == 'on'
    for path in getattr(args, 'inputs', ()):
        logger.log(5, f'---- RUNNING DEVELOPER MODE ON FILE {path} ----')
        logger.log(5, 'EXCEPTION CHECK:')
        try:
            text, lexicon = hgt.load(path)
            rewrite.compileTraced(text, lexicon, rewrite.CompileOptions(extensions = extensions, trace = True))
        except Exception as e:
            logger.exception(e)
            logger.log(5, '---- END OF DEVELOPER LOG ----')
            continue
        else:
            logger.log(5, 'No exceptions raised.')
        logger.log(5, 'STAGE OUTPUT:')
        d = translate.fromText(text)
        _stageDump(d, 'TRANSLATION')
        if extensions:
            d, _ = applyExtensions(d, lexicon)
            _stageDump(d, 'EXTENSIONS')
        for name, stage in (('LINKS', rewrite.eliminateLinks), ('REFLEXIVE', rewrite.shrinkReflexive),
                            ('GATES', rewrite.normaliseGates), ('SCOPES', rewrite.reduceScopes)):
            d, _ = stage(d)
            _stageDump(d, name)
        logger.log(5, '---- END OF DEVELOPER LOG ----')
    logpath = None
    for x in logging.root.handlers:
        try:
            logpath = x.baseFilename
        except AttributeError:
            pass
    utils.diagnostic(f'Logging complete. Log has been saved to {logpath}', 'green')
