# -*- coding: utf-8 -*-

import logging

"""
text_circuits.exceptions
~~~~~~~~~~~~~~~~~~~~~~~~
This module contains the set of text_circuits exceptions.
"""

# Add logger bus.
logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

class TextCircuitsError(Exception):
    """
    Base class for every error raised by text_circuits.
    """
    pass

class CyclicLink(TextCircuitsError, ValueError):
    """
    A non-reflexive pronominal link would close a cycle in the diagram.
    """
    pass

class DanglingPossessive(TextCircuitsError, ValueError):
    """
    A possessive piece has no partner on the other end of its link.
    """
    pass

class EmptyLexiconClass(TextCircuitsError, ValueError):
    """
    The generator needs a word class that the lexicon has no entries for.
    """
    pass

class IncompatibleOptionsError(TextCircuitsError):
    """
    Provided options are incompatible with each other.
    """

class InvalidCircuitError(TextCircuitsError, ValueError):
    """
    A circuit is malformed or failed validation. The report, if any, is
    available as the `report` attribute.
    """
    def __init__(self, message, report = None):
        super().__init__(message)
        self.report = report

class InvalidLexiconError(TextCircuitsError, ValueError):
    """
    A lexicon entry conflicts with another one, or a passive form was given
    for something other than a transitive verb.
    """
    pass

class InvalidTextError(TextCircuitsError, ValueError):
    """
    A text is malformed or failed validation. The report, if any, is
    available as the `report` attribute.
    """
    def __init__(self, message, report = None):
        super().__init__(message)
        self.report = report

class InvariantBreach(TextCircuitsError, AssertionError):
    """
    An internal invariant did not hold. This is always a bug.
    """
    pass

class PreconditionViolation(TextCircuitsError, ValueError):
    """
    The arguments of a transformation do not meet its preconditions.
    """
    pass

class ReferentClash(TextCircuitsError, ValueError):
    """
    Two circuits composed in parallel share a referent.
    """
    pass

class SexprError(TextCircuitsError, ValueError):
    """
    The input is not a well formed s-expression.
    """
    pass

class UnknownPassiveForm(TextCircuitsError, KeyError):
    """
    A passive participle has no active transitive verb in the lexicon.
    """
    pass

class UntextualisableError(TextCircuitsError, NotImplementedError):
    """
    The circuit uses a shape the textualiser cannot express.
    """
    pass
