#!/usr/bin/env python
# -*- coding: latin-1 -*-
# Date Format: YYYY-MM-DD

"""
text_circuits:
    Compiles texts of a hybrid grammar into text circuits, through text
    diagrams and a terminating rewrite system, and textualises circuits back
    into text.
"""

# --- LICENSE.txt -----------------------------------------------------------------
#
#    This program is free software: you can redistribute it and/or modify
#    it under the terms of the GNU General Public License as published by
#    the Free Software Foundation, either version 3 of the License, or
#    (at your option) any later version.
#
#    This program is distributed in the hope that it will be useful,
#    but WITHOUT ANY WARRANTY; without even the implied warranty of
#    MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
#    GNU General Public License for more details.
#
#    You should have received a copy of the GNU General Public License
#    along with this program.  If not, see <http://www.gnu.org/licenses/>.

__author__ = 'text_circuits contributors'
__date__ = '2026-10-19'
__version__ = '0.1.0'

import logging

from . import constants
from .circuit import GateCore, HoleBox, Instance, NounWire, TextCircuit, canonicalise, composePar, composeSeq, equal, freeGenerate, normalise, validateCircuit
from .derivation import HybridText, NounOccurrence, Phrase, PronominalLink, Sentence
from .diagram import TextDiagram, validateDiagram
from .exceptions import TextCircuitsError
from .grammar import generate, validate, yieldText
from .lexicon import Lexicon, defaultLexicon
from .rewrite import CompileOptions, RewriteTrace, compile, compileTraced, toCircuit
from .textualise import equiv, sliceCircuit, textualise
from .translate import fromText


# Add logger bus.
logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())
