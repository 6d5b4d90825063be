"""
The constants used in text_circuits. If you modify any of these without
explicit instruction to do so from one of the contributers, please do not
complain about bugs.
"""

import re


# DEFINE CONSTANTS
# WARNING DO NOT CHANGE ANY OF THESE VALUES UNLESS YOU KNOW
# WHAT YOU ARE DOING! FAILURE TO FOLLOW THIS INSTRUCTION
# CAN AND WILL BREAK THIS SCRIPT!

MAINDOC = 'text_circuits:\n\tCompiles hybrid grammar texts into text circuits and textualises circuits back into text.'

# Reserved tokens. These are part of every lexicon.
EXISTS = 'EXISTS'
OWNS = 'OWNS'
OWNED = 'OWNED'
AMPERSAND = '[&]'
THAT = '[THAT]'

# Structural tokens produced by yieldText.
WHO = 'WHO'
WHO_THAT = 'THAT'
ISOLATED = '!'
BLANK = '␣'
IS = 'IS'
BY = 'BY'
ING_SUFFIX = 'ING'
PERIOD = '.'

# Surface renderings.
SURFACE_THAT = 'THAT'
SURFACE_AMPERSAND_NESTED = ('AND', 'ALSO')
SURFACE_AMPERSAND_TOP = ','

# Pronoun table used by the surface printer. Keys are the grammatical slot.
# Gender and number are not modelled.
PRONOUNS = {
    'subject': 'HE',
    'object': 'HIM',
    'reflexive': 'HIMSELF',
    'possessive': 'HIS',
}

# .hgt rule heads.
RULE_IV = 'iv'
RULE_TV = 'tv'
RULE_IS = 'is'
RULE_SCV = 'scv'
RULE_CNJ = 'cnj'
RULE_SCOPE = 'scope'
RULE_NP = 'np'
RULE_ADJ = 'adj'
RULE_CROSS = 'cross'
RULE_POSS = 'poss'
RULE_ADV = 'adv'
RULE_ADP = 'adp'
RULE_PSV = 'psv'
RULE_ING = 'ing'

SENTENCE_RULES = frozenset((RULE_IV, RULE_TV, RULE_IS, RULE_SCV, RULE_CNJ))
NP_RULES = frozenset((RULE_NP, RULE_ADJ, RULE_CROSS, RULE_POSS))
EXTENSION_RULES = frozenset((RULE_PSV, RULE_POSS, RULE_ING))

# .hgt item heads.
ITEM_SENTENCE = 's'
ITEM_FUSION = 'rel'
ITEM_SELF = 'self'
ITEM_LINK = 'link'
ITEM_LEXICON = 'lexicon'
ITEM_TEXT = 'text'

# Default lexicon, used when a .hgt file has no lexicon and by the generators.
# Entries are (token, class, passive participle).
DEFAULT_LEXICON = (
    ('ALICE', 'n', None),
    ('BOB', 'n', None),
    ('CLAIRE', 'n', None),
    ('DENNIS', 'n', None),
    ('DEE', 'n', None),
    ('BEER', 'n', None),
    ('DANCES', 'iv', None),
    ('DANCE', 'iv', None),
    ('DRINKS', 'iv', None),
    ('LAUGHS', 'iv', None),
    ('RUNS', 'iv', None),
    ('SLEEPS', 'iv', None),
    ('LIKES', 'tv', 'LIKED'),
    ('HATES', 'tv', 'HATED'),
    ('GIVES', 'tv', 'GIVEN'),
    ('KICKS', 'tv', 'KICKED'),
    ('MEETS', 'tv', 'MET'),
    ('SOBER', 'adj', None),
    ('DRUNK', 'adj', None),
    ('HAPPY', 'adj', None),
    ('TALL', 'adj', None),
    ('QUICKLY', 'adv', None),
    ('CLUMSILY', 'adv', None),
    ('DEEPLY', 'adv', None),
    ('LOUDLY', 'adv', None),
    ('TO', 'adp', None),
    ('AT', 'adp', None),
    ('ABOUT', 'adp', None),
    ('TOWARDS', 'adp', None),
    ('WITH', 'adp', None),
    ('SEES', 'scv', None),
    ('TELLS', 'scv', None),
    ('THINKS', 'scv', None),
    ('SO', 'cnj', None),
    ('BUT', 'cnj', None),
)

# Geometric depth decay for grammar.generate and circuit.freeGenerate.
DEFAULT_DEPTH_DECAY = 0.5

# Environment variables.
ENV_LOG_CFG = 'TEXT_CIRCUITS_LOG_CFG'
ENV_COLOR = 'TEXTCIRC_COLOR'
ENV_FULL_TESTS = 'TEXT_CIRCUITS_FULL'

# CLI exit codes.
EXIT_OK = 0
EXIT_NOT_EQUIVALENT = 1
EXIT_INPUT_ERROR = 2
EXIT_INTERNAL_ERROR = 3

# .txc header.
TXC_HEADER = 'txc 1'
TXC_END = 'end'

# Regular expression for a well formed token. Brackets are allowed for the
# reserved structural tokens.
RE_TOKEN = re.compile(r'^(\[[A-Z&]+\]|[A-Z][A-Z0-9_\-]*)$')
