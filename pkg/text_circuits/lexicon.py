"""
The lexicon: word tokens, their classes and passive participles.
"""

import logging

from . import constants
from .enums import WordClass
from .exceptions import InvalidLexiconError


logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

RESERVED = (
    (constants.EXISTS, WordClass.IV, None),
    (constants.OWNS, WordClass.TV, constants.OWNED),
    (constants.AMPERSAND, WordClass.CNJ, None),
)


class Lexicon:
    """
    Maps each token to exactly one word class. Homonyms must be told apart
    with suffixed IDs (e.g. `BANK-1`, `BANK-2`). The reserved tokens EXISTS,
    OWNS and [&] are always present.
    """

    def __init__(self, entries = (), passiveForms = None):
        """
        :param entries: iterable of (token, WordClass) or (token, WordClass,
            participle) tuples. Classes may also be given by their .hgt name.
        :param passiveForms: optional mapping of TV token to participle.

        :raises InvalidLexiconError: if a token is given two classes or a
            participle is given for something other than a TV.
        """
        self.__entries = {}
        self.__passive = {}
        for entry in tuple(RESERVED) + tuple(entries):
            token, cls = entry[0], entry[1]
            participle = entry[2] if len(entry) > 2 else None
            self.__add(token, cls, participle)
        for token, participle in (passiveForms or {}).items():
            self.__addPassive(token, participle)
        self.__active = {y: x for x, y in self.__passive.items()}
        if len(self.__active) != len(self.__passive):
            raise InvalidLexiconError('two transitive verbs share a passive participle')
        for participle in self.__active:
            if participle in self.__entries:
                raise InvalidLexiconError(f'passive participle {participle} is also an entry')

    def __add(self, token : str, cls, participle) -> None:
        cls = WordClass(cls) if not isinstance(cls, WordClass) else cls
        if not constants.RE_TOKEN.match(token):
            raise InvalidLexiconError(f'malformed token {token!r}')
        if token == constants.THAT:
            raise InvalidLexiconError(f'{token} is structural and cannot be a lexicon entry')
        if self.__entries.get(token, cls) is not cls:
            raise InvalidLexiconError(f'{token} is given two classes: {self.__entries[token].value} and {cls.value}')
        self.__entries[token] = cls
        if participle:
            self.__addPassive(token, participle)

    def __addPassive(self, token : str, participle : str) -> None:
        if self.__entries.get(token) is not WordClass.TV:
            raise InvalidLexiconError(f'passive form given for {token}, which is not a transitive verb')
        if self.__passive.get(token, participle) != participle:
            raise InvalidLexiconError(f'{token} is given two passive forms')
        self.__passive[token] = participle

    def __contains__(self, token):
        return token in self.__entries

    def __eq__(self, other):
        if not isinstance(other, Lexicon):
            return NotImplemented
        return self.__entries == other.entries and self.__passive == other.passiveForms

    def __iter__(self):
        return iter(self.__entries)

    def __len__(self):
        return len(self.__entries)

    def __repr__(self):
        return f'Lexicon({len(self.__entries)} entries)'

    def activeForm(self, participle : str):
        """
        Returns the TV whose passive participle is :param participle:, or
        None.
        """
        return self.__active.get(participle)

    def classOf(self, token : str):
        """
        Returns the WordClass of :param token:, or None if it is unknown.
        """
        return self.__entries.get(token)

    def extended(self, entries) -> 'Lexicon':
        """
        Returns a new lexicon with :param entries: added.
        """
        current = [(x, y, self.__passive.get(x)) for x, y in self.__entries.items()]
        return Lexicon(current + list(entries))

    def isReserved(self, token : str) -> bool:
        return any(token == x[0] for x in RESERVED)

    def passiveForm(self, token : str):
        """
        Returns the passive participle of a TV token, or None.
        """
        return self.__passive.get(token)

    def tokens(self, cls, includeReserved : bool = False) -> list:
        """
        Returns the sorted tokens of class :param cls:.
        """
        cls = WordClass(cls) if not isinstance(cls, WordClass) else cls
        return sorted(x for x, y in self.__entries.items() if y is cls and (includeReserved or not self.isReserved(x)))

    @property
    def entries(self) -> dict:
        """
        Copy of the token to WordClass mapping.
        """
        return dict(self.__entries)

    @property
    def passiveForms(self) -> dict:
        """
        Copy of the TV token to participle mapping.
        """
        return dict(self.__passive)


def defaultLexicon() -> Lexicon:
    """
    Returns the lexicon used for texts that do not declare one.
    """
    return Lexicon(constants.DEFAULT_LEXICON)
