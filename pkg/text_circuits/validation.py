"""
Validation reports shared by the grammar, diagram and circuit validators.
"""

import logging

from .enums import IssueCode


logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())


class Issue:
    """
    A single problem found by a validator.
    """

    def __init__(self, code : IssueCode, message : str, where = None):
        self.__code = code
        self.__message = message
        self.__where = where

    def __eq__(self, other):
        if not isinstance(other, Issue):
            return NotImplemented
        return (self.__code, self.__message, self.__where) == (other.code, other.message, other.where)

    def __hash__(self):
        return hash((self.__code, self.__message, self.__where))

    def __repr__(self):
        return f'Issue({self.__code.value}, {self.__message!r}, where={self.__where!r})'

    def __str__(self):
        if self.__where is None:
            return f'{self.__code.value}: {self.__message}'
        return f'{self.__code.value} at {self.__where}: {self.__message}'

    def toDict(self) -> dict:
        return {
            'code': self.__code.value,
            'message': self.__message,
            'where': None if self.__where is None else str(self.__where),
        }

    @property
    def code(self) -> IssueCode:
        """
        The kind of problem.
        """
        return self.__code

    @property
    def message(self) -> str:
        """
        Human readable description.
        """
        return self.__message

    @property
    def where(self):
        """
        Location of the problem, if known. The meaning depends on the
        validator (a clause path, a node id, an instance index...).
        """
        return self.__where


class ValidationReport:
    """
    Collection of issues. A report is empty (and falsy) exactly when the
    validated object is valid.
    """

    def __init__(self, subject : str, issues = ()):
        self.__subject = subject
        self.__issues = list(issues)

    def __bool__(self):
        return bool(self.__issues)

    def __iter__(self):
        return iter(self.__issues)

    def __len__(self):
        return len(self.__issues)

    def __repr__(self):
        return f'ValidationReport({self.__subject!r}, {len(self.__issues)} issue(s))'

    def __str__(self):
        if not self.__issues:
            return f'{self.__subject}: valid'
        return '\n'.join(f'{self.__subject}: {x}' for x in self.__issues)

    def add(self, code : IssueCode, message : str, where = None) -> None:
        issue = Issue(code, message, where)
        logger.debug(f'{self.__subject}: {issue}')
        self.__issues.append(issue)

    def extend(self, other : 'ValidationReport') -> None:
        self.__issues.extend(other)

    def codes(self) -> set:
        """
        Returns the set of issue codes present in the report.
        """
        return {x.code for x in self.__issues}

    def has(self, code : IssueCode) -> bool:
        return any(x.code is code for x in self.__issues)

    def toDict(self) -> dict:
        return {
            'subject': self.__subject,
            'valid': not self.__issues,
            'issues': {x: y.toDict() for x, y in enumerate(self.__issues)},
        }

    @property
    def issues(self) -> tuple:
        return tuple(self.__issues)

    @property
    def subject(self) -> str:
        """
        What the report is about, e.g. 'text' or 'circuit'.
        """
        return self.__subject
