"""
S-expression reader and printer used by the .hgt format.
"""

import io
import logging

from .exceptions import SexprError


logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

# tokens
[T_EOF, T_ERROR, T_SYMBOL, T_STRING, T_INTEGER, T_OPEN, T_CLOSE] = range(7)
# states
[S_START, S_SYMBOL, S_STRING, S_NUMBER] = range(4)

DELIMITERS = ' \t\r\n;()'
LINE_WIDTH = 100


class Symbol(str):
    """
    A bare symbol, as opposed to a quoted string.
    """

    def __repr__(self):
        return f'Symbol({str.__repr__(self)})'


class SexprParser:
    """
    An s-expression parser. Reads from any text stream.
    """

    def __init__(self, stream):
        self.__lineNo = 1
        self.__stream = stream
        self.__char = None

    def _getc(self) -> str:
        if self.__char is None:
            c = self.__stream.read(1)
            if c == '\n':
                self.__lineNo += 1
            return c
        t = self.__char
        self.__char = None
        return t

    def _ungetc(self, c : str) -> None:
        self.__char = c

    def _convertNumber(self, token : str):
        try:
            return (T_INTEGER, int(token))
        except ValueError:
            # Things like "-" on their own are symbols.
            if not any(x.isdigit() for x in token):
                return (T_SYMBOL, token)
            return (T_ERROR, f'line {self.__lineNo}: invalid number {token!r}')

    def getToken(self):
        token = []
        state = S_START
        while True:
            c = self._getc()
            if state == S_START:
                if not c:
                    return (T_EOF, None)
                elif c in ' \t\r\n':
                    continue
                elif c == ';':
                    while c and c != '\n':
                        c = self._getc()
                elif c == '(':
                    return (T_OPEN, None)
                elif c == ')':
                    return (T_CLOSE, None)
                elif c == '"':
                    state = S_STRING
                elif c in '-0123456789':
                    state = S_NUMBER
                    token.append(c)
                else:
                    state = S_SYMBOL
                    token.append(c)
            elif state == S_SYMBOL:
                if not c:
                    return (T_SYMBOL, ''.join(token))
                if c in DELIMITERS:
                    self._ungetc(c)
                    return (T_SYMBOL, ''.join(token))
                token.append(c)
            elif state == S_STRING:
                if not c:
                    return (T_ERROR, f'line {self.__lineNo}: unexpected EOF inside string')
                elif c == '\\':
                    c = self._getc()
                    if c in ('"', '\\'):
                        token.append(c)
                    else:
                        self._ungetc(c)
                        token.append('\\')
                elif c == '"':
                    return (T_STRING, ''.join(token))
                else:
                    token.append(c)
            elif state == S_NUMBER:
                if not c:
                    return self._convertNumber(''.join(token))
                if c in DELIMITERS:
                    self._ungetc(c)
                    return self._convertNumber(''.join(token))
                elif c in '0123456789':
                    token.append(c)
                else:
                    # A symbol that happens to start with a digit or dash.
                    token.append(c)
                    state = S_SYMBOL

    def parse(self, t = None):
        """
        Parses the next form. Returns None at the end of the input.

        :raises SexprError: if the input is not well formed.
        """
        if t is None:
            (t, v) = self.getToken()
        if t == T_OPEN:
            startLine = self.__lineNo
            form = []
            while True:
                (t, v) = self.getToken()
                if t == T_CLOSE:
                    return form
                elif t == T_OPEN:
                    v = self.parse(t)
                elif t == T_ERROR:
                    raise SexprError(v)
                elif t == T_EOF:
                    raise SexprError(f'line {self.__lineNo}: EOF while inside list opened on line {startLine}')
                else:
                    v = self.__wrap(t, v)
                form.append(v)
        elif t == T_CLOSE:
            raise SexprError(f'line {self.__lineNo}: unexpected )')
        elif t == T_EOF:
            return None
        elif t == T_ERROR:
            raise SexprError(v)
        else:
            return self.__wrap(t, v)

    def __wrap(self, t, v):
        if t == T_SYMBOL:
            return Symbol(v)
        return v


def loads(text : str) -> list:
    """
    Parses every form in :param text: and returns them as a list.

    :raises SexprError: if the text is not well formed.
    """
    parser = SexprParser(io.StringIO(text))
    forms = []
    while True:
        form = parser.parse()
        if form is None:
            break
        forms.append(form)
    return forms


def _atom(value) -> str:
    if isinstance(value, Symbol):
        return str(value)
    if isinstance(value, bool):
        raise SexprError(f'cannot print boolean {value!r}')
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        escaped = value.replace('\\', '\\\\').replace('"', '\\"')
        return f'"{escaped}"'
    raise SexprError(f'cannot print {type(value).__name__} as an s-expression atom')


def _flat(form) -> str:
    if isinstance(form, (list, tuple)):
        return '(' + ' '.join(_flat(x) for x in form) + ')'
    return _atom(form)


def dumps(form, indent : int = 0, width : int = LINE_WIDTH) -> str:
    """
    Prints :param form: deterministically. Lists that fit in the remaining
    width go on one line; otherwise the leading atoms stay on the first line
    and every other element goes on its own line, indented by two spaces.
    """
    flat = _flat(form)
    if not isinstance(form, (list, tuple)) or indent + len(flat) <= width:
        return flat
    head = []
    rest = list(form)
    while rest and not isinstance(rest[0], (list, tuple)):
        head.append(_atom(rest.pop(0)))
    pad = ' ' * (indent + 2)
    lines = ['(' + ' '.join(head)]
    for x in rest:
        lines.append(pad + dumps(x, indent + 2, width))
    return '\n'.join(lines) + ')'
