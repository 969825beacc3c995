'''
MiniJL: lexer, recursive-descent parser, AST and unparser for the
Julia-like language run by the editor's execution and debug modes.

Parsed programs are head/args trees. Every statement of a block is preceded
by a LineMarker giving the file and line it came from.
'''
from __future__ import annotations

import json
import re
import string
from dataclasses import dataclass
from typing import Any, Optional

KEYWORDS = frozenset(['function', 'for', 'while', 'if', 'elseif', 'else', 'end', 'global', 'in', 'true', 'false'])
OPERATORS = ('==', '!=', '<=', '>=', '+', '-', '*', '/', '=', '<', '>', ':', '(', ')', ',')
COMPARISONS = frozenset(['==', '!=', '<=', '>=', '<', '>'])
HEADS = frozenset(['block', 'if', 'while', 'for', 'function', 'call', 'assign', 'global', 'range'])

INT_MIN = -2 ** 63
INT_MAX = 2 ** 63 - 1

_number = re.compile(r'(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?', re.A)
_identifier = re.compile(r'[A-Za-z_][A-Za-z0-9_]*')
_marker = re.compile(r'^#=\s*(.*):(\d+)\s*=#$', re.S)
_escapes = {'"': '"', '\\': '\\', 'n': '\n', 't': '\t'}
# identifiers and numbers are ASCII only
_DIGITS = frozenset(string.digits)
_NAME_START = frozenset(string.ascii_letters + '_')


class MiniJLError(Exception):
    '''
    Error raised while reading or running MiniJL code.

    :param message: diagnostic text

    :param line: source line the error refers to

    :param file: source file label
    '''
    kind = 'Error'

    def __init__(self, message, line=None, file=None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.file = file

    def render(self):
        where = []
        if self.file is not None:
            where.append(str(self.file))
        if self.line is not None:
            where.append(str(self.line))
        if where:
            return '%s: %s: %s' % (self.kind, ':'.join(where), self.message)
        return '%s: %s' % (self.kind, self.message)

    def __str__(self):
        return self.render()


class ParseError(MiniJLError):
    kind = 'ParseError'


class LexicalError(ParseError):
    kind = 'ParseError'


# AST nodes

@dataclass(frozen=True)
class Literal:
    value: Any


@dataclass(frozen=True)
class Identifier:
    name: str


@dataclass(frozen=True)
class LineMarker:
    line: int
    file: str = 'none'


@dataclass(frozen=True)
class Compound:
    head: str
    args: tuple = ()


def is_compound(node, head=None):
    return isinstance(node, Compound) and (head is None or node.head == head)


@dataclass
class Token:
    kind: str  # keyword, identifier, integer, float, string, operator, newline, eof
    text: str
    line: int
    value: Any = None
    marker: Optional[tuple] = None

    def describe(self):
        if self.kind == 'eof':
            return 'end of input'
        if self.kind == 'newline':
            return 'end of line'
        return '`%s`' % self.text


def tokenize(source):
    '''
    Split MiniJL source into tokens, attaching the line number of each.
    A "#= file:N =#" comment is attached as a line marker to the next token.
    '''
    tokens = []
    pos = 0
    line = 1
    pending = None
    n = len(source)

    def emit(kind, text, tline, value=None):
        nonlocal pending
        tok = Token(kind, text, tline, value)
        if pending is not None and kind != 'newline':
            tok.marker = pending
            pending = None
        tokens.append(tok)

    while pos < n:
        ch = source[pos]
        if ch in ' \t\r':
            pos += 1
        elif ch == '\n':
            emit('newline', '\n', line)
            line += 1
            pos += 1
        elif ch == ';':
            emit('newline', ';', line)
            pos += 1
        elif source.startswith('#=', pos):
            close = source.find('=#', pos + 2)
            if close < 0:
                raise LexicalError('unterminated comment', line)
            text = source[pos:close + 2]
            found = _marker.match(text)
            if found is not None:
                pending = (found.group(1).strip(), int(found.group(2)))
            line += text.count('\n')
            pos = close + 2
        elif ch == '#':
            while pos < n and source[pos] != '\n':
                pos += 1
        elif ch == '"':
            start = line
            pos += 1
            chars = []
            while True:
                if pos >= n:
                    raise LexicalError('unterminated string literal', start)
                ch = source[pos]
                if ch == '"':
                    pos += 1
                    break
                if ch == '\\':
                    if pos + 1 >= n:
                        raise LexicalError('unterminated string literal', start)
                    esc = source[pos + 1]
                    if esc not in _escapes:
                        raise LexicalError('invalid escape sequence \\%s' % esc, line)
                    chars.append(_escapes[esc])
                    pos += 2
                    continue
                if ch == '\n':
                    line += 1
                chars.append(ch)
                pos += 1
            text = ''.join(chars)
            emit('string', text, start, text)
        elif ch in _DIGITS or (ch == '.' and pos + 1 < n and source[pos + 1] in _DIGITS):
            match = _number.match(source, pos)
            text = match.group(0)
            if '.' in text or match.group(2):
                emit('float', text, line, float(text))
            else:
                emit('integer', text, line, int(text))
            pos = match.end()
        elif ch in _NAME_START:
            match = _identifier.match(source, pos)
            text = match.group(0)
            emit('keyword' if text in KEYWORDS else 'identifier', text, line)
            pos = match.end()
        else:
            for op in OPERATORS:
                if source.startswith(op, pos):
                    emit('operator', op, line)
                    pos += len(op)
                    break
            else:
                raise LexicalError('unexpected character %r' % ch, line)
    emit('eof', '', line)
    return tokens


class Parser:
    '''
    Recursive-descent parser over a token list.

    Besides the tree it records, in end_lines, which body block each `end`
    keyword closes, keyed by the line of that `end`.
    '''
    def __init__(self, tokens, file='none'):
        self.tokens = tokens
        self.pos = 0
        self.file = file
        self.end_lines = {}

    # token helpers

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        if tok.kind != 'eof':
            self.pos += 1
        return tok

    def check(self, kind, text=None):
        tok = self.tokens[self.pos]
        return tok.kind == kind and (text is None or tok.text == text)

    def accept(self, kind, text=None):
        if self.check(kind, text):
            return self.advance()
        return None

    def expect(self, kind, text=None, what=None):
        if self.check(kind, text):
            return self.advance()
        tok = self.peek()
        if what is None:
            what = '`%s`' % text if text is not None else kind
        raise ParseError('Expected %s, found %s' % (what, tok.describe()), tok.line, self.file)

    def skip_newlines(self):
        while self.check('newline'):
            self.advance()

    # statements

    def parse_program(self):
        block = self.parse_block(())
        tok = self.peek()
        if tok.kind != 'eof':
            raise ParseError('unexpected %s' % tok.describe(), tok.line, self.file)
        return block

    def parse_block(self, terminators):
        stmts = []
        while True:
            self.skip_newlines()
            tok = self.peek()
            if tok.kind == 'eof' or (tok.kind == 'keyword' and tok.text in terminators):
                break
            if tok.marker is not None:
                stmts.append(LineMarker(tok.marker[1], tok.marker[0]))
            else:
                stmts.append(LineMarker(tok.line, self.file))
            stmts.append(self.parse_statement())
            after = self.peek()
            if after.kind in ('newline', 'eof'):
                continue
            if after.kind == 'keyword' and after.text in terminators:
                continue
            raise ParseError('Expected end of line, found %s' % after.describe(), after.line, self.file)
        return Compound('block', tuple(stmts))

    def close_block(self, body):
        tok = self.expect('keyword', 'end')
        self.end_lines[tok.line] = body
        return tok

    def parse_statement(self):
        tok = self.peek()
        if tok.kind == 'keyword':
            if tok.text == 'function':
                return self.parse_function()
            if tok.text == 'for':
                return self.parse_for()
            if tok.text == 'while':
                self.advance()
                cond = self.parse_expression()
                body = self.parse_block(('end',))
                self.close_block(body)
                return Compound('while', (cond, body))
            if tok.text == 'if':
                self.advance()
                node, end = self.parse_if()
                # the `end` of an if chain maps to the whole statement
                self.end_lines[end.line] = node
                return node
            if tok.text == 'global':
                return self.parse_global()
            if tok.text in ('end', 'else', 'elseif', 'in'):
                raise ParseError('unexpected `%s`' % tok.text, tok.line, self.file)
        return self.parse_assignment()

    def parse_function(self):
        self.advance()
        name = self.expect('identifier', what='function name')
        self.expect('operator', '(')
        params = []
        if not self.check('operator', ')'):
            while True:
                param = self.expect('identifier', what='parameter name')
                params.append(Identifier(param.text))
                if not self.accept('operator', ','):
                    break
        self.expect('operator', ')')
        body = self.parse_block(('end',))
        self.close_block(body)
        signature = Compound('call', (Identifier(name.text),) + tuple(params))
        return Compound('function', (signature, body))

    def parse_for(self):
        self.advance()
        var = self.expect('identifier', what='loop variable')
        if not (self.accept('operator', '=') or self.accept('keyword', 'in')):
            tok = self.peek()
            raise ParseError('Expected `=` or `in`, found %s' % tok.describe(), tok.line, self.file)
        iterable = self.parse_expression()
        body = self.parse_block(('end',))
        self.close_block(body)
        header = Compound('assign', (Identifier(var.text), iterable))
        return Compound('for', (header, body))

    def parse_if(self):
        # the `if` or `elseif` keyword is already consumed; returns (node, closing `end` token)
        cond = self.parse_expression()
        then = self.parse_block(('elseif', 'else', 'end'))
        if self.accept('keyword', 'elseif'):
            rest, end = self.parse_if()
            return Compound('if', (cond, then, rest)), end
        if self.accept('keyword', 'else'):
            other = self.parse_block(('end',))
            return Compound('if', (cond, then, other)), self.expect('keyword', 'end')
        return Compound('if', (cond, then)), self.expect('keyword', 'end')

    def parse_global(self):
        self.advance()
        items = []
        while True:
            name = self.expect('identifier', what='variable name')
            target = Identifier(name.text)
            if self.accept('operator', '='):
                items.append(Compound('assign', (target, self.parse_assignment())))
            else:
                items.append(target)
            if not self.accept('operator', ','):
                break
        return Compound('global', tuple(items))

    def parse_assignment(self):
        expr = self.parse_expression()
        if self.check('operator', '='):
            tok = self.advance()
            if not isinstance(expr, Identifier):
                raise ParseError('invalid assignment target', tok.line, self.file)
            return Compound('assign', (expr, self.parse_assignment()))
        return expr

    # expressions

    def parse_expression(self):
        left = self.parse_range()
        tok = self.peek()
        if tok.kind == 'operator' and tok.text in COMPARISONS:
            self.advance()
            right = self.parse_range()
            after = self.peek()
            if after.kind == 'operator' and after.text in COMPARISONS:
                raise ParseError('chained comparisons are not supported', after.line, self.file)
            return Compound('call', (Identifier(tok.text), left, right))
        return left

    def parse_range(self):
        left = self.parse_additive()
        if self.accept('operator', ':'):
            right = self.parse_additive()
            if self.check('operator', ':'):
                raise ParseError('stepped ranges are not supported', self.peek().line, self.file)
            return Compound('range', (left, right))
        return left

    def parse_additive(self):
        left = self.parse_term()
        while self.check('operator', '+') or self.check('operator', '-'):
            op = self.advance()
            right = self.parse_term()
            left = Compound('call', (Identifier(op.text), left, right))
        return left

    def parse_term(self):
        left = self.parse_unary()
        while self.check('operator', '*') or self.check('operator', '/'):
            op = self.advance()
            right = self.parse_unary()
            left = Compound('call', (Identifier(op.text), left, right))
        return left

    def parse_unary(self):
        if self.check('operator', '-'):
            op = self.advance()
            nxt = self.peek()
            if nxt.kind in ('integer', 'float'):
                # negative numeric literals fold like the host language does
                self.advance()
                return self.finish_postfix(self.number(nxt, negate=True))
            operand = self.parse_unary()
            return Compound('call', (Identifier(op.text), operand))
        return self.parse_postfix()

    def number(self, tok, negate=False):
        value = -tok.value if negate else tok.value
        if tok.kind == 'integer' and not INT_MIN <= value <= INT_MAX:
            raise LexicalError('integer literal %s out of range' % tok.text, tok.line, self.file)
        return Literal(value)

    def parse_postfix(self):
        return self.finish_postfix(self.parse_primary())

    def finish_postfix(self, node):
        while isinstance(node, Identifier) and self.check('operator', '('):
            self.advance()
            args = []
            if not self.check('operator', ')'):
                while True:
                    args.append(self.parse_expression())
                    if not self.accept('operator', ','):
                        break
            self.expect('operator', ')')
            node = Compound('call', (node,) + tuple(args))
        return node

    def parse_primary(self):
        tok = self.peek()
        if tok.kind in ('integer', 'float'):
            self.advance()
            return self.number(tok)
        if tok.kind == 'string':
            self.advance()
            return Literal(tok.value)
        if tok.kind == 'keyword' and tok.text in ('true', 'false'):
            self.advance()
            return Literal(tok.text == 'true')
        if tok.kind == 'identifier':
            self.advance()
            return Identifier(tok.text)
        if self.accept('operator', '('):
            inner = self.parse_expression()
            self.expect('operator', ')')
            return inner
        raise ParseError('unexpected %s' % tok.describe(), tok.line, self.file)


def parse_program(source, file='none'):
    try:
        tokens = tokenize(source)
    except LexicalError as err:
        if err.file is None:
            err.file = file
        raise
    return Parser(tokens, file).parse_program()


def parse_with_ends(source, file='none'):
    # Tree plus the {line of `end`: closed body block, or whole if statement} map used to place breakpoints
    try:
        tokens = tokenize(source)
    except LexicalError as err:
        if err.file is None:
            err.file = file
        raise
    parser = Parser(tokens, file)
    tree = parser.parse_program()
    return tree, parser.end_lines


# Unparsing

_BINARY_PRECEDENCE = {'==': 1, '!=': 1, '<=': 1, '>=': 1, '<': 1, '>': 1,
                      '+': 3, '-': 3, '*': 4, '/': 4}
_RANGE_PRECEDENCE = 2
_UNARY_PRECEDENCE = 5
_ATOM_PRECEDENCE = 6
INDENT = '  '


def precedence(node):
    if isinstance(node, Literal):
        if isinstance(node.value, (int, float)) and not isinstance(node.value, bool) and node.value < 0:
            return _UNARY_PRECEDENCE
        return _ATOM_PRECEDENCE
    if is_compound(node, 'range'):
        return _RANGE_PRECEDENCE
    if is_compound(node, 'call') and isinstance(node.args[0], Identifier):
        op = node.args[0].name
        if op in _BINARY_PRECEDENCE and len(node.args) == 3:
            return _BINARY_PRECEDENCE[op]
        if op == '-' and len(node.args) == 2:
            return _UNARY_PRECEDENCE
    if is_compound(node, 'assign'):
        return 0
    return _ATOM_PRECEDENCE


def _wrap(node, needed):
    text = unparse(node)
    if precedence(node) < needed:
        return '(' + text + ')'
    return text


def literal_text(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, str):
        out = value.replace('\\', '\\\\').replace('"', '\\"').replace('\n', '\\n').replace('\t', '\\t')
        return '"' + out + '"'
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _expression(node):
    head, args = node.head, node.args
    if head == 'call':
        callee = args[0]
        op = callee.name if isinstance(callee, Identifier) else None
        if op in _BINARY_PRECEDENCE and len(args) == 3:
            prec = _BINARY_PRECEDENCE[op]
            if prec == 1:
                # comparisons do not chain
                return '%s %s %s' % (_wrap(args[1], prec + 1), op, _wrap(args[2], prec + 1))
            return '%s %s %s' % (_wrap(args[1], prec), op, _wrap(args[2], prec + 1))
        if op == '-' and len(args) == 2:
            operand = args[1]
            text = unparse(operand)
            numeric = isinstance(operand, Literal) and type(operand.value) in (int, float)
            if precedence(operand) <= _UNARY_PRECEDENCE or numeric:
                text = '(' + text + ')'
            return '-' + text
        return '%s(%s)' % (unparse(callee), ', '.join(unparse(a) for a in args[1:]))
    if head == 'range':
        return '%s:%s' % (_wrap(args[0], _RANGE_PRECEDENCE + 1), _wrap(args[1], _RANGE_PRECEDENCE + 1))
    if head == 'assign':
        return '%s = %s' % (unparse(args[0]), unparse(args[1]))
    if head == 'global':
        return 'global ' + ', '.join(unparse(a) for a in args)
    raise ValueError('cannot unparse head %r as an expression' % head)


def _block_lines(block, depth):
    lines = []
    pad = INDENT * depth
    for stmt in block.args:
        if isinstance(stmt, LineMarker):
            lines.append(pad + unparse(stmt))
        else:
            lines.extend(pad + text for text in _statement_lines(stmt))
    return lines


def _if_lines(node, keyword):
    lines = ['%s %s' % (keyword, unparse(node.args[0]))]
    lines += _block_lines(node.args[1], 1)
    if len(node.args) == 3:
        other = node.args[2]
        if is_compound(other, 'if'):
            return lines + _if_lines(other, 'elseif')
        lines.append('else')
        lines += _block_lines(other, 1)
    lines.append('end')
    return lines


def _statement_lines(node):
    if is_compound(node, 'block'):
        return _block_lines(node, 0)
    if is_compound(node, 'if'):
        return _if_lines(node, 'if')
    if is_compound(node, 'while'):
        return ['while ' + unparse(node.args[0])] + _block_lines(node.args[1], 1) + ['end']
    if is_compound(node, 'for'):
        header = node.args[0]
        return (['for %s = %s' % (unparse(header.args[0]), unparse(header.args[1]))]
                + _block_lines(node.args[1], 1) + ['end'])
    if is_compound(node, 'function'):
        return ['function ' + unparse(node.args[0])] + _block_lines(node.args[1], 1) + ['end']
    return [unparse(node)]


def unparse(node):
    '''
    Render a node back to MiniJL source. Blocks carry their line markers
    as "#= file:N =#" comments, which parse_program reads back.
    '''
    if isinstance(node, Literal):
        return literal_text(node.value)
    if isinstance(node, Identifier):
        return node.name
    if isinstance(node, LineMarker):
        return '#= %s:%d =#' % (node.file, node.line)
    if isinstance(node, Compound):
        if node.head in ('block', 'if', 'while', 'for', 'function'):
            return '\n'.join(_statement_lines(node))
        return _expression(node)
    raise ValueError('not an AST node: %r' % (node,))


def sexpr(node):
    # Head/args shape without line markers
    if isinstance(node, Literal):
        if isinstance(node.value, str):
            return json.dumps(node.value)
        return literal_text(node.value)
    if isinstance(node, Identifier):
        return node.name
    if isinstance(node, LineMarker):
        return ''
    parts = [node.head]
    for arg in node.args:
        if not isinstance(arg, LineMarker):
            parts.append(sexpr(arg))
    return '(' + ' '.join(parts) + ')'


def strip_markers(node):
    if isinstance(node, Compound):
        return Compound(node.head, tuple(strip_markers(a) for a in node.args if not isinstance(a, LineMarker)))
    return node
