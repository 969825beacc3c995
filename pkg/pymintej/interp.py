'''
Tree-walking evaluator for MiniJL programs parsed by minilang.
'''
from __future__ import annotations

import logging
import math
import sys
import threading
from dataclasses import dataclass, field

import numpy as np

from .minilang import Compound, Identifier, Literal, LineMarker, MiniJLError, parse_program

logger = logging.getLogger(__name__)

MAX_CALL_DEPTH = 10000  # nested user-function calls before a runtime error

_TWO64 = 2 ** 64
_TWO63 = 2 ** 63

# heads that never contribute to a block's value
TRANSPARENT_HEADS = frozenset(['debug-break'])


class MiniJLRuntimeError(MiniJLError):
    kind = 'RuntimeError'


class NothingType:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return 'nothing'

    def __bool__(self):
        return False


nothing = NothingType()


@dataclass(frozen=True)
class RangeValue:
    lo: int
    hi: int

    def __iter__(self):
        return iter(range(self.lo, self.hi + 1))

    def __len__(self):
        return max(0, self.hi - self.lo + 1)


@dataclass
class UserFunction:
    name: str
    params: tuple
    body: Compound
    closure: list

    def __repr__(self):
        return '%s (generic function with 1 method)' % self.name


@dataclass
class Builtin:
    name: str
    fn: object

    def __repr__(self):
        return '%s (built-in function)' % self.name


def wrap_int(value):
    # 64-bit two's complement overflow
    return (value + _TWO63) % _TWO64 - _TWO63


def is_number(value):
    return isinstance(value, (int, float)) and not isinstance(value, NothingType)


def format_float(value):
    if math.isnan(value):
        return 'NaN'
    if math.isinf(value):
        return 'Inf' if value > 0 else '-Inf'
    magnitude = abs(value)
    if value == 0 or 1e-4 <= magnitude < 1e6:
        text = np.format_float_positional(value, unique=True, trim='0')
    else:
        text = np.format_float_scientific(value, unique=True, trim='0', exp_digits=1).replace('e+', 'e')
    return text


def format_value(value):
    '''
    Plain rendering used by println and string.
    '''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, RangeValue):
        return '%d:%d' % (value.lo, value.hi)
    return str(value) if not isinstance(value, NothingType) else 'nothing'


def show_value(value):
    # Rendering of Result:, watch lines and scope dumps
    if isinstance(value, str):
        return '"' + value.replace('\\', '\\\\').replace('"', '\\"').replace('\n', '\\n') + '"'
    return format_value(value)


def type_name(value):
    if isinstance(value, bool):
        return 'Bool'
    if isinstance(value, int):
        return 'Int64'
    if isinstance(value, float):
        return 'Float64'
    if isinstance(value, str):
        return 'String'
    if isinstance(value, RangeValue):
        return 'UnitRange{Int64}'
    if isinstance(value, (UserFunction, Builtin)):
        return 'Function'
    return 'Nothing'


@dataclass
class Scope:
    vars: dict = field(default_factory=dict)
    globals_declared: set = field(default_factory=set)


class Environment:
    '''
    Global bindings plus a stack of local scopes.

    :param globals: initial global bindings
    '''
    def __init__(self, globals=None):
        self.globals = dict(globals) if globals is not None else {}
        self.scopes = []
        self.line = 1
        self.file = 'none'

    def __repr__(self):
        return 'Environment(%d globals, %d scopes)' % (len(self.globals), len(self.scopes))

    @property
    def at_global_scope(self):
        return not self.scopes

    def push_scope(self):
        self.scopes.append(Scope())

    def pop_scope(self):
        self.scopes.pop()

    def declared_global(self, name):
        # a `global` declaration anywhere up the local chain routes to globals
        for scope in reversed(self.scopes):
            if name in scope.globals_declared:
                return True
            if name in scope.vars:
                return False
        return False

    def lookup(self, name):
        for scope in reversed(self.scopes):
            if name in scope.globals_declared:
                break
            if name in scope.vars:
                return scope.vars[name]
        if name in self.globals:
            return self.globals[name]
        if name in BUILTINS:
            return BUILTINS[name]
        raise KeyError(name)

    def is_defined(self, name):
        try:
            self.lookup(name)
        except KeyError:
            return False
        return True

    def assign(self, name, value):
        if self.at_global_scope or self.declared_global(name):
            self.globals[name] = value
            return
        for scope in reversed(self.scopes):
            if name in scope.vars:
                scope.vars[name] = value
                return
        self.scopes[-1].vars[name] = value

    def bind_local(self, name, value):
        if self.at_global_scope:
            self.globals[name] = value
        else:
            self.scopes[-1].vars[name] = value

    def declare_global(self, name):
        if not self.at_global_scope:
            self.scopes[-1].globals_declared.add(name)

    def snapshot(self):
        visible = {}
        for name, value in self.globals.items():
            visible[name] = value
        for scope in self.scopes:
            for name, value in scope.vars.items():
                visible[name] = value
        # names redeclared global read the global binding
        for scope in reversed(self.scopes):
            for name in scope.globals_declared:
                if name in self.globals:
                    visible[name] = self.globals[name]
        return [(name, visible[name]) for name in sorted(visible)
                if not isinstance(visible[name], (UserFunction, Builtin))]


def env_snapshot(env):
    return env.snapshot()


class OutputSink:
    '''
    Captures program output line by line.

    :param echo: callable receiving each completed line, or None to only capture
    '''
    def __init__(self, echo=None):
        self.lines = []
        self.echo = echo
        self._partial = ''

    @property
    def passthrough(self):
        return self.echo is not None

    def write(self, text):
        text = self._partial + text
        parts = text.split('\n')
        self._partial = parts.pop()
        for part in parts:
            self._emit(part)

    def println(self, text=''):
        self.write(text + '\n')

    def flush(self):
        if self._partial:
            part = self._partial
            self._partial = ''
            self._emit(part)

    def _emit(self, line):
        self.lines.append(line)
        if self.echo is not None:
            self.echo(line)

    def text(self):
        return ''.join(line + '\n' for line in self.lines) + self._partial


# Operators

def _runtime(message, env):
    return MiniJLRuntimeError(message, env.line, env.file)


def _numeric(op, a, b, env):
    if not (is_number(a) and is_number(b)):
        raise _runtime('no method matching %s(::%s, ::%s)' % (op, type_name(a), type_name(b)), env)
    if op == '/':
        a, b = float(a), float(b)
        if b == 0.0:
            if a == 0.0 or math.isnan(a):
                return math.nan
            return math.copysign(math.inf, a) * math.copysign(1.0, b)
        return a / b
    if isinstance(a, float) or isinstance(b, float):
        a, b = float(a), float(b)
        if op == '+':
            return a + b
        if op == '-':
            return a - b
        return a * b
    if op == '+':
        return wrap_int(a + b)
    if op == '-':
        return wrap_int(a - b)
    return wrap_int(a * b)


def _compare(op, a, b, env):
    if op == '==':
        if is_number(a) and is_number(b):
            return a == b
        return type(a) is type(b) and a == b
    if op == '!=':
        return not _compare('==', a, b, env)
    comparable = (is_number(a) and is_number(b)) or (isinstance(a, str) and isinstance(b, str))
    if not comparable:
        raise _runtime('no method matching %s(::%s, ::%s)' % (op, type_name(a), type_name(b)), env)
    if op == '<':
        return a < b
    if op == '<=':
        return a <= b
    if op == '>':
        return a > b
    return a >= b


def apply_operator(op, args, env):
    if len(args) == 1 and op == '-':
        value = args[0]
        if not is_number(value):
            raise _runtime('no method matching -(::%s)' % type_name(value), env)
        return -value if isinstance(value, float) else wrap_int(-value)
    if len(args) != 2:
        raise _runtime('wrong number of arguments to %s' % op, env)
    a, b = args
    if op in ('==', '!=', '<', '<=', '>', '>='):
        return _compare(op, a, b, env)
    if op == '*' and isinstance(a, str) and isinstance(b, str):
        return a + b
    return _numeric(op, a, b, env)


OPERATOR_NAMES = frozenset(['+', '-', '*', '/', '==', '!=', '<', '<=', '>', '>='])


# Builtins, called as fn(evaluator, args)

def _println(ev, args):
    ev.sink.println(''.join(format_value(a) for a in args))
    return nothing


def _print(ev, args):
    ev.sink.write(''.join(format_value(a) for a in args))
    return nothing


def _string(ev, args):
    return ''.join(format_value(a) for a in args)


def _abs(ev, args):
    ev.arity('abs', args, 1)
    value = args[0]
    if not is_number(value):
        raise _runtime('no method matching abs(::%s)' % type_name(value), ev.env)
    return abs(value) if isinstance(value, float) else wrap_int(abs(value))


def _extreme(name, pick):
    def fn(ev, args):
        if len(args) < 2:
            raise _runtime('%s needs at least 2 arguments, got %d' % (name, len(args)), ev.env)
        best = args[0]
        for value in args[1:]:
            if not (is_number(best) and is_number(value)):
                raise _runtime('no method matching %s(::%s, ::%s)' % (name, type_name(best), type_name(value)), ev.env)
            best = pick(best, value)
        if any(isinstance(v, float) for v in args):
            return float(best)
        return best
    return fn


def _length(ev, args):
    ev.arity('length', args, 1)
    value = args[0]
    if isinstance(value, (str, RangeValue)):
        return len(value)
    raise _runtime('no method matching length(::%s)' % type_name(value), ev.env)


BUILTINS = {
    'println': Builtin('println', _println),
    'print': Builtin('print', _print),
    'string': Builtin('string', _string),
    'abs': Builtin('abs', _abs),
    'min': Builtin('min', _extreme('min', min)),
    'max': Builtin('max', _extreme('max', max)),
    'length': Builtin('length', _length),
}


class Evaluator:
    '''
    Evaluates AST nodes against an Environment, writing output to a sink.

    :param env: environment the program runs in

    :param sink: OutputSink receiving println/print output

    :param handlers: extra {head: handler(evaluator, node)} entries for
        instrumented trees
    '''
    def __init__(self, env, sink, handlers=None):
        self.env = env
        self.sink = sink
        self.depth = 0
        self.handlers = dict(handlers) if handlers is not None else {}
        self.cancel = threading.Event()

    def check_cancel(self):
        if self.cancel.is_set():
            raise KeyboardInterrupt

    def arity(self, name, args, count):
        if len(args) != count:
            raise _runtime('%s takes %d argument(s), got %d' % (name, count, len(args)), self.env)

    def eval(self, node):
        if isinstance(node, Literal):
            return node.value
        if isinstance(node, Identifier):
            try:
                return self.env.lookup(node.name)
            except KeyError:
                raise _runtime('UndefVarError: `%s` not defined' % node.name, self.env) from None
        if isinstance(node, LineMarker):
            self.env.line = node.line
            self.env.file = node.file
            return nothing
        handler = self.handlers.get(node.head)
        if handler is not None:
            return handler(self, node)
        method = getattr(self, 'eval_' + node.head, None)
        if method is None:
            raise _runtime('cannot evaluate expression head %s' % node.head, self.env)
        return method(node)

    def eval_block(self, node):
        value = nothing
        for stmt in node.args:
            if isinstance(stmt, LineMarker):
                self.eval(stmt)
                continue
            result = self.eval(stmt)
            if isinstance(stmt, Compound) and stmt.head in TRANSPARENT_HEADS:
                continue
            value = result
        return value

    def condition(self, node, what):
        value = self.eval(node)
        if not isinstance(value, bool):
            raise _runtime('TypeError: non-boolean (%s) used in %s condition' % (type_name(value), what), self.env)
        return value

    def eval_if(self, node):
        if self.condition(node.args[0], 'if'):
            return self.eval(node.args[1])
        if len(node.args) == 3:
            return self.eval(node.args[2])
        return nothing

    def eval_while(self, node):
        cond, body = node.args
        while self.condition(cond, 'while'):
            self.check_cancel()
            self.env.push_scope()
            try:
                self.eval(body)
            finally:
                self.env.pop_scope()
        return nothing

    def iterate(self, node):
        iterable = self.eval(node)
        if isinstance(iterable, RangeValue):
            return iterable
        if isinstance(iterable, str):
            return list(iterable)
        raise _runtime('cannot iterate over %s' % type_name(iterable), self.env)

    def eval_for(self, node, after_iteration=None):
        header, body = node.args
        var = header.args[0].name
        for item in self.iterate(header.args[1]):
            self.check_cancel()
            self.env.push_scope()
            try:
                self.env.scopes[-1].vars[var] = item
                self.eval(body)
                if after_iteration is not None:
                    after_iteration()
            finally:
                self.env.pop_scope()
        return nothing

    def eval_range(self, node):
        lo = self.eval(node.args[0])
        hi = self.eval(node.args[1])
        for value in (lo, hi):
            if isinstance(value, bool) or not isinstance(value, int):
                raise _runtime('range endpoints must be integers, got %s' % type_name(value), self.env)
        return RangeValue(lo, hi)

    def eval_assign(self, node):
        target, expr = node.args
        value = self.eval(expr)
        self.env.assign(target.name, value)
        return value

    def eval_global(self, node):
        value = nothing
        for item in node.args:
            if isinstance(item, Identifier):
                self.env.declare_global(item.name)
            else:
                self.env.declare_global(item.args[0].name)
                value = self.eval(item)
        return value

    def eval_function(self, node):
        signature, body = node.args
        name = signature.args[0].name
        params = tuple(p.name for p in signature.args[1:])
        fn = UserFunction(name, params, body, list(self.env.scopes))
        self.env.bind_local(name, fn)
        return nothing

    def eval_call(self, node):
        callee = node.args[0]
        if isinstance(callee, Identifier) and callee.name in OPERATOR_NAMES:
            args = [self.eval(a) for a in node.args[1:]]
            return apply_operator(callee.name, args, self.env)
        fn = self.eval(callee)
        args = [self.eval(a) for a in node.args[1:]]
        if isinstance(fn, Builtin):
            return fn.fn(self, args)
        if isinstance(fn, UserFunction):
            return self.call_user(fn, args)
        raise _runtime('objects of type %s are not callable' % type_name(fn), self.env)

    def call_user(self, fn, args):
        if len(args) != len(fn.params):
            raise _runtime('no method matching %s with %d argument(s), expected %d'
                           % (fn.name, len(args), len(fn.params)), self.env)
        self.check_cancel()
        if self.depth >= MAX_CALL_DEPTH:
            raise _runtime('StackOverflowError: call depth exceeded %d' % MAX_CALL_DEPTH, self.env)
        saved_scopes = self.env.scopes
        saved_line, saved_file = self.env.line, self.env.file
        self.env.scopes = list(fn.closure) + [Scope(dict(zip(fn.params, args)))]
        self.depth += 1
        try:
            return self.eval(fn.body)
        except RecursionError:
            raise _runtime('StackOverflowError: call depth exceeded', self.env) from None
        finally:
            self.depth -= 1
            self.env.scopes = saved_scopes
            self.env.line, self.env.file = saved_line, saved_file


# Deep evaluation

EVAL_STACK_SIZE = 512 * 2 ** 20  # bytes of thread stack for deeply nested programs
FRAMES_PER_CALL = 40  # host frames budgeted for one nested MiniJL call
_deep_lock = threading.Lock()
_deep_state = threading.local()


def run_deep(evaluator, call):
    '''
    Run call() on a worker thread whose stack and recursion limit admit
    MAX_CALL_DEPTH nested MiniJL calls, returning its value.

    Exceptions raised by call() are re-raised in the caller. A keyboard
    interrupt in the caller cancels the evaluator and is re-raised once the
    worker stops.

    :param evaluator: Evaluator whose cancel event is set on interrupt

    :param call: function without arguments running the evaluation
    '''
    if getattr(_deep_state, 'active', False):
        return call()
    outcome = {}

    def target():
        _deep_state.active = True
        try:
            outcome['value'] = call()
        except BaseException as err:
            outcome['error'] = err

    with _deep_lock:
        old_size = threading.stack_size()
        try:
            threading.stack_size(EVAL_STACK_SIZE)
            worker = threading.Thread(target=target, name='minijl-eval', daemon=True)
        except ValueError as err:
            logger.debug('thread stack size refused (%s), evaluating inline', err)
            return call()
        old_limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old_limit, MAX_CALL_DEPTH * FRAMES_PER_CALL))
        try:
            try:
                worker.start()
            except RuntimeError as err:
                logger.debug('no evaluation thread (%s), evaluating inline', err)
                worker = None
            try:
                while worker is not None and worker.is_alive():
                    worker.join(0.1)
            except KeyboardInterrupt:
                evaluator.cancel.set()
                worker.join()
                raise
        finally:
            sys.setrecursionlimit(old_limit)
            threading.stack_size(old_size)
        if worker is None:
            return call()
    if 'error' in outcome:
        raise outcome['error']
    return outcome['value']


def eval_node(node, env, sink):
    ev = Evaluator(env, sink)
    return run_deep(ev, lambda: ev.eval(node))


@dataclass
class ProgramResult:
    value: object
    output: list
    error: MiniJLError | None = None

    @property
    def ok(self):
        return self.error is None


def run_program(source, file='REPL', env=None, sink=None, handlers=None):
    '''
    Parse and evaluate a program; errors are returned, never raised.

    :param source: program text

    :param file: label used in line markers and error messages

    :param env: Environment to evaluate in, a fresh one when None

    :param sink: OutputSink to write to, a capturing one when None

    :param handlers: extra evaluator handlers, see Evaluator
    '''
    if env is None:
        env = Environment()
    if sink is None:
        sink = OutputSink()
    value = nothing
    error = None
    try:
        ev = Evaluator(env, sink, handlers)
        value = run_deep(ev, lambda: ev.eval(parse_program(source, file)))
    except MiniJLError as err:
        if err.file is None:
            err.file = file
        error = err
        logger.debug('program %s failed: %s', file, err.render())
    except RecursionError:
        error = MiniJLRuntimeError('StackOverflowError: nesting too deep', env.line, file)
    sink.flush()
    return ProgramResult(value, list(sink.lines), error)
