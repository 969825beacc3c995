'''
Debug mode: step instrumentation of MiniJL trees with pauses and watch
lists, and line breakpoints with scope dumps.
'''
import os
import re
import logging
from dataclasses import dataclass, field

from .minilang import (Compound, Literal, LineMarker, MiniJLError, is_compound,
                       parse_program, parse_with_ends, unparse)
from .interp import (Environment, Evaluator, MiniJLRuntimeError, OutputSink, env_snapshot, nothing,
                     run_deep, show_value)
from .editor import with_extension
from .exe import UnreadableFileError, read_source
from .console import CLEAR_SCREEN, mode_loop

logger = logging.getLogger(__name__)

PROMPT = 'db>>'
SENTINEL = 'END'
DEBUG_COPY = 'output_debug.jl'
WATCH_PROMPT = 'Enter variable assignment (e.g., list_variables = [:x, :y]): '

STEP = 'debug-step'
LOOP = 'debug-loop'
BREAK = 'debug-break'

INFO_TABLE = [
    'db          :: debug mode - step and break',
    'bp          :: Break point mode',
    'ibp         :: interactive break',
    '            :: file mode break',
    'stepin     :: Run the code step wise',
    '            :: Run file code step wise',
    'istepin    :: interactive step',
    'clear      :: clears the console',
    'back       :: Returns to MinTEJ',
]

_watch_pattern = re.compile(r'^\s*list_variables\s*=\s*\[\s*((?::[A-Za-z_]\w*\s*(?:,\s*:[A-Za-z_]\w*\s*)*)?)\]\s*$')


@dataclass
class WatchList:
    names: list = field(default_factory=list)


def parse_watch_assignment(text, current, notify=None):
    '''
    Parse "list_variables = [:a, :b]" into a new WatchList. Empty input keeps
    the current list, anything else is reported through notify.
    '''
    if not text or not text.strip():
        return current
    match = _watch_pattern.match(text)
    if match is None:
        if notify is not None:
            notify('Info: expected list_variables = [:x, :y], watch list unchanged')
        return current
    names = [item.strip().lstrip(':') for item in match.group(1).split(',') if item.strip()]
    return WatchList(names)


# Step transform

@dataclass
class StepPlan:
    instrumented: Compound
    source_file: str
    depths: dict = field(default_factory=dict)  # id(wrapper) -> nesting depth


def step_transform(node, depth=1, pause=True, depths=None):
    '''
    Instrument a tree for stepping. Statements become debug-step wrappers
    that echo themselves before evaluation; for loops become debug-loop
    wrappers that pause after every iteration.

    :param node: tree to instrument

    :param depth: nesting depth of node, 1 for the program block

    :param pause: whether statement wrappers pause after evaluation
    '''
    if isinstance(node, LineMarker):
        return node
    if is_compound(node, 'block'):
        return Compound('block', tuple(step_transform(child, depth + 1, pause, depths) for child in node.args))
    if is_compound(node, 'if'):
        args = [_leaf(node.args[0], depth, False, depths)]
        for branch in node.args[1:]:
            args.append(step_transform(branch, depth, pause, depths))
        return Compound('if', tuple(args))
    if is_compound(node, 'while'):
        cond, body = node.args
        return Compound('while', (_leaf(cond, depth, False, depths), step_transform(body, depth, pause, depths)))
    if is_compound(node, 'for'):
        header, body = node.args
        loop = Compound('for', (header, step_transform(body, depth, False, depths)))
        wrapped = Compound(LOOP, (Literal(depth), loop))
        if depths is not None:
            depths[id(wrapped)] = depth
        return wrapped
    if is_compound(node, 'function'):
        signature, body = node.args
        return Compound('function', (signature, step_transform(body, depth, pause, depths)))
    return _leaf(node, depth, pause, depths)


def _leaf(node, depth, pause, depths):
    wrapped = Compound(STEP, (Literal(depth), node, Literal(pause)))
    if depths is not None:
        depths[id(wrapped)] = depth
    return wrapped


def erase(node):
    '''
    Remove every debug wrapper and breakpoint from a tree.
    '''
    if isinstance(node, Compound):
        if node.head in (STEP, LOOP):
            return erase(node.args[1])
        args = tuple(erase(a) for a in node.args if not is_compound(a, BREAK))
        return Compound(node.head, args)
    return node


def make_plan(tree, source_file):
    depths = {}
    return StepPlan(step_transform(tree, 1, True, depths), source_file, depths)


# Breakpoints

def _append_to(node, target, extra):
    if node is target:
        return Compound(node.head, node.args + (extra,))
    if isinstance(node, Compound):
        return Compound(node.head, tuple(_append_to(a, target, extra) for a in node.args))
    return node


def _follow_with(node, target, extra):
    if not isinstance(node, Compound):
        return node
    args = []
    for arg in node.args:
        args.append(_follow_with(arg, target, extra))
        if arg is target and node.head == 'block':
            args.append(extra)
    return Compound(node.head, tuple(args))


def _insert_after_marker(node, line, extra, placed):
    if not isinstance(node, Compound):
        return node
    args = []
    for arg in node.args:
        args.append(_insert_after_marker(arg, line, extra, placed))
        if not placed and isinstance(arg, LineMarker) and arg.line == line and node.head == 'block':
            args.append(extra)
            placed.append(line)
    return Compound(node.head, tuple(args))


def insert_breakpoint(tree, end_lines, line):
    '''
    Add a breakpoint to a parsed program.

    A line holding a statement breaks before that statement. A line holding
    the `end` of a loop or function body breaks after the last statement of
    that body; the `end` of an if statement breaks once the statement has
    run, whichever branch was taken.

    :return: (tree, placed) where placed tells whether the line resolved
    '''
    extra = Compound(BREAK, (Literal(line),))
    if line in end_lines:
        target = end_lines[line]
        if is_compound(target, 'if'):
            return _follow_with(tree, target, extra), True
        return _append_to(tree, target, extra), True
    placed = []
    new_tree = _insert_after_marker(tree, line, extra, placed)
    return new_tree, bool(placed)


# Running

def write_debug_copy(workdir, source):
    path = os.path.join(workdir, DEBUG_COPY)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(source)
    return os.path.abspath(path)


def _print_watch(io, env, watch):
    for name in watch.names:
        if env.is_defined(name):
            io.print('  %s = %s' % (name, show_value(env.lookup(name))))


class Stepper:
    '''
    Evaluator handlers for instrumented trees, reading pauses from the session io.
    '''
    def __init__(self, session):
        self.session = session
        self.io = session.io

    def pause(self):
        answer = self.io.read(WATCH_PROMPT)
        self.session.watch = parse_watch_assignment(answer, self.session.watch, self.io.print)

    def step(self, ev, node):
        depth, inner, pause = node.args
        self.io.print('Line at %d: %s' % (depth.value, unparse(inner)))
        value = ev.eval(inner)
        _print_watch(self.io, ev.env, self.session.watch)
        if pause.value:
            self.pause()
        return value

    def loop(self, ev, node):
        depth, loop = node.args
        self.io.print('Entering for loop at depth %d: %s' % (depth.value, unparse(erase(loop))))

        def after_iteration():
            self.pause()
            _print_watch(self.io, ev.env, self.session.watch)

        ev.eval_for(loop, after_iteration)
        return nothing

    def breakpoint(self, ev, node):
        self.io.print('Breakpoint hit at line %d' % node.args[0].value)
        self.io.print('Variables in scope:')
        for name, value in env_snapshot(ev.env):
            self.io.print('  %s = %s' % (name, show_value(value)))
        self.io.read()
        return nothing

    def handlers(self):
        return {STEP: self.step, LOOP: self.loop, BREAK: self.breakpoint}


def _evaluate(session, tree):
    env = Environment()
    ev = Evaluator(env, OutputSink(session.io.print), Stepper(session).handlers())
    try:
        run_deep(ev, lambda: ev.eval(tree))
    except MiniJLError as err:
        session.io.print(err.render())
    except RecursionError:
        session.io.print(MiniJLRuntimeError('StackOverflowError: nesting too deep', env.line, env.file).render())
    ev.sink.flush()
    return env


def run_stepped(session, source):
    '''
    Step through a program: every statement is echoed, watched variables are
    printed after it, and the run pauses for a watch-list update.
    '''
    path = write_debug_copy(session.workdir, source)
    try:
        tree = parse_program(source, path)
    except MiniJLError as err:
        session.io.print(err.render())
        return None
    plan = make_plan(tree, path)
    return _evaluate(session, plan.instrumented)


def run_with_breakpoint(session, source, line):
    path = write_debug_copy(session.workdir, source)
    try:
        tree, end_lines = parse_with_ends(source, path)
    except MiniJLError as err:
        session.io.print(err.render())
        return None
    tree, placed = insert_breakpoint(tree, end_lines, line)
    if not placed:
        session.io.print('Warning: no statement at line %d, running without breakpoint' % line)
    return _evaluate(session, tree)


# Mode commands

def read_typed_source(io):
    lines = []
    while True:
        line = io.read(PROMPT)
        if line.strip() == SENTINEL:
            break
        lines.append(line)
    for n, text in enumerate(lines, start=1):
        io.print('%d: %s' % (n, text))
    return '\n'.join(lines) + ('\n' if lines else '')


def read_file_source(session):
    io = session.io
    io.print('Enter the file name')
    name = io.read().strip()
    if not name:
        return None
    path = session.resolve(with_extension(name))
    if not os.path.isfile(path):
        io.print('Error: No such file: %s' % name)
        return None
    try:
        return read_source(path)
    except UnreadableFileError as err:
        io.print(err.render())
        return None


def ask_breakpoint(io):
    io.print('Add the break point')
    while True:
        answer = io.read().strip()
        if not answer:
            return None
        if answer.isdigit() and int(answer) >= 1:
            return int(answer)
        io.print('Error: Expected a line number, got %r' % answer)


def _breakpoint_run(session, source):
    if source is None:
        return
    line = ask_breakpoint(session.io)
    if line is not None:
        run_with_breakpoint(session, source, line)


def cmd_ibp(session):
    _breakpoint_run(session, read_typed_source(session.io))


def cmd_bp(session):
    io = session.io
    io.print('Type ibp for interactive breakpoint')
    io.print('Hit RETURN for adding breakpoint in julia file')
    choice = io.read().strip()
    if choice == 'ibp':
        cmd_ibp(session)
    elif not choice:
        _breakpoint_run(session, read_file_source(session))
    else:
        io.print('Unknown command')


def cmd_istepin(session):
    run_stepped(session, read_typed_source(session.io))


def cmd_stepin(session):
    io = session.io
    io.print('Type istepin for interactive stepping')
    io.print('Hit RETURN for adding interactive stepping in julia file')
    choice = io.read().strip()
    if choice == 'istepin':
        cmd_istepin(session)
    elif not choice:
        source = read_file_source(session)
        if source is not None:
            run_stepped(session, source)
    else:
        io.print('Unknown command')


def cmd_info(session):
    for row in INFO_TABLE:
        session.io.print(row)


def cmd_clear(session):
    session.io.print(CLEAR_SCREEN)


COMMANDS = {
    'info': cmd_info,
    'bp': cmd_bp,
    'ibp': cmd_ibp,
    'stepin': cmd_stepin,
    'istepin': cmd_istepin,
    'clear': cmd_clear,
}


def db_loop(session):
    mode_loop(session, PROMPT, COMMANDS, 'db')
