import os
import re

from pymintej.debugger import *
from pymintej.minilang import parse_program, parse_with_ends
from pymintej.interp import run_program, Environment

from conftest import BREAK_PROGRAM, FIRST_CODE, STEP_PROGRAM, source, transcript_after


def dumps(line):
    out = []
    for n in (1, 2, 3):
        out += ['Breakpoint hit at line %d' % line, 'Variables in scope:', '  k = %d' % n, '  x = %d' % n, '']
    return out


def run_db(session):
    db_loop(session)
    return session


def test_interactive_breakpoint(make_session, workdir):
    script = ['bp', 'ibp'] + BREAK_PROGRAM + ['END', '5', '', '', '', 'back']
    session = run_db(make_session(script))
    after = transcript_after(session, 'db>>END')
    assert after[:7] == ['%d: %s' % (n, text) for n, text in enumerate(BREAK_PROGRAM, start=1)]
    assert after[7:9] == ['Add the break point', '5']
    assert after[9:24] == dumps(5)
    assert after[24] == 'db>>back'
    with open(os.path.join(str(workdir), DEBUG_COPY)) as f:
        assert f.read() == source(BREAK_PROGRAM)


def test_file_breakpoint(make_session, workdir):
    with open(os.path.join(str(workdir), 'test_my.jl'), 'w') as f:
        f.write('\n' + source(BREAK_PROGRAM))
    session = run_db(make_session(['bp', '', 'test_my', '6', '', '', '', 'back']))
    after = transcript_after(session, 'db>>bp')
    assert after[:7] == ['Type ibp for interactive breakpoint', 'Hit RETURN for adding breakpoint in julia file', '',
                         'Enter the file name', 'test_my', 'Add the break point', '6']
    assert after[7:22] == dumps(6)


def test_breakpoint_before_statement(make_session):
    session = make_session([''])
    run_with_breakpoint(session, 'x = 1\ny = 2\nprintln(y)\n', 2)
    assert session.io.transcript == ['Breakpoint hit at line 2', 'Variables in scope:', '  x = 1', '', '2']


def test_breakpoint_past_end(make_session):
    session = make_session()
    env = run_with_breakpoint(session, source(BREAK_PROGRAM), 99)
    assert session.io.transcript == ['Warning: no statement at line 99, running without breakpoint']
    assert env.snapshot() == []


def test_insert_breakpoint_lines():
    tree, ends = parse_with_ends(source(BREAK_PROGRAM))
    for line in range(1, 8):
        new_tree, placed = insert_breakpoint(tree, ends, line)
        assert placed
        assert erase(new_tree) == tree
    assert not insert_breakpoint(tree, ends, 8)[1]


def test_stepping(make_session):
    script = ['istepin'] + STEP_PROGRAM + ['END', 'list_variables = [:x]', '', '', 'back']
    session = run_db(make_session(script))
    after = transcript_after(session, 'db>>END')
    assert after[:5] == ['%d: %s' % (n, text) for n, text in enumerate(STEP_PROGRAM, start=1)]
    assert after[5] == 'Line at 2: global x = 0'
    assert after[6] == WATCH_PROMPT + 'list_variables = [:x]'
    assert after[7] == 'Entering for loop at depth 2: for k = 1:2'
    assert 'Line at 3: x = x + 1' in after
    watched = [line for line in after if re.match(r'^  x = \d+$', line)]
    assert watched == ['  x = 0', '  x = 1', '  x = 1', '  x = 1', '  x = 2', '  x = 2']
    assert session.watch == WatchList(['x'])


def test_watch_persists(make_session):
    session = make_session(['x = 5', 'END', '', 'y = x', 'END', ''])
    session.watch = WatchList(['x'])
    run_stepped(session, read_typed_source(session.io))
    assert '  x = 5' in session.io.transcript


def test_step_transform_erases():
    for program in (FIRST_CODE, BREAK_PROGRAM, STEP_PROGRAM):
        tree = parse_program(source(program))
        plan = make_plan(tree, 'none')
        assert erase(plan.instrumented) == tree
        assert plan.depths


def test_step_depths():
    tree = parse_program(source(STEP_PROGRAM))
    instrumented = step_transform(tree)
    first, loop = instrumented.args[1], instrumented.args[3]
    assert first.head == STEP and first.args[0].value == 2 and first.args[2].value is True
    assert loop.head == LOOP and loop.args[0].value == 2
    body = loop.args[1].args[1]
    assert [s.args[0].value for s in body.args if is_compound(s, STEP)] == [3, 3]
    assert all(s.args[2].value is False for s in body.args if is_compound(s, STEP))


def test_stepping_preserves_semantics(make_session):
    for program in (FIRST_CODE, STEP_PROGRAM, BREAK_PROGRAM):
        text = source(program)
        plain = Environment()
        run_program(text, env=plain)
        session = make_session([''] * 50)
        env = run_stepped(session, text)
        assert env.snapshot() == plain.snapshot()


def test_step_parse_error(make_session):
    session = make_session()
    assert run_stepped(session, 'println("a"\n') is None
    assert session.io.transcript[0].startswith('ParseError: ')


def test_parse_watch_assignment():
    current = WatchList(['a'])
    assert parse_watch_assignment('list_variables = [:x, :y]', current) == WatchList(['x', 'y'])
    assert parse_watch_assignment('list_variables=[:k]', current) == WatchList(['k'])
    assert parse_watch_assignment('list_variables = []', current) == WatchList([])
    assert parse_watch_assignment('', current) is current
    notes = []
    assert parse_watch_assignment('x, y', current, notes.append) is current
    assert notes == ['Info: expected list_variables = [:x, :y], watch list unchanged']


def test_ask_breakpoint(make_session):
    session = make_session(['abc', '0', '3'])
    assert ask_breakpoint(session.io) == 3
    assert session.io.transcript.count("Error: Expected a line number, got 'abc'") == 1


def test_missing_file_and_unknown(make_session):
    session = run_db(make_session(['stepin', '', 'absent', 'stepin', 'x', 'info', 'back']))
    transcript = session.io.transcript
    assert 'Error: No such file: absent' in transcript
    assert transcript_after(session, 'x')[0] == 'Unknown command'
    assert transcript_after(session, 'db>>info')[:len(INFO_TABLE)] == INFO_TABLE


def test_undecodable_file(make_session, workdir):
    with open(os.path.join(str(workdir), 'latin.jl'), 'wb') as f:
        f.write(b'x = "\xff"\n')
    session = run_db(make_session(['stepin', '', 'latin', 'back']))
    after = transcript_after(session, 'latin')
    assert after[0].startswith('SystemError: ')
    assert 'not valid UTF-8' in after[0]
    assert after[1] == 'db>>back'


BRANCH_PROGRAM = [
    'x = 0',
    'for k = 1:3',
    'if k == 2',
    'global x = x + 10',
    'else',
    'global x = x + 1',
    'end',
    'end',
]


def test_breakpoint_on_if_end_fires_for_every_branch(make_session):
    session = make_session([''] * 3)
    env = run_with_breakpoint(session, source(BRANCH_PROGRAM), 7)
    transcript = session.io.transcript
    assert transcript.count('Breakpoint hit at line 7') == 3
    assert [line for line in transcript if line.startswith('  x = ')] == ['  x = 1', '  x = 11', '  x = 12']
    assert env.snapshot() == [('x', 12)]


def test_breakpoint_on_elseif_end_without_else(make_session):
    program = ['x = 0', 'for k = 1:3', 'if k == 1', 'global x = 1', 'elseif k == 2', 'global x = 2', 'end', 'end']
    tree, ends = parse_with_ends(source(program))
    new_tree, placed = insert_breakpoint(tree, ends, 7)
    assert placed and erase(new_tree) == tree
    session = make_session([''] * 3)
    run_with_breakpoint(session, source(program), 7)
    assert session.io.transcript.count('Breakpoint hit at line 7') == 3
