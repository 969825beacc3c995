import os
import shutil
import datetime

import pytest

from pymintej.exe import *
from pymintej.interp import Environment, run_program

from conftest import CMP_2, FIRST_CODE, REPL_LOOP, source, transcript_after

STAMP = datetime.datetime(2024, 1, 2, 3, 4, 5)


def clock():
    return STAMP


def write(root, name, data):
    path = os.path.join(str(root), name)
    with open(path, 'wb') as f:
        f.write(data if isinstance(data, bytes) else data.encode('utf-8'))
    return path


def read_text(path):
    with open(path, encoding='utf-8') as f:
        return f.read()


def run_exe(session):
    exe_loop(session)
    return session


def test_execute_file_logs(workdir):
    path = write(workdir, 'myfirstcode.jl', source(FIRST_CODE))
    seen = []
    record = execute_file(path, echo=seen.append, workdir=str(workdir), clock=clock, environ={})
    expected = ['The number is:%d' % i for i in range(1, 7)]
    assert record.ok
    assert record.output == seen == expected
    log = read_text(os.path.join(str(workdir), OUTPUT_LOG))
    assert log == '=== 2024-01-02 03:04:05 %s ===\n' % path + source(expected)
    assert not os.path.exists(os.path.join(str(workdir), ERROR_LOG))
    execute_file(path, workdir=str(workdir), clock=clock, environ={})
    assert read_text(os.path.join(str(workdir), OUTPUT_LOG)).count('===\n') == 2


def test_execute_parse_error(workdir):
    path = write(workdir, 'test_cmp_2.jl', CMP_2)
    record = execute_file(path, workdir=str(workdir), clock=clock, environ={})
    assert record.error.kind == 'ParseError'
    assert record.error.line == 2
    errors = read_text(os.path.join(str(workdir), ERROR_LOG)).splitlines()
    assert errors[1] == 'ParseError: %s:2: unterminated string literal' % os.path.abspath(path)


def test_execute_missing_file(workdir):
    path = os.path.join(str(workdir), 'absent.jl')
    record = execute_file(path, workdir=str(workdir), clock=clock, environ={})
    assert isinstance(record.error, MissingFileError)
    assert record.error.render().startswith('SystemError: ')


def test_execute_undecodable_file(workdir):
    path = write(workdir, 'latin.jl', b'println("\xff")\n')
    record = execute_file(path, workdir=str(workdir), clock=clock, environ={})
    assert isinstance(record.error, UnreadableFileError)
    assert record.error.render().startswith('SystemError: %s: file is not valid UTF-8' % path)
    assert read_text(os.path.join(str(workdir), OUTPUT_LOG)) == '=== 2024-01-02 03:04:05 %s ===\n' % path
    errors = read_text(os.path.join(str(workdir), ERROR_LOG)).splitlines()
    assert errors == ['=== 2024-01-02 03:04:05 %s ===' % path, record.error.render()]


def test_execute_non_ascii_name(workdir):
    path = write(workdir, 'cafe.jl', 'café = 1\nprintln(café)\n')
    record = execute_file(path, workdir=str(workdir), clock=clock, environ={})
    assert record.error.kind == 'ParseError'
    assert record.error.render() == "ParseError: %s:1: unexpected character 'é'" % os.path.abspath(path)
    assert os.path.exists(os.path.join(str(workdir), ERROR_LOG))


def test_e_command_undecodable(make_session, workdir):
    write(workdir, 'latin.jl', b'x = "\xe9"\n')
    session = run_exe(make_session(['e', 'latin', 'back']))
    after = transcript_after(session, 'latin')
    assert after[0] == WHOOPS
    assert after[1].startswith('caught exception:SystemError: ')
    assert 'not valid UTF-8' in after[1]


def test_e_command(make_session, workdir):
    write(workdir, 'myfirstcode.jl', source(FIRST_CODE))
    write(workdir, 'test_cmp_2.jl', CMP_2)
    session = run_exe(make_session(['e', 'myfirstcode', 'e', 'test_cmp_2.jl', 'e', 'nothere', 'back']))
    after = transcript_after(session, 'myfirstcode')
    assert after[:6] == ['The number is:%d' % i for i in range(1, 7)]
    after = transcript_after(session, 'test_cmp_2.jl')
    assert after[0] == WHOOPS
    assert after[1] == 'caught exception:ParseError: %s:2: unterminated string literal' \
        % os.path.join(session.workdir, 'test_cmp_2.jl')
    after = transcript_after(session, 'nothere')
    assert after[0] == WHOOPS
    assert after[1].startswith('caught exception:SystemError:')


@pytest.mark.skipif(shutil.which('cat') is None or shutil.which('false') is None,
                    reason='needs cat and false')
def test_external_runtime(workdir):
    path = write(workdir, 'ext.jl', 'line one\nline two\n')
    record = execute_file(path, workdir=str(workdir), clock=clock, environ={RUNTIME_ENV: 'cat'})
    assert record.ok
    assert record.output == ['line one', 'line two']
    record = execute_file(path, workdir=str(workdir), clock=clock, environ={RUNTIME_ENV: 'false'})
    assert record.error.kind == 'ExternalError'
    assert record.error.message == 'exit status 1'


def test_external_runtime_missing(workdir):
    path = write(workdir, 'ext.jl', 'x = 1\n')
    record = execute_file(path, workdir=str(workdir), clock=clock,
                          environ={RUNTIME_ENV: 'no-such-runtime-binary'})
    assert isinstance(record.error, ExternalRuntimeError)


def test_repl_typed(make_session):
    session = run_exe(make_session(['repl', ''] + REPL_LOOP + ['END', '', 'back']))
    after = transcript_after(session, 'exe>>repl')
    assert after[:5] == ['Type jl to read file', 'OR', 'Hit return to work in REPL like session', '',
                         "Enter your code. Type 'END' on a new line to finish:"]
    assert after[5:9] == ['exe>>' + line for line in REPL_LOOP + ['END']]
    assert after[9:13] == ['1:hello Julia Programming', '2:hello Julia Programming',
                           '3:hello Julia Programming', 'Result: nothing']
    assert after[13] == WATCH_PROMPT


def test_repl_persists(make_session):
    script = ['repl', '', 'x = 5', 'END', '',
              'repl', '', 'x + 1', 'END', 'x, q',
              'back']
    session = run_exe(make_session(script))
    transcript = session.io.transcript
    assert 'Result: 5' in transcript
    after = transcript_after(session, 'exe>>END')
    assert after[:3] == ['Result: 6', WATCH_PROMPT + 'x, q', 'x = 5']
    assert after[3] == 'q is undefined'


def test_repl_from_file(make_session, workdir):
    write(workdir, 'myfirstcode.jl', source(FIRST_CODE))
    session = run_exe(make_session(['repl', 'jl', 'myfirstcode', 'x', 'repl', 'jl', 'nope', 'back']))
    transcript = session.io.transcript
    assert 'The number is:6' in transcript
    assert 'Result: nothing' in transcript
    assert transcript_after(session, WATCH_PROMPT + 'x')[0] == 'x = 6'
    assert 'Error: No such file: nope' in transcript


def test_repl_error(make_session):
    session = run_exe(make_session(['repl', '', 'y = undefined_thing', 'END', 'back']))
    after = transcript_after(session, 'exe>>END')
    assert after[0] == 'RuntimeError: REPL:1: UndefVarError: `undefined_thing` not defined'


def test_watch_report():
    env = Environment()
    run_program('s = "hi"\nn = 2.0', env=env)
    assert watch_report(env, parse_watch_names('s, n  missing')) == ['s = "hi"', 'n = 2.0', 'missing is undefined']
    assert parse_watch_names('') == []


def test_info(make_session):
    session = run_exe(make_session(['info', 'back']))
    assert transcript_after(session, 'exe>>info')[:3] == INFO_TABLE
