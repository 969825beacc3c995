import pytest

from pymintej.console import IoScript
from pymintej.shell import Session

# Programs typed or stored in the worked sessions
FIRST_CODE = [
    'global x = 0',
    'while x <= 5',
    '    global x = x + 1',
    '    println("The number is:",x)',
    'end',
]

REPL_LOOP = [
    'for k = 1:3',
    'println(k, ":hello Julia Programming")',
    'end',
]

BREAK_PROGRAM = [
    'function mi()',
    'x = 0',
    'for k = 1:3',
    'x = x+1',
    'end',
    'end',
    'mi()',
]

STEP_PROGRAM = [
    'global x = 0',
    'for k = 1:2',
    'global x',
    'x = x + 1',
    'end',
]

CMP_1 = b'\nprintln("Hello world")\n'
CMP_2 = b'\r\nprintln("hello Julia Programming)\r\n'


def source(lines):
    return '\n'.join(lines) + '\n'


@pytest.fixture
def workdir(tmp_path):
    return tmp_path


@pytest.fixture
def make_session(tmp_path):
    def factory(lines=()):
        return Session(IoScript(list(lines)), workdir=str(tmp_path))
    return factory


def transcript_after(session, marker):
    # Transcript lines following the last occurrence of marker
    lines = session.io.transcript
    idx = len(lines) - 1 - lines[::-1].index(marker)
    return lines[idx + 1:]
