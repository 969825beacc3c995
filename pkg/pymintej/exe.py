'''
Execution mode: run MiniJL files with output/error logging, and the
REPL-like session with a persistent environment.
'''
import os
import shlex
import logging
import datetime
import subprocess
from dataclasses import dataclass, field

from .seqbuffer import SequentialBuffer
from .minilang import MiniJLError
from .interp import Environment, OutputSink, run_program, show_value
from .editor import with_extension
from .console import mode_loop

logger = logging.getLogger(__name__)

PROMPT = 'exe>>'
SENTINEL = 'END'
OUTPUT_LOG = 'mintej_output.log'
ERROR_LOG = 'mintej_error.log'
RUNTIME_ENV = 'MINTEJ_EXTERNAL_RUNTIME'  # names an external interpreter binary
WHOOPS = 'whoops - No file or Program runs an issue to execute'
WATCH_PROMPT = 'Enter variables to watch (e.g. x, y), RETURN to skip: '

INFO_TABLE = [
    'e          :: Execution of julia file',
    'repl      :: REPL like session',
    'info      :: command information',
]


class ExternalRuntimeError(MiniJLError):
    kind = 'ExternalError'


class MissingFileError(MiniJLError):
    kind = 'SystemError'


class UnreadableFileError(MiniJLError):
    kind = 'SystemError'


@dataclass
class ExecRecord:
    path: str
    output: list = field(default_factory=list)
    error: object = None
    timestamp: datetime.datetime = None

    @property
    def ok(self):
        return self.error is None


def _now():
    return datetime.datetime.now()


def append_log(path, header, lines):
    '''
    Append one run's block to a log file with a single write.
    '''
    block = header + '\n' + ''.join(line + '\n' for line in lines)
    with open(path, 'a', encoding='utf-8') as f:
        f.write(block)
    logger.debug('appended %d lines to %s', len(lines), path)


def read_source(path):
    # undecodable or unreadable files raise UnreadableFileError
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return f.read()
    except UnicodeDecodeError as err:
        message = 'file is not valid UTF-8 (invalid byte at offset %d)' % err.start
        raise UnreadableFileError(message, None, path) from None
    except OSError as err:
        raise UnreadableFileError('could not read file: %s' % (err.strerror or err), None, path) from None


def run_external(runtime, path):
    '''
    Run a file with an external interpreter; returns (output lines, error or None).
    '''
    command = shlex.split(runtime) + [path]
    logger.debug('launching %s', command)
    try:
        done = subprocess.run(command, capture_output=True, text=True)
    except OSError as err:
        return [], ExternalRuntimeError(str(err), None, path)
    output = done.stdout.splitlines()
    if done.returncode != 0:
        message = done.stderr.strip() or 'exit status %d' % done.returncode
        return output, ExternalRuntimeError(message, None, path)
    return output, None


def execute_file(path, echo=None, workdir=None, clock=_now, environ=None):
    '''
    Run a MiniJL file in a fresh environment and log the run.

    :param path: file to run

    :param echo: callable receiving each output line as it is produced

    :param workdir: directory holding the log files, the file's directory when None

    :param clock: callable returning the run timestamp

    :param environ: mapping searched for the external runtime variable
    '''
    environ = os.environ if environ is None else environ
    workdir = workdir or os.path.dirname(os.path.abspath(path))
    record = ExecRecord(path, timestamp=clock())
    runtime = environ.get(RUNTIME_ENV)
    if not os.path.isfile(path):
        record.error = MissingFileError('could not open file %s' % path, None, path)
    elif runtime:
        record.output, record.error = run_external(runtime, path)
        if echo is not None:
            for line in record.output:
                echo(line)
    else:
        try:
            source = read_source(path)
        except UnreadableFileError as err:
            record.error = err
        else:
            result = run_program(source, os.path.abspath(path), sink=OutputSink(echo))
            record.output = result.output
            record.error = result.error
    header = '=== %s %s ===' % (record.timestamp.isoformat(sep=' ', timespec='seconds'), path)
    append_log(os.path.join(workdir, OUTPUT_LOG), header, record.output)
    if record.error is not None:
        append_log(os.path.join(workdir, ERROR_LOG), header, [record.error.render()])
    return record


def watch_report(env, names):
    out = []
    for name in names:
        try:
            out.append('%s = %s' % (name, show_value(env.lookup(name))))
        except KeyError:
            out.append('%s is undefined' % name)
    return out


def parse_watch_names(text):
    return [name for name in text.replace(',', ' ').split() if name]


def cmd_execute(session):
    io = session.io
    io.print('Enter the file name to execute')
    name = io.read().strip()
    if not name:
        return
    path = session.resolve(with_extension(name))
    record = execute_file(path, echo=io.print, workdir=session.workdir)
    if record.error is not None:
        io.print(WHOOPS)
        io.print('caught exception:%s' % record.error.render())


def read_typed_program(io):
    buffer = SequentialBuffer()
    io.print("Enter your code. Type '%s' on a new line to finish:" % SENTINEL)
    while True:
        line = io.read(PROMPT)
        if line.strip() == SENTINEL:
            break
        buffer.Write(line)
    return '\n'.join(buffer.Drain())


def repl_session(session):
    '''
    Read a program from a file ("jl") or typed lines, evaluate it in the
    session's REPL environment and offer a watch on its variables.
    '''
    io = session.io
    io.print('Type jl to read file')
    io.print('OR')
    io.print('Hit return to work in REPL like session')
    choice = io.read().strip()
    label = 'REPL'
    if choice == 'jl':
        io.print('Enter the file name')
        name = io.read().strip()
        path = session.resolve(with_extension(name))
        if not os.path.isfile(path):
            io.print('Error: No such file: %s' % name)
            return
        try:
            source = read_source(path)
        except UnreadableFileError as err:
            io.print(err.render())
            return
        label = os.path.abspath(path)
    else:
        source = read_typed_program(io)
    if session.repl_env is None:
        session.repl_env = Environment()
    result = run_program(source, label, env=session.repl_env, sink=OutputSink(io.print))
    if result.error is not None:
        io.print(result.error.render())
        return
    io.print('Result: %s' % show_value(result.value))
    names = parse_watch_names(io.read(WATCH_PROMPT))
    for line in watch_report(session.repl_env, names):
        io.print(line)


def cmd_info(session):
    for row in INFO_TABLE:
        session.io.print(row)


COMMANDS = {
    'info': cmd_info,
    'e': cmd_execute,
    'repl': repl_session,
}


def exe_loop(session):
    mode_loop(session, PROMPT, COMMANDS, 'exe')
