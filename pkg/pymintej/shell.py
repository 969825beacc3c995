'''
Central controller: banner, top-level mode dispatch, scripted replay and
the process benchmark sampler.
'''
import os
import sys
import csv
import time
import logging
import argparse

import psutil

from .console import *
from .editor import EditorSession, edm_loop
from .fms import fms_loop
from .exe import exe_loop
from .debugger import WatchList, db_loop
from .syntaxdb import SyntaxDatabase, SyntaxDatabaseError, syntax_loop
from .miscellaneous import moving_average, plot_benchmark

logger = logging.getLogger(__name__)

PROMPT = 'MinTEJ>>'
QUIT = 'exit'
WORKDIR_PLACEHOLDER = '<WORKDIR>'
BENCH_COLUMNS = ('timestamp', 'rss', 'cpu', 'rss_ma', 'cpu_ma')

BANNER = [
    '+++++',
    'Welcome to Minimalistic Julia Terminal Editor Version 00',
    '+++++',
]
MODE_TABLE = [
    'Enter in file management system >>fms',
    'Enter in Editor mode >>edm',
    'Enter in Execution mode >>exe',
    'Enter in debug mode >>db',
    'Enter in syntax mode >>syntax',
]

MODES = {
    'fms': fms_loop,
    'edm': edm_loop,
    'exe': exe_loop,
    'db': db_loop,
    'syntax': syntax_loop,
    'syntx': syntax_loop,
}


class Session:
    '''
    State shared by all modes.

    :param io: prompt/read/print handle, the terminal when None

    :param workdir: working directory, the process directory when None

    :param syntax: SyntaxDatabase, the stock database is loaded when None
    '''
    def __init__(self, io=None, workdir=None, syntax=None):
        self.io = io if io is not None else ConsoleIo()
        self.workdir = os.path.abspath(workdir or os.getcwd())
        self.mode = 'main'
        self.editor = EditorSession()
        self.repl_env = None
        self.watch = WatchList()
        self.transitions = []
        self.syntax = syntax if syntax is not None else open_syntax_db(None, self.io)

    def __repr__(self):
        return 'Session(mode=%s, workdir=%s)' % (self.mode, self.workdir)

    def resolve(self, path):
        path = os.path.expanduser(path)
        if os.path.isabs(path):
            return path
        return os.path.join(self.workdir, path)

    def enter(self, mode):
        self.transitions.append((self.mode, mode))
        logger.debug('mode %s -> %s', self.mode, mode)
        self.mode = mode

    def leave(self, mode):
        self.transitions.append((mode, 'main'))
        logger.debug('mode %s -> main', mode)
        self.mode = 'main'


def open_syntax_db(path, io):
    db = SyntaxDatabase(path)
    try:
        db.load()
    except (OSError, SyntaxDatabaseError) as err:
        io.print('Error: %s' % err)
    return db


def print_modes(io):
    for line in MODE_TABLE:
        io.print(line)


def main_loop(session):
    '''
    Print the banner and dispatch mode keywords until exit or end of input.
    '''
    io = session.io
    for line in BANNER:
        io.print(line)
    print_modes(io)
    while True:
        try:
            line = io.read(PROMPT)
        except (EOFError, KeyboardInterrupt):
            return 0
        command = line.strip()
        if not command:
            continue
        if command == QUIT:
            return 0
        if command == 'info':
            print_modes(io)
            continue
        handler = MODES.get(command)
        if handler is None:
            io.print('Unknown command')
            continue
        try:
            handler(session)
        except EOFError:
            return 0
        except ScriptExhausted:
            raise
        except KeyboardInterrupt:
            continue
        except Exception as err:
            logger.debug('mode %s failed', command, exc_info=True)
            io.print('Error: %s' % err)


def replay(script, workdir=None, syntax=None, session=None):
    '''
    Run the main loop on scripted input and return the transcript, with the
    working directory replaced by <WORKDIR>.

    :param script: IoScript or list of input lines
    '''
    io = script if isinstance(script, IoScript) else IoScript(script)
    if session is None:
        session = Session(io, workdir, syntax)
    else:
        session.io = io
    root = session.workdir
    try:
        main_loop(session)
    except ScriptExhausted:
        io.transcript.append(EXHAUSTED_MARKER)
    return io.text().replace(root, WORKDIR_PLACEHOLDER)


# Benchmark

def bench_sample(pid, interval=5., window=4, count=None, duration=None,
                 sleep=time.sleep, clock=time.time, process=None, on_row=None):
    '''
    Sample resident memory and CPU usage of a process.

    :param pid: process id to observe

    :param interval: seconds between samples

    :param window: moving average window, in samples

    :param count: number of samples, unlimited when None

    :param duration: seconds to sample for, unlimited when None

    :param on_row: callable receiving each row as soon as it is sampled

    :return: list of (timestamp, rss, cpu, rss_ma, cpu_ma) rows, moving
        averages are None for the first window-1 rows

    Sampling stops early when the process exits or on a keyboard interrupt,
    the rows collected so far are returned.
    '''
    proc = process if process is not None else psutil.Process(pid)
    rows = []
    rss, cpu = [], []
    start = clock()
    try:
        proc.cpu_percent(None)
        while count is None or len(rows) < count:
            if duration is not None and clock() - start >= duration:
                break
            sleep(interval)
            memory = proc.memory_info().rss
            load = proc.cpu_percent(None)
            rss.append(memory)
            cpu.append(load)
            rss_ma = moving_average(rss[-window:], window)[-1]
            cpu_ma = moving_average(cpu[-window:], window)[-1]
            rows.append((clock(), memory, load,
                         None if rss_ma != rss_ma else float(rss_ma),
                         None if cpu_ma != cpu_ma else float(cpu_ma)))
            if on_row is not None:
                on_row(rows[-1])
    except (psutil.NoSuchProcess, psutil.AccessDenied) as err:
        logger.debug('sampling of %s stopped: %s', pid, err)
    except KeyboardInterrupt:
        logger.debug('sampling of %s interrupted after %d samples', pid, len(rows))
    return rows


class BenchCsv:
    '''
    Benchmark rows as CSV, the header on creation and every row flushed as
    it arrives.
    '''
    def __init__(self, stream):
        self.stream = stream
        self.writer = csv.writer(stream, lineterminator='\n')
        self.writer.writerow(BENCH_COLUMNS)
        stream.flush()

    def __call__(self, row):
        self.writer.writerow(['' if v is None else v for v in row])
        self.stream.flush()


def write_bench_csv(rows, stream):
    sink = BenchCsv(stream)
    for row in rows:
        sink(row)


def main(argv=None):
    parser = argparse.ArgumentParser(prog='mintej', description='Minimalistic terminal editor for MiniJL programs')
    parser.add_argument('--script', metavar='FILE', help='replay input lines from FILE and print the transcript')
    parser.add_argument('--workdir', metavar='PATH', help='working directory of the session')
    parser.add_argument('--syntax-db', metavar='PATH', help='syntax database file')
    parser.add_argument('--bench', nargs=3, metavar=('PID', 'INTERVAL', 'WINDOW'),
                        help='sample memory and CPU of process PID every INTERVAL seconds')
    parser.add_argument('--bench-count', type=int, metavar='N', help='number of benchmark samples')
    parser.add_argument('--bench-duration', type=float, metavar='SECONDS', help='stop benchmark sampling after SECONDS')
    parser.add_argument('--bench-out', metavar='CSV', help='benchmark CSV output, stdout when omitted')
    parser.add_argument('--bench-plot', metavar='FILE', help='plot the benchmark profiles to FILE')
    parser.add_argument('--verbose', action='store_true', help='log diagnostics to stderr')
    args = parser.parse_args(argv)

    if args.verbose:
        logging.basicConfig(level=logging.DEBUG, stream=sys.stderr)

    if args.bench is not None:
        try:
            pid, interval, window = int(args.bench[0]), float(args.bench[1]), int(args.bench[2])
        except ValueError:
            parser.error('--bench expects PID INTERVAL WINDOW as numbers')
        try:
            process = psutil.Process(pid)
        except (psutil.NoSuchProcess, psutil.AccessDenied) as err:
            parser.error('cannot observe process %d: %s' % (pid, err))
        options = dict(count=args.bench_count, duration=args.bench_duration, process=process)
        if args.bench_out is not None:
            with open(args.bench_out, 'w', newline='') as f:
                rows = bench_sample(pid, interval, window, on_row=BenchCsv(f), **options)
        else:
            rows = bench_sample(pid, interval, window, on_row=BenchCsv(sys.stdout), **options)
        if args.bench_plot is not None:
            plot_benchmark(rows, outfile=args.bench_plot, title='Process %d' % pid)
        return 0

    if args.workdir is not None and not os.path.isdir(args.workdir):
        parser.error('no such directory: %s' % args.workdir)
    io = IoScript() if args.script is not None else ConsoleIo()
    syntax = open_syntax_db(args.syntax_db, io)
    if args.script is not None:
        with open(args.script, 'r', encoding='utf-8') as f:
            io.lines = f.read().splitlines()
        sys.stdout.write(replay(io, args.workdir, syntax))
        return 0
    return main_loop(Session(io, args.workdir, syntax))


if __name__ == '__main__':
    sys.exit(main())
