import os
import logging
from collections import deque

from .seqbuffer import *
from .console import CLEAR_SCREEN, mode_loop

logger = logging.getLogger(__name__)

UNDO_LIMIT = 100  # whole-buffer snapshots kept for undo
EXTENSION = '.jl'
PROMPT = 'edm>>'
SAVE_SENTINEL = 's'

INFO_TABLE = [
    'w          :: Writes the file',
    'rd_lines  :: Reads the file',
    'd         :: deletes the lines in file',
    'cp        :: Copies the lines in file',
    'bs        :: Adds blank lines in file',
    'cm        :: Adds comments to lines in file',
    'uncom     :: Uncomments the lines in file',
    'onfile    :: User enter the filename',
    'clear     :: Clears the console',
    'find      :: Search lines for a keyword',
    'copy_file :: Copies a file into another',
    'undo      :: Reverts the last change',
    'redo      :: Re-applies the last undone change',
    'history   :: Lists the commands applied to the file',
    'back      :: Returns to MinTEJ',
]

RD_INFO = 'Info: Enter Start_line, off-set before the start line, End_line till to be read'


class EditorError(Exception):
    pass


class EditorSession:
    '''
    State of the editor mode: the file being edited, its LineBuffer and the
    undo/redo/history records.

    :param undo_limit: maximum number of undo snapshots
    '''
    def __init__(self, undo_limit=UNDO_LIMIT):
        self.path = None
        self.name = None
        self.buffer = LineBuffer()
        self.undo_stack = deque(maxlen=undo_limit)
        self.redo_stack = deque(maxlen=undo_limit)
        self.history = []

    def __repr__(self):
        return 'EditorSession(%s, %d lines)' % (self.name, len(self.buffer))

    def record(self, command, argument=''):
        self.history.append((command, argument))

    def mutate(self, new_buffer, command, argument=''):
        self.undo_stack.append(self.buffer.copy())
        self.redo_stack.clear()
        self.buffer = new_buffer
        self.record(command, argument)
        self.save()

    def save(self):
        if self.path is None:
            raise EditorError('No file selected, use onfile')
        with open(self.path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(lb_render(self.buffer))
        self.buffer.dirty = False
        logger.debug('saved %d lines to %s', len(self.buffer), self.path)

    def reload(self):
        if self.path is not None and os.path.isfile(self.path):
            self.buffer = read_buffer(self.path)


def with_extension(name):
    root, ext = os.path.splitext(name)
    if not ext:
        return name + EXTENSION
    return name


def read_buffer(path):
    with open(path, 'r', encoding='utf-8', newline='') as f:
        return lb_load(f.read(), origin=path)


def cmd_onfile(session, name):
    '''
    Select the file to edit, creating it empty when absent.

    :param session: the shared Session

    :param name: file name, ".jl" is appended when it has no extension
    '''
    name = with_extension(name.strip())
    path = session.resolve(name)
    ed = session.editor
    if os.path.isfile(path):
        buffer = read_buffer(path)
    else:
        with open(path, 'w', encoding='utf-8'):
            pass
        buffer = LineBuffer(origin=path)
        logger.debug('created %s', path)
    ed.path = path
    ed.name = name
    ed.buffer = buffer
    ed.undo_stack.clear()
    ed.redo_stack.clear()
    ed.record('onfile', name)
    return session


def require_file(session):
    if session.editor.path is None:
        raise EditorError('No file selected, use onfile')
    return session.editor


def ask_file(session):
    io = session.io
    io.print('Enter the file name')
    name = io.read().strip()
    if name:
        cmd_onfile(session, name)
    return name


def onfile(session):
    if ask_file(session):
        session.io.print('Choose option from info list')


def cmd_write(session):
    ed = require_file(session)
    io = session.io
    io.print('Editing: %s' % ed.name)
    io.print("Type new lines. Type '%s' to save and exit." % SAVE_SENTINEL)
    typed = []
    while True:
        line = io.read('%d:' % (len(ed.buffer) + len(typed) + 1))
        if line == SAVE_SENTINEL:
            break
        typed.append(line)
    if typed:
        ed.mutate(ed.buffer._derive(ed.buffer.lines + typed), 'w', '%d lines' % len(typed))
    else:
        ed.save()
    io.print('Saved to %s' % ed.name)


def parse_read_request(text):
    # "start,offset,end"
    parts = [p.strip() for p in text.split(',')]
    if len(parts) != 3 or not all(p.isdigit() for p in parts):
        raise RangeSyntaxError('Expected Start_line,off-set,End_line, got %r' % text)
    start, offset, end = (int(p) for p in parts)
    if start < 1 or end < start:
        raise RangeSyntaxError('Expected 1 <= Start_line <= End_line, got %r' % text)
    return start, offset, end


def read_window(buffer, start, offset, end):
    first = max(1, start - offset)
    last = min(end, len(buffer))
    return ['%d:%s' % (n, buffer.line(n)) for n in range(first, last + 1)]


def read_lines(session, path, name=None):
    '''
    Print a file numbered, then the window asked for as "start,offset,end".

    :param session: the shared Session

    :param path: file to read

    :param name: label shown in the "Reading:" header
    '''
    io = session.io
    buffer = read_buffer(path)
    io.print('Reading: %s' % (name or path))
    for n in range(1, len(buffer) + 1):
        io.print('%d:%s' % (n, buffer.line(n)))
    io.print('')
    io.print(RD_INFO)
    while True:
        answer = io.read().strip()
        if not answer:
            return
        try:
            start, offset, end = parse_read_request(answer)
        except RangeSyntaxError as err:
            io.print('Error: %s' % err)
            continue
        break
    for text in read_window(buffer, start, offset, end):
        io.print(text)


def cmd_read_lines(session):
    ed = require_file(session)
    read_lines(session, ed.path, ed.name)


def show_buffer(io, buffer):
    for text in buffer.numbered():
        io.print(text)


def reread(session):
    ed = require_file(session)
    ed.reload()
    session.io.print('Re-reading saved file:')
    show_buffer(session.io, ed.buffer)
    return ed


def ask_range(io, info, check):
    '''
    Prompt until a range valid for `check` is typed; None when cancelled.
    '''
    io.print(info)
    while True:
        answer = io.read().strip()
        if not answer:
            return None
        try:
            rng = parse_range(answer)
            check(rng)
            return rng
        except SeqBufferError as err:
            io.print('Error: %s' % err)


def ask_position(io, info, buffer):
    io.print(info)
    while True:
        answer = io.read().strip()
        if not answer:
            return None
        try:
            at = parse_range(answer)
            if len(at) != 1:
                raise RangeSyntaxError('Expected a single line number, got %r' % answer)
            buffer._check_position(at.start)
            return at.start
        except SeqBufferError as err:
            io.print('Error: %s' % err)


def finish(session, command, new_buffer, argument):
    ed = session.editor
    ed.mutate(new_buffer, command, argument)
    show_buffer(session.io, ed.buffer)
    session.io.print('Saved to %s' % ed.name)


def cmd_delete(session):
    ed = reread(session)
    rng = ask_range(session.io, 'Info: Enter Start_line & End_line number or line to be deleted', ed.buffer._check)
    if rng is not None:
        finish(session, 'd', lb_delete(ed.buffer, rng), repr(rng))


def cmd_copy(session):
    ed = reread(session)
    io = session.io
    rng = ask_range(io, 'Info: Enter line number to be copied', ed.buffer._check)
    if rng is None:
        return
    dest = ask_position(io, 'Info: Enter location to be copied', ed.buffer)
    if dest is not None:
        finish(session, 'cp', lb_copy(ed.buffer, rng, dest), '%r -> %d' % (rng, dest))


def cmd_blank(session):
    ed = reread(session)
    rng = ask_range(session.io, 'Info: Enter line number where the blank space is needed',
                    lambda r: ed.buffer._check_position(r.start))
    if rng is not None:
        finish(session, 'bs', lb_insert_blank(ed.buffer, rng.start, len(rng)), repr(rng))


def cmd_comment(session):
    ed = reread(session)
    rng = ask_range(session.io, 'Info: Enter line number to comment', ed.buffer._check)
    if rng is not None:
        finish(session, 'cm', lb_comment(ed.buffer, rng), repr(rng))


def cmd_uncomment(session):
    ed = reread(session)
    rng = ask_range(session.io, 'Info: Enter line number to uncomment', ed.buffer._check)
    if rng is not None:
        finish(session, 'uncm', lb_uncomment(ed.buffer, rng), repr(rng))


def find_lines(buffer, keyword):
    return [(n, text) for n, text in enumerate(buffer.lines, start=1) if keyword in text]


def cmd_find(session):
    ed = require_file(session)
    io = session.io
    io.print('Enter the keyword')
    keyword = ''
    while not keyword:
        keyword = io.read()
        if not keyword:
            io.print('Info: Enter a non-empty keyword')
    hits = find_lines(ed.buffer, keyword)
    if not hits:
        io.print("No match for '%s'" % keyword)
    for n, text in hits:
        io.print('%d: %s' % (n, text) if text else '%d:' % n)
    ed.record('find', keyword)


def copy_file(session, src, dst):
    '''
    Replace the content of dst with that of src.
    '''
    src_path = session.resolve(with_extension(src))
    dst_path = session.resolve(with_extension(dst))
    if not os.path.isfile(src_path):
        raise EditorError('No such file: %s' % src)
    with open(src_path, 'rb') as f:
        content = f.read()
    if os.path.abspath(src_path) != os.path.abspath(dst_path):
        with open(dst_path, 'wb') as f:
            f.write(content)
    ed = session.editor
    if ed.path is not None and os.path.abspath(ed.path) == os.path.abspath(dst_path):
        ed.reload()
    ed.record('copy_file', '%s -> %s' % (src, dst))
    return dst_path


def cmd_copy_file(session):
    io = session.io
    io.print('Enter the source file name')
    src = io.read().strip()
    io.print('Enter the destination file name')
    dst = io.read().strip()
    if not src or not dst:
        return
    copy_file(session, src, dst)
    io.print("Copied '%s' to '%s'" % (src, dst))


def cmd_undo(session):
    ed = require_file(session)
    if not ed.undo_stack:
        session.io.print('Nothing to undo')
        return
    ed.redo_stack.append(ed.buffer.copy())
    ed.buffer = ed.undo_stack.pop()
    ed.save()
    ed.record('undo')
    session.io.print('Saved to %s' % ed.name)


def cmd_redo(session):
    ed = require_file(session)
    if not ed.redo_stack:
        session.io.print('Nothing to redo')
        return
    ed.undo_stack.append(ed.buffer.copy())
    ed.buffer = ed.redo_stack.pop()
    ed.save()
    ed.record('redo')
    session.io.print('Saved to %s' % ed.name)


def cmd_history(session):
    for n, (command, argument) in enumerate(session.editor.history, start=1):
        session.io.print(('%d: %s %s' % (n, command, argument)).rstrip())


def cmd_info(session):
    for row in INFO_TABLE:
        session.io.print(row)


def cmd_clear(session):
    session.io.print(CLEAR_SCREEN)


COMMANDS = {
    'info': cmd_info,
    'onfile': onfile,
    'w': cmd_write,
    'rd_lines': cmd_read_lines,
    'd': cmd_delete,
    'cp': cmd_copy,
    'bs': cmd_blank,
    'cm': cmd_comment,
    'uncm': cmd_uncomment,
    'uncom': cmd_uncomment,
    'find': cmd_find,
    'copy_file': cmd_copy_file,
    'undo': cmd_undo,
    'redo': cmd_redo,
    'history': cmd_history,
    'clear': cmd_clear,
}


def edm_loop(session):
    mode_loop(session, PROMPT, COMMANDS, 'edm', start=ask_file)
