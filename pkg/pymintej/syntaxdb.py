import os
import logging
import tempfile
from dataclasses import dataclass, field

from .console import CLEAR_SCREEN, mode_loop

logger = logging.getLogger(__name__)

PROMPT = 'syntax>>'
SENTINEL = 'END'
STOCK_DATABASE = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data', 'syntax_db.txt')
HEADER = '== '
SOURCE = '@@ '
ESCAPE = '\\'
ATTRIBUTION = [
    'https://juliabyexample.helpmanual.io/',
    'https://www.datacamp.com/cheat-sheet/julia-basics-cheat-sheet',
]


class SyntaxDatabaseError(Exception):
    pass


class DuplicateKeyError(SyntaxDatabaseError):
    pass


@dataclass
class SyntaxEntry:
    key: str
    title: str
    body: str
    sources: list = field(default_factory=list)

    def render(self):
        out = [self.title]
        if self.sources:
            out.append('More examples can be found here:')
            out.extend(self.sources)
        out.append('-----')
        out.extend(self.body.split('\n'))
        return out


def _escape(line):
    if line.startswith(('==', '@@', ESCAPE)):
        return ESCAPE + line
    return line


def _unescape(line):
    if line.startswith(ESCAPE):
        return line[1:]
    return line


def parse_database(text, origin='<text>'):
    '''
    Parse database text. A record starts with "== <key> :: <title>", is
    followed by optional "@@ <url>" source lines, then its body lines.

    :param text: database content

    :param origin: name used in error messages
    '''
    entries = {}
    current = None
    body = []
    in_sources = False

    def close():
        if current is None:
            return
        key, title, sources, number = current
        if key in entries:
            raise DuplicateKeyError('%s:%d: duplicate key %r' % (origin, number, key))
        entries[key] = SyntaxEntry(key, title, '\n'.join(body), sources)

    lines = text.replace('\r\n', '\n').split('\n')
    if lines and lines[-1] == '':
        lines.pop()
    for number, line in enumerate(lines, start=1):
        if line.startswith('=='):
            close()
            head = line[2:].strip()
            if '::' not in head:
                raise SyntaxDatabaseError('%s:%d: malformed record header %r, expected "== key :: title"'
                                          % (origin, number, line))
            key, title = (part.strip() for part in head.split('::', 1))
            if not key or len(key.split()) != 1:
                raise SyntaxDatabaseError('%s:%d: malformed record key in %r' % (origin, number, line))
            current = (key.lower(), title, [], number)
            body = []
            in_sources = True
            continue
        if current is None:
            if line.strip() and not line.startswith('#'):
                raise SyntaxDatabaseError('%s:%d: text outside of a record' % (origin, number))
            continue
        if in_sources and line.startswith('@@'):
            current[2].append(line[2:].strip())
            continue
        in_sources = False
        body.append(_unescape(line))
    close()
    return entries


def render_database(entries):
    out = []
    for entry in entries.values():
        out.append('%s%s :: %s' % (HEADER, entry.key, entry.title))
        for url in entry.sources:
            out.append(SOURCE + url)
        out.extend(_escape(line) for line in entry.body.split('\n'))
    return ''.join(line + '\n' for line in out)


class SyntaxDatabase:
    '''
    Keyword-indexed snippets backed by a text file.

    :param path: database file, the packaged stock database when None
    '''
    def __init__(self, path=None):
        self.path = path or STOCK_DATABASE
        self.entries = {}

    def __len__(self):
        return len(self.entries)

    def keys(self):
        return list(self.entries)

    def lookup(self, key):
        return self.entries.get(key.strip().lower())

    def load(self):
        with open(self.path, 'r', encoding='utf-8') as f:
            self.entries = parse_database(f.read(), self.path)
        logger.debug('loaded %d syntax entries from %s', len(self.entries), self.path)
        return self

    def add_entry(self, entry):
        '''
        Add an entry and rewrite the file atomically.
        '''
        key = entry.key.strip().lower()
        if not key or len(key.split()) != 1:
            raise SyntaxDatabaseError('Keyword must be a single word, got %r' % entry.key)
        if key in self.entries:
            raise DuplicateKeyError('Keyword %r already exists' % key)
        entry = SyntaxEntry(key, entry.title, entry.body, list(entry.sources))
        updated = dict(self.entries)
        updated[key] = entry
        directory = os.path.dirname(os.path.abspath(self.path))
        fd, tmp = tempfile.mkstemp(prefix='.syntax_db', dir=directory, text=True)
        try:
            with os.fdopen(fd, 'w', encoding='utf-8', newline='\n') as f:
                f.write(render_database(updated))
            os.replace(tmp, self.path)
        except BaseException:
            if os.path.exists(tmp):
                os.remove(tmp)
            raise
        self.entries = updated
        logger.debug('added syntax entry %r to %s', key, self.path)
        return entry

    def info(self):
        out = ['info', '-----', 'Examples are taken from']
        out += ['%d. %s' % (i, url) for i, url in enumerate(ATTRIBUTION, start=1)]
        out += [':' + key for key in self.entries]
        return out


def load_database(path=None):
    return SyntaxDatabase(path).load()


# Mode commands

def cmd_info(session):
    for line in session.syntax.info():
        session.io.print(line)


def cmd_add(session):
    io = session.io
    io.print('Enter the keyword')
    key = io.read().strip()
    if not key:
        return
    io.print('Enter the title')
    title = io.read().strip()
    io.print('Enter the reference link (RETURN for none)')
    link = io.read().strip()
    io.print("Enter the example. Type '%s' on a new line to finish:" % SENTINEL)
    body = []
    while True:
        line = io.read(PROMPT)
        if line.strip() == SENTINEL:
            break
        body.append(line)
    try:
        session.syntax.add_entry(SyntaxEntry(key, title or key, '\n'.join(body), [link] if link else []))
    except DuplicateKeyError as err:
        io.print('Error: %s, database unchanged' % err)
        return
    io.print("Added ':%s' to %s" % (key.lower(), session.syntax.path))


def cmd_clear(session):
    session.io.print(CLEAR_SCREEN)


def show_entry(session, key):
    entry = session.syntax.lookup(key)
    if entry is None:
        session.io.print("Unknown keyword '%s', type info for the list" % key)
        return
    for line in entry.render():
        session.io.print(line)


class SyntaxCommands:
    # Fixed commands first, every other word is looked up as a keyword
    fixed = {'info': cmd_info, 'add': cmd_add, 'clear': cmd_clear}

    def get(self, command, default=None):
        if command in self.fixed:
            return self.fixed[command]
        return lambda session: show_entry(session, command)


def syntax_loop(session):
    mode_loop(session, PROMPT, SyntaxCommands(), 'syntax')
