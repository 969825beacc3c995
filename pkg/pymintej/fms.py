import os
import sys
import shutil
import logging
import subprocess
from dataclasses import dataclass, field

from .console import CLEAR_SCREEN, mode_loop
from .editor import read_lines, with_extension

logger = logging.getLogger(__name__)

PROMPT = 'fms>>'
TREE_BRANCH = '├── '
LINUX_TERMINALS = ('x-terminal-emulator', 'gnome-terminal', 'konsole', 'xterm')

INFO_TABLE = [
    'lc    :: Current directory',
    'dir   :: List directory',
    'ls    :: List directory with path',
    'cdir  :: Change directory',
    'cpy   :: Copy files/directory',
    'delfl :: delete file',
    'deldir:: delete directory',
    'mkdr  :: Create directory',
    'rn    :: Rename file/ directory',
    'clear :: clear console',
    'tree  :: View tree structure',
    'rd_lines :: Reads file',
    'cmp   :: Compares two text files',
    'cmdwin :: Opens the windows instance',
    'back  :: Returns to MinTEJ',
    '      :: Unknown command',
]


class FileManagerError(Exception):
    pass


def list_paths(workdir, kind='names'):
    '''
    Listing of the working directory.

    :param workdir: directory to list

    :param kind: "cwd" for the directory itself, "names" for the names of its
        entries, "full" for their absolute paths
    '''
    workdir = os.path.abspath(workdir)
    if kind == 'cwd':
        return [workdir]
    names = sorted(os.listdir(workdir))
    if kind == 'names':
        return names
    if kind == 'full':
        return [os.path.join(workdir, name) for name in names]
    raise ValueError('Unknown listing kind %r' % kind)


def change_dir(session, path):
    target = session.resolve(path)
    if not os.path.isdir(target):
        raise FileManagerError('No such directory: %s' % path)
    session.workdir = os.path.abspath(target)
    logger.debug('working directory is now %s', session.workdir)
    return session.workdir


def make_dir(session, path):
    target = session.resolve(path)
    os.makedirs(target, exist_ok=True)
    return target


def rename(session, old, new):
    src = session.resolve(old)
    dst = session.resolve(new)
    if not os.path.exists(src):
        raise FileManagerError('No such file or directory: %s' % old)
    if os.path.exists(dst):
        raise FileManagerError('Target already exists: %s' % new)
    os.rename(src, dst)
    return dst


def copy_path(session, src, dst):
    '''
    Copy a file, or a directory recursively. A directory copied onto an
    existing directory lands inside it.
    '''
    source = session.resolve(src)
    target = session.resolve(dst)
    if not os.path.exists(source):
        raise FileManagerError('No such file or directory: %s' % src)
    if os.path.isdir(source):
        if os.path.isdir(target):
            target = os.path.join(target, os.path.basename(os.path.normpath(source)))
        shutil.copytree(source, target, dirs_exist_ok=True)
    else:
        shutil.copy2(source, target)
    return target


def delete_path(session, kind, path, confirm=True):
    '''
    Delete a file (kind "file") or directory tree (kind "dir").
    Nothing happens unless confirm is true.
    '''
    if not confirm or not path:
        return False
    target = session.resolve(path)
    if kind == 'file':
        if not os.path.isfile(target):
            raise FileManagerError('No such file: %s' % path)
        os.remove(target)
    elif kind == 'dir':
        if not os.path.isdir(target):
            raise FileManagerError('No such directory: %s' % path)
        shutil.rmtree(target)
    else:
        raise ValueError('Unknown kind %r' % kind)
    logger.debug('deleted %s', target)
    return True


def tree(root):
    lines = []

    def onerror(err):
        lines.append('%s (unreadable: %s)' % (err.filename, err.strerror))

    for dirpath, dirnames, filenames in os.walk(os.path.abspath(root), onerror=onerror):
        dirnames.sort()
        lines.append(dirpath)
        for name in sorted(filenames):
            lines.append(TREE_BRANCH + name)
    return lines


# File comparison

@dataclass
class FileStats:
    name: str
    size_kb: float
    lines: int
    words: int


@dataclass
class CompareReport:
    identical: bool
    mismatches: list = field(default_factory=list)  # (line number, left, right), None for a missing side
    stats: tuple = ()

    def render(self):
        out = []
        for number, left, right in self.mismatches:
            out.append('File A: %d %s' % (number, '<missing>' if left is None else left))
            out.append('File B: %d %s' % (number, '<missing>' if right is None else right))
        out.append('Files are identical' if self.identical else 'Files do not match')
        a, b = self.stats
        out.append('File name:      %-18s | %s' % (a.name, b.name))
        out.append('File size (KB): %-18s | %s' % ('%.2f' % a.size_kb, '%.2f' % b.size_kb))
        out.append('Total lines:    %-18d | %d' % (a.lines, b.lines))
        out.append('Total words:    %-18d | %d' % (a.words, b.words))
        return out


def _read_text_lines(path):
    with open(path, 'r', encoding='utf-8', errors='replace', newline='') as f:
        text = f.read()
    text = text.replace('\r\n', '\n')
    lines = text.split('\n')
    if lines and lines[-1] == '':
        lines.pop()
    return lines


def file_stats(path, name=None):
    lines = _read_text_lines(path)
    words = sum(len(line.split()) for line in lines)
    return FileStats(name or os.path.basename(path), os.path.getsize(path) / 1024., len(lines), words)


def compare_files(a, b, name_a=None, name_b=None):
    '''
    Line by line, word by word comparison of two text files.

    :param a: path of file A

    :param b: path of file B

    :return: CompareReport
    '''
    for path in (a, b):
        if not os.path.isfile(path):
            raise FileManagerError('No such file: %s' % path)
    left = _read_text_lines(a)
    right = _read_text_lines(b)
    mismatches = []
    for i in range(max(len(left), len(right))):
        la = left[i] if i < len(left) else None
        lb = right[i] if i < len(right) else None
        wa = la.split() if la is not None else None
        wb = lb.split() if lb is not None else None
        if wa != wb:
            mismatches.append((i + 1, la, lb))
    words_a = [w for line in left for w in line.split()]
    words_b = [w for line in right for w in line.split()]
    identical = not mismatches and words_a == words_b
    stats = (file_stats(a, name_a), file_stats(b, name_b))
    return CompareReport(identical, mismatches, stats)


def spawn_terminal(workdir, platform=None, launcher=subprocess.Popen, which=shutil.which):
    '''
    Open a new OS terminal in workdir without waiting for it.

    :return: the launched process, or None when no terminal is available
    '''
    platform = platform or sys.platform
    if platform.startswith('win'):
        return launcher('start cmd', shell=True, cwd=workdir)
    if platform == 'darwin':
        return launcher(['open', '-a', 'Terminal', workdir], cwd=workdir)
    if platform.startswith('linux'):
        for name in LINUX_TERMINALS:
            exe = which(name)
            if exe is not None:
                logger.debug('launching %s in %s', exe, workdir)
                return launcher([exe], cwd=workdir, start_new_session=True,
                                stdin=subprocess.DEVNULL, stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL)
    return None


# Mode commands

def _print_all(io, lines):
    for line in lines:
        io.print(line)


def cmd_lc(session):
    session.io.print('Printing the current directory')
    _print_all(session.io, list_paths(session.workdir, 'cwd'))


def cmd_dir(session):
    session.io.print('Printing the list content of directory')
    _print_all(session.io, list_paths(session.workdir, 'names'))


def cmd_ls(session):
    session.io.print('List all files and directory with path')
    _print_all(session.io, list_paths(session.workdir, 'full'))


def cmd_cdir(session):
    io = session.io
    io.print('Changing directory')
    io.print('Enter the path')
    path = io.read().strip()
    if path:
        io.print(change_dir(session, path))


def cmd_cpy(session):
    io = session.io
    io.print('Enter the source file/folder name')
    src = io.read().strip()
    io.print('Enter the destination file/folder name')
    dst = io.read().strip()
    if src and dst:
        copy_path(session, src, dst)
        io.print("Copied '%s' to '%s'" % (src, dst))


def _delete(session, kind):
    io = session.io
    io.print('Warning: Provide the %s path' % ('folder' if kind == 'dir' else 'file'))
    path = io.read().strip()
    if delete_path(session, kind, path, confirm=bool(path)):
        io.print('Folder is deleted!' if kind == 'dir' else 'File is deleted!')


def cmd_delfl(session):
    _delete(session, 'file')


def cmd_deldir(session):
    _delete(session, 'dir')


def cmd_mkdr(session):
    io = session.io
    io.print('Add the folder name to create directory')
    path = io.read().strip()
    if path:
        make_dir(session, path)


def cmd_rn(session):
    io = session.io
    io.print('Enter the oldname file/folder name')
    old = io.read().strip()
    io.print('Enter the newname file/folder name')
    new = io.read().strip()
    if old and new:
        rename(session, old, new)
        io.print("Renamed '%s' to '%s'" % (old, new))


def cmd_tree(session):
    session.io.print('List tree')
    _print_all(session.io, tree(session.workdir))


def cmd_rd_lines(session):
    io = session.io
    io.print('Enter the file name')
    name = io.read().strip()
    if name:
        name = with_extension(name)
        read_lines(session, session.resolve(name), name)


def cmd_cmp(session):
    io = session.io
    io.print('Enter the text file 1')
    a = io.read().strip()
    io.print('Enter the text file 2')
    b = io.read().strip()
    if not a or not b:
        return
    report = compare_files(session.resolve(a), session.resolve(b), a, b)
    _print_all(io, report.render())


def cmd_cmdwin(session):
    if spawn_terminal(session.workdir) is None:
        session.io.print('No terminal emulator available on this platform')


def cmd_info(session):
    _print_all(session.io, INFO_TABLE)


def cmd_clear(session):
    session.io.print(CLEAR_SCREEN)


COMMANDS = {
    'info': cmd_info,
    'lc': cmd_lc,
    'dir': cmd_dir,
    'ls': cmd_ls,
    'cdir': cmd_cdir,
    'cpy': cmd_cpy,
    'delfl': cmd_delfl,
    'deldir': cmd_deldir,
    'mkdr': cmd_mkdr,
    'rn': cmd_rn,
    'clear': cmd_clear,
    'tree': cmd_tree,
    'rd_lines': cmd_rd_lines,
    'cmp': cmd_cmp,
    'cmdwin': cmd_cmdwin,
}


def fms_loop(session):
    mode_loop(session, PROMPT, COMMANDS, 'fms')
