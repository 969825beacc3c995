import os

import pytest

from pymintej.fms import *

from conftest import CMP_1, CMP_2, transcript_after


def populate(root):
    for name in ('test_file1.jl', 'test_file2.jl', 'test_file3.jl', 'notes.txt'):
        with open(os.path.join(str(root), name), 'w') as f:
            f.write('x = 1\n')
    for name in ('test1', 'test2', 'test3', 'empty'):
        os.mkdir(os.path.join(str(root), name))
    with open(os.path.join(str(root), 'test1', 'inner.jl'), 'w') as f:
        f.write('println("inner")\n')


def run_fms(session):
    fms_loop(session)
    return session


def test_listings(workdir):
    populate(workdir)
    root = str(workdir)
    assert list_paths(root, 'cwd') == [os.path.abspath(root)]
    names = list_paths(root, 'names')
    assert names == sorted(names)
    assert len(names) == 8
    full = list_paths(root, 'full')
    assert full == [os.path.join(os.path.abspath(root), n) for n in names]
    with pytest.raises(ValueError):
        list_paths(root, 'bogus')


def test_lc_dir_ls(make_session, workdir):
    populate(workdir)
    session = run_fms(make_session(['lc', 'dir', 'ls', 'back']))
    assert transcript_after(session, 'fms>>lc')[:2] == ['Printing the current directory', session.workdir]
    after = transcript_after(session, 'fms>>dir')
    assert after[0] == 'Printing the list content of directory'
    assert after[1:9] == sorted(os.listdir(str(workdir)))
    after = transcript_after(session, 'fms>>ls')
    assert after[0] == 'List all files and directory with path'
    assert all(os.path.isabs(p) for p in after[1:9])


def test_cdir(make_session, workdir):
    populate(workdir)
    target = os.path.join(str(workdir), 'test1')
    session = run_fms(make_session(['cdir', target, 'cdir', 'nowhere', 'dir', 'back']))
    transcript = session.io.transcript
    typed = transcript.index(target)
    assert transcript[typed - 2:typed] == ['Changing directory', 'Enter the path']
    assert transcript[typed + 1] == target
    assert session.workdir == target
    assert 'Error: No such directory: nowhere' in session.io.transcript
    assert transcript_after(session, 'fms>>dir')[1] == 'inner.jl'


def test_mkdr_rn_cpy(make_session, workdir):
    populate(workdir)
    script = ['mkdr', 'test4',
              'rn', 'test_file3.jl', 'test_file4.jl',
              'rn', 'missing.jl', 'x.jl',
              'rn', 'test_file1.jl', 'test_file2.jl',
              'cpy', 'test_file1.jl', 'copy.jl',
              'cpy', 'test1', 'test2',
              'back']
    session = run_fms(make_session(script))
    root = str(workdir)
    assert os.path.isdir(os.path.join(root, 'test4'))
    assert os.path.isfile(os.path.join(root, 'test_file4.jl'))
    assert not os.path.exists(os.path.join(root, 'test_file3.jl'))
    assert os.path.isfile(os.path.join(root, 'copy.jl'))
    assert os.path.isfile(os.path.join(root, 'test2', 'test1', 'inner.jl'))
    transcript = session.io.transcript
    assert "Renamed 'test_file3.jl' to 'test_file4.jl'" in transcript
    assert 'Error: No such file or directory: missing.jl' in transcript
    assert 'Error: Target already exists: test_file2.jl' in transcript
    assert "Copied 'test_file1.jl' to 'copy.jl'" in transcript


def test_copy_directory_to_new_name(make_session, workdir):
    populate(workdir)
    session = make_session()
    copy_path(session, 'test1', 'fresh')
    assert os.path.isfile(os.path.join(str(workdir), 'fresh', 'inner.jl'))


def test_delete(make_session, workdir):
    populate(workdir)
    script = ['delfl', '', 'delfl', 'notes.txt', 'deldir', 'test1', 'deldir', 'test1', 'back']
    session = run_fms(make_session(script))
    root = str(workdir)
    assert not os.path.exists(os.path.join(root, 'notes.txt'))
    assert not os.path.exists(os.path.join(root, 'test1'))
    transcript = session.io.transcript
    assert transcript.count('File is deleted!') == 1
    assert transcript.count('Folder is deleted!') == 1
    assert 'Warning: Provide the folder path' in transcript
    assert 'Error: No such directory: test1' in transcript


def test_delete_requires_confirmation(make_session, workdir):
    populate(workdir)
    session = make_session()
    assert not delete_path(session, 'file', 'notes.txt', confirm=False)
    assert os.path.exists(os.path.join(str(workdir), 'notes.txt'))


def test_tree(workdir):
    root = str(workdir)
    os.mkdir(os.path.join(root, 'b'))
    for name in ('z.jl', 'a.jl', os.path.join('b', 'c.jl')):
        with open(os.path.join(root, name), 'w') as f:
            f.write('\n')
    assert tree(root) == [
        os.path.abspath(root),
        '├── a.jl',
        '├── z.jl',
        os.path.join(os.path.abspath(root), 'b'),
        '├── c.jl',
    ]


def write_bytes(root, name, data):
    path = os.path.join(str(root), name)
    with open(path, 'wb') as f:
        f.write(data)
    return path


def test_compare_identical(workdir):
    data = b''.join(b'word%d\n' % n for n in range(383))
    a = write_bytes(workdir, 'one.jl', data)
    b = write_bytes(workdir, 'two.jl', data)
    report = compare_files(a, b, 'one.jl', 'two.jl')
    assert report.identical
    assert report.mismatches == []
    assert report.stats[0].lines == report.stats[1].lines == 383
    assert report.stats[0].words == 383
    assert report.render()[0] == 'Files are identical'


def test_compare_mismatch(workdir):
    a = write_bytes(workdir, 'test_cmp_1.jl', CMP_1)
    b = write_bytes(workdir, 'test_cmp_2.jl', CMP_2)
    report = compare_files(a, b, 'test_cmp_1.jl', 'test_cmp_2.jl')
    assert not report.identical
    assert report.mismatches == [(2, 'println("Hello world")', 'println("hello Julia Programming)')]
    assert report.render() == [
        'File A: 2 println("Hello world")',
        'File B: 2 println("hello Julia Programming)',
        'Files do not match',
        'File name:      test_cmp_1.jl      | test_cmp_2.jl',
        'File size (KB): 0.02               | 0.04',
        'Total lines:    2                  | 2',
        'Total words:    2                  | 3',
    ]


def test_compare_whitespace_and_length(workdir):
    a = write_bytes(workdir, 'a.jl', b'x  =  1\n')
    b = write_bytes(workdir, 'b.jl', b'x = 1\r\n')
    assert compare_files(a, b).identical
    c = write_bytes(workdir, 'c.jl', b'x = 1\ny = 2\n')
    report = compare_files(a, c)
    assert report.mismatches == [(2, None, 'y = 2')]
    assert report.render()[0] == 'File A: 2 <missing>'


def test_cmp_command(make_session, workdir):
    write_bytes(workdir, 'test_cmp_1.jl', CMP_1)
    write_bytes(workdir, 'test_cmp_2.jl', CMP_2)
    session = run_fms(make_session(['cmp', 'test_cmp_1.jl', 'test_cmp_2.jl', 'cmp', 'test_cmp_1.jl', 'nope', 'back']))
    after = transcript_after(session, 'test_cmp_2.jl')
    assert after[2] == 'Files do not match'
    assert 'Enter the text file 1' in session.io.transcript
    assert any(line.startswith('Error: No such file:') for line in session.io.transcript)


def test_rd_lines_command(make_session, workdir):
    write_bytes(workdir, 'code.jl', b'a = 1\nb = 2\nc = 3\n')
    session = run_fms(make_session(['rd_lines', 'code', '2,0,3', 'back']))
    after = transcript_after(session, '2,0,3')
    assert after[:2] == ['2:b = 2', '3:c = 3']


class FakeLauncher:
    def __init__(self):
        self.calls = []

    def __call__(self, args, **kwargs):
        self.calls.append((args, kwargs))
        return 'process'


def test_spawn_terminal(workdir):
    launcher = FakeLauncher()
    found = spawn_terminal(str(workdir), 'linux', launcher, which=lambda name: '/usr/bin/' + name)
    assert found == 'process'
    assert launcher.calls[0][0] == ['/usr/bin/x-terminal-emulator']
    assert launcher.calls[0][1]['cwd'] == str(workdir)
    assert spawn_terminal(str(workdir), 'darwin', launcher) == 'process'
    assert launcher.calls[1][0] == ['open', '-a', 'Terminal', str(workdir)]
    assert spawn_terminal(str(workdir), 'linux', launcher, which=lambda name: None) is None
    assert spawn_terminal(str(workdir), 'sunos5', launcher) is None


def test_info_and_unknown(make_session):
    session = run_fms(make_session(['info', 'bogus', 'back']))
    assert transcript_after(session, 'fms>>info')[:len(INFO_TABLE)] == INFO_TABLE
    assert transcript_after(session, 'fms>>bogus')[0] == 'Unknown command'
