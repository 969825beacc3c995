import re
import numpy as np

DEFAULT_CAPACITY = 10000  # items held by an interactive input session


class SeqBufferError(Exception):
    pass


class InvalidCapacityError(SeqBufferError):
    pass


class BufferFullError(SeqBufferError):
    pass


class BufferEmptyError(SeqBufferError):
    pass


class RangeError(SeqBufferError):
    # Line number outside the buffer; carries the offending bound
    def __init__(self, message, bound):
        super().__init__(message)
        self.bound = bound


class RangeSyntaxError(SeqBufferError):
    pass


class SequentialBuffer:
    '''
    FIFO buffer over a fixed array of cells, with head and tail pointers.

    :param capacity: number of cells C, must be positive

    Cells never wrap around: a write moves the tail, a read moves the head,
    and the state always satisfies 0 <= head <= tail <= capacity.
    '''
    def __init__(self, capacity=DEFAULT_CAPACITY):
        if capacity is None or int(capacity) < 1:
            raise InvalidCapacityError('Buffer capacity must be a positive integer, got %s' % capacity)
        self.capacity = int(capacity)
        self.data = np.empty(self.capacity, dtype=object)
        self.head = 0
        self.tail = 0

    def __len__(self):
        return self.tail - self.head

    def __repr__(self):
        return 'SequentialBuffer(H=%d, T=%d, C=%d)' % (self.head, self.tail, self.capacity)

    @property
    def full(self):
        return self.tail >= self.capacity

    @property
    def empty(self):
        return self.head >= self.tail

    def contents(self):
        # Cells [H, T-1] in order
        return list(self.data[self.head:self.tail])

    def Write(self, datum):
        if self.full:
            raise BufferFullError('Buffer is full (capacity %d)' % self.capacity)
        self.data[self.tail] = datum
        self.tail = self.tail + 1
        return self

    def Read(self):
        if self.empty:
            raise BufferEmptyError('Buffer is empty')
        datum = self.data[self.head]
        self.head = self.head + 1
        return datum

    def Drain(self):
        out = []
        while not self.empty:
            out.append(self.Read())
        return out

    def copy(self):
        new = SequentialBuffer(self.capacity)
        new.data = np.copy(self.data)
        new.head = self.head
        new.tail = self.tail
        return new


def buf_new(capacity=DEFAULT_CAPACITY):
    return SequentialBuffer(capacity)


def buf_write(buf, datum):
    # Value semantics: the input buffer is left untouched
    return buf.copy().Write(datum)


def buf_read(buf):
    new = buf.copy()
    datum = new.Read()
    return new, datum


def buf_len(buf):
    return buf.tail - buf.head


class LineRange:
    # Inclusive, 1-based line range
    def __init__(self, start, end=None):
        if end is None:
            end = start
        if start < 1:
            raise RangeSyntaxError('Line numbers start at 1, got %d' % start)
        if end < start:
            raise RangeSyntaxError('Range end %d is before start %d' % (end, start))
        self.start = start
        self.end = end

    def __repr__(self):
        if self.start == self.end:
            return 'LineRange(%d)' % self.start
        return 'LineRange(%d:%d)' % (self.start, self.end)

    def __eq__(self, other):
        return isinstance(other, LineRange) and (self.start, self.end) == (other.start, other.end)

    def __len__(self):
        return self.end - self.start + 1


_range_pattern = re.compile(r'^\s*(\d+)\s*(?::\s*(\d+)\s*)?$')


def parse_range(text):
    '''
    Parse "N" or "A:B" into a LineRange.
    '''
    match = _range_pattern.match(text or '')
    if match is None:
        raise RangeSyntaxError('Invalid line range %r, expected N or A:B' % text)
    start = int(match.group(1))
    end = int(match.group(2)) if match.group(2) is not None else start
    return LineRange(start, end)


class LineBuffer:
    '''
    Ordered, 1-indexed sequence of text lines.

    :param lines: the lines, without terminators

    :param dirty: True when the buffer holds unsaved changes

    :param origin: path of the file the buffer was read from, if any
    '''
    def __init__(self, lines=None, dirty=False, origin=None):
        self.lines = list(lines) if lines is not None else []
        self.dirty = dirty
        self.origin = origin

    def __len__(self):
        return len(self.lines)

    def __eq__(self, other):
        return isinstance(other, LineBuffer) and self.lines == other.lines

    def __repr__(self):
        return 'LineBuffer(%d lines)' % len(self.lines)

    def line(self, number):
        return self.lines[number - 1]

    def numbered(self, start=1, end=None):
        if end is None:
            end = len(self.lines)
        out = []
        for number in range(start, end + 1):
            text = self.lines[number - 1]
            out.append('%d: %s' % (number, text) if text else '%d:' % number)
        return out

    def copy(self):
        return LineBuffer(self.lines, dirty=self.dirty, origin=self.origin)

    def _derive(self, lines):
        return LineBuffer(lines, dirty=True, origin=self.origin)

    def _check(self, rng):
        nlines = len(self.lines)
        if rng.start > nlines:
            raise RangeError('Line %d is outside the buffer (1-%d)' % (rng.start, nlines), rng.start)
        if rng.end > nlines:
            raise RangeError('Line %d is outside the buffer (1-%d)' % (rng.end, nlines), rng.end)

    def _check_position(self, at):
        if at < 1 or at > len(self.lines) + 1:
            raise RangeError('Position %d is outside 1-%d' % (at, len(self.lines) + 1), at)


def lb_load(text, origin=None):
    if not text:
        return LineBuffer([], origin=origin)
    text = text.replace('\r\n', '\n')
    lines = text.split('\n')
    # A trailing terminator does not open a new line
    if lines[-1] == '':
        lines.pop()
    return LineBuffer(lines, origin=origin)


def lb_render(buf):
    if not buf.lines:
        return ''
    return '\n'.join(buf.lines) + '\n'


def lb_delete(buf, rng):
    buf._check(rng)
    return buf._derive(buf.lines[:rng.start - 1] + buf.lines[rng.end:])


def lb_copy(buf, src, dest):
    buf._check(src)
    buf._check_position(dest)
    chunk = buf.lines[src.start - 1:src.end]
    return buf._derive(buf.lines[:dest - 1] + chunk + buf.lines[dest - 1:])


def lb_insert_blank(buf, at, count=1):
    buf._check_position(at)
    return buf._derive(buf.lines[:at - 1] + [''] * count + buf.lines[at - 1:])


def lb_comment(buf, rng):
    buf._check(rng)
    lines = list(buf.lines)
    for i in range(rng.start - 1, rng.end):
        lines[i] = '#' + lines[i]
    return buf._derive(lines)


def uncomment_line(text):
    # Drop the '#' only when it is the first non-blank character
    stripped = text.lstrip()
    if not stripped.startswith('#'):
        return text
    indent = len(text) - len(stripped)
    return text[:indent] + text[indent + 1:]


def lb_uncomment(buf, rng):
    buf._check(rng)
    lines = list(buf.lines)
    for i in range(rng.start - 1, rng.end):
        lines[i] = uncomment_line(lines[i])
    return buf._derive(lines)
