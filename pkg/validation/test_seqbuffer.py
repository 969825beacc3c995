import random
from collections import deque

import pytest

from pymintej.seqbuffer import *


def test_invalid_capacity():
    for capacity in (0, -3):
        with pytest.raises(InvalidCapacityError):
            buf_new(capacity)


def test_fifo_order_and_occupancy():
    rng = random.Random(1234)
    for case in range(1000):
        capacity = rng.randint(1, 20)
        buf = buf_new(capacity)
        model = deque()
        written = 0
        for op in range(rng.randint(0, 50)):
            if rng.random() < 0.6:
                datum = 'item%d' % op
                if buf.tail == capacity:
                    with pytest.raises(BufferFullError):
                        buf_write(buf, datum)
                else:
                    buf = buf_write(buf, datum)
                    model.append(datum)
                    written += 1
            else:
                if buf.head == buf.tail:
                    with pytest.raises(BufferEmptyError):
                        buf_read(buf)
                else:
                    buf, datum = buf_read(buf)
                    assert datum == model.popleft()
            assert buf_len(buf) == buf.tail - buf.head == len(model)
            assert 0 <= buf.head <= buf.tail <= capacity
            assert buf.contents() == list(model)
        assert buf.tail == written


def test_value_semantics():
    buf = buf_write(buf_new(3), 'a')
    after = buf_write(buf, 'b')
    assert buf_len(buf) == 1
    assert buf_len(after) == 2
    rest, datum = buf_read(after)
    assert datum == 'a'
    assert buf_len(after) == 2
    assert rest.contents() == ['b']


def test_full_and_empty():
    buf = buf_write(buf_new(1), 'only')
    with pytest.raises(BufferFullError):
        buf_write(buf, 'more')
    buf, datum = buf_read(buf)
    assert datum == 'only'
    # cells are not reused: the buffer stays full after draining
    assert buf.full and buf.empty
    with pytest.raises(BufferEmptyError):
        buf_read(buf)


def test_drain():
    buf = SequentialBuffer(5)
    for line in ('for k = 1:3', 'println(k)', 'end'):
        buf.Write(line)
    assert buf.Drain() == ['for k = 1:3', 'println(k)', 'end']
    assert len(buf) == 0


def test_parse_range():
    assert parse_range('5') == LineRange(5)
    assert parse_range(' 2 : 5 ') == LineRange(2, 5)
    assert len(parse_range('7:10')) == 4
    for bad in ('', 'a', '5:2', '0', '1:2:3', '-1'):
        with pytest.raises(RangeSyntaxError):
            parse_range(bad)


def test_load_and_render():
    buf = lb_load('a\r\nb\r\n')
    assert buf.lines == ['a', 'b']
    assert lb_render(buf) == 'a\nb\n'
    assert lb_load('').lines == []
    assert lb_render(lb_load('')) == ''
    assert lb_load('\n').lines == ['']
    assert lb_load('no terminator').lines == ['no terminator']


def test_range_errors_carry_bound():
    buf = lb_load('one\ntwo\n')
    with pytest.raises(RangeError) as err:
        lb_delete(buf, LineRange(2, 4))
    assert err.value.bound == 4
    with pytest.raises(RangeError):
        lb_copy(buf, LineRange(1), 4)
    with pytest.raises(RangeError):
        lb_insert_blank(buf, 4)


def test_uncomment_line():
    assert uncomment_line('#end') == 'end'
    assert uncomment_line('  #x = 1') == '  x = 1'
    assert uncomment_line('x = 1 # note') == 'x = 1 # note'
    assert uncomment_line('##twice') == '#twice'


def test_editing_sequence():
    buf = lb_load('\nglobal x = 0\nwhile x <= 5\n    global x = x + 1\n    println("The number is:",x)\nend\n')
    buf = lb_delete(buf, LineRange(1))
    assert buf.numbered()[0] == '1: global x = 0'
    buf = lb_copy(buf, LineRange(2, 5), 6)
    assert len(buf) == 9
    assert buf.lines[5:] == buf.lines[1:5]
    buf = lb_insert_blank(buf, 4)
    assert buf.numbered()[3] == '4:'
    assert buf.line(5) == '    println("The number is:",x)'
    before = buf.copy()
    commented = lb_comment(buf, LineRange(7, 10))
    assert commented.numbered()[6:] == ['7: #while x <= 5', '8: #    global x = x + 1',
                                        '9: #    println("The number is:",x)', '10: #end']
    assert lb_uncomment(commented, LineRange(7, 10)) == before
    assert commented.dirty


def test_insert_several_blanks():
    buf = lb_insert_blank(lb_load('a\nb\n'), 2, count=3)
    assert buf.lines == ['a', '', '', '', 'b']
    assert lb_insert_blank(lb_load('a\n'), 2).lines == ['a', '']
