'''
Prompt/read/print handles shared by every mode, and the generic mode loop.
'''
import logging

logger = logging.getLogger(__name__)

CLEAR_SCREEN = '\033[2J\033[H'
INTERRUPT = '^C'  # scripted keyboard interrupt
EXHAUSTED_MARKER = '<<script exhausted>>'


class ScriptExhausted(Exception):
    pass


class ConsoleIo:
    # Terminal I/O; end of input surfaces as EOFError
    def print(self, text=''):
        print(text, flush=True)

    def read(self, prompt=''):
        return input(prompt)


class IoScript:
    '''
    Scripted I/O: every read consumes the next scripted line and the whole
    interaction is kept in a transcript.

    :param lines: input lines fed to successive prompts
    '''
    def __init__(self, lines=None):
        self.lines = list(lines) if lines is not None else []
        self.position = 0
        self.transcript = []

    @classmethod
    def from_text(cls, text):
        return cls(text.splitlines())

    @property
    def remaining(self):
        return len(self.lines) - self.position

    def print(self, text=''):
        self.transcript.extend(str(text).split('\n'))

    def read(self, prompt=''):
        if self.position >= len(self.lines):
            self.transcript.append(prompt)
            raise ScriptExhausted('No scripted input left at prompt %r' % prompt)
        line = self.lines[self.position]
        self.position = self.position + 1
        self.transcript.append(prompt + line)
        if line == INTERRUPT:
            raise KeyboardInterrupt
        return line

    def text(self):
        return '\n'.join(self.transcript) + '\n'


def mode_loop(session, prompt, commands, mode, start=None):
    '''
    Read-dispatch loop of one mode.

    :param session: the shared Session

    :param prompt: prompt string of the mode, e.g. "edm>>"

    :param commands: {keyword: handler(session)}

    :param mode: mode name recorded in the session's transition log

    :param start: optional handler(session) run once on entry
    '''
    io = session.io
    session.enter(mode)
    try:
        if start is not None:
            try:
                start(session)
            except KeyboardInterrupt:
                return
        while True:
            try:
                line = io.read(prompt)
            except KeyboardInterrupt:
                return
            command = line.strip()
            if not command:
                continue
            if command == 'back':
                return
            handler = commands.get(command)
            if handler is None:
                io.print('Unknown command')
                continue
            try:
                handler(session)
            except (ScriptExhausted, EOFError):
                raise
            except KeyboardInterrupt:
                return
            except Exception as err:
                logger.debug('%s command %r failed', mode, command, exc_info=True)
                io.print('Error: %s' % err)
    finally:
        session.leave(mode)
