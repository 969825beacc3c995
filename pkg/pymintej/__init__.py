from .seqbuffer import *
from .minilang import *
from .interp import *
from .console import *
from .editor import *
from .fms import *
from .exe import *
from .debugger import *
from .syntaxdb import *
from .miscellaneous import *
from .shell import *
