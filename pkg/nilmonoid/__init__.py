__version__ = '0.1.0'

from .errors import *
from .config import *
from .group import *
from .functional import *
from .gaps import *
from .blocks import *
from .diophantine import *
from .smtlib import *
from .lattice import *
from .oracle import *
from .formats import *
from .plot import *
