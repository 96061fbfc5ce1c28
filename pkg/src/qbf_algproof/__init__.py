# flake8: noqa

from .__version__ import __version__
from .exceptions import *
from .config import *
from .poly import *
from .qbf import *
from .ideal import *
from .cert import *
from .game import *
from .extract import *
from .proofs import *
from .search import *
from .pexp import *
