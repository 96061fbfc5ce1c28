# flake8: noqa

from ._base import *
from .qures import *
from .wres import *
from .qpc import *
from .translate import *
from ._format import *
