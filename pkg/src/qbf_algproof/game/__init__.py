# flake8: noqa

from ._base import *
from .compile import *
from .degree import *
from ._format import *
