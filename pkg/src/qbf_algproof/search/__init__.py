# flake8: noqa

from .linalg import *
from .simplex import *
from ._base import *
