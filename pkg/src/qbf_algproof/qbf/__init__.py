# flake8: noqa

from ._base import *
from .qdimacs import *
from .families import *
