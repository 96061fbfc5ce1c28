# flake8: noqa

from ._base import *
from .convert import *
from ._format import *
