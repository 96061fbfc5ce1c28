# flake8: noqa

from ._base import *
from ._parser import *
