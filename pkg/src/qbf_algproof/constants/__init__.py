# flake8: noqa

from ._base import *
from ._enum import *
from ._regex import *
