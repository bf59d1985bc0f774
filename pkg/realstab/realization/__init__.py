from .signals import *
from .base import *
from .builders import *
