from .polynomial import *
from .rational import *
