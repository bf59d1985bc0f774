from .matrix import *
from .impulse import *
from .norms import *
from .statespace import *
