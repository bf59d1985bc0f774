from .context import Tolerances, current_tolerances
from .exceptions import *
from .ratcore import *
from .tfmat import *
from .realization import *
from .param import *
from .robust import *
from .sim import *

from .__version__ import __version__
