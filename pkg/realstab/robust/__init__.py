from .perturbation import *
from .additive import *
from .sweep import *
from .iop import *
from .sls import *
from .youla import *
