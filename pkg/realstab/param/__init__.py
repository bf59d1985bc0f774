from .plant import *
from .riccati import *
from .coprime import *
from .youla import *
from .iop import *
from .sls import *
from .mixed import *
from .gsls import *
from .bridge import *
