from .program import *
from .simulate import *
from .traces import *
from .builders import *
