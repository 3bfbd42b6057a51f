from .util import *
from .environments import *
from .seeds import *
from .study import *
