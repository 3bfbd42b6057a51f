from .game import *
from .gifting import *
from .coordination import *
from .graph import *
from .repeated import *
from .document import *
from .equilibrium import *
