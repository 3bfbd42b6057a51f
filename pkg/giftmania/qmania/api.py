from .schedule import *
from .replay import *
from .qfunction import *
from .adam import *
from .agent import *
from .train import *
