from .aggregate import *
from .util import *
from .export import *
