from .policy import *
from .flow import *
from .basin import *
