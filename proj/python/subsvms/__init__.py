"""Label error correction with subsampled SVM ensembles."""

from ._subsvms import *  # noqa: F401,F403
from ._subsvms import __version__, bounds  # noqa: F401
