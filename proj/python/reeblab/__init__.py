"""Flow-equation laboratory on symplectizations of contact manifolds."""

try:
    from ._reeblab import *  # noqa: F401,F403  (installed package layout)
    from ._reeblab import __doc__  # noqa: F401
except ImportError:  # in-tree build: the extension sits on PYTHONPATH
    from _reeblab import *  # noqa: F401,F403
    from _reeblab import __doc__  # noqa: F401
