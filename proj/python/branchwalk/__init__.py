"""Exact multitype birth-death-mutation simulation on trait graphs with
power-law mutation scaling, plus first-order asymptotic predictions."""

try:
    # wheel layout: the extension lives inside the package
    from branchwalk._branchwalk import *  # noqa: F401,F403
except ImportError:
    # in-tree build: the extension sits next to the package on sys.path
    from _branchwalk import *  # noqa: F401,F403
