"""Iterated-integral representations of inverse binomial sums at level 8."""
from .numfield import CycloQ8, MU, I, SQRT2, ONE, ZERO, Rational
from .forms import AlgForm, Omega
from .words import Word, LinComb, XLetter, MixedLetter, TailForm, shuffle, expand_mixed, reverse_path

__version__ = "0.1.0"
