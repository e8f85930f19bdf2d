"""Endomorphisms of products of two free groups: classification, fixed and
periodic subgroups, Whitehead problems and boundary dynamics."""

from .freeword import Alphabet, FreeHom, FreeWord
from .endo import EndoSpec, EndoType, PairElement, ProductEndo, validate_and_classify

__all__ = ["Alphabet", "FreeHom", "FreeWord", "EndoSpec", "EndoType", "PairElement",
           "ProductEndo", "validate_and_classify"]
__version__ = "0.1.0"
