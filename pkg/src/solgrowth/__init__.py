"""Growth-series machinery for Sol torus-bundle groups."""

from .errors import ResourceLimitError
from .laurent import (Decomposition, LaurentPoly, XElement, decompose, div_rem_phi, divides_phi,
                      parse_poly, phi, x_size)
from .solgroup import (GroupElement, GroupParams, compose, equal_words, eval_word,
                       geodesic_length, geodesic_word, invert, to_group_element)

__version__ = "0.1.0"
