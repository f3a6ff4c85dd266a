"""ctlab: a numerical curvature-tensor laboratory.

Computes the full curvature stack (Riemann, Ricci, Schouten, Weyl, Cotton,
Bach) and the soliton 3-tensors on coordinate charts with exact jet
differentiation, and verifies conformal transformation laws, commutation
rules and soliton integrability conditions to tight numerical tolerance.
"""

from .report import TOOL_VERSION as __version__  # noqa: F401
