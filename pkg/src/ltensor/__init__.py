"""Fourth-order tensor algebra over transform-based tensor-scalars.

A tensor of shape ``(n1, n2, n3, n4)`` is an ``n1 x n2`` matrix of
``(n3, n4)`` tensor-scalars.  Scalars multiply elementwise in the domain of
an invertible 2-D transform (dft2, dct2, dwt2_db4 or identity), and the
matrix-level algebra (products, SVD, QR, eigendecompositions) reduces to
ordinary linear algebra on each transform-domain slice.
"""

from .decomp import (
    EigenPair,
    LQrFactors,
    LSvdFactors,
    canonical_unique,
    eig_residual,
    householder_l_qr,
    householder_reflector,
    householder_vector,
    l_rank,
    l_svd,
    symmetric_eig,
    tensor_diagonalize,
    truncate_l_svd,
)
from .errors import (
    DefectiveSliceError,
    DimensionError,
    FormatError,
    LTensorError,
    NotPSDError,
    NotSymmetricError,
    SingularSliceError,
    SliceSVDError,
    UnsupportedSizeError,
    ZeroColumnError,
    ZeroDivisorError,
)
from .pipelines import (
    CompressionReport,
    RecognitionModel,
    classify,
    compress_sweep,
    ratio_lsvd,
    ratio_svd,
    rse_db,
    synth_lowrank,
    train_recognizer,
)
from .scalar import ts_abs, ts_inv, ts_mul, ts_sign, ts_sqrt, unity
from .tensor import (
    determinant,
    fro_norm,
    hermitian_transpose,
    identity_tensor,
    is_l_diagonal,
    is_orthogonal,
    l_product,
    mat_view,
    spectrum_norm,
    ten_view,
    tensor_inverse,
)
from .transforms import Kind, Transform, make_transform

__version__ = "0.1.0"
