"""Search, quantitative checks and certificates for affine ping-pong."""

from .certify import (
    CertificationError,
    CertifyConfig,
    FreePairCertificate,
    LinearPairCertificate,
    certify_linear_pair,
    certify_pair,
)
from .document import (
    FORMAT_NAME,
    FORMAT_VERSION,
    RecheckReport,
    certificate_document,
    dumps,
    load_document,
    recheck,
    recheck_text,
)
from .search import (
    GeometryReport,
    exponents,
    find_general_position,
    find_hyperbolic,
    in_general_position,
    separation_select,
)
from .table import (
    DiagonalFrame,
    Inequality,
    LinearFrame,
    TableParams,
    check_norm_dilation,
    check_players,
    check_proper_table,
    linear_checks,
    master_inequality,
    schedule_params,
)

__all__ = [
    "FORMAT_NAME",
    "FORMAT_VERSION",
    "RecheckReport",
    "certificate_document",
    "dumps",
    "load_document",
    "recheck",
    "recheck_text",
    "CertificationError",
    "CertifyConfig",
    "DiagonalFrame",
    "FreePairCertificate",
    "GeometryReport",
    "Inequality",
    "LinearFrame",
    "LinearPairCertificate",
    "TableParams",
    "certify_linear_pair",
    "certify_pair",
    "check_norm_dilation",
    "check_players",
    "check_proper_table",
    "exponents",
    "find_general_position",
    "find_hyperbolic",
    "in_general_position",
    "linear_checks",
    "master_inequality",
    "schedule_params",
    "separation_select",
]
