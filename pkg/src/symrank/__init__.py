"""Rank, symmetric rank and border rank of small dense tensors."""

import os

# TRL_THREADS caps BLAS worker threads; it must be set before numpy loads.
if os.environ.get("TRL_THREADS", "").isdigit():
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(_var, os.environ["TRL_THREADS"])

from .analysis import (  # noqa: E402
    KruskalCertificate,
    RankReport,
    concise_reduce,
    k_generic,
    kruskal_certify,
    kruskal_rank,
    lemma6_structure_check,
    mu_max_srank,
    rank_a,
    unfold,
)
from .binary_cubic import CaseTrace, apply_substitution, decompose_s3f2  # noqa: E402
from .errors import *  # noqa: E402,F401,F403
from .fields import COMPLEX, GF2, GF3, GF5, RATIONAL, REAL, Field, Scalar  # noqa: E402
from .numeric import (  # noqa: E402
    BorderForm,
    EpsCurve,
    PencilVerdict,
    banach_symmetry_check,
    best_sym_rank1,
    detect_border_rank2,
    eps_curve,
    eval_eps,
    pencil_rank2_test,
)
from .oracle import (  # noqa: E402
    NotExpressible,
    brute_rank,
    brute_srank,
    census,
    profile,
    rank_search,
    theorem_sweep,
)
from .tensor import Decomposition, RankOneTerm, SymTensor, Tensor, rank_one, sym_power, symmetrize  # noqa: E402
