"""Sign k-potent sign patterns: sign arithmetic, normal forms, generators,
realizations and brute-force oracles."""

__version__ = "0.1.0"

from .cyclic_forms import (  # noqa: E402
    NotSignPotentError,
    make_P,
    make_Q,
    potence_index_cnf,
    to_cyclic_normal_form,
)
from .idem_builder import free_choices, generate_idempotent  # noqa: E402
from .kpotent_builder import block_family, generate_kpotent  # noqa: E402
from .realization import (  # noqa: E402
    allows_kpotence,
    build_realization,
    is_ppo,
    verify_realization,
)
from .reduction import expand, red  # noqa: E402
from .search import Sample, count_assignments  # noqa: E402
from .sign_algebra import (  # noqa: E402
    AMB,
    MINUS,
    PLUS,
    ZERO,
    Sign,
    SignMatrix,
    mat_mul,
    mat_pow,
    potence_index,
)
from .structure import frobenius_normal_form  # noqa: E402
