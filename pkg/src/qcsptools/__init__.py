"""Tools for positive Horn logic over finite relational structures:
model checking, theory containment, sentence entailment and q-cores."""

from .containment import (
    ContainmentVerdict,
    csp_containment,
    decide_containment,
    distinguishing_sentence,
    equivalent,
)
from .entailment import (
    build_truncation,
    decide_entailment,
    skolemize,
    solve_rel_cc_game,
)
from .errors import (
    FormatError,
    ParseError,
    QcspError,
    ResourceLimitError,
    SentenceError,
    SignatureMismatchError,
)
from .game import evaluate
from .generators import clique, generate, k1s, linear_order, path
from .hom import find_hom, find_majority_polymorphism, find_surjective_hom
from .qcore import check_idempotency_obstruction, find_qcore
from .sentences import PhSentence, parse_sentence, pretty
from .structures import (
    Signature,
    Structure,
    disjoint_union,
    power,
    product,
    substructure,
    superprodukt,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
