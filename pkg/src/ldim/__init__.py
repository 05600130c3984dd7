"""Local realisers, Crespelle codes and exact dimension oracles for finite posets."""

from .codec import Codeword, Tag, crespelle_decode, crespelle_encode
from .constructions import (
    BipartiteGraph,
    Embedding,
    bipartite_realiser,
    default_bipartite_graph,
    divisibility_embedding,
    far_layers_realiser,
    hypercube_graph_union,
    lex_realiser_add,
    lex_realiser_subst,
    shift_embedding_12,
    shift_embedding_up,
    verify_embedding,
)
from .errors import Exceeded, LdimError
from .exact import SearchBudget, exact_dim, exact_ldim, exact_twodim
from .experiments import bound_table, entropy, run_experiment
from .order import (
    LayerPoset,
    Poset,
    boolean_layer_poset,
    divisibility_poset,
    dual,
    is_partial_linear_extension,
    lex_sum,
    make_poset,
    requirements,
)
from .realiser import LocalRealiser, VerificationReport, verify_local_realiser

__version__ = "0.1.0"
