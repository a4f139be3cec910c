"""Statistical information retrieval engine.

Indexes a text/multimedia document corpus and ranks documents with three
models (extended Boolean p-norm, binary independence, inference network),
supports query expansion and Rocchio refinement, persists queries for
reuse, and exports the concept graph as OWL.
"""

from .bim import (
    RelevanceJudgments,
    TermRelevanceStats,
    TermWeight,
    estimate_probabilities,
    rank_bim,
    term_weight,
)
from .corpus import (
    Corpus,
    Document,
    MediaType,
    Phrase,
    TokenizerConfig,
    extract_phrases,
    ingest_corpus,
    ingest_segmented,
    tokenize,
)
from .expansion import (
    ConceptCandidate,
    ExpansionResult,
    WeightedQuery,
    cooccurrence,
    expand_lca,
    lca_belief,
    rocchio_refine,
)
from .index import (
    InvertedIndex,
    Posting,
    build_index,
    doc_term_weight,
    idf,
    load_index,
    save_index,
)
from .inference_net import (
    InferenceGraph,
    LinkMatrix,
    NetNode,
    attach_query_network,
    build_document_network,
    eval_link_matrix_closed,
    eval_link_matrix_enum,
    rank_inference,
    score_inference,
)
from .ontology import (
    ConceptGraph,
    ConceptVertex,
    OwlDocument,
    concept_graph_from_inference,
    export_owl,
)
from .pnorm import (
    And,
    Or,
    Term,
    eval_and,
    eval_or,
    parse_query,
    rank_pnorm,
    score_pnorm,
)
from .query_store import PersistentQuery, QueryStore, similarity
from .service import EvalReport, evaluate

__version__ = "0.1.0"
