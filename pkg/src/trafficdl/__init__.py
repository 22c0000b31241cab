"""Description-logic knowledge-base engine with a traffic danger query service."""

from .concepts import (
    And,
    AtLeast,
    AtMost,
    Atomic,
    BOTTOM,
    Bottom,
    ConceptExpr,
    DataSome,
    Exists,
    ForAll,
    HasValue,
    Not,
    NumericRange,
    OneOf,
    Or,
    RoleExpr,
    TOP,
    Top,
    conj,
    disj,
    neg,
    nnf,
    role,
)
from .errors import (
    InconsistentKB,
    KbError,
    MissingCoreEntity,
    NoExistentialFillers,
    ParseError,
    ResourceLimit,
    SourceLocation,
    StoreError,
    UnmappedName,
    UnsupportedConstruct,
)
from .kb import (
    ClassAssertion,
    DataAssertion,
    DifferentFrom,
    DisjointClasses,
    DomainAxiom,
    EquivalentClasses,
    KnowledgeBase,
    RangeAxiom,
    RoleAssertion,
    SameAs,
    SubClassOf,
    build_closure_axiom,
    is_defined_class,
    told_subsumers,
)
from .rdfxml import export_rdfxml, import_rdfxml
from .semantics import FiniteInterpretation, evaluate, exists_finite_model
from .store import (
    Store,
    load_store,
    save_store,
    synchronize,
    update_assignments,
    verify_credentials,
)
from .tableau import (
    Reasoner,
    check_numeric_range,
    instances_of,
    is_consistent,
    is_satisfiable,
    ranges_intersect,
    subsumes,
)
from .taxonomy import QueryAnswer, Taxonomy, classify, dl_query, realize
from .text_format import parse_concept, parse_text, serialize_text

__version__ = "0.1.0"
