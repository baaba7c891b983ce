"""Data models and errors for discrete Lagrangian systems on graphs"""

from .data_models import (
    Edge,
    TailSpec,
    Graph,
    Chain1,
    Chain0,
    FiberKind,
    Fiber,
    Variable,
    expression_variables,
    InteractionTerm,
    CoordinateLayout,
    VertexField,
    FieldConfig,
    TangentField,
    Covector,
    LagrangianSystem,
    TreeLikeTerm,
    TreeLikeSystem,
    LinearizedOperator,
    SolveResult,
    TailForm,
    ChainValued2Form,
    BoundaryForms,
    ClosednessResult,
    ScatterProblem,
    SMatrix,
    UnitarityReport,
    CheckResult,
    RunReport,
    ReportConfig,
)
from .errors import (
    LagrangianGraphError,
    InvalidGraph,
    NoPath,
    Disconnected,
    NotACycle,
    NotInSpan,
    ExpressionSyntaxError,
    UnboundVariable,
    DomainError,
    SystemInputError,
    ParseError,
    UnknownVertex,
    FiberMismatch,
    DegreeViolation,
    InvalidTerm,
    VertexNotInTerm,
    NotNormalized,
    MismatchedSystem,
    SingularJacobian,
    NoConvergence,
    NotNearestNeighbor,
    SingularSystem,
    SingularTailCoupling,
)

__all__ = [
    "Edge",
    "TailSpec",
    "Graph",
    "Chain1",
    "Chain0",
    "FiberKind",
    "Fiber",
    "Variable",
    "expression_variables",
    "InteractionTerm",
    "CoordinateLayout",
    "VertexField",
    "FieldConfig",
    "TangentField",
    "Covector",
    "LagrangianSystem",
    "TreeLikeTerm",
    "TreeLikeSystem",
    "LinearizedOperator",
    "SolveResult",
    "TailForm",
    "ChainValued2Form",
    "BoundaryForms",
    "ClosednessResult",
    "ScatterProblem",
    "SMatrix",
    "UnitarityReport",
    "CheckResult",
    "RunReport",
    "ReportConfig",
    "LagrangianGraphError",
    "InvalidGraph",
    "NoPath",
    "Disconnected",
    "NotACycle",
    "NotInSpan",
    "ExpressionSyntaxError",
    "UnboundVariable",
    "DomainError",
    "SystemInputError",
    "ParseError",
    "UnknownVertex",
    "FiberMismatch",
    "DegreeViolation",
    "InvalidTerm",
    "VertexNotInTerm",
    "NotNormalized",
    "MismatchedSystem",
    "SingularJacobian",
    "NoConvergence",
    "NotNearestNeighbor",
    "SingularSystem",
    "SingularTailCoupling",
]
