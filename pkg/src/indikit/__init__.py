"""indikit: a decision-support engine.

Decision domains are described as three service tiers -- indices (period-keyed
inputs), models (formulas over indices and models) and indicators (decision
outputs with interpretation rules and a visualization mode).  A three-role
agent runtime keeps the catalog valid (Editor), computes indicator reports
(Arguer) and records every failure in an append-only anomaly log
(Supervisor).  The same engine is reachable as a library, an HTTP service and
a CLI, and ships with earned-value project-control and Turc
evapotranspiration packs.
"""

from .agents import (
    Ack,
    AgentMessage,
    AgentRole,
    AgentRuntime,
    Anomaly,
    AnomalyRecord,
    ComputeRequest,
    ComputeResponse,
    ErrorReply,
    InstallOutcome,
    InstallPack,
    InstallResponse,
    ProtocolError,
    RegisterIndex,
    RegisterIndicator,
    RegisterModel,
    ReplaceDefinition,
    SetIndexValue,
    SupervisorLog,
    collect_series,
)
from .compute import (
    EvaluationError,
    EvaluationPlan,
    IndicatorReport,
    MissingIndexValueError,
    ReportOutcome,
    UnknownIndicatorError,
    compute_indicator,
    compute_report,
    plan,
)
from .expr import (
    ArityError,
    DivisionByZeroError,
    DomainError,
    Expression,
    ExpressionError,
    ExpressionSyntaxError,
    UnboundSymbolError,
    evaluate,
    free_variables,
    parse,
    unparse,
)
from .packs import (
    IndicatorEntry,
    ModelEntry,
    Pack,
    PackFormatError,
    evm_pack,
    load_pack,
    pack_from_document,
    pack_to_document,
    save_pack,
    turc_pack,
)
from .registry import (
    Catalog,
    CycleDetectedError,
    DuplicateIdError,
    IndexDefinition,
    IndexValue,
    IndicatorDefinition,
    InterpretationRule,
    ModelDefinition,
    NonFiniteValueError,
    PeriodFormatError,
    PeriodKey,
    ServiceEntry,
    UnknownDependencyError,
    UnknownIdError,
    UnknownIndexError,
    parse_values_csv,
)
from .viz import (
    EmptySeriesError,
    GaugeBand,
    GaugeDescriptor,
    HistogramDescriptor,
    TextDescriptor,
    VisualizationDescriptor,
    descriptor_to_wire,
    interpret,
    make_descriptor,
    render_text,
)

__version__ = "0.1.0"
