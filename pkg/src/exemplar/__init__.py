"""exemplar: tests that return the examples they exercise.

Examples declare which other examples they consume, run in dependency order,
skip (rather than fail) when something upstream broke, expose moldable views,
and can be embedded live into markdown documentation.
"""

from .core import (
    ExampleDefinition,
    ExampleGraph,
    ExampleRegistry,
    ancestors,
    build_graph,
    example,
    graph_to_dot,
    inject_fault,
    register,
    topo_order,
    transitive_dependents,
)
from .docbook import Document, Embed, EmbedDirective, Issue, IssueKind, Prose
from .docbook import build_document, check_document, parse_document
from .errors import (
    CycleDetected,
    DuplicateId,
    ExemplarError,
    FilterError,
    MalformedDirective,
    ReservedViewId,
    UnknownDependency,
    UnknownId,
    UnknownView,
    UsageError,
)
from .runner import (
    ExampleValue,
    Failed,
    Passed,
    Phase,
    RunPolicy,
    RunReport,
    Runner,
    Sharing,
    Skipped,
    report_to_json,
    root_causes,
    run_all,
    run_to,
    simulate_flat_failures,
)
from .views import (
    Composite,
    KeyValue,
    ListNode,
    Table,
    Text,
    ViewRegistry,
    available_views,
    register_view,
    render,
    render_to_markdown,
    render_to_text,
)

__version__ = "0.1.0"
