"""Custom views: a few lines per type, rendered as text or markdown.

Run with ``python demos/02_moldable_views.py``.
"""

from exemplar import (
    Table,
    ViewRegistry,
    available_views,
    build_graph,
    render,
    render_to_markdown,
    render_to_text,
    run_to,
)
from exemplar.prices import demo_suite, demo_views, stages

graph = build_graph(demo_suite())
views = demo_views()

# %% Every value has a raw view for free.
status, value = run_to(graph, "prices.discountedTwice")
print(available_views(value.type_tag, views))
print(render_to_text(render(value, "raw", views)))
print()

# %% The overview explains how the total came about.
print(render_to_text(render(value, "overview", views)))
print()

# %% Adding another view is a single function. This one lists only the
# amount taken off at each step.


def savings(v):
    rows = []
    totals = [total for _, total in stages(v.payload)]
    for before, after in zip(totals, totals[1:]):
        rows.append((str(before), str(before.amount_minor - after.amount_minor)))
    return Table(("before", "saved (minor units)"), rows)


views = views.merge(ViewRegistry().register("DiscountedPrice", "savings", savings))
print(available_views(value.type_tag, views))
print(render_to_markdown(render(value, "savings", views)))
