"""Documentation whose embedded examples are executed at build time.

Run with ``python demos/03_live_documentation.py``.
"""

from exemplar import build_document, build_graph, check_document, inject_fault, parse_document
from exemplar.prices import demo_suite, demo_views

page = """\
# Discounts

A fixed discount followed by a percentage:

```example
id: prices.discountedTwice
view: overview
```
"""

graph = build_graph(demo_suite())
views = demo_views()

# %% Building replaces each directive with the rendered view.
doc = parse_document(page)
text, issues = build_document(doc, graph, views)
print(text)
print("issues:", issues)

# %% When the code changes underneath the page, the page notices.
broken = build_graph(inject_fault(demo_suite(), "prices.discountedFixed"))
for issue in check_document(doc, broken, views):
    print(f"block {issue.block_index}: {issue.kind}: {issue.detail}")

# %% So does a page that refers to something that no longer exists.
stale = parse_document(page.replace("discountedTwice", "discountedThrice"))
print([str(i.kind) for i in check_document(stale, graph, views)])
