"""Exception hierarchy shared by all exemplar modules."""

from __future__ import annotations


class ExemplarError(Exception):
    """Base class for every error raised by exemplar."""


class InvalidExampleId(ExemplarError, ValueError):
    def __init__(self, value):
        self.value = value
        super().__init__(f"invalid example id: {value!r}")


class DuplicateId(ExemplarError):
    def __init__(self, example_id: str):
        self.example_id = example_id
        super().__init__(f"example already registered: {example_id}")


class InvalidDefinition(ExemplarError, ValueError):
    pass


class UnknownDependency(ExemplarError):
    def __init__(self, example_id: str, missing: str):
        self.example_id = example_id
        self.missing = missing
        super().__init__(f"{example_id} depends on unknown example {missing}")


class CycleDetected(ExemplarError):
    def __init__(self, path: list[str]):
        self.path = list(path)
        super().__init__("dependency cycle: " + " -> ".join(self.path))


class UnknownId(ExemplarError, KeyError):
    def __init__(self, example_id: str):
        self.example_id = example_id
        super().__init__(example_id)

    def __str__(self):
        return f"unknown example: {self.example_id}"


class FilterError(ExemplarError, ValueError):
    pass


class InvalidViewId(ExemplarError, ValueError):
    pass


class ReservedViewId(InvalidViewId):
    def __init__(self, view_id: str = "raw"):
        self.view_id = view_id
        super().__init__(f"view id {view_id!r} is reserved")


class UnknownView(ExemplarError, LookupError):
    def __init__(self, type_tag: str, view_id: str):
        self.type_tag = type_tag
        self.view_id = view_id
        super().__init__(f"no view {view_id!r} for type {type_tag}")


class MalformedDirective(ExemplarError, ValueError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class UsageError(ExemplarError):
    pass
