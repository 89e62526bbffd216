"""Exception types shared across the toolkit."""

from __future__ import annotations


class KMetricError(Exception):
    """Base class for all toolkit errors."""


class FormatError(KMetricError):
    """Malformed input: bad matrix shape, unparsable file, too few points."""


class DuplicateLabel(KMetricError):
    def __init__(self, label: str):
        super().__init__(f"duplicate label {label!r}")
        self.label = label


class AsymmetricDistance(KMetricError):
    def __init__(self, i: int, j: int, dij, dji):
        super().__init__(f"d[{i}][{j}]={dij} != d[{j}][{i}]={dji}")
        self.indices = (i, j)


class NegativeDistance(KMetricError):
    def __init__(self, i: int, j: int, value):
        super().__init__(f"d[{i}][{j}]={value} is negative")
        self.indices = (i, j)


class ZeroOffDiagonal(KMetricError):
    def __init__(self, i: int, j: int):
        super().__init__(f"d[{i}][{j}]=0 but points {i} and {j} are distinct")
        self.indices = (i, j)


class TriangleViolation(KMetricError):
    def __init__(self, i: int, j: int, k: int, direct, detour):
        super().__init__(f"d[{i}][{k}]={direct} > d[{i}][{j}]+d[{j}][{k}]={detour}")
        self.indices = (i, j, k)


class SamePoint(KMetricError):
    def __init__(self, u: int):
        super().__init__(f"points must be distinct, got u=v={u}")
        self.index = u


class NonpositiveParameter(KMetricError):
    def __init__(self, name: str, value):
        super().__init__(f"{name}={value} must be positive")
        self.name = name
        self.value = value


class LabelCollision(KMetricError):
    def __init__(self, labels):
        shown = ", ".join(sorted(labels)[:5])
        super().__init__(f"label sets are not disjoint (shared: {shown})")
        self.labels = tuple(sorted(labels))


class DisconnectedGraph(KMetricError):
    def __init__(self, u: str, v: str):
        super().__init__(f"graph is disconnected: no path between {u!r} and {v!r}")
        self.representatives = (u, v)


class BadFamilyParams(KMetricError):
    """Family parameters outside the documented arity or range."""


class InstanceTooLarge(KMetricError):
    def __init__(self, n: int, cap: int):
        super().__init__(f"instance has {n} points, brute-force cap is {cap}")
        self.n = n
        self.cap = cap
