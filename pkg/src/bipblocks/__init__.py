"""Exact combinatorics of bipartitions: blocks, weights, crystals,
hook-pair valuations and decomposition matrices."""

from .core import Params, Partition, Bipartition, Node, RimHook

__all__ = ["Params", "Partition", "Bipartition", "Node", "RimHook"]
