"""Polytropes, bipartite-tree matroids and dual matroid subdivisions of hypersimplices."""
from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.0.0"

__all__ = ["biconvex", "bipartite", "cli", "errors", "linalg", "matroid", "polytope", "subdivision", "subsets", "tropical"]
