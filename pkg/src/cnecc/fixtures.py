"""Built-in networks and source codes used as the worked-example corpus:
the modified butterfly over F_2 and the 4-choose-2 combination network
over F_3, plus the three butterfly simulation codes and the ternary
double-error code.
"""

from __future__ import annotations

from importlib import resources

from .convcode import GeneratorMatrix
from .galois import GF
from .netgraph import parse_network

BUILTIN_NETWORKS = ("butterfly", "comb4c2")

# name -> (field characteristic, generator text)
BUILTIN_CODES = {
    "c1": (2, "1+z, 1"),
    "c2": (2, "1+z^2, 1+z+z^2"),
    "c3": (2, "1+z+z^4, 1+z^2+z^3+z^4"),
    "ternary9": (3, "1+z^2+z^4+z^5, 2+z+2*z^2+2*z^4+z^5"),
}


def network_text(name: str) -> str:
    if name not in BUILTIN_NETWORKS:
        raise KeyError(f"unknown built-in network {name!r}")
    return resources.files("cnecc.data").joinpath(f"{name}.net").read_text()


def load_builtin_network(name: str):
    return parse_network(network_text(name), name=f"builtin:{name}")


def load_builtin_code(name: str) -> GeneratorMatrix:
    if name not in BUILTIN_CODES:
        raise KeyError(f"unknown built-in code {name!r}")
    p, text = BUILTIN_CODES[name]
    return GeneratorMatrix.parse(GF(p), text)
