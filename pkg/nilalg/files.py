"""
JSON algebra files.

A file is one object with integer-only values: "p", "n" and either
"structure" (nested n x n x n list) or "family" ("rank1" with a "matrix",
or "chain"). Both forms may be present; the tensor then has to match the
family.
"""

import json

import numpy as np

from fpcore.matrices import FpMatrix

from .algebra import NilpotentAlgebra
from .families import FAMILY_CHAIN, FAMILY_RANK1, chain_algebra, rank1_algebra


class AlgebraFileError(Exception):
    """A file that cannot be read or parsed. `location` says where."""

    def __init__(self, message, location="$"):
        super().__init__(f"{location}: {message}")
        self.location = location


def _integer(doc, key, location="$"):
    if key not in doc:
        raise AlgebraFileError(f"missing key {key!r}", location)
    value = doc[key]
    if not isinstance(value, int) or isinstance(value, bool):
        raise AlgebraFileError(
            f"expected an integer, got {value!r}", f"{location}.{key}"
        )
    return value


def _integer_array(value, shape, location):
    """Check a nested list of integers against `shape` element by element."""
    if len(shape) == 0:
        if not isinstance(value, int) or isinstance(value, bool):
            raise AlgebraFileError(f"expected an integer, got {value!r}", location)
        return
    if not isinstance(value, list) or len(value) != shape[0]:
        raise AlgebraFileError(f"expected a list of length {shape[0]}", location)
    for index, item in enumerate(value):
        _integer_array(item, shape[1:], f"{location}[{index}]")


def parse_document(doc):
    """Build the algebra a decoded JSON document describes."""
    if not isinstance(doc, dict):
        raise AlgebraFileError("expected a JSON object")
    p = _integer(doc, "p")
    n = _integer(doc, "n")
    if n < 1:
        raise AlgebraFileError("n must be positive", "$.n")
    family = doc.get("family")
    if family == FAMILY_RANK1:
        if "matrix" not in doc:
            raise AlgebraFileError("rank1 files need a 'matrix'")
        _integer_array(doc["matrix"], (n, n), "$.matrix")
        algebra = rank1_algebra(FpMatrix(doc["matrix"], p), n)
    elif family == FAMILY_CHAIN:
        algebra = chain_algebra(n, p)
    elif family is None:
        if "structure" not in doc:
            raise AlgebraFileError("expected 'structure' or 'family'")
        _integer_array(doc["structure"], (n, n, n), "$.structure")
        return NilpotentAlgebra(doc["structure"], p)
    else:
        raise AlgebraFileError(f"unknown family {family!r}", "$.family")
    if "structure" in doc:
        _integer_array(doc["structure"], (n, n, n), "$.structure")
        if not np.array_equal(np.array(doc["structure"]) % p, algebra.structure):
            raise AlgebraFileError(
                f"structure does not match the {family} family", "$.structure"
            )
    return algebra


def load_algebra(path):
    try:
        with open(path, encoding="utf-8") as handle:
            doc = json.load(handle)
    except OSError as e:
        raise AlgebraFileError(f"cannot read {path}: {e.strerror}") from e
    except UnicodeDecodeError as e:
        raise AlgebraFileError(f"not UTF-8 text: {e.reason}", f"byte {e.start}") from e
    except json.JSONDecodeError as e:
        raise AlgebraFileError(
            e.msg, f"line {e.lineno} column {e.colno}"
        ) from e
    return parse_document(doc)


def dump_document(algebra):
    doc = {"p": algebra.p, "n": algebra.n}
    if algebra.family_tag == FAMILY_RANK1:
        doc["family"] = FAMILY_RANK1
        doc["matrix"] = algebra.family[1].to_list()
    elif algebra.family_tag == FAMILY_CHAIN:
        doc["family"] = FAMILY_CHAIN
    doc["structure"] = algebra.structure.tolist()
    return doc


def write_algebra(algebra, path):
    with open(path, "w") as handle:
        json.dump(dump_document(algebra), handle)
        handle.write("\n")
