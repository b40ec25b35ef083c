import json

import numpy as np
import pytest

from lomlab.cli import corpus_paths, load_instance, matrix_from_json
from lomlab.division import Quaternion, embed_complex, embed_quaternion
from lomlab.engine import generate_algebra


def random_similarity(rng, n, cond):
    """Random invertible matrix with the prescribed condition number."""
    a = rng.standard_normal((n, n))
    u, _, vt = np.linalg.svd(a)
    s = np.geomspace(1.0, cond, n)
    return u @ np.diag(s) @ vt


def random_quaternion(rng):
    return Quaternion(*rng.standard_normal(4))


def planted_generators(rng, kind, max_ambient=16):
    """Two generators of a full matrix algebra of the given type.

    Returns (generators, ambient_dim).  Two generic elements generate the
    whole algebra, so the span of words is all of M_n over R, C or H.
    """
    if kind == "Real":
        n = int(rng.integers(2, max_ambient + 1))
        return [rng.standard_normal((n, n)) for _ in range(2)], n
    if kind == "Complex":
        n = int(rng.integers(1, max_ambient // 2 + 1))
        gens = [embed_complex(rng.standard_normal((n, n)), rng.standard_normal((n, n)))
                for _ in range(2)]
        return gens, 2 * n
    if kind == "Quaternion":
        n = int(rng.integers(1, max_ambient // 4 + 1))
        gens = [embed_quaternion([[random_quaternion(rng) for _ in range(n)]
                                  for _ in range(n)]) for _ in range(2)]
        return gens, 4 * n
    raise ValueError(kind)


def planted_algebra(rng, kind, max_ambient=16, cond=None):
    """Full matrix algebra of the given type, optionally conjugated."""
    gens, ambient = planted_generators(rng, kind, max_ambient)
    if cond is not None:
        p = random_similarity(rng, ambient, cond)
        pinv = np.linalg.inv(p)
        gens = [p @ g @ pinv for g in gens]
    return generate_algebra(gens, include_identity=True)


def load_corpus():
    """All shipped corpus payloads, keyed by name."""
    out = {}
    for path in corpus_paths():
        payload = load_instance(path)
        out[payload["name"]] = payload
    return out


def corpus_algebra(payload):
    """Build the MatrixAlgebra described by an algebra corpus payload."""
    gens = [matrix_from_json(g) for g in payload["generators"]]
    return generate_algebra(gens, bool(payload["include_identity"]))


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


@pytest.fixture(scope="session")
def corpus_algebras(corpus):
    """Transitive corpus algebras with their expected classification."""
    out = {}
    for name, payload in corpus.items():
        if payload["kind"] != "algebra" or "error" in payload.get("expect", {}):
            continue
        out[name] = (corpus_algebra(payload), payload["expect"])
    return out
