import random

import numpy as np
import pytest

from cnecc import _kernels
from cnecc._kernels import viterbi_py
from cnecc.convcode import GeneratorMatrix, build_trellis
from cnecc.galois import GF, Poly

compiled = pytest.importorskip("cnecc._kernels._viterbi")

F2 = GF(2)
F3 = GF(3)


def random_generator(rng, field, k, n, max_deg):
    while True:
        rows = [
            [
                Poly(field, [rng.randrange(field.q) for _ in range(rng.randrange(1, max_deg + 2))])
                for _ in range(n)
            ]
            for _ in range(k)
        ]
        try:
            return GeneratorMatrix(field, rows)
        except ValueError:
            continue


def test_backend_reports_compiled():
    assert _kernels.backend_name() in ("compiled", "python")


@pytest.mark.parametrize("seed", range(6))
def test_compiled_matches_pure_python_bit_for_bit(seed):
    rng = random.Random(seed)
    field = rng.choice([F2, F3])
    k = rng.choice([1, 1, 2])
    gen = random_generator(rng, field, k, k + rng.choice([1, 2]), 2)
    tr = build_trellis(gen)
    npr = np.random.default_rng(seed)
    received = npr.integers(0, field.q, size=(5, 30, gen.n)).astype(np.uint8)
    ip, dp = compiled.viterbi_frames(tr.next_state, tr.outputs, received, 0)
    jp, ep = viterbi_py.viterbi_frames(tr.next_state, tr.outputs, received, 0)
    assert (ip == jp).all()
    assert (dp == ep).all()


def test_pure_python_round_trip():
    gen = GeneratorMatrix.parse(F2, "1+z^2, 1+z+z^2")
    tr = build_trellis(gen)
    blocks = [(t % 2,) for t in range(12)]
    sent = np.array(gen.encode(blocks, tail=True), dtype=np.uint8).reshape(1, -1, 2)
    idx, dist = viterbi_py.viterbi_frames(tr.next_state, tr.outputs, sent, 0)
    assert dist[0] == 0
    assert [tuple(b) for b in tr.inputs[idx[0]][:12]] == blocks
