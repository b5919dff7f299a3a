import random

import pytest

from cnecc.fixtures import load_builtin_network
from cnecc.galois import GF, Poly, PolyMatrix
from cnecc.netgraph import (
    CycleError,
    NetworkFormatError,
    NetworkGraph,
    compute_transfer,
    instantaneous_transfer,
    parse_network,
    random_network_code,
)

F2 = GF(2)
F3 = GF(3)


def butterfly():
    return load_builtin_network("butterfly")


def comb4c2():
    return load_builtin_network("comb4c2")


class TestGraph:
    def test_butterfly_shape(self):
        g, code = butterfly()
        assert g.num_edges == 10
        assert g.min_cut() == (2, {"t1": 2, "t2": 2})
        assert code.n == 2

    def test_trivial_single_edge(self):
        g = NetworkGraph([("e1", "s", "t")], "s", ["t"])
        assert g.min_cut() == (1, {"t": 1})

    def test_parallel_edges(self):
        g = NetworkGraph([("e1", "s", "t"), ("e2", "s", "t")], "s", ["t"])
        assert g.min_cut() == (2, {"t": 2})

    def test_comb4c2_min_cut(self):
        g, _ = comb4c2()
        n, per_sink = g.min_cut()
        assert n == 2 and set(per_sink.values()) == {2}

    def test_inconsistent_declaration_resorted(self):
        # e2 feeds e1 but is declared after it; loader re-sorts ancestrally.
        g = NetworkGraph(
            [("e1", "v", "t"), ("e2", "s", "v")], "s", ["t"]
        )
        assert [e.id for e in g.edges] == ["e2", "e1"]

    def test_cycle_rejected(self):
        with pytest.raises(CycleError):
            NetworkGraph(
                [("e1", "s", "a"), ("e2", "a", "b"), ("e3", "b", "a"), ("e4", "a", "t")],
                "s",
                ["t"],
            )

    def test_unreachable_sink(self):
        g = NetworkGraph([("e1", "s", "a"), ("e2", "b", "t")], "s", ["t"])
        with pytest.raises(NetworkFormatError):
            g.min_cut()

    def test_source_with_incoming_rejected(self):
        with pytest.raises(NetworkFormatError):
            NetworkGraph([("e1", "a", "s"), ("e2", "s", "t")], "s", ["t"])


class TestParser:
    def test_malformed_edge_line(self):
        with pytest.raises(NetworkFormatError):
            parse_network("edge e1 s\nsource s\nsink t\n")

    def test_kernel_on_non_adjacent_pair(self):
        text = (
            "field 2\nedge e1 s a\nedge e2 a t\nedge e3 s t\n"
            "source s\nsink t\nalpha 1 e1 1\nbeta e3 e2 1\n"
        )
        with pytest.raises(NetworkFormatError):
            parse_network(text)

    def test_graph_only_document(self):
        g, code = parse_network("edge e1 s t\nsource s\nsink t\n")
        assert code is None and g.num_edges == 1

    def test_comments_and_blank_lines(self):
        g, _ = parse_network("# header\n\nedge e1 s t  # inline\nsource s\nsink t\n")
        assert g.num_edges == 1

    def test_duplicate_edge_ids(self):
        with pytest.raises(NetworkFormatError):
            parse_network("edge e1 s a\nedge e1 a t\nsource s\nsink t\n")


class TestTransfer:
    def test_butterfly_transfer_matrices(self):
        g, code = butterfly()
        ts = compute_transfer(g, code)
        assert ts.m_sink["t1"] == PolyMatrix.parse(F2, "z, z^3; 0, z^4")
        assert ts.m_sink["t2"] == PolyMatrix.parse(F2, "z^3, 0; z^4, z")

    def test_butterfly_f_sink_columns(self):
        g, code = butterfly()
        ts = compute_transfer(g, code)
        f = ts.f_sink["t1"]
        col1 = [f[(i, 0)].to_str() for i in range(10)]
        col2 = [f[(i, 1)].to_str() for i in range(10)]
        assert col1 == ["z", "0", "0", "0", "0", "1", "0", "0", "0", "0"]
        assert col2 == ["z^3", "z^4", "z^2", "z^3", "z^2", "0", "z", "1", "0", "0"]

    def test_comb4c2_transfer_matrices(self):
        g, code = comb4c2()
        ts = compute_transfer(g, code)
        expected = {
            "t1": "z, 0; 0, z",
            "t2": "z, z; 0, z",
            "t3": "z, z; 0, 2z",
            "t4": "0, z; z, z",
            "t5": "0, z; z, 2z",
            "t6": "z, z; z, 2z",
        }
        for t, text in expected.items():
            assert ts.m_sink[t] == PolyMatrix.parse(F3, text)

    def test_geometric_series_inverts_i_minus_zk(self):
        g, code = butterfly()
        ts = compute_transfer(g, code)
        ne = g.num_edges
        z = Poly.z(F2)
        zero, one = Poly.zero(F2), Poly.one(F2)
        k_entries = [[zero] * ne for _ in range(ne)]
        for (a, b), v in code.beta.items():
            if v:
                k_entries[g.edge_index[a]][g.edge_index[b]] = Poly.const(F2, v) * z
        i_minus_zk = PolyMatrix(
            [
                [
                    (one if i == j else zero) - k_entries[i][j]
                    for j in range(ne)
                ]
                for i in range(ne)
            ]
        )
        assert i_minus_zk @ ts.f == PolyMatrix.identity(F2, ne)

    def test_k_is_nilpotent_under_ancestral_order(self):
        g, code = butterfly()
        from cnecc.galois import ff_matmul

        ne = g.num_edges
        k = [[0] * ne for _ in range(ne)]
        for (a, b), v in code.beta.items():
            k[g.edge_index[a]][g.edge_index[b]] = v
        assert all(k[i][j] == 0 for i in range(ne) for j in range(i + 1))
        power = tuple(tuple(row) for row in k)
        for _ in range(ne - 1):
            power = ff_matmul(F2, power, k)
        assert all(v == 0 for row in power for v in row)

    def test_delay_spread(self):
        g, code = butterfly()
        ts = compute_transfer(g, code)
        assert ts.t_delay == 5
        for t in g.sinks:
            assert ts.f_sink[t].max_degree() <= ts.t_delay - 1
        g2, code2 = comb4c2()
        assert compute_transfer(g2, code2).t_delay == 2

    def test_substitution_matches_instantaneous(self):
        for loader in (butterfly, comb4c2):
            g, code = loader()
            ts = compute_transfer(g, code)
            inst, _ = instantaneous_transfer(g, code)
            for t in g.sinks:
                assert ts.m_sink[t].subst(1) == inst[t]

    def test_singular_code_rejected(self):
        # Zeroing the source kernel on e1 collapses the first input.
        g, code = butterfly()
        code.alpha[(0, "e1")] = 0
        from cnecc.netgraph import SingularTransferError

        with pytest.raises(SingularTransferError):
            compute_transfer(g, code)

    def test_default_sink_selection_is_ancestral_identity(self):
        g, code = butterfly()
        sel = code.sink_selection(g, "t1")
        assert sel == {("e6", 0): 1, ("e8", 1): 1}


class TestRandomCode:
    def test_deterministic_given_seed(self):
        g, _ = butterfly()
        a = random_network_code(g, 2, F3, seed=9)
        b = random_network_code(g, 2, F3, seed=9)
        assert a.alpha == b.alpha and a.beta == b.beta

    def test_small_field_exhausts_tries(self):
        # Over F_2 almost no kernel draw is simultaneously valid at both
        # sinks, so a tiny try budget must report exhaustion.
        g, _ = butterfly()
        with pytest.raises(ValueError, match="tries"):
            random_network_code(g, 2, F2, seed=0, max_tries=3)

    def test_dimension_above_min_cut_rejected(self):
        g, _ = butterfly()
        with pytest.raises(NetworkFormatError):
            random_network_code(g, 3, F2, seed=1)

    def test_accepted_codes_stay_full_rank_with_delay(self):
        # Acceptance on the delay-free network suffices for the unit-delay
        # network; re-check the rank over F_q(z) directly on 100 draws.
        g, _ = butterfly()
        for seed in range(100):
            code = random_network_code(g, 2, F3, seed=seed)
            ts = compute_transfer(g, code, require_full_rank=False)
            for t in g.sinks:
                assert ts.m_sink[t].rank() == 2
