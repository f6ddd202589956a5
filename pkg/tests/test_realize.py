import random
from fractions import Fraction as F

import pytest

from rainbowpath import realize as R
from rainbowpath.model import ClusteredGraph, densities, extremal
from tests.conftest import brute_force_rainbow_exists, random_system


class TestBlowUp:
    def test_full_pair_k2(self):
        system = R.blow_up(ClusteredGraph(2, {(1, 2): 1}), 10)
        assert R.edge_counts(system) == (45, 45)
        assert system.edges[0] == system.edges[1]

    def test_pairs_k3_counts_and_soundness(self):
        system = R.blow_up(extremal(3, "pairs"), 60)
        assert R.edge_counts(system) == (870, 435, 435)
        assert R.find_rainbow(system, 3, "path") is None
        assert R.find_rainbow(system, 3, "walk") is None

    def test_star_k7_example_counts(self):
        system = R.blow_up(extremal(7, "star"), 130)
        assert R.edge_counts(system) == (645,) * 7
        der = densities(extremal(7, "star"))
        for i, count in enumerate(R.edge_counts(system)):
            assert abs(count - float(der.d[i]) * 130 * 130 / 2) <= 3 * 130

    def test_apportionment(self):
        assert R.apportion([F(1, 3)] * 3, 10) == [4, 3, 3]
        assert R.apportion([F(1, 2), F(1, 2)], 7) == [4, 3]
        assert sum(R.apportion([F(5, 9), F(3, 9), F(1, 9)], 200)) == 200

    def test_too_few_vertices(self):
        with pytest.raises(ValueError):
            R.blow_up(extremal(6, "pairs"), 2)

    def test_count_fidelity_random_n(self):
        for k, fam in ((4, "pairs"), (5, "star"), (8, "star")):
            g = extremal(k, fam)
            der = densities(g)
            for n in (37, 73, 118):
                counts = R.edge_counts(R.blow_up(g, n))
                for i in range(k):
                    assert abs(counts[i] - float(der.d[i]) * n * n / 2) <= 3 * n


class TestFindRainbow:
    def test_three_edge_path_is_whole_graph(self):
        system = R.ColoredGraphSystem(
            4, 3, (frozenset({(1, 2)}), frozenset({(2, 3)}), frozenset({(3, 4)})))
        w = R.find_rainbow(system, 3, "path")
        assert w.vertices == (1, 2, 3, 4) and w.colors == (1, 2, 3)

    def test_triangle_walk_but_no_path(self):
        tri = R.ColoredGraphSystem(3, 3, (frozenset({(1, 2), (2, 3), (1, 3)}),) * 3)
        assert R.find_rainbow(tri, 3, "path") is None
        walk = R.find_rainbow(tri, 3, "walk")
        assert walk is not None and walk.check(tri)

    def test_nonbacktracking_variant(self):
        tri = R.ColoredGraphSystem(3, 3, (frozenset({(1, 2), (2, 3), (1, 3)}),) * 3)
        w = R.find_rainbow(tri, 3, "walk", nonbacktracking=True)
        assert w is not None
        vs = w.vertices
        assert all(vs[t] != vs[t + 2] for t in range(len(vs) - 2))

    def test_more_slots_than_colors(self):
        system = R.ColoredGraphSystem(4, 2, (frozenset({(1, 2)}), frozenset({(2, 3)})))
        assert R.find_rainbow(system, 3, "path") is None

    def test_length_guard(self):
        system = R.ColoredGraphSystem(4, 2, (frozenset({(1, 2)}), frozenset({(2, 3)})))
        with pytest.raises(ValueError):
            R.find_rainbow(system, 7, "path")
        assert R.find_rainbow(system, 7, "path", allow_long=True) is None

    def test_extremal_blowups_clean(self):
        for k in (3, 4, 5, 6, 7):
            for fam in ("pairs", "star"):
                if fam not in ("pairs",) and k not in (5, 7):
                    continue
                if fam == "pairs" and k > 6:
                    continue
                system = R.blow_up(extremal(k, fam), 50)
                assert R.find_rainbow(system, 3, "path") is None
                assert R.find_rainbow(system, 3, "walk") is None

    def test_lexicographic_first_direct(self):
        edges1 = frozenset({(1, 2), (3, 4)})
        edges2 = frozenset({(2, 3), (4, 5)})
        edges3 = frozenset({(3, 4), (5, 6)})
        system = R.ColoredGraphSystem(6, 3, (edges1, edges2, edges3))
        w = R.find_rainbow(system, 3, "path", strategy="direct")
        assert w.vertices == (1, 2, 3, 4)      # canonical: v0 < vL


class TestOracleEquivalence:
    @pytest.mark.parametrize("kind,nb", [("path", False), ("walk", False), ("walk", True)])
    def test_matches_brute_force(self, kind, nb):
        rnd = random.Random(515)
        for trial in range(120):
            system = random_system(rnd)
            length = rnd.choice((2, 3))
            expected = brute_force_rainbow_exists(system, length, kind, nb)
            for strategy in ("direct", "cluster"):
                w = R.find_rainbow(system, length, kind, nonbacktracking=nb,
                                   strategy=strategy)
                assert (w is not None) == expected, (trial, strategy, system)
                if w is not None:
                    assert w.check(system)

    def test_witness_monotone_under_edge_addition(self):
        rnd = random.Random(99)
        added = 0
        for _ in range(60):
            system = random_system(rnd, max_n=7, max_k=3)
            if R.find_rainbow(system, 3, "path") is None:
                continue
            u, v = sorted(rnd.sample(range(1, system.n + 1), 2))
            c = rnd.randint(1, system.k)
            bigger = system.with_edge(c, u, v)
            assert R.find_rainbow(bigger, 3, "path") is not None
            added += 1
        assert added > 0

    def test_workers_agree(self):
        rnd = random.Random(7)
        system = random_system(rnd, max_n=8, max_k=4, density=0.4)
        w1 = R.find_rainbow(system, 3, "path", strategy="direct", workers=1)
        w2 = R.find_rainbow(system, 3, "path", strategy="direct", workers=3)
        assert (w1 is None) == (w2 is None)
        if w1 is not None:
            assert w1.vertices == w2.vertices


class TestTwinClasses:
    def test_blowup_classes_match_clusters(self):
        g = extremal(5, "star")
        system = R.blow_up(g, 100)
        classes = R._twin_classes(system)
        assert len(classes) == 6              # five a-clusters plus the x-cluster

    def test_classes_partition(self):
        rnd = random.Random(123)
        system = random_system(rnd, max_n=8, max_k=3)
        classes = R._twin_classes(system)
        seen = sorted(v for cl in classes for v in cl)
        assert seen == list(range(1, system.n + 1))


class TestSaturation:
    def test_terminates_with_witness(self):
        rep = R.saturation_experiment(3, 24, seed=1)
        assert rep.edges_added >= 1
        assert rep.witness.kind == "path"
        assert len(rep.densities) == 3

    def test_small_k_refused(self):
        with pytest.raises(ValueError):
            R.saturation_experiment(2, 30, seed=1)
        with pytest.raises(ValueError):
            R.saturation_experiment(3, 10, seed=1)

    def test_deterministic(self):
        a = R.saturation_experiment(4, 28, seed=5)
        b = R.saturation_experiment(4, 28, seed=5)
        assert a.edges_added == b.edges_added and a.witness == b.witness

    def test_stop_density_band(self):
        # stopping min-density stays near or above the threshold (sanity band)
        from rainbowpath.model import f
        reps = [R.saturation_experiment(5, 60, seed=s) for s in range(6)]
        assert min(min(r.densities) for r in reps) > float(f(5)) - 0.05


class TestEdgeListFormat:
    def test_round_trip(self, tmp_path):
        system = R.blow_up(extremal(4, "pairs"), 20)
        path = tmp_path / "sys.txt"
        R.write_system(system, path)
        assert R.read_system(path) == system

    def test_rejects_duplicates(self, tmp_path):
        path = tmp_path / "dup.txt"
        path.write_text("4 2\n1 1 2\n1 1 2\n")
        with pytest.raises(R.SystemFormatError):
            R.read_system(path)

    def test_rejects_bad_header_and_edges(self, tmp_path):
        for content in ("4\n", "4 2\n5 1 2\n", "4 2\n1 2 2\n", "4 2\n1 0 3\n",
                        "4 2\n1 3 9\n", "4 2\n1 2\n"):
            path = tmp_path / "bad.txt"
            path.write_text(content)
            with pytest.raises(R.SystemFormatError):
                R.read_system(path)

    def test_witness_format(self):
        w = R.RainbowWitness((1, 2, 3, 4), (2, 1, 3), "path")
        assert w.format() == "PATH 1 2 3 4 / 2 1 3"
