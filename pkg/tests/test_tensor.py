import itertools
import random
from fractions import Fraction

import pytest

from vassiliev.series import TruncatedSeries
from vassiliev.tensor import (
    ContractionNetwork,
    ContractionPlan,
    SparseTensor,
    TensorError,
    even_parities,
    execute,
    identity_tensor,
    plan,
    symmetrize,
    tensor_merge,
)


def delta(n):
    return identity_tensor(n)


def random_tensor(rng, shape, variance, parities, density=0.5, series_order=None):
    """Random parity-even tensor (the engine's contraction domain)."""
    entries = {}
    for idx in itertools.product(*(range(e) for e in shape)):
        if sum(parities[k][idx[k]] for k in range(len(idx))) % 2:
            continue
        if rng.random() < density:
            val = Fraction(rng.randint(-4, 4))
            if series_order is not None:
                coeffs = [Fraction(rng.randint(-2, 2)) for _ in range(series_order + 1)]
                val = TruncatedSeries(tuple(coeffs))
            if val:
                entries[idx] = val
    return SparseTensor.make(shape, variance, parities, entries)


def random_network(rng, n_nodes, series_order=None):
    """Random connected-ish network with mixed parities."""
    nodes = []
    axes = []  # (node, axis, variance, extent, parity)
    for i in range(n_nodes):
        rank = rng.randint(1, 3)
        shape = tuple(rng.choice([2, 3]) for _ in range(rank))
        variance = tuple(rng.choice("ud") for _ in range(rank))
        parities = tuple(
            tuple(rng.randint(0, 1) for _ in range(e)) for e in shape
        )
        t = random_tensor(rng, shape, variance, parities, series_order=series_order)
        nodes.append(t)
        for ax in range(rank):
            axes.append((i, ax))
    rng.shuffle(axes)
    pairings = []
    used = set()
    for (i, ai) in axes:
        if (i, ai) in used:
            continue
        a = nodes[i]
        for (j, aj) in axes:
            if (j, aj) in used or (j, aj) == (i, ai):
                continue
            b = nodes[j]
            if (
                a.shape[ai] == b.shape[aj]
                and a.parities[ai] == b.parities[aj]
                and {a.variance[ai], b.variance[aj]} == {"u", "d"}
            ):
                pairings.append((i, ai, j, aj))
                used.add((i, ai))
                used.add((j, aj))
                break
    open_axes = [
        (i, ax)
        for i in range(n_nodes)
        for ax in range(nodes[i].rank)
        if (i, ax) not in used
    ]
    return ContractionNetwork(nodes, pairings, open_axes)


def random_plan(rng, n_nodes):
    alive = list(range(n_nodes))
    steps = []
    while len(alive) > 1:
        i, j = sorted(rng.sample(alive, 2))
        steps.append((i, j))
        alive.remove(j)
    return ContractionPlan(tuple(steps), tuple(0 for _ in steps))


class TestExecute:
    def test_delta_chain(self):
        net = ContractionNetwork([delta(2), delta(2)], [(0, 1, 1, 0)], [(0, 0), (1, 1)])
        out = execute(net)
        assert out == identity_tensor(2)

    def test_full_trace_of_identity(self):
        for d in (2, 5):
            net = ContractionNetwork([identity_tensor(d)], [(0, 0, 0, 1)], [])
            assert execute(net).scalar() == d

    def test_supertrace_of_identity(self):
        t = identity_tensor(3, (0, 1, 1))
        net = ContractionNetwork([t], [(0, 0, 0, 1)], [])
        assert execute(net).scalar() == -1  # superdimension 1 - 2

    def test_plan_independence_seeded(self):
        rng = random.Random(20240601)
        for trial in range(20):
            net = random_network(rng, rng.randint(2, 6))
            reference = execute(net, plan(net))
            for _ in range(3):
                p = random_plan(rng, len(net.nodes))
                assert execute(net, p) == reference, trial

    def test_plan_independence_series_scalars(self):
        rng = random.Random(77)
        for _ in range(5):
            net = random_network(rng, 3, series_order=2)
            reference = execute(net, plan(net))
            p = random_plan(rng, len(net.nodes))
            assert execute(net, p) == reference

    def test_linearity_in_each_node(self):
        rng = random.Random(5)
        shape, var = (2, 2), ("u", "d")
        par = (even_parities(2), (0, 1))
        a = random_tensor(rng, shape, var, par, density=1.0)
        b = random_tensor(rng, shape, var, par, density=1.0)
        other = random_tensor(rng, (2,), ("u",), ((0, 1),), density=1.0)
        combined = SparseTensor.make(
            shape,
            var,
            par,
            {
                k: 2 * a.entries.get(k, Fraction(0)) + 3 * b.entries.get(k, Fraction(0))
                for k in set(a.entries) | set(b.entries)
            },
        )

        def run(t):
            net = ContractionNetwork([t, other], [(0, 1, 1, 0)], [(0, 0)])
            return execute(net)

        lhs = run(combined)
        ra, rb = run(a), run(b)
        merged = {
            k: 2 * ra.entries.get(k, Fraction(0)) + 3 * rb.entries.get(k, Fraction(0))
            for k in set(ra.entries) | set(rb.entries)
        }
        assert lhs == SparseTensor.make(lhs.shape, lhs.variance, lhs.parities, merged)

    def test_extent_mismatch_rejected(self):
        net = ContractionNetwork(
            [identity_tensor(2), identity_tensor(3)], [(0, 1, 1, 0)], [(0, 0), (1, 1)]
        )
        with pytest.raises(TensorError):
            execute(net)


class TestKoszul:
    def test_double_transposition_is_identity(self):
        rng = random.Random(3)
        t = random_tensor(
            rng, (2, 2), ("u", "u"), ((0, 1), (0, 1)), density=1.0
        )
        assert t.transpose((1, 0)).transpose((1, 0)) == t

    def test_odd_swap_sign(self):
        t = SparseTensor.make(
            (2, 2), "uu", ((0, 1), (0, 1)), {(1, 1): Fraction(1), (0, 1): Fraction(1)}
        )
        flipped = t.transpose((1, 0))
        assert flipped.entries[(1, 1)] == -1  # both factors odd
        assert flipped.entries[(1, 0)] == 1   # one factor even


class TestPlan:
    def test_single_node_empty_plan(self):
        net = ContractionNetwork([identity_tensor(2)], [], [(0, 0), (0, 1)])
        assert plan(net).steps == ()

    def test_chain_two_steps(self):
        net = ContractionNetwork(
            [delta(2), delta(2), delta(2)],
            [(0, 1, 1, 0), (1, 1, 2, 0)],
            [(0, 0), (2, 1)],
        )
        assert len(plan(net).steps) == 2

    def test_greedy_no_worse_than_worst_enumerated(self):
        rng = random.Random(11)
        for _ in range(10):
            net = random_network(rng, 6)
            greedy_cost = sum(plan(net).costs)

            def all_costs(alive, pair_ext, open_prod):
                if len(alive) == 1:
                    yield 0
                    return
                for x in range(len(alive)):
                    for y in range(x + 1, len(alive)):
                        i, j = alive[x], alive[y]
                        e = pair_ext.get((min(i, j), max(i, j)), 1)
                        cost = open_prod[i] * open_prod[j] // (e * e)
                        new_alive = [k for k in alive if k != j]
                        new_open = dict(open_prod)
                        new_open[i] = cost
                        new_ext = {}
                        for (u, v), ee in pair_ext.items():
                            if {u, v} == {i, j}:
                                continue
                            uu = i if u == j else u
                            vv = i if v == j else v
                            key = (min(uu, vv), max(uu, vv))
                            new_ext[key] = new_ext.get(key, 1) * ee
                        for rest in all_costs(new_alive, new_ext, new_open):
                            yield cost + rest

            open_prod = {}
            for i, t in enumerate(net.nodes):
                prod = 1
                for e in t.shape:
                    prod *= e
                open_prod[i] = prod
            pair_ext = {}
            for i, ai, j, aj in net.pairings:
                key = (min(i, j), max(i, j))
                pair_ext[key] = pair_ext.get(key, 1) * net.nodes[i].shape[ai]
            worst = max(all_costs(list(range(len(net.nodes))), pair_ext, open_prod))
            assert greedy_cost <= worst


class TestSymmetrize:
    def test_symmetric_fixed(self):
        t = SparseTensor.make(
            (2, 2), "uu", (even_parities(2),) * 2,
            {(0, 1): Fraction(1), (1, 0): Fraction(1)},
        )
        assert symmetrize(t, [0, 1]) == t

    def test_basic_average(self):
        t = SparseTensor.make(
            (2, 2), "uu", (even_parities(2),) * 2, {(0, 1): Fraction(1)}
        )
        out = symmetrize(t, [0, 1])
        assert out.entries == {(0, 1): Fraction(1, 2), (1, 0): Fraction(1, 2)}

    def test_antisymmetric_even_killed(self):
        t = SparseTensor.make(
            (2, 2), "uu", (even_parities(2),) * 2,
            {(0, 1): Fraction(1), (1, 0): Fraction(-1)},
        )
        assert symmetrize(t, [0, 1]).entries == {}

    def test_mismatched_axes_rejected(self):
        t = SparseTensor.make(
            (2, 3), "uu", (even_parities(2), even_parities(3)), {}
        )
        with pytest.raises(TensorError):
            symmetrize(t, [0, 1])


class TestValidation:
    def test_double_contraction_rejected(self):
        net = ContractionNetwork(
            [identity_tensor(2), identity_tensor(2), identity_tensor(2)],
            [(0, 1, 1, 0), (0, 1, 2, 0)],
            [(0, 0), (1, 1), (2, 1)],
        )
        with pytest.raises(TensorError):
            net.validate()

    def test_unaccounted_axis_rejected(self):
        net = ContractionNetwork([identity_tensor(2)], [], [(0, 0)])
        with pytest.raises(TensorError):
            net.validate()

    def test_merge_variance_check(self):
        a = identity_tensor(2)
        with pytest.raises(TensorError):
            tensor_merge(a, a, [(0, 0)])  # both 'u'

    def test_odd_node_rejected(self):
        odd = SparseTensor.make((2,), "u", ((0, 1),), {(1,): Fraction(1)})
        net = ContractionNetwork([odd], [], [(0, 0)])
        with pytest.raises(TensorError, match="parity-even"):
            net.validate()
