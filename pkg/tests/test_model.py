import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gcbm.combinatorics import PartitionPerturbation, count_distinctive_homogeneity
from gcbm.errors import DomainError
from gcbm.limits import linear_normalizer
from gcbm.model import (
    Hyperedge,
    LabelVector,
    MeasurementKind,
    MeasurementSet,
    ModelParams,
    format_measurements,
    hamming_objective,
    measure,
    parse_measurements,
    read_measurements,
    recovery_success,
    sample_measurements,
    write_measurements,
)

H, P = MeasurementKind.HOMOGENEITY, MeasurementKind.PARITY
bits = st.lists(st.integers(0, 1), min_size=2, max_size=10)


def test_measure_examples():
    assert measure("h", (0, 0, 0)) == 1
    assert measure("p", (1, 0, 1)) == 0
    assert measure("h", (0, 1, 0, 0)) == 0


@pytest.mark.parametrize("values", [(), (1,)])
def test_measure_rejects_short_input(values):
    with pytest.raises(DomainError):
        measure("p", values)


@given(bits)
def test_homogeneity_is_complement_invariant(v):
    assert measure(H, v) == measure(H, [1 - b for b in v])


@given(bits)
def test_parity_complement_flips_by_length(v):
    assert measure(P, v) ^ measure(P, [1 - b for b in v]) == len(v) % 2


@given(st.lists(st.integers(0, 1), min_size=1, max_size=40))
def test_label_vector_algebra(v):
    x = LabelVector(v)
    assert x.complement().complement() == x
    assert (x ^ x) == LabelVector.zeros(len(v))
    assert LabelVector.from_string(x.to_string()) == x
    assert x.complement().weight() == len(v) - x.weight()


def test_label_vector_rejects_non_binary():
    with pytest.raises(DomainError):
        LabelVector([0, 2])


def test_hyperedge_is_canonical():
    assert Hyperedge.canonical([3, 1, 2]) == Hyperedge([1, 2, 3])
    with pytest.raises(DomainError):
        Hyperedge([2, 1])
    with pytest.raises(DomainError):
        Hyperedge([1, 1])


@pytest.mark.parametrize(
    "args",
    [(4, 1, 0.5, 0.0, "h"), (4, 5, 0.5, 0.0, "h"), (4, 2, 1.5, 0.0, "h"), (4, 2, 0.5, 0.5, "p")],
)
def test_model_params_validation(args):
    with pytest.raises(DomainError):
        ModelParams(*args)


def test_sample_p_zero_is_empty():
    ms = sample_measurements(ModelParams(10, 3, 0.0, 0.2, "h"), LabelVector.zeros(10), seed=1)
    assert len(ms) == 0


def test_sample_full_noiseless_parity():
    truth = LabelVector([0, 0, 1, 1])
    ms = sample_measurements(ModelParams(4, 2, 1.0, 0.0, "p"), truth, seed=0)
    assert len(ms) == 6
    got = {tuple(e): y for e, y in ms}
    assert got[(1, 2)] == 1 and got[(0, 1)] == 0 and got[(2, 3)] == 0
    assert got[(1, 3)] == 1


def test_sample_size_concentrates_large_n():
    n, d = 1000, 4
    target = 1.1 * linear_normalizer(n, d)
    p = target / math.comb(n, d)
    params = ModelParams(n, d, p, 0.0, "p")
    sizes = [len(sample_measurements(params, LabelVector.zeros(n), seed=s)) for s in range(50)]
    assert abs(np.mean(sizes) - 1.1 * n * math.log(n) / d) < 0.05 * target
    # mean within 3 standard errors of p C(n, d)
    assert abs(np.mean(sizes) - target) < 3 * math.sqrt(target / 50)


def test_sample_edges_distinct_and_canonical():
    params = ModelParams(300, 5, 2000 / math.comb(300, 5), 0.1, "h")
    ms = sample_measurements(params, LabelVector.zeros(300), seed=4)
    e = ms.edges
    assert np.all(np.diff(e, axis=1) > 0)
    assert len(np.unique(e, axis=0)) == len(e)
    assert e.max() < 300


@settings(max_examples=25, deadline=None)
@given(st.integers(4, 30), st.integers(2, 4), st.floats(0.0, 1.0), st.integers(0, 2**32))
def test_sampling_is_deterministic(n, d, p, seed):
    if d > n:
        return
    params = ModelParams(n, d, p, 0.2, "p")
    truth = LabelVector.random(n, np.random.default_rng(seed))
    assert sample_measurements(params, truth, seed) == sample_measurements(params, truth, seed)


def test_noise_does_not_change_edge_set():
    truth = LabelVector.random(50, np.random.default_rng(0))
    a = sample_measurements(ModelParams(50, 3, 0.05, 0.0, "h"), truth, 11)
    b = sample_measurements(ModelParams(50, 3, 0.05, 0.3, "h"), truth, 11)
    assert np.array_equal(a.edges, b.edges)


def test_hamming_objective_counts_noise_only():
    truth = LabelVector.random(40, np.random.default_rng(1))
    ms = sample_measurements(ModelParams(40, 3, 0.1, 0.0, "h"), truth, 3)
    assert hamming_objective(ms, truth) == 0


@pytest.mark.parametrize("d", [2, 3, 4])
def test_parity_objective_of_complement(d):
    truth = LabelVector.random(12, np.random.default_rng(d))
    ms = sample_measurements(ModelParams(12, d, 0.5, 0.0, "p"), truth, 5)
    expected = 0 if d % 2 == 0 else len(ms)
    assert hamming_objective(ms, truth.complement()) == expected


def test_objective_matches_distinctive_count():
    truth = LabelVector([0, 0, 0, 1, 1, 1])
    cand = LabelVector([1, 0, 0, 1, 1, 1])
    ms = sample_measurements(ModelParams(6, 3, 1.0, 0.0, "h"), truth, 0)
    brute = sum(measure(H, [truth[v] for v in e]) != measure(H, [cand[v] for v in e]) for e in combinations(range(6), 3))
    assert hamming_objective(ms, cand) == brute
    assert hamming_objective(ms, cand) == count_distinctive_homogeneity(PartitionPerturbation(6, 3, 3, 1, 0))


def test_recovery_success_examples():
    t = LabelVector([0, 1, 1, 0, 1])
    assert recovery_success("h", 3, t, t)
    assert recovery_success("h", 3, t, t.complement())
    assert not recovery_success("p", 3, t, t.complement())
    assert recovery_success("p", 4, t, t.complement())
    assert not recovery_success("h", 3, t, t.flip(0))


def test_measurement_set_rejects_duplicates():
    params = ModelParams(5, 2, 0.5, 0.0, "p")
    with pytest.raises(DomainError):
        MeasurementSet.from_pairs(params, [((0, 1), 0), ((0, 1), 1)])
    with pytest.raises(DomainError):
        MeasurementSet.from_pairs(params, [((0, 5), 0)])


@settings(max_examples=30, deadline=None)
@given(st.integers(4, 20), st.integers(2, 4), st.floats(0.0, 1.0), st.floats(0.0, 0.49), st.sampled_from("hp"), st.integers(0, 2**63))
def test_serialization_round_trip(n, d, p, theta, kind, seed):
    params = ModelParams(n, d, p, theta, kind)
    ms = sample_measurements(params, LabelVector.random(n, np.random.default_rng(seed)), seed)
    back = parse_measurements(format_measurements(ms))
    assert back == ms
    assert back.params == ms.params and back.seed == ms.seed


def test_file_round_trip(tmp_path):
    ms = sample_measurements(ModelParams(10, 3, 0.3, 0.1, "h"), LabelVector.zeros(10), 2)
    path = tmp_path / "m.txt"
    write_measurements(ms, path)
    assert path.read_text().splitlines()[0].startswith("gcbm v1 n=10 d=3 ")
    assert read_measurements(path) == ms


def test_parse_rejects_bad_header():
    with pytest.raises(DomainError):
        parse_measurements("gcbm v2 n=3 d=2\n")
