import numpy as np
import pytest

from generators import blobs
from speclust import Lcg64, adjusted_rand_index, align_labels, kmeans, write_labels

MULT = 6364136223846793005
INC = 1442695040888963407
MASK = (1 << 64) - 1


def test_lcg_matches_documented_recurrence():
    state = 42
    gen = Lcg64(42)
    for _ in range(10):
        state = (MULT * state + INC) & MASK
        assert gen.next_u64() == state


def test_lcg_seed_zero_first_values():
    gen = Lcg64(0)
    assert gen.next_u64() == INC
    assert gen.next_u64() == (MULT * INC + INC) & MASK


def test_lcg_seed_wraps_to_64_bits():
    assert Lcg64(2**64 + 5).next_u64() == Lcg64(5).next_u64()


def test_lcg_float_range_and_value():
    gen = Lcg64(7)
    ref = Lcg64(7)
    for _ in range(1000):
        f = gen.next_float()
        assert 0.0 <= f < 1.0
        assert f == (ref.next_u64() >> 11) / float(1 << 53)


def test_kmeans_single_cluster_of_identical_points():
    rows = np.ones((6, 2)) * 3.0
    res = kmeans(rows, 1, seed=0)
    assert res.inertia == 0.0
    np.testing.assert_array_equal(res.labels, np.zeros(6, dtype=int))
    np.testing.assert_array_equal(res.centroids, [[3.0, 3.0]])


def test_kmeans_two_points_two_clusters():
    rows = np.array([[0.0, 0.0], [5.0, 0.0]])
    res = kmeans(rows, 2, seed=3)
    assert res.inertia == 0.0
    assert set(res.labels.tolist()) == {0, 1}
    assert sorted(res.centroids[:, 0].tolist()) == [0.0, 5.0]


def test_kmeans_well_separated_blobs_any_seed():
    rng = np.random.default_rng(40)
    pts, truth = blobs(rng, [(0.0, 0.0), (100.0, 0.0)], 15, 0.5)
    for seed in range(10):
        res = kmeans(pts, 2, seed=seed)
        assert adjusted_rand_index(res.labels, truth) == 1.0


def test_kmeans_inertia_trace_non_increasing():
    rng = np.random.default_rng(41)
    rows = rng.normal(size=(40, 3))
    res = kmeans(rows, 4, seed=9)
    trace = np.array(res.inertia_trace)
    assert len(trace) >= 1
    assert np.all(np.diff(trace) <= 1e-12)
    assert res.inertia == trace[-1]


def test_kmeans_bitwise_deterministic():
    rng = np.random.default_rng(42)
    rows = rng.normal(size=(30, 2))
    a = kmeans(rows, 3, seed=13)
    b = kmeans(rows, 3, seed=13)
    assert np.array_equal(a.labels, b.labels)
    assert np.array_equal(a.centroids, b.centroids)
    assert a.inertia == b.inertia
    assert a.inertia_trace == b.inertia_trace


def test_kmeans_labels_are_nearest_centroid():
    rng = np.random.default_rng(43)
    rows = rng.normal(size=(50, 2))
    res = kmeans(rows, 5, seed=1)
    diff = rows[:, None, :] - res.centroids[None, :, :]
    d2 = (diff**2).sum(axis=2)
    assert np.all(d2[np.arange(50), res.labels] <= d2.min(axis=1) + 1e-12)


def test_kmeans_centroids_are_cluster_means():
    rng = np.random.default_rng(44)
    rows = rng.normal(size=(50, 2))
    res = kmeans(rows, 4, seed=2)
    for c in range(4):
        member = rows[res.labels == c]
        assert member.shape[0] > 0
        np.testing.assert_allclose(res.centroids[c], member.mean(axis=0), atol=1e-12)


def test_kmeans_rejects_k_beyond_duplicate_budget():
    rows = np.zeros((5, 2))
    with pytest.raises(ValueError, match="too large"):
        kmeans(rows, 2, seed=0)


def test_kmeans_rejects_bad_k():
    rows = np.zeros((3, 2))
    with pytest.raises(ValueError):
        kmeans(rows, 0, seed=0)
    with pytest.raises(ValueError):
        kmeans(rows, 4, seed=0)


def test_ari_identical_labelings():
    labels = np.array([0, 0, 1, 1, 2])
    assert adjusted_rand_index(labels, labels) == 1.0


def test_ari_permuted_labelings():
    a = np.array([0, 0, 1, 1])
    b = np.array([1, 1, 0, 0])
    assert adjusted_rand_index(a, b) == 1.0


def test_ari_symmetry():
    rng = np.random.default_rng(45)
    a = rng.integers(0, 3, size=30)
    b = rng.integers(0, 3, size=30)
    assert adjusted_rand_index(a, b) == adjusted_rand_index(b, a)


def test_ari_independent_labelings_near_zero():
    a = np.zeros(8, dtype=int)
    b = np.arange(8)
    assert adjusted_rand_index(a, b) <= 0.0 + 1e-12


def test_ari_partial_agreement_bounded():
    a = np.array([0, 0, 0, 1, 1, 1])
    b = np.array([0, 0, 1, 1, 1, 1])
    v = adjusted_rand_index(a, b)
    assert 0.0 < v < 1.0


def test_ari_trivial_sizes():
    assert adjusted_rand_index(np.array([0]), np.array([0])) == 1.0
    assert adjusted_rand_index(np.array([], dtype=int), np.array([], dtype=int)) == 1.0


def test_align_labels_simple_swap():
    pred = np.array([1, 1, 0])
    ref = np.array([0, 0, 1])
    np.testing.assert_array_equal(align_labels(pred, ref), [0, 0, 1])


def test_align_labels_identity_when_already_aligned():
    labels = np.array([0, 1, 2, 0])
    np.testing.assert_array_equal(align_labels(labels, labels), labels)


def test_align_labels_never_reduces_agreement():
    rng = np.random.default_rng(46)
    for _ in range(20):
        ref = rng.integers(0, 4, size=25)
        perm = rng.permutation(4)
        pred = perm[ref]
        aligned = align_labels(pred, ref)
        np.testing.assert_array_equal(aligned, ref)


def test_align_labels_rejects_mismatched_cardinality():
    with pytest.raises(ValueError):
        align_labels(np.array([0, 1, 2]), np.array([0, 0, 1]))


def test_align_labels_refuses_large_k():
    pred = np.arange(11)
    with pytest.raises(ValueError, match="11"):
        align_labels(pred, pred)


def test_write_labels_format(tmp_path):
    path = tmp_path / "labels.csv"
    write_labels(np.array([2, 0, 1]), path)
    assert path.read_text() == "index,label\n0,2\n1,0\n2,1\n"
