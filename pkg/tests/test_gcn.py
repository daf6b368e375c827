import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from specrewire.errors import ValidationError
from specrewire.gcn import (
    Dataset, GcnModel, Hyperparams, _dropout_mask, accuracy, average_ranks, forward, load_features_csv,
    load_labels_csv, loss_and_grads, make_splits, planted_dataset, propagation_matrix, roc_auc, train,
    train_logistic,
)
from specrewire.randgraph import gen_erdos_renyi
from specrewire.rewire import RewireConfig


def grad_instance(seed, dropout=0.5):
    g = gen_erdos_renyi(12, 0.4, seed)
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((12, 5))
    y = rng.integers(0, 3, 12)
    hyper = Hyperparams(hidden=8, dropout=dropout, weight_decay=1e-2)
    model = GcnModel.init(5, 3, hyper, param_seed=seed)
    model.ln_gain[:] = rng.uniform(0.5, 1.5, 8)
    model.ln_bias[:] = rng.uniform(-0.3, 0.3, 8)
    A_hat = propagation_matrix(g, RewireConfig(1, 0))
    train_mask = rng.random(12) < 0.6
    train_mask[0] = True
    mask = _dropout_mask(rng, (12, 8), dropout)
    return model, A_hat, X, y, train_mask, mask


def max_rel_grad_error(model, A_hat, X, y, train_mask, mask, h=1e-6):
    _, grads = loss_and_grads(model, A_hat, X, y, train_mask, mask)
    worst = 0.0
    for name, p in model.params().items():
        num = np.zeros_like(p)
        for idx in np.ndindex(p.shape):
            old = p[idx]
            p[idx] = old + h
            up, _ = loss_and_grads(model, A_hat, X, y, train_mask, mask)
            p[idx] = old - h
            down, _ = loss_and_grads(model, A_hat, X, y, train_mask, mask)
            p[idx] = old
            num[idx] = (up - down) / (2 * h)
        denom = max(np.linalg.norm(num), np.linalg.norm(grads[name]), 1e-12)
        worst = max(worst, np.linalg.norm(num - grads[name]) / denom)
    return worst


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_gradients_match_finite_differences(seed):
    assert max_rel_grad_error(*grad_instance(seed)) <= 1e-3


def test_gradients_without_dropout():
    model, A_hat, X, y, tm, _ = grad_instance(5, dropout=0.0)
    assert max_rel_grad_error(model, A_hat, X, y, tm, None) <= 1e-3


def test_forward_eval_is_deterministic():
    model, A_hat, X, *_ = grad_instance(0)
    a = forward(model, A_hat, X)
    b = forward(model, A_hat, X)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, forward(model, A_hat, X, train_mode=True, rng=np.random.default_rng(1)))


def test_forward_shape_check():
    model, A_hat, X, *_ = grad_instance(0)
    with pytest.raises(ValidationError):
        forward(model, A_hat[:5, :5], X)


def test_dropout_mask_scaling():
    m = _dropout_mask(np.random.default_rng(0), (400, 50), 0.5)
    assert set(np.unique(m)) <= {0.0, 2.0}
    assert abs(m.mean() - 1.0) < 0.05


def brute_auc(scores, labels):
    pos = [s for s, l in zip(scores, labels) if l == 1]
    neg = [s for s, l in zip(scores, labels) if l == 0]
    wins = sum(1.0 if p > q else 0.5 if p == q else 0.0 for p, q in itertools.product(pos, neg))
    return wins / (len(pos) * len(neg))


def test_auc_known_values():
    assert roc_auc([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1]) == 0.75
    assert roc_auc([1, 1, 1, 1], [0, 1, 0, 1]) == 0.5


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 1)), min_size=2, max_size=30))
def test_auc_matches_pair_count(pairs):
    scores = [float(s) for s, _ in pairs]
    labels = [l for _, l in pairs]
    if len(set(labels)) < 2:
        return
    assert roc_auc(scores, labels) == pytest.approx(brute_auc(scores, labels), abs=1e-12)


def test_auc_needs_both_classes():
    with pytest.raises(ValidationError):
        roc_auc([0.1, 0.2], [1, 1])


def test_average_ranks_ties():
    assert average_ranks([3, 1, 3, 2]).tolist() == [3.5, 1.0, 3.5, 2.0]


def test_accuracy():
    assert accuracy(np.array([[1, 0], [0, 1], [1, 0]]), np.array([0, 1, 1])) == pytest.approx(2 / 3)


def test_splits_sizes_disjoint_and_seeded():
    splits = make_splits(23, (0.6, 0.2, 0.2), n_splits=3, seed=4)
    for tr, va, te in splits:
        assert (tr.sum(), va.sum(), te.sum()) == (13, 4, 6)
        assert not np.any(tr & va) and not np.any(tr & te) and not np.any(va & te)
    again = make_splits(23, (0.6, 0.2, 0.2), n_splits=3, seed=4)
    assert all(np.array_equal(a[0], b[0]) for a, b in zip(splits, again))
    assert not np.array_equal(splits[0][0], splits[1][0])


def test_splits_cover_every_class():
    y = np.array([0] * 18 + [1, 2])
    for tr, _, _ in make_splits(20, (0.5, 0.25, 0.25), n_splits=5, seed=0, labels=y):
        assert set(y[tr]) == {0, 1, 2}


def test_splits_partial_ratios():
    tr, va, te = make_splits(10, (0.3, 0.3, 0.3))[0]
    assert (tr.sum(), va.sum(), te.sum()) == (3, 3, 3)


@pytest.mark.parametrize("ratios", [(0.5, 0.5, 0.5), (-0.1, 0.5, 0.5), (0.5, 0.5)])
def test_bad_ratios(ratios):
    with pytest.raises(ValidationError):
        make_splits(10, ratios)


def test_loaders():
    X = load_features_csv("1,2\n3,4\n\n")
    assert X.tolist() == [[1, 2], [3, 4]]
    assert load_labels_csv("0\n1\n\n2\n").tolist() == [0, 1, 2]
    with pytest.raises(ValidationError):
        load_features_csv("1,2\n3\n")
    with pytest.raises(ValidationError):
        load_labels_csv("a\n")


def test_hyperparams_json():
    h = Hyperparams.from_json('{"hidden": 16, "lr": 0.05}')
    assert h.hidden == 16 and h.lr == 0.05 and h.epochs == 200
    with pytest.raises(ValidationError):
        Hyperparams.from_json('{"hiden": 16}')


def test_dataset_validation():
    g = gen_erdos_renyi(5, 0.5, 0)
    with pytest.raises(ValidationError):
        Dataset(g, np.zeros((4, 2)), np.zeros(5, dtype=int))
    with pytest.raises(ValidationError):
        Dataset(g, np.zeros((5, 2)), np.array([0, 1, -1, 0, 0]))


def test_train_deterministic():
    ds = planted_dataset(30, 2, 0.1, 0.8, seed=3, n_splits=1)
    hyper = Hyperparams(epochs=30)
    a = train(ds, RewireConfig(2, 0), hyper, param_seed=1, dropout_seed=2)
    b = train(ds, RewireConfig(2, 0), hyper, param_seed=1, dropout_seed=2)
    assert a.to_dict() == b.to_dict()
    assert len(a.train_loss) == 30 and a.train_loss[-1] < a.train_loss[0]


def test_early_stopping():
    ds = planted_dataset(30, 2, 0.1, 0.8, seed=3)
    res = train(ds, hyper=Hyperparams(epochs=500, patience=5))
    assert len(res.train_loss) <= res.best_epoch + 6


def test_roc_auc_metric_training():
    ds = planted_dataset(40, 2, 0.1, 0.8, seed=0)
    res = train(ds, hyper=Hyperparams(epochs=40), metric="roc_auc")
    assert 0.0 <= res.test_metric <= 1.0


def test_homophilic_graph_helps():
    # features barely separate the classes; a homophilic graph should lift the GCN above a graph-blind model
    gcn, blind = [], []
    for s in range(5):
        ds = planted_dataset(40, 2, 0.9, 0.05, seed=s, signal=1.0)
        gcn.append(train(ds, hyper=Hyperparams(epochs=100), param_seed=s, dropout_seed=s).test_metric)
        blind.append(train_logistic(ds, Hyperparams(epochs=100), param_seed=s))
    assert np.mean(gcn) > np.mean(blind)
