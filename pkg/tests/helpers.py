"""Shared builders and oracles for the test suite."""

from dataclasses import dataclass

import numpy as np
from scipy.stats import multivariate_normal

from tied_plda.data.labels import LabelSequence
from tied_plda.data.synthetic import make_random_model, sample_corpus
from tied_plda.models.background import BackgroundModel
from tied_plda.models.params import ComponentParams, Hyperparams, ModelFamily, TiedPldaModel

STANDARD_HYPER = Hyperparams(d=10, p=3, q=3, M=4, J=10)
STANDARD_SUBSTATES = 2
STANDARD_TRAIN_FRAMES_PER_STATE = 5000
STANDARD_TEST_FRAMES_PER_STATE = 1000


def random_component(rng: np.random.Generator, d: int, p: int, q: int, scale: float = 1.0) -> ComponentParams:
    return ComponentParams(
        U=rng.normal(0.0, scale, size=(d, p)),
        G=rng.normal(0.0, scale, size=(d, q)),
        b=rng.normal(0.0, 1.0, size=d),
        Lambda=rng.uniform(0.5, 2.0, size=d),
    )


def small_model(seed: int = 0, substates: int = 2, family: ModelFamily = ModelFamily.TIED) -> TiedPldaModel:
    """d=4, p=2, q=2, M=3, J=3."""
    return make_random_model(Hyperparams(d=4, p=2, q=2, M=3, J=3), substates, seed=seed, family=family)


def dense_covariance(comp: ComponentParams) -> np.ndarray:
    return comp.U @ comp.U.T + np.diag(comp.Lambda)


def dense_state_loglik(model: TiedPldaModel, j: int, y: np.ndarray) -> float:
    """``log sum_{k,m} w_jkm N(y; G_m z_jk + b_m, U_m U_m^T + Lambda_m)`` in the linear domain."""
    weights = model.weight_matrix(j)
    total = 0.0
    for k, z in enumerate(model.states[j].z):
        for m, comp in enumerate(model.components):
            if weights[k, m] == 0.0:
                continue
            density = multivariate_normal(comp.G @ z + comp.b, dense_covariance(comp)).pdf(y)
            total += weights[k, m] * density
    return float(np.log(total))


def background_from_model(model: TiedPldaModel) -> BackgroundModel:
    """A background model aligned with the model's components."""
    weights = np.mean([state.pi for state in model.states], axis=0)
    return BackgroundModel(
        means=np.stack([c.b for c in model.components]),
        loadings=np.stack([c.U for c in model.components]),
        noise=np.stack([c.Lambda + np.sum(c.G * c.G, axis=1) for c in model.components]),
        weights=weights / weights.sum(),
    )


@dataclass(frozen=True)
class StandardFixture:
    """The generating model with its training and held-out corpora."""

    model: TiedPldaModel
    train_features: np.ndarray
    train_labels: LabelSequence
    test_features: np.ndarray
    test_labels: LabelSequence


def build_standard_fixture(seed: int = 7) -> StandardFixture:
    """J=10, K=2, M=4, d=10, p=q=3 with 50k training and 10k held-out frames."""
    model = make_random_model(STANDARD_HYPER, STANDARD_SUBSTATES, seed=seed)
    train_Y, train_labels, _ = sample_corpus(model, STANDARD_TRAIN_FRAMES_PER_STATE, seed=seed + 1)
    test_Y, test_labels, _ = sample_corpus(model, STANDARD_TEST_FRAMES_PER_STATE, seed=seed + 2)
    return StandardFixture(model, train_Y, train_labels, test_Y, test_labels)
