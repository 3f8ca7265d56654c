from pathlib import Path

import pytest

from overlap_boost import load_csv, minmax_normalize, score_dataset, train_fisher

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
IRIS_CSV = DATA_DIR / "iris.csv"
SEPALS_PETALS = ("sepal.length", "sepal.width", "petal.length", "petal.width")


@pytest.fixture(scope="session")
def iris_raw():
    return load_csv(IRIS_CSV, "class")


@pytest.fixture(scope="session")
def iris_norm(iris_raw):
    return minmax_normalize(iris_raw)


@pytest.fixture(scope="session")
def iris_two(iris_raw):
    return iris_raw.select_classes(["Versicolor", "Virginica"])


@pytest.fixture(scope="session")
def iris_two_norm(iris_two):
    # normalization bounds from the two-class task's own data
    return minmax_normalize(iris_two)


@pytest.fixture(scope="session")
def iris_scorer(iris_two_norm):
    return train_fisher(iris_two_norm, "Versicolor", "Virginica")


@pytest.fixture(scope="session")
def iris_scores(iris_scorer, iris_two_norm):
    return score_dataset(iris_scorer, iris_two_norm)
