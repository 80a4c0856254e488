import pytest

THRESHOLDS_16 = {"kind": "binary_classification", "preset": "thresholds", "n": 16, "count": 16,
                 "target_cut": 8, "flips": [3, 12]}
THRESHOLDS_16_REALIZABLE = {"kind": "binary_classification", "preset": "thresholds", "n": 16,
                            "count": 16, "target_cut": 8, "flips": []}
PARETO_25 = {"kind": "unbounded_loss", "model": "pareto", "shape": 2.5, "scale": 1.0,
             "scale_factors": [0.5, 1.0, 2.0]}
SINGLE_HALF = {"kind": "binary_classification", "probabilities": [0.5, 0.5], "hypotheses": [[1, 0]]}


@pytest.fixture
def thresholds16():
    return dict(THRESHOLDS_16)


@pytest.fixture
def pareto25():
    return dict(PARETO_25)
