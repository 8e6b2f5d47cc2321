"""Regression study: can simple learners recover the risk surfaces from stock features?"""
from .ann import MLP, loss_and_grads
from .features import FeatureMatrix, build_features, feature_names, risk_targets
from .forest import RandomForest, RegressionTree
from .linear import Lasso, Ridge
from .metrics import evaluate
from .protocol import (DEFAULTS, FitReport, Model, fit_ann, fit_lasso, fit_model, fit_random_forest,
                       fit_ridge, run_validation, standardize, train_test_split)
