"""Feature ranking for multi-label classification based on the Ising model."""

from .dataset import MultiLabelDataset, load_csv, write_csv, split, standardize, discretize
from .logistic import fit_mle, fit_l1, lambda_max
from .score import build_null_cache, score_univariate, score_multivariate
from .rankers import RankerConfig, FeatureRanking, rank
from .evaluation import ranking_roc, classification_metrics, select_features
from .synth import ScenarioSpec, make_artdata
from .chains import train_chain, predict_chain

__version__ = "0.1.0"
