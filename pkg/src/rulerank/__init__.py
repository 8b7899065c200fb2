"""Explainable pairwise learning-to-rank.

A ranked dataset is expanded into pairwise comparison rows, an inductive rule
learner builds a normal logic program for the better/2 relation (default
rules with learned exceptions), and new item lists are ranked by Copeland
score over the learned comparator.  Every prediction can be justified as a
proof tree or as [T]/[F]-annotated rules.
"""

from .errors import (
    AllTied,
    DataError,
    EmptyColumn,
    EmptyDataset,
    EmptyInput,
    ExceptionDepthExceeded,
    MissingTarget,
    NonNumericTarget,
    NotEnoughItems,
    ProgramSyntaxError,
    RaggedRow,
    RulerankError,
    SchemaMismatch,
)
from .evaluate import Metrics, metrics, run_experiment
from .induction import learn_ruleset
from .ingest import load_csv, split
from .justify import ProofNode, annotate, explain, render_proof
from .literal_search import (
    best_categorical_literal,
    best_literal_pair,
    best_numeric_literal,
    find_best_literal,
    info_gain,
    search_backend,
)
from .pairs import (
    Comparator,
    PairRow,
    SamplerConfig,
    compare,
    plot_pairs,
    rank_list,
    sample_pairs,
    train,
)
from .program_text import emit, parse
from .rules import Counts, Literal, Rule, RuleSet, classify, covers, predict
from .table import EncodedTable, TableLayout, encode_rows, pair_layout, single_layout, single_table
from .values import (
    CATEGORICAL,
    NUMERIC,
    Item,
    RankedDataset,
    Schema,
    Value,
    num_gt,
    num_leq,
    value_equal,
)

__version__ = "0.1.0"
