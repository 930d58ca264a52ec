"""Property-signature-guided program synthesis from input/output examples.

A small typed functional language, a cost-ordered typed-hole search,
property signatures as the feature space, and a learned premise
selector that biases which components each search run may use.
"""

from .ast import Apply, BoolLit, Expr, Hole, IntLit, Lambda, MkPair, NilLit, Var
from .components import PoolElement, catalog, default_pool_elements
from .evalcore import DEFAULT_FUEL, KERNEL_NAME, compile_expr, evaluate
from .learn import (
    CompositionModel,
    PremiseModel,
    TrainSettings,
    grad_check,
    predict_missing_signature,
    sample_baseline_config,
    sample_guided_config,
    train_composition,
    train_premise,
)
from .parser import parse_expr
from .printer import print_expr
from .props import (
    AbstractValue,
    Property,
    PropertyCatalog,
    estimated_signature,
    pi,
    program_signature,
    prune_properties,
)
from .specio import IOSpec, Task, load_task, satisfies, save_task
from .synth import (
    Budget,
    BudgetExceeded,
    Configuration,
    Exhausted,
    SearchResult,
    Solved,
    enumerate_closed,
    run_portfolio,
    synthesize,
)
from .types import BOOL, INT, FunT, ListT, PairT, Type, parse_type, type_to_str
from .values import FuelExhausted, Ok, RunError, parse_value, value_to_str

__version__ = "0.1.0"

__all__ = [
    "Apply", "BoolLit", "Expr", "Hole", "IntLit", "Lambda", "MkPair", "NilLit",
    "Var", "PoolElement", "catalog", "default_pool_elements", "DEFAULT_FUEL",
    "KERNEL_NAME", "compile_expr", "evaluate", "CompositionModel",
    "PremiseModel", "TrainSettings", "grad_check", "predict_missing_signature",
    "sample_baseline_config", "sample_guided_config", "train_composition",
    "train_premise", "parse_expr", "print_expr", "AbstractValue", "Property",
    "PropertyCatalog", "estimated_signature", "pi", "program_signature",
    "prune_properties", "IOSpec", "Task", "load_task", "satisfies",
    "save_task", "Budget", "BudgetExceeded", "Configuration", "Exhausted",
    "SearchResult", "Solved", "enumerate_closed", "run_portfolio",
    "synthesize", "BOOL", "INT", "FunT", "ListT", "PairT", "Type",
    "parse_type", "type_to_str", "FuelExhausted", "Ok", "RunError",
    "parse_value", "value_to_str", "__version__",
]
