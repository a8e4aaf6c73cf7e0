"""Newton-Raphson and mean-iterate root finding with certified global convergence."""

from .certify import (
    Certificate,
    RootEnclosure,
    Side,
    SignRelation,
    Verdict,
    check_lemma_conditions,
    check_theorem,
    isolate_root,
    verify_sign,
)
from .errors import (
    DerivativeZero,
    DomainError,
    ExprSyntaxError,
    MultipleVariablesError,
    NoSignChangeError,
    NonConstantExponentError,
    ParseError,
    PreconditionError,
)
from .expr import differentiate, eval_interval, eval_jet2, evaluate, format_expr, parse
from .interval import Interval
from .solve import (
    IterationTrace,
    SolverConfig,
    certified_solve,
    damped_transform,
    detect_cycle,
    mean_iterate_solve,
    newton_solve,
    newton_step,
)

__version__ = "0.1.0"
