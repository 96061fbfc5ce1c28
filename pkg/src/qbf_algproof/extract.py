import logging
from collections.abc import Mapping

from pydantic import BaseModel, ConfigDict, Field, validate_call

from .exceptions import CertificateError, NotVerifiedError
from ._base import iter_assignments
from .config import resolve_cap
from .validator import check_cap
from .poly import Polynomial
from .qbf import Qbf, EvalStrategy, row_key, satisfying_play
from .cert import Certificate, verify

logger = logging.getLogger(__name__)


class PtfCountermodel(BaseModel):
    """Universal strategy `u -> (1 - sign(p_u)) / 2` with `sign(0) = +1`.

    `domains[u]` lists the variables left of `u`; `size` and `degree` describe the thresholds.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    thresholds: dict[int, Polynomial] = Field(default_factory=dict)
    domains: dict[int, tuple[int, ...]] = Field(default_factory=dict)
    size: int = Field(default=0, ge=0)
    degree: int = Field(default=0, ge=0)

    def threshold(self, universal: int) -> Polynomial:
        return self.thresholds.get(universal, Polynomial.zero())

    def decide(self, universal: int, assignment: Mapping[int, int]) -> int:
        return 0 if 0 <= self.threshold(universal).evaluate(assignment) else 1


class CountermodelCheck(BaseModel):
    model_config = ConfigDict(frozen=True)

    valid: bool
    counterexample: dict[int, int] | None = Field(default=None)


class TruthTable(BaseModel):
    """Values of one universal's move on every row of its domain (bit strings in domain order)."""

    model_config = ConfigDict(frozen=True)

    universal: int
    domain: tuple[int, ...] = Field(default=())
    rows: dict[str, int] = Field(default_factory=dict)

    def ones(self) -> list[str]:
        return [_key for _key, _bit in self.rows.items() if _bit]


@validate_call(config={"arbitrary_types_allowed": True})
def extract(qbf: Qbf, cert: Certificate) -> PtfCountermodel:
    """Read a countermodel off an accepted certificate: `p_u := q_u`.

    Args:
        qbf  (Qbf        , required): Formula.
        cert (Certificate, required): Certificate for `qbf`.

    Raises:
        NotVerifiedError: If `verify` rejects the certificate; the rejection is chained.

    Returns:
        PtfCountermodel: Countermodel with size `qsize(cert)` and the total degree of the `q_u`.
    """

    try:
        _measures = verify(qbf, cert)
    except CertificateError as err:
        raise NotVerifiedError(f"Certificate is not accepted: {err}") from err

    _thresholds = {_u: cert.universal.get(_u, Polynomial.zero()) for _u in qbf.universals}
    _model = PtfCountermodel(
        thresholds=_thresholds,
        domains={_u: tuple(qbf.left_of(_u)) for _u in qbf.universals},
        size=_measures.qsize,
        degree=max((_p.degree for _p in _thresholds.values()), default=0),
    )
    logger.debug(f"Extracted countermodel of size {_model.size} and degree {_model.degree}.")
    return _model


@validate_call(config={"arbitrary_types_allowed": True})
def play_countermodel(
    qbf: Qbf, model: PtfCountermodel, existential: dict[int, int]
) -> dict[int, int]:
    """Total assignment obtained by answering `existential` with the countermodel in prefix order."""

    _assignment: dict[int, int] = {}
    for _var in qbf.variables:
        if qbf.is_universal(_var):
            _assignment[_var] = model.decide(_var, _assignment)
        else:
            _assignment[_var] = existential[_var]

    return _assignment


@validate_call(config={"arbitrary_types_allowed": True})
def validate_countermodel(
    qbf: Qbf, model: PtfCountermodel, max_vars: int | None = None
) -> CountermodelCheck:
    """Check that every play against the countermodel falsifies the matrix.

    Args:
        qbf      (Qbf            , required): Formula.
        model    (PtfCountermodel, required): Countermodel to check.
        max_vars (int | None     , optional): Variable cap; settings value when None.

    Raises:
        TooLargeError: If the formula has more variables than the cap.

    Returns:
        CountermodelCheck: Verdict and the first satisfying play when invalid.
    """

    check_cap("variables", qbf.num_vars, resolve_cap(max_vars, "max_vars"))
    _play = satisfying_play(qbf, model.decide)
    if _play is not None:
        logger.debug(f"Countermodel loses on {_play}.")
        return CountermodelCheck(valid=False, counterexample=_play)

    return CountermodelCheck(valid=True)


@validate_call(config={"arbitrary_types_allowed": True})
def ptf_truth_table(
    model: PtfCountermodel, universal: int, max_table_vars: int | None = None
) -> TruthTable:
    """Tabulate `(1 - sign(p_u)) / 2` over the assignments of the variables left of `u`.

    Args:
        model          (PtfCountermodel, required): Countermodel.
        universal      (int            , required): Universal variable `u`.
        max_table_vars (int | None     , optional): Cap on the domain width; settings value when None.

    Raises:
        KeyError     : If `universal` has no domain in the model.
        TooLargeError: If the domain is wider than the cap.

    Returns:
        TruthTable: Table with one row per assignment in lexicographic order.
    """

    _domain = model.domains[universal]
    check_cap("table variables", len(_domain), resolve_cap(max_table_vars, "max_table_vars"))
    _rows = {
        row_key(_domain, _row): model.decide(universal, _row) for _row in iter_assignments(_domain)
    }
    return TruthTable(universal=universal, domain=_domain, rows=_rows)


@validate_call(config={"arbitrary_types_allowed": True})
def to_eval_strategy(model: PtfCountermodel, max_table_vars: int | None = None) -> EvalStrategy:
    """Decision tables of the countermodel, usable by `complete_from_countermodel`."""

    _tables = {
        _u: ptf_truth_table(model, _u, max_table_vars=max_table_vars).rows for _u in model.domains
    }
    return EvalStrategy(domains=dict(model.domains), tables=_tables)


__all__ = [
    "PtfCountermodel",
    "CountermodelCheck",
    "TruthTable",
    "extract",
    "play_countermodel",
    "validate_countermodel",
    "ptf_truth_table",
    "to_eval_strategy",
]
