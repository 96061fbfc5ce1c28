import logging

from pydantic import validate_call

from ..constants import WResRuleEnum
from ..exceptions import FinalConfigViolationError, InvalidStepError
from ..qbf import Qbf
from ._base import ProofMeasures, WClause, WResConfiguration, WResProof, WResStep

logger = logging.getLogger(__name__)


def _check_step(qbf: Qbf, index: int, step: WResStep) -> None:
    for _literal in step.clause:
        if not qbf.has_var(abs(_literal)):
            raise InvalidStepError(index, f"variable {abs(_literal)} is not quantified")

    if step.rule == WResRuleEnum.AXIOM:
        if step.clause not in qbf.clauses:
            raise InvalidStepError(index, f"{step.clause} is not a matrix clause")

        return

    _var = abs(step.literal or 0)
    if not qbf.has_var(_var):
        raise InvalidStepError(index, f"variable {_var} is not quantified")

    if step.rule == WResRuleEnum.RED:
        if not qbf.is_universal(_var):
            raise InvalidStepError(index, f"variable {_var} is not universal")

        for _literal in step.clause:
            if not qbf.is_left_of(abs(_literal), _var):
                raise InvalidStepError(
                    index, f"variable {abs(_literal)} is not left of the reduced universal {_var}"
                )

    return


def _replay(qbf: Qbf, proof: WResProof) -> dict[WClause, int]:
    _weights: dict[WClause, int] = {}
    for _index, _step in enumerate(proof.steps):
        _check_step(qbf, _index, _step)
        for _clause, _delta in _step.delta():
            _value = _weights.get(_clause, 0) + _delta
            if _value:
                _weights[_clause] = _value
            else:
                _weights.pop(_clause, None)

    return _weights


@validate_call(config={"arbitrary_types_allowed": True})
def wres_configuration(qbf: Qbf, proof: WResProof) -> WResConfiguration:
    """Final configuration of a Q-w-Res trace, starting from the empty configuration.

    Raises:
        InvalidStepError: If a step names an unknown variable, a non-matrix axiom, or a reduction
                            breaking the left-of condition.
    """

    return WResConfiguration(weights=_replay(qbf, proof))


@validate_call(config={"arbitrary_types_allowed": True})
def check_wres(qbf: Qbf, proof: WResProof) -> ProofMeasures:
    """Check a Q-w-Res refutation by replaying its configuration deltas.

    Intermediate configurations may carry any weights. The final one must give the empty clause
    a positive weight and no clause a negative weight.

    Args:
        qbf   (Qbf      , required): Formula.
        proof (WResProof, required): Trace of weighted rule applications.

    Raises:
        InvalidStepError         : If a step is not applicable.
        FinalConfigViolationError: If the final configuration is not a refutation.

    Returns:
        ProofMeasures: Step count and number of universal reductions.
    """

    _weights = _replay(qbf, proof)
    if _weights.get((), 0) <= 0:
        raise FinalConfigViolationError(
            f"Empty clause has weight {_weights.get((), 0)} in the final configuration!"
        )

    for _clause, _weight in _weights.items():
        if _weight < 0:
            raise FinalConfigViolationError(
                f"Clause {_clause} has negative weight {_weight} in the final configuration!"
            )

    _measures = ProofMeasures(
        size=len(proof.steps),
        qsize=sum(1 for _step in proof.steps if _step.rule == WResRuleEnum.RED),
    )
    logger.debug(f"Accepted Q-w-Res proof: {_measures}")
    return _measures


__all__ = [
    "wres_configuration",
    "check_wres",
]
