import logging

from pydantic import validate_call

from ..constants import QpcRuleEnum
from ..exceptions import InvalidAxiomIdError, InvalidStepError, NotRefutedError
from ..poly import Polynomial
from ..qbf import Qbf, axiom_poly
from ._base import ProofMeasures, QpcProof, QpcStep

logger = logging.getLogger(__name__)


def _derive_step(
    qbf: Qbf, index: int, step: QpcStep, derived: list[Polynomial]
) -> Polynomial:
    for _premise in step.premises:
        if not (0 <= _premise < index):
            raise InvalidStepError(index, f"premise {_premise} does not refer to an earlier step")

    if step.rule == QpcRuleEnum.AXIOM:
        try:
            return axiom_poly(qbf, step.axiom)
        except InvalidAxiomIdError as err:
            raise InvalidStepError(index, str(err)) from None

    _p = derived[step.premises[0]]
    if step.rule == QpcRuleEnum.LIN:
        _a, _b = step.coefs
        return _p.scale(_a) + derived[step.premises[1]].scale(_b)

    if step.rule == QpcRuleEnum.SCALE:
        return _p.scale(step.coefs[0])

    _var = step.var or 0
    if not qbf.has_var(_var):
        raise InvalidStepError(index, f"variable {_var} is not quantified")

    if step.rule == QpcRuleEnum.MUL:
        return _p * Polynomial.var(_var, twin=step.twin)

    if not qbf.is_universal(_var):
        raise InvalidStepError(index, f"variable {_var} is not universal")

    for _other in sorted(_p.variables - {_var}):
        if (not qbf.has_var(_other)) or (not qbf.is_left_of(_other, _var)):
            raise InvalidStepError(
                index, f"variable {_other} is not left of the reduced universal {_var}"
            )

    return _p.restrict(_var, step.bit or 0)


@validate_call(config={"arbitrary_types_allowed": True})
def derive_qpc(qbf: Qbf, proof: QpcProof) -> list[Polynomial]:
    """Replay a Q-PC trace and return the polynomial derived at every step.

    Raises:
        InvalidStepError: If a step refers forward, names an unknown axiom or variable, or reduces
                            a premise mentioning a variable not left of the universal.
    """

    _derived: list[Polynomial] = []
    for _index, _step in enumerate(proof.steps):
        _derived.append(_derive_step(qbf, _index, _step, _derived))

    return _derived


@validate_call(config={"arbitrary_types_allowed": True})
def check_qpc(qbf: Qbf, proof: QpcProof) -> ProofMeasures:
    """Check a Q-PC refutation: the last derived polynomial must be the constant 1.

    Args:
        qbf   (Qbf     , required): Formula.
        proof (QpcProof, required): Trace of polynomial derivation steps.

    Raises:
        InvalidStepError: If a step is not applicable.
        NotRefutedError : If the proof is empty or its last polynomial is not 1.

    Returns:
        ProofMeasures: Monomials over every derived polynomial, and over the reduction premises.
    """

    _derived = derive_qpc(qbf, proof)
    if (not _derived) or (_derived[-1] != 1):
        raise NotRefutedError(derived=_derived[-1] if _derived else None)

    _qsize = sum(
        len(_derived[_step.premises[0]])
        for _step in proof.steps
        if _step.rule == QpcRuleEnum.RED
    )
    _measures = ProofMeasures(size=sum(len(_p) for _p in _derived), qsize=_qsize)
    logger.debug(f"Accepted Q-PC proof: {_measures}")
    return _measures


__all__ = [
    "derive_qpc",
    "check_qpc",
]
