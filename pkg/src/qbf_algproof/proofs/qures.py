import logging

from pydantic import validate_call

from ..constants import QuResRuleEnum
from ..exceptions import InvalidStepError, TautologyError
from ..qbf import Qbf, Clause, normalize_clause
from ._base import ProofMeasures, QuResProof, QuResStep

logger = logging.getLogger(__name__)


def _premise(index: int, premise: int, derived: list[Clause]) -> Clause:
    if not (0 <= premise < index):
        raise InvalidStepError(index, f"premise {premise} does not refer to an earlier step")

    return derived[premise]


def _derive_step(qbf: Qbf, index: int, step: QuResStep, derived: list[Clause]) -> Clause:
    if step.rule == QuResRuleEnum.AXIOM:
        if len(qbf.clauses) <= (step.clause or 0):
            raise InvalidStepError(index, f"matrix has no clause {step.clause}")

        return qbf.clauses[step.clause or 0]

    _var = step.var or 0
    if not qbf.has_var(_var):
        raise InvalidStepError(index, f"variable {_var} is not quantified")

    if step.rule == QuResRuleEnum.RESOLVE:
        _first, _second = (_premise(index, _p, derived) for _p in step.premises)
        if (_var in _first) and (-_var in _second):
            _pos, _neg = _first, _second
        elif (-_var in _first) and (_var in _second):
            _pos, _neg = _second, _first
        else:
            raise InvalidStepError(index, f"premises do not clash on variable {_var}")

        try:
            return normalize_clause(
                [_l for _l in _pos if _l != _var] + [_l for _l in _neg if _l != -_var]
            )
        except TautologyError:
            raise InvalidStepError(index, "resolvent is tautological") from None

    _clause = _premise(index, step.premises[0], derived)
    if not qbf.is_universal(_var):
        raise InvalidStepError(index, f"variable {_var} is not universal")

    _literals = [_l for _l in _clause if abs(_l) == _var]
    if not _literals:
        raise InvalidStepError(index, f"premise does not contain variable {_var}")

    _rest = tuple(_l for _l in _clause if abs(_l) != _var)
    for _literal in _rest:
        if not qbf.is_left_of(abs(_literal), _var):
            raise InvalidStepError(
                index, f"variable {abs(_literal)} is not left of the reduced universal {_var}"
            )

    return _rest


@validate_call(config={"arbitrary_types_allowed": True})
def derive_qures(qbf: Qbf, proof: QuResProof) -> list[Clause]:
    """Replay a QU-Res trace and return the clause derived at every step.

    Raises:
        InvalidStepError: If a step does not follow from its premises.
    """

    _derived: list[Clause] = []
    for _index, _step in enumerate(proof.steps):
        _derived.append(_derive_step(qbf, _index, _step, _derived))

    return _derived


@validate_call(config={"arbitrary_types_allowed": True})
def check_qures(qbf: Qbf, proof: QuResProof) -> ProofMeasures:
    """Check a QU-Res refutation.

    Resolution may pivot on any variable; universal reduction removes a universal literal whose
    clause mentions only variables quantified strictly left of it.

    Args:
        qbf   (Qbf       , required): Formula.
        proof (QuResProof, required): Trace of axiom, resolution and reduction steps.

    Raises:
        InvalidStepError: If a step is invalid, the proof is empty or it does not end in the
                            empty clause.

    Returns:
        ProofMeasures: Step count and number of reduction steps.
    """

    if not proof.steps:
        raise InvalidStepError(0, "proof is empty")

    _derived = derive_qures(qbf, proof)
    if _derived[-1]:
        raise InvalidStepError(len(_derived) - 1, f"last clause {_derived[-1]} is not empty")

    _measures = ProofMeasures(
        size=len(proof.steps),
        qsize=sum(1 for _step in proof.steps if _step.rule == QuResRuleEnum.REDUCE),
    )
    logger.debug(f"Accepted QU-Res proof: {_measures}")
    return _measures


__all__ = [
    "derive_qures",
    "check_qures",
]
