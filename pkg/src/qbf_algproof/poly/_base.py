import logging
from fractions import Fraction
from types import MappingProxyType
from collections.abc import Iterable, Iterator, Mapping

from pydantic import validate_call

from .._base import to_rational
from ..exceptions import UnassignedVariableError

logger = logging.getLogger(__name__)


Rational = Fraction
Assignment = Mapping[int, int]

# Monomial entries are ((base, twin), exponent) pairs kept sorted by (base, twin).
_Key = tuple[int, bool]
_Items = tuple[tuple[_Key, int], ...]


class ExtVar:
    """A Boolean variable `x<base>` or its formal twin `~x<base>` (read as 1 - x)."""

    __slots__ = ("base", "twin")

    base: int
    twin: bool

    def __init__(self, base: int, twin: bool = False) -> None:
        if isinstance(base, bool) or (not isinstance(base, int)) or (base < 1):
            raise ValueError(f"`base` argument value '{base}' is invalid, must be >= 1!")

        object.__setattr__(self, "base", base)
        object.__setattr__(self, "twin", bool(twin))

    def __setattr__(self, name, value):
        raise AttributeError("ExtVar is immutable!")

    @property
    def key(self) -> _Key:
        return (self.base, self.twin)

    @property
    def bar(self) -> "ExtVar":
        return ExtVar(self.base, not self.twin)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ExtVar) and (self.key == other.key)

    def __lt__(self, other: "ExtVar") -> bool:
        return self.key < other.key

    def __hash__(self) -> int:
        return hash(("ExtVar", self.base, self.twin))

    def __str__(self) -> str:
        return f"~x{self.base}" if self.twin else f"x{self.base}"

    def __repr__(self) -> str:
        return f"ExtVar({self})"


class Monomial:
    """Product of extended variables with positive exponents; the empty product is 1."""

    __slots__ = ("_items", "_degree", "_hash")

    _items: _Items
    _degree: int
    _hash: int

    def __init__(self, items: Iterable[tuple[_Key | ExtVar, int]] = ()) -> None:
        _exponents: dict[_Key, int] = {}
        for _var, _exp in items:
            _key = _var.key if isinstance(_var, ExtVar) else (int(_var[0]), bool(_var[1]))
            if _exp < 0:
                raise ValueError(f"Exponent '{_exp}' of {_key} is negative!")

            _exponents[_key] = _exponents.get(_key, 0) + _exp

        self._set(tuple(sorted((_k, _e) for _k, _e in _exponents.items() if _e)))

    def _set(self, items: _Items) -> None:
        object.__setattr__(self, "_items", items)
        object.__setattr__(self, "_degree", sum(_e for _, _e in items))
        object.__setattr__(self, "_hash", hash(items))

    def __setattr__(self, name, value):
        raise AttributeError("Monomial is immutable!")

    @classmethod
    def _raw(cls, items: _Items) -> "Monomial":
        _monomial = cls.__new__(cls)
        _monomial._set(items)
        return _monomial

    @classmethod
    def of(cls, var: ExtVar, exp: int = 1) -> "Monomial":
        return cls._raw(((var.key, exp),)) if exp else ONE

    @property
    def items(self) -> _Items:
        return self._items

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def bases(self) -> set[int]:
        return {_key[0] for _key, _ in self._items}

    @property
    def is_one(self) -> bool:
        return not self._items

    def factors(self) -> Iterator[tuple[ExtVar, int]]:
        for (_base, _twin), _exp in self._items:
            yield ExtVar(_base, _twin), _exp

    def exponent(self, var: ExtVar) -> int:
        for _key, _exp in self._items:
            if _key == var.key:
                return _exp

        return 0

    def sort_key(self) -> tuple:
        return (-self._degree, self._items)

    def __mul__(self, other: "Monomial") -> "Monomial":
        if not other._items:
            return self

        if not self._items:
            return other

        _exponents = dict(self._items)
        for _key, _exp in other._items:
            _exponents[_key] = _exponents.get(_key, 0) + _exp

        return Monomial._raw(tuple(sorted(_exponents.items())))

    def divides(self, other: "Monomial") -> bool:
        _other = dict(other._items)
        return all(_other.get(_key, 0) >= _exp for _key, _exp in self._items)

    def __truediv__(self, other: "Monomial") -> "Monomial":
        if not other.divides(self):
            raise ValueError(f"{other} does not divide {self}!")

        _exponents = dict(self._items)
        for _key, _exp in other._items:
            _exponents[_key] -= _exp

        return Monomial._raw(tuple(sorted((_k, _e) for _k, _e in _exponents.items() if _e)))

    def evaluate(self, assignment: Assignment) -> int:
        for (_base, _twin), _ in self._items:
            try:
                _value = assignment[_base]
            except KeyError:
                raise UnassignedVariableError(var=_base) from None

            if _value == _twin:
                return 0

        return 1

    def partial(self, assignment: Assignment) -> "Monomial | None":
        """Substitute the assigned bases; None when the monomial vanishes."""

        _kept: list[tuple[_Key, int]] = []
        for (_base, _twin), _exp in self._items:
            if _base in assignment:
                if assignment[_base] == _twin:
                    return None
            else:
                _kept.append(((_base, _twin), _exp))

        if len(_kept) == len(self._items):
            return self

        return Monomial._raw(tuple(_kept))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Monomial) and (self._items == other._items)

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        if not self._items:
            return "1"

        _parts = []
        for (_base, _twin), _exp in self._items:
            _name = f"~x{_base}" if _twin else f"x{_base}"
            _parts.append(_name if _exp == 1 else f"{_name}^{_exp}")

        return "*".join(_parts)

    def __repr__(self) -> str:
        return f"Monomial({self})"


ONE = Monomial._raw(())


class Polynomial:
    """Sparse polynomial with exact rational coefficients over extended variables.

    Values are immutable; arithmetic returns new polynomials with zero terms pruned.
    """

    __slots__ = ("_terms",)

    _terms: dict[Monomial, Fraction]

    def __init__(
        self, terms: Mapping[Monomial, int | Fraction] | None = None
    ) -> None:
        _terms: dict[Monomial, Fraction] = {}
        for _monomial, _coef in (terms or {}).items():
            _value = to_rational(_coef)
            if _value:
                _terms[_monomial] = _value

        object.__setattr__(self, "_terms", _terms)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable!")

    @classmethod
    def _wrap(cls, terms: dict[Monomial, Fraction]) -> "Polynomial":
        _poly = cls.__new__(cls)
        object.__setattr__(_poly, "_terms", terms)
        return _poly

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls._wrap({})

    @classmethod
    def constant(cls, value: int | Fraction) -> "Polynomial":
        _value = to_rational(value)
        return cls._wrap({ONE: _value} if _value else {})

    @classmethod
    def var(cls, base: int, twin: bool = False) -> "Polynomial":
        return cls._wrap({Monomial.of(ExtVar(base, twin)): Fraction(1)})

    @classmethod
    def from_monomial(
        cls, monomial: Monomial, coef: int | Fraction = 1
    ) -> "Polynomial":
        _value = to_rational(coef)
        return cls._wrap({monomial: _value} if _value else {})

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        """Maximum total degree; 0 for the zero polynomial."""

        return max((_m.degree for _m in self._terms), default=0)

    @property
    def variables(self) -> set[int]:
        _bases: set[int] = set()
        for _monomial in self._terms:
            _bases |= _monomial.bases

        return _bases

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self._terms.items(), key=lambda _item: _item[0].sort_key())

    def coefficient(self, monomial: Monomial) -> Fraction:
        return self._terms.get(monomial, Fraction(0))

    def constant_term(self) -> Fraction:
        return self._terms.get(ONE, Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def _accumulate(
        self, other: "Polynomial", factor: Fraction = Fraction(1)
    ) -> "Polynomial":
        _terms = dict(self._terms)
        for _monomial, _coef in other._terms.items():
            _value = _terms.get(_monomial, 0) + factor * _coef
            if _value:
                _terms[_monomial] = _value
            else:
                _terms.pop(_monomial, None)

        return Polynomial._wrap(_terms)

    @staticmethod
    def _coerce(value: "Polynomial | int | Fraction") -> "Polynomial":
        if isinstance(value, Polynomial):
            return value

        return Polynomial.constant(value)

    def __add__(self, other: "Polynomial | int | Fraction") -> "Polynomial":
        return self._accumulate(Polynomial._coerce(other))

    def __radd__(self, other: "int | Fraction") -> "Polynomial":
        return self._accumulate(Polynomial._coerce(other))

    def __sub__(self, other: "Polynomial | int | Fraction") -> "Polynomial":
        return self._accumulate(Polynomial._coerce(other), Fraction(-1))

    def __rsub__(self, other: "int | Fraction") -> "Polynomial":
        return Polynomial._coerce(other)._accumulate(self, Fraction(-1))

    def __neg__(self) -> "Polynomial":
        return Polynomial._wrap({_m: -_c for _m, _c in self._terms.items()})

    def scale(self, value: int | Fraction) -> "Polynomial":
        _value = to_rational(value)
        if not _value:
            return Polynomial.zero()

        return Polynomial._wrap({_m: _c * _value for _m, _c in self._terms.items()})

    def mul_monomial(self, monomial: Monomial, coef: Fraction = Fraction(1)) -> "Polynomial":
        if not coef:
            return Polynomial.zero()

        return Polynomial._wrap(
            {_m * monomial: _c * coef for _m, _c in self._terms.items()}
        )

    def __mul__(self, other: "Polynomial | int | Fraction") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return self.scale(other)

        if len(other._terms) == 1:
            ((_monomial, _coef),) = other._terms.items()
            return self.mul_monomial(_monomial, _coef)

        _terms: dict[Monomial, Fraction] = {}
        for _m1, _c1 in self._terms.items():
            for _m2, _c2 in other._terms.items():
                _monomial = _m1 * _m2
                _value = _terms.get(_monomial, 0) + _c1 * _c2
                if _value:
                    _terms[_monomial] = _value
                else:
                    _terms.pop(_monomial, None)

        return Polynomial._wrap(_terms)

    def __rmul__(self, other: "int | Fraction") -> "Polynomial":
        return self.scale(other)

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise ValueError(f"`exponent` argument value '{exponent}' is negative!")

        _result = Polynomial.constant(1)
        for _ in range(exponent):
            _result = _result * self

        return _result

    def evaluate(self, assignment: Assignment) -> Fraction:
        _total = Fraction(0)
        for _monomial, _coef in self._terms.items():
            if _monomial.evaluate(assignment):
                _total += _coef

        return _total

    def partial(self, assignment: Assignment) -> "Polynomial":
        """Substitute every assigned base (and its twin) and keep the rest symbolic."""

        _terms: dict[Monomial, Fraction] = {}
        for _monomial, _coef in self._terms.items():
            _reduced = _monomial.partial(assignment)
            if _reduced is None:
                continue

            _value = _terms.get(_reduced, 0) + _coef
            if _value:
                _terms[_reduced] = _value
            else:
                _terms.pop(_reduced, None)

        return Polynomial._wrap(_terms)

    def restrict(self, var: int, bit: int) -> "Polynomial":
        return self.partial({var: bit})

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return self._terms == other._terms

        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._terms == Polynomial.constant(other)._terms

        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Polynomial({format_poly(self)})"


def _format_coef(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)

    return f"{value.numerator}/{value.denominator}"


def format_poly(p: Polynomial) -> str:
    """Render `p` in the text grammar with canonical term order (highest degree first)."""

    if p.is_zero:
        return "0"

    _out = ""
    for _index, (_monomial, _coef) in enumerate(p.sorted_terms()):
        _sign = "-" if _coef < 0 else "+"
        _abs = abs(_coef)
        if _monomial.is_one:
            _body = _format_coef(_abs)
        elif _abs == 1:
            _body = str(_monomial)
        else:
            _body = f"{_format_coef(_abs)}*{_monomial}"

        if _index == 0:
            _out = f"-{_body}" if _sign == "-" else _body
        else:
            _out += f" {_sign} {_body}"

    return _out


def _check_assignment(assignment: Mapping[int, int]) -> None:
    for _var, _value in assignment.items():
        if _value not in (0, 1):
            raise ValueError(f"Value '{_value}' of variable {_var} is not Boolean!")


@validate_call(config={"arbitrary_types_allowed": True})
def add(p: Polynomial, q: Polynomial) -> Polynomial:
    """Exact sum `p + q`."""

    return p + q


@validate_call(config={"arbitrary_types_allowed": True})
def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    """Exact product `p * q`."""

    return p * q


@validate_call(config={"arbitrary_types_allowed": True})
def scale(p: Polynomial, c: int | Fraction) -> Polynomial:
    """Exact scalar multiple `c * p`."""

    return p.scale(c)


@validate_call(config={"arbitrary_types_allowed": True})
def evaluate(p: Polynomial, assignment: dict[int, int]) -> Fraction:
    """Evaluate `p` on a Boolean assignment; twins read as `1 - value`.

    Args:
        p          (Polynomial    , required): Polynomial to evaluate.
        assignment (dict[int, int], required): Base variable to 0/1.

    Raises:
        ValueError             : If a value is not 0 or 1.
        UnassignedVariableError: If some base variable of `p` has no value.

    Returns:
        Fraction: Exact value.
    """

    _check_assignment(assignment)
    return p.evaluate(assignment)


@validate_call(config={"arbitrary_types_allowed": True})
def restrict(p: Polynomial, var: int, bit: int) -> Polynomial:
    """Substitute `var := bit` and its twin `:= 1 - bit` simultaneously.

    Args:
        p   (Polynomial, required): Polynomial to restrict.
        var (int       , required): Base variable.
        bit (int       , required): 0 or 1.

    Raises:
        ValueError: If `bit` is not Boolean.

    Returns:
        Polynomial: Polynomial mentioning neither `var` nor its twin.
    """

    _check_assignment({var: bit})
    return p.restrict(var, bit)


@validate_call
def indicator(assignment: dict[int, int]) -> Monomial:
    """Indicator monomial of a total assignment over its domain: 1 exactly on `assignment`.

    Args:
        assignment (dict[int, int], required): Variable to 0/1.

    Returns:
        Monomial: Product of `x` for ones and `~x` for zeros.
    """

    _check_assignment(assignment)
    return Monomial._raw(
        tuple(sorted(((_var, not _value), 1) for _var, _value in assignment.items()))
    )


@validate_call
def ind_rho(assignment: dict[int, int]) -> Polynomial:
    """Twin-free indicator of a partial assignment: product of `x` and `(1 - x)` factors.

    Args:
        assignment (dict[int, int], required): Variable to 0/1.

    Returns:
        Polynomial: Expanded product; the constant 1 for the empty assignment.
    """

    _check_assignment(assignment)
    _result = Polynomial.constant(1)
    for _var in sorted(assignment):
        _x = Polynomial.var(_var)
        _result = _result * (_x if assignment[_var] else 1 - _x)

    return _result


__all__ = [
    "Rational",
    "Assignment",
    "ExtVar",
    "Monomial",
    "ONE",
    "Polynomial",
    "format_poly",
    "add",
    "mul",
    "scale",
    "evaluate",
    "restrict",
    "indicator",
    "ind_rho",
]
