"""Sparse vectors with exact rational coefficients, keyed by basis label."""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from fractions import Fraction
from numbers import Rational
from typing import Union

Scalar = Union[int, Fraction]


def as_fraction(value: object) -> Fraction:
    """Coerce ``value`` to a Fraction, refusing anything inexact."""
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(ch in text for ch in ".eE"):
            raise ValueError(f"not an exact rational literal: {value!r}")
        return Fraction(text)
    raise TypeError(f"inexact or unsupported scalar: {value!r}")


class Vec(Mapping[str, Fraction]):
    """Immutable finitely supported vector; zero coefficients are dropped."""

    __slots__ = ("_data", "_hash")

    def __init__(self, data: Mapping[str, object] | Iterable[tuple[str, object]] = ()):
        items = data.items() if isinstance(data, Mapping) else data
        clean: dict[str, Fraction] = {}
        for label, coef in items:
            c = clean.get(label, Fraction(0)) + as_fraction(coef)
            if c:
                clean[label] = c
            else:
                clean.pop(label, None)
        self._data = clean
        self._hash: int | None = None

    @classmethod
    def basis(cls, label: str, coef: Scalar = 1) -> Vec:
        return cls({label: coef})

    def __getitem__(self, label: str) -> Fraction:
        return self._data[label]

    def __iter__(self) -> Iterator[str]:
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def coeff(self, label: str) -> Fraction:
        return self._data.get(label, Fraction(0))

    def support(self) -> frozenset[str]:
        return frozenset(self._data)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Vec):
            return self._data == other._data
        if isinstance(other, Mapping):
            return self._data == Vec(other)._data
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._data.items()))
        return self._hash

    def __add__(self, other: Vec) -> Vec:
        out = dict(self._data)
        for k, v in other.items():
            out[k] = out.get(k, Fraction(0)) + v
        return Vec(out)

    def __sub__(self, other: Vec) -> Vec:
        return self + (-other)

    def __neg__(self) -> Vec:
        return Vec({k: -v for k, v in self._data.items()})

    def __mul__(self, scalar: Scalar) -> Vec:
        s = as_fraction(scalar)
        if not s:
            return Vec()
        return Vec({k: v * s for k, v in self._data.items()})

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self._data)

    def restrict(self, labels: Iterable[str]) -> Vec:
        keep = set(labels)
        return Vec({k: v for k, v in self._data.items() if k in keep})

    def rename(self, mapping: Mapping[str, str]) -> Vec:
        return Vec((mapping[k], v) for k, v in self._data.items())

    def __repr__(self) -> str:
        inner = ", ".join(f"{k!r}: {fmt_scalar(v)}" for k, v in sorted(self._data.items()))
        return f"Vec({{{inner}}})"


def linear_combination(terms: Iterable[tuple[Scalar, Vec]]) -> Vec:
    acc: dict[str, Fraction] = {}
    for coef, vec in terms:
        c = as_fraction(coef)
        if not c:
            continue
        for k, v in vec.items():
            acc[k] = acc.get(k, Fraction(0)) + c * v
    return Vec(acc)


def fmt_scalar(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_vec(vec: Vec, order: Iterable[str] | None = None, unit: str | None = "1") -> str:
    """Render ``vec`` as a signed sum, highest basis label first.

    ``order`` lists the basis in ascending order; the label ``unit`` is
    printed as a bare coefficient.
    """
    if not vec:
        return "0"
    labels = list(order) if order is not None else sorted(vec)
    labels = [lab for lab in reversed(labels) if lab in vec]
    labels += sorted(set(vec) - set(labels))
    parts: list[str] = []
    for lab in labels:
        c = vec[lab]
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if lab == unit:
            body = fmt_scalar(mag)
        elif mag == 1:
            body = lab
        else:
            body = f"{fmt_scalar(mag)}*{lab}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        text += sign + body
    return text
