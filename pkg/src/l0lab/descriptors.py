"""Text descriptors for spaces, random variables, seminorms and sets.

    finite:1/2,1/4,1/4     geometric:N=64
    [1,2,3]                <2,3|1>          2/3   +inf
    abs    weighted:[2,1,1]    gauge:(cex:eps=1)
    ball:abs,eps=1    cex:eps=1    atomdec:r=[1,2,3]
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DescriptorError, L0Error
from .l0_core import RandomVar, coerce_value
from .prob_space import AtomSpace, make_finite_space, make_geometric_space
from .seminorms import AbsValue, Ball, GaugeOf, Seminorm, Weighted
from .sets_gauge import AtomDecomposable, BallSet, CounterexampleU, L0Set


def split_top(text: str, sep: str = ",") -> list[str]:
    """Split on ``sep`` outside brackets, angle brackets and parentheses."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "[<(":
            depth += 1
        elif ch in "]>)":
            depth -= 1
            if depth < 0:
                raise DescriptorError(f"unbalanced brackets in {text!r}")
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise DescriptorError(f"unbalanced brackets in {text!r}")
    out.append("".join(cur))
    return [s.strip() for s in out]


def parse_space(text: str) -> AtomSpace:
    text = text.strip()
    kind, _, rest = text.partition(":")
    try:
        if kind == "finite":
            return make_finite_space(Fraction(p) for p in split_top(rest))
        if kind == "geometric":
            key, _, val = rest.partition("=")
            if key.strip() != "N":
                raise DescriptorError(f"expected geometric:N=<int>, got {text!r}")
            return make_geometric_space(int(val))
    except (ValueError, ZeroDivisionError) as e:
        if isinstance(e, L0Error):
            raise
        raise DescriptorError(f"bad space descriptor {text!r}: {e}") from e
    raise DescriptorError(f"unknown space kind in {text!r}")


def parse_value(text: str):
    try:
        return coerce_value(text.strip())
    except (ValueError, ZeroDivisionError, TypeError) as e:
        raise DescriptorError(f"bad rational {text!r}") from e


def rv_shape(text: str) -> str:
    """``"finite"``, ``"eventual"`` or ``"scalar"``."""
    t = text.strip()
    if t.startswith("["):
        return "finite"
    if t.startswith("<"):
        return "eventual"
    return "scalar"


def parse_rv(text: str, space: AtomSpace) -> RandomVar:
    t = text.strip()
    shape = rv_shape(t)
    try:
        if shape == "finite":
            if not t.endswith("]"):
                raise DescriptorError(f"unterminated vector {text!r}")
            body = t[1:-1].strip()
            vals = [parse_value(v) for v in split_top(body)] if body else []
            if not space.is_finite:
                raise DescriptorError("a finite vector needs a finite space")
            return RandomVar(space, tuple(vals))
        if shape == "eventual":
            if not t.endswith(">") or "|" not in t:
                raise DescriptorError(f"expected <prefix|tail>, got {text!r}")
            head, _, tail = t[1:-1].rpartition("|")
            vals = [parse_value(v) for v in split_top(head)] if head.strip() else []
            if space.is_finite:
                if len(vals) > space.n_atoms:
                    raise DescriptorError("prefix longer than the finite space")
                tv = parse_value(tail)
                return RandomVar(space, tuple(vals) + (tv,) * (space.n_atoms - len(vals)))
            return RandomVar(space, tuple(vals), parse_value(tail))
        return RandomVar.constant(space, parse_value(t))
    except L0Error as e:
        if isinstance(e, DescriptorError):
            raise
        raise DescriptorError(str(e)) from e


def infer_space(rv_text: str, truncation: int = 64) -> AtomSpace:
    """Uniform finite space for vectors, geometric space otherwise."""
    if rv_shape(rv_text) == "finite":
        n = len(split_top(rv_text.strip()[1:-1]))
        return make_finite_space([Fraction(1, n)] * n)
    return make_geometric_space(truncation)


def parse_seminorm(text: str, space: AtomSpace) -> Seminorm:
    t = text.strip()
    if t == "abs":
        return AbsValue()
    if t.startswith("weighted:"):
        try:
            return Weighted(parse_rv(t[len("weighted:"):], space))
        except ValueError as e:
            raise DescriptorError(str(e)) from e
    if t.startswith("gauge:"):
        inner = t[len("gauge:"):].strip()
        if inner.startswith("(") and inner.endswith(")"):
            inner = inner[1:-1]
        return GaugeOf(parse_set(inner, space))
    raise DescriptorError(f"unknown seminorm {text!r}")


def _kv(item: str, key: str) -> str | None:
    k, eq, v = item.partition("=")
    if eq and k.strip() == key:
        return v
    return None


def parse_set(text: str, space: AtomSpace) -> L0Set:
    t = text.strip()
    kind, _, rest = t.partition(":")
    items = split_top(rest)
    try:
        if kind == "ball":
            eps = [_kv(i, "eps") for i in items if _kv(i, "eps") is not None]
            if len(eps) != 1:
                raise DescriptorError(f"ball needs exactly one eps=..., got {text!r}")
            Q = tuple(parse_seminorm(i, space) for i in items if _kv(i, "eps") is None)
            return BallSet(Ball(Q, parse_rv(eps[0], space)))
        if kind == "cex":
            if len(items) != 1 or _kv(items[0], "eps") is None:
                raise DescriptorError(f"expected cex:eps=..., got {text!r}")
            return CounterexampleU(parse_rv(_kv(items[0], "eps"), space))
        if kind == "atomdec":
            if len(items) != 1 or _kv(items[0], "r") is None:
                raise DescriptorError(f"expected atomdec:r=..., got {text!r}")
            return AtomDecomposable(parse_rv(_kv(items[0], "r"), space))
    except ValueError as e:
        if isinstance(e, DescriptorError):
            raise
        raise DescriptorError(f"bad set descriptor {text!r}: {e}") from e
    raise DescriptorError(f"unknown set kind in {text!r}")
