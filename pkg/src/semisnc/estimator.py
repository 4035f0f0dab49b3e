"""Estimator-style facade over the resolution driver.

    r = SemiSNCResolver(max_blowups=64).fit(scene)
    r.predict([(0, 0, 0, 0)])   # verdicts on the input scene
    r.transform()               # leaf scenes of the blow-up tree
"""

from __future__ import annotations

import inspect
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import DEFAULT_CAPS, Caps
from .detector import is_semisnc_at
from .driver import BlowupNode, Certification, Limits, resolve
from .scene import Scene, validate_scene


class NotFittedError(RuntimeError):
    pass


def check_is_fitted(est, attrs: Sequence[str] = ("tree_",)) -> None:
    if any(not hasattr(est, a) for a in attrs):
        raise NotFittedError(f"{type(est).__name__} is not fitted yet; call fit first")


def check_scene(s) -> Scene:
    if not isinstance(s, Scene):
        raise TypeError(f"expected a Scene, got {type(s).__name__}")
    errors = validate_scene(s)
    if errors:
        raise ValueError("invalid scene: " + "; ".join(errors))
    return s


def check_points(points: Iterable, n: int) -> list[tuple[Fraction, ...]]:
    out = []
    for a in points:
        a = tuple(Fraction(v) for v in a)
        if len(a) != n:
            raise ValueError(f"point {a} has {len(a)} coordinates, expected {n}")
        out.append(a)
    return out


class SemiSNCResolver:
    """Fit = resolve a scene; predict = verdicts at points; transform = leaf charts."""

    def __init__(self, max_blowups: int = 256, max_depth: int = 32, caps: Caps = DEFAULT_CAPS):
        self.max_blowups = max_blowups
        self.max_depth = max_depth
        self.caps = caps

    def get_params(self, deep: bool = True) -> dict:
        names = [p for p in inspect.signature(type(self).__init__).parameters if p != "self"]
        return {k: getattr(self, k) for k in names}

    def set_params(self, **params) -> "SemiSNCResolver":
        valid = self.get_params()
        for k, v in params.items():
            if k not in valid:
                raise ValueError(f"invalid parameter {k!r} for {type(self).__name__}")
            setattr(self, k, v)
        return self

    def _limits(self) -> Limits:
        if self.max_blowups < 0 or self.max_depth < 0:
            raise ValueError("limits must be non-negative")
        return Limits(self.max_blowups, self.max_depth, self.caps)

    def fit(self, scene: Scene, y=None) -> "SemiSNCResolver":
        scene = check_scene(scene)
        tree, cert = resolve(scene, self._limits())
        self.scene_: Scene = tree.scene
        self.tree_: BlowupNode = tree
        self.certification_: Certification = cert
        self.n_blowups_ = cert.blowups
        self.centers_ = [(n.path, n.center.coords) for n in tree.nodes() if n.center is not None]
        return self

    def predict(self, points) -> list[str]:
        check_is_fitted(self)
        pts = check_points(points, self.scene_.n)
        return [is_semisnc_at(self.scene_, a, self.caps).answer for a in pts]

    def transform(self, scene: Scene | None = None) -> list[Scene]:
        if scene is not None:
            self.fit(scene)
        check_is_fitted(self)
        return [leaf.scene for leaf in self.tree_.leaves()]

    def fit_transform(self, scene: Scene, y=None) -> list[Scene]:
        return self.fit(scene).transform()

    def score(self, scene: Scene | None = None) -> float:
        """Fraction of leaf probe points certified semi-snc."""
        if scene is not None:
            self.fit(scene)
        check_is_fitted(self)
        vs = [v for leaf in self.tree_.leaves() for v in leaf.verdicts]
        return sum(v.ok for v in vs) / len(vs) if vs else 1.0

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items() if k != "caps")
        return f"{type(self).__name__}({args})"
