from __future__ import annotations

from typing import TYPE_CHECKING, Protocol

if TYPE_CHECKING:
    from lorentzgas._types import FloatArray


class BumpProfile(Protocol):
    """Base bump b on R^D: values in [0, 1], support in [-1/4, 1/4]^D."""

    def __call__(self, z: FloatArray) -> FloatArray: ...


class InitialDensity(Protocol):
    """A Z^D-periodic initial density rho with known L1 and L2 norms on the torus."""

    @property
    def l1_norm(self) -> float: ...

    @property
    def l2_norm(self) -> float: ...

    def __call__(self, x: FloatArray) -> FloatArray: ...
