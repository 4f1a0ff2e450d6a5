from typing import TypeAlias, TypeVar

import numpy as np
import numpy.typing as npt

TResult = TypeVar("TResult")

FloatArray: TypeAlias = npt.NDArray[np.float64]
IntArray: TypeAlias = npt.NDArray[np.int64]
BoolArray: TypeAlias = npt.NDArray[np.bool_]
ComplexArray: TypeAlias = npt.NDArray[np.complex128]
