"""Monte Carlo estimates and delta-method error propagation.

A :class:`Linearized` value carries, for every sample set it was computed
from, the per-sample influence (first-order contribution) of each draw.  Two
estimates built on the *same* samples can be subtracted and the influence
arrays cancel sample by sample, which is how paired (common random number)
comparisons get their joint standard error.
"""

import math
from dataclasses import dataclass, field

import numpy as np


def ksum(values):
    """Compensated sum; exactly rounded and independent of ordering."""
    return math.fsum(np.asarray(values, dtype=float).ravel().tolist())


def kmean(values):
    v = np.asarray(values, dtype=float).ravel()
    return ksum(v) / v.size


@dataclass(frozen=True)
class MCEstimate:
    value: float
    stderr: float
    n_samples: int
    seed: int = 0
    transform: str = "none"
    p: float | None = None

    def __post_init__(self):
        if self.stderr < 0 or self.n_samples < 1:
            raise ValueError("invalid MCEstimate")

    def to_dict(self):
        return {
            "value": self.value,
            "stderr": self.stderr,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "transform": self.transform,
            "p": self.p,
        }


@dataclass(frozen=True)
class Linearized:
    value: float
    influence: dict = field(default_factory=dict)

    @classmethod
    def mean(cls, samples, key):
        x = np.asarray(samples, dtype=float).ravel()
        if x.size and np.all(x == x[0]):
            return cls(float(x[0]), {key: np.zeros(x.size)})
        m = kmean(x)
        return cls(m, {key: x - m})

    @classmethod
    def const(cls, value):
        return cls(float(value), {})

    def _chain(self, value, slope):
        return Linearized(float(value), {k: slope * v for k, v in self.influence.items()})

    def __add__(self, other):
        if not isinstance(other, Linearized):
            return Linearized(self.value + float(other), self.influence)
        infl = dict(self.influence)
        for k, v in other.influence.items():
            infl[k] = infl[k] + v if k in infl else v
        return Linearized(self.value + other.value, infl)

    __radd__ = __add__

    def __neg__(self):
        return self._chain(-self.value, -1.0)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Linearized) else -float(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Linearized):
            return self._chain(self.value * float(other), float(other))
        a = self._chain(self.value * other.value, other.value)
        b = other._chain(0.0, self.value)
        return a + b

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Linearized):
            return self * (1.0 / float(other))
        return self * other.pow(-1.0)

    def pow(self, e):
        e = float(e)
        return self._chain(self.value ** e, e * self.value ** (e - 1.0))

    __pow__ = pow

    def log(self):
        return self._chain(math.log(self.value), 1.0 / self.value)

    def exp(self):
        v = math.exp(self.value)
        return self._chain(v, v)

    @property
    def stderr(self):
        var = 0.0
        for v in self.influence.values():
            n = v.size
            if n > 1:
                var += ksum(v * v) / (n * (n - 1))
        return math.sqrt(var)

    def n_samples(self):
        return max((v.size for v in self.influence.values()), default=1)

    def estimate(self, seed=0, transform="none", p=None):
        return MCEstimate(self.value, self.stderr, self.n_samples(), seed, transform, p)


def power_mean(samples, p, key):
    """(mean x^p)^(1/p), or the geometric mean when p == 0, linearized."""
    logs = np.log(np.asarray(samples, dtype=float))
    if p == 0:
        return Linearized.mean(logs, key).exp()
    # expm1/log1p keep full precision as p -> 0, where x**p rounds to 1
    a = Linearized.mean(np.expm1(p * logs), key)
    value = math.exp(math.log1p(a.value) / p)
    return a._chain(value, value / (p * (1.0 + a.value)))
