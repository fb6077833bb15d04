"""Noise-plus-outlier channel ``y = c + eps + e`` and a single-error detector.

The detector flags ``y`` exactly when its syndrome leaves ``delta * S_H``, the
zonotope spanned by the parity-check columns. Bounded noise alone never
leaves that set, so there are no false alarms; a lone outlier larger than
``(2 h1 + 2) delta`` always does.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import numerics as nx
from . import zonotope as zt
from .heights import CodeSpec

# float slack on the syndrome when delta = 0 (it must then vanish)
ZERO_SYNDROME_TOL = 1e-9


class Verdict(str, enum.Enum):
    EMPTY = "empty"
    DETECT = "detect"


@dataclass(frozen=True)
class ChannelParams:
    delta: float
    big_delta: float

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if self.big_delta < 0:
            raise ValueError("big_delta must be nonnegative")


@dataclass(frozen=True)
class InjectionSpec:
    entries: tuple = ()

    def __post_init__(self):
        positions = [p for p, _ in self.entries]
        if len(set(positions)) != len(positions):
            raise ValueError("injection positions must be distinct")
        if any(p < 0 for p in positions):
            raise ValueError("negative injection position")

    @classmethod
    def single(cls, position: int, magnitude) -> "InjectionSpec":
        return cls(((position, magnitude),))

    def vector(self, n: int, mode: str = nx.FLOAT) -> np.ndarray:
        e = nx.zeros(n, mode)
        for p, mag in self.entries:
            if p >= n:
                raise ValueError(f"injection position {p} out of range for n={n}")
            e[p] = nx.scalar(mag, mode)
        e.setflags(write=False)
        return e


@dataclass(frozen=True)
class TransmissionTrace:
    codeword: np.ndarray
    noise: np.ndarray
    outliers: np.ndarray
    received: np.ndarray
    verdict: Verdict


@dataclass(frozen=True)
class ComplianceVerdict:
    passed: bool
    clause: str | None = None

    def __str__(self):
        return "PASS" if self.passed else f"FAIL({self.clause})"


def encode(code: CodeSpec, message) -> np.ndarray:
    """Codeword ``G m`` for the kernel basis ``G`` of the parity check."""
    G = code.generator()
    m = nx.as_array(message, code.mode)
    if m.shape != (code.k,):
        raise ValueError(f"message must have length k={code.k}, got {m.shape}")
    return nx.matmul(G, m)


def detect(code: CodeSpec, y, delta) -> Verdict:
    y = nx.as_array(y, code.mode)
    if y.shape != (code.n,):
        raise ValueError(f"received word must have length n={code.n}, got {y.shape}")
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    s = code.syndrome(y)
    if delta == 0:
        if code.mode == nx.RATIONAL:
            clean = all(v == 0 for v in s)
        else:
            clean = bool(np.max(np.abs(s)) <= ZERO_SYNDROME_TOL * (1 + np.max(np.abs(y))))
        return Verdict.EMPTY if clean else Verdict.DETECT
    inside = zt.contains(zt.Zonotope(code.parity_check), s, delta)
    return Verdict.EMPTY if inside else Verdict.DETECT


def transmit(code: CodeSpec, message, params: ChannelParams, inj: InjectionSpec, seed: int,
             noise=None) -> TransmissionTrace:
    """Send ``encode(message)`` through the channel and run :func:`detect`.

    Noise is i.i.d. uniform on ``[-delta, delta]`` from ``seed`` unless an
    explicit ``noise`` vector (e.g. an adversarial one) is given.
    """
    mode = code.mode
    c = encode(code, message)
    if noise is None:
        rng = np.random.default_rng(seed)
        noise = rng.uniform(-float(params.delta), float(params.delta), code.n)
    eps = nx.as_array(noise, mode)
    if eps.shape != (code.n,):
        raise ValueError("noise vector has the wrong length")
    e = inj.vector(code.n, mode)
    y = c + eps + e
    y.setflags(write=False)
    return TransmissionTrace(c, eps, e, y, detect(code, y, params.delta))


def compliance_check(trace: TransmissionTrace, params: ChannelParams) -> ComplianceVerdict:
    """Check the (tau=0, sigma=1) decoder conditions on one transmission.

    D1: an error-free word must not be flagged.
    D2: an unflagged word must carry no outlier above ``big_delta``.
    """
    e = trace.outliers
    if all(v == 0 for v in e) and trace.verdict != Verdict.EMPTY:
        return ComplianceVerdict(False, "D1")
    if trace.verdict == Verdict.EMPTY and any(abs(v) > params.big_delta for v in e):
        return ComplianceVerdict(False, "D2")
    return ComplianceVerdict(True)


def masking_witness(code: CodeSpec, position: int, magnitude, delta):
    """Noise ``eps`` with ``|eps| <= delta`` that hides a single outlier from :func:`detect`.

    Exists iff ``magnitude * h_position`` lies in ``2 delta S_H``; then
    ``eps = -delta a`` for a decomposition ``magnitude * h_position = 2 delta H a``.
    Returns ``(eps, e)`` or None.
    """
    mode = code.mode
    e = InjectionSpec.single(position, magnitude).vector(code.n, mode)
    target = code.syndrome(e)
    alpha = zt.decompose(zt.Zonotope(code.parity_check), target, 2 * nx.scalar(delta, mode))
    if alpha is None:
        return None
    eps = nx.as_array([-nx.scalar(delta, mode) * a for a in alpha], mode)
    if mode == nx.FLOAT:
        eps = nx.as_array(np.clip(eps, -float(delta), float(delta)), mode)
    return eps, e
