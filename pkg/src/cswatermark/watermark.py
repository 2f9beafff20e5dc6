"""Pseudo-random watermarks in the level-2 HL Haar subband.

The watermark is a standard-normal sequence drawn from numpy's PCG64
generator, one value per HL2 coefficient (row-major).  Detection is blind:
the correlator only needs the test image and the key.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .image_core import DimensionError, as_image, check_divisible
from .transforms import haar_inverse, haar_pyramid

DISTRIBUTION = "normal"
MAX_SEED = 2 ** 64 - 1


class KeyMismatchError(ValueError):
    """Key length does not match the image's HL2 coefficient count."""


def _check_seed(seed) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise TypeError(f"seed must be an integer, got {type(seed).__name__}")
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed {seed} outside the unsigned 64-bit range")
    return seed


@dataclass(frozen=True)
class WatermarkKey:
    seed: int
    length: int

    def __post_init__(self):
        object.__setattr__(self, "seed", _check_seed(self.seed))
        if int(self.length) <= 0:
            raise ValueError(f"key length must be positive, got {self.length}")
        object.__setattr__(self, "length", int(self.length))

    @classmethod
    def for_image(cls, seed: int, image) -> "WatermarkKey":
        return cls(seed, hl2_size(image))

    def to_dict(self) -> dict:
        return {"seed": self.seed, "length": self.length, "distribution": DISTRIBUTION}

    @classmethod
    def from_dict(cls, data: dict) -> "WatermarkKey":
        dist = data.get("distribution", DISTRIBUTION)
        if dist != DISTRIBUTION:
            raise ValueError(f"unsupported watermark distribution {dist!r}")
        return cls(int(data["seed"]), int(data["length"]))

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def loads(cls, text: str) -> "WatermarkKey":
        return cls.from_dict(json.loads(text))


class Method(str, Enum):
    ADDITIVE = "additive"
    MULTIPLICATIVE = "multiplicative"


@dataclass(frozen=True)
class EmbedConfig:
    alpha: float = 7.0
    method: Method = Method.ADDITIVE

    def __post_init__(self):
        if not self.alpha >= 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        object.__setattr__(self, "method", Method(self.method))


def hl2_size(image) -> int:
    h, w = as_image(image).shape
    return (h // 4) * (w // 4)


def generate_sequence(key: WatermarkKey) -> np.ndarray:
    """Deterministic N(0, 1) sequence for ``key`` (PCG64 seeded with key.seed)."""
    rng = np.random.Generator(np.random.PCG64(key.seed))
    return rng.standard_normal(key.length)


def _hl2_for(image, key: WatermarkKey):
    x = as_image(image)
    check_divisible(x, 4)
    pyramid = haar_pyramid(x)
    if pyramid.hl2.size != key.length:
        raise KeyMismatchError(
            f"key length {key.length} != HL2 coefficient count {pyramid.hl2.size}")
    return pyramid


def embed(image, key: WatermarkKey, config: EmbedConfig = EmbedConfig()) -> np.ndarray:
    """Embed the key's sequence into HL2 and return the (unclamped) image.

    Additive: ``c + alpha * w``.  Multiplicative: ``c + alpha * w * |c|``.
    """
    pyramid = _hl2_for(image, key)
    hl2 = pyramid.hl2
    mark = generate_sequence(key).reshape(hl2.shape)
    if config.method is Method.ADDITIVE:
        marked = hl2 + config.alpha * mark
    else:
        marked = hl2 + config.alpha * mark * np.abs(hl2)
    return haar_inverse(pyramid.replace_hl2(marked))


def correlate(image, key: WatermarkKey) -> float:
    """Correlator response: inner product of the sequence with HL2 (row-major)."""
    pyramid = _hl2_for(image, key)
    return float(pyramid.hl2.ravel() @ generate_sequence(key))


def _correlate_many(hl2: np.ndarray, keys) -> list[float]:
    flat = hl2.ravel()
    return [float(flat @ generate_sequence(k)) for k in keys]


@dataclass
class DetectionReport:
    right_seed: int
    right_response: float
    wrong_seeds: list[int]
    wrong_responses: list[float]
    decision: bool = field(init=False)
    separation: float = field(init=False)

    def __post_init__(self):
        if not self.wrong_responses:
            raise ValueError("at least one wrong key is required")
        wrong = np.asarray(self.wrong_responses)
        self.decision = bool(self.right_response > wrong.max())
        gap = self.right_response - float(wrong.mean())
        spread = float(wrong.std())
        if spread > 0:
            self.separation = gap / spread
        else:
            self.separation = 0.0 if gap == 0 else math.copysign(math.inf, gap)

    @property
    def wrong_key_count(self) -> int:
        return len(self.wrong_responses)

    @property
    def max_wrong_response(self) -> float:
        return max(self.wrong_responses)

    def to_dict(self) -> dict:
        sep = self.separation
        return {
            "right_seed": self.right_seed,
            "right_response": self.right_response,
            "wrong_seeds": list(self.wrong_seeds),
            "wrong_responses": list(self.wrong_responses),
            "wrong_key_count": self.wrong_key_count,
            "max_wrong_response": self.max_wrong_response,
            "decision": self.decision,
            "separation": sep if math.isfinite(sep) else ("inf" if sep > 0 else "-inf"),
        }


def detect(image, right_key: WatermarkKey, wrong_key_seeds) -> DetectionReport:
    """Compare the right key's response against a wrong-key ensemble.

    The watermark is declared present iff the right response strictly
    exceeds every wrong response.
    """
    seeds = [_check_seed(s) for s in wrong_key_seeds]
    if not seeds:
        raise ValueError("wrong_key_seeds must not be empty")
    if right_key.seed in seeds:
        raise ValueError(f"wrong-key seeds contain the right seed {right_key.seed}")
    pyramid = _hl2_for(image, right_key)
    wrong_keys = [WatermarkKey(s, right_key.length) for s in seeds]
    right, *wrong = _correlate_many(pyramid.hl2, [right_key, *wrong_keys])
    return DetectionReport(right_key.seed, right, seeds, wrong)


def wrong_seed_range(right_seed: int, count: int, base: int) -> list[int]:
    """``count`` seeds ``base+1, base+2, ...`` skipping ``right_seed``."""
    if count < 1:
        raise ValueError(f"wrong-key count must be >= 1, got {count}")
    seeds = []
    s = base
    while len(seeds) < count:
        s += 1
        if s != right_seed:
            seeds.append(_check_seed(s))
    return seeds


def analytic_embed_psnr(key: WatermarkKey, alpha: float, width: int, height: int) -> float:
    """Expected PSNR of additive embedding under the orthonormal Haar transform."""
    energy = float(np.sum(generate_sequence(key) ** 2))
    if alpha == 0 or energy == 0:
        return math.inf
    if width * height <= 0:
        raise DimensionError("image must be non-empty")
    return 10.0 * math.log10(255.0 ** 2 * width * height / (alpha ** 2 * energy))
