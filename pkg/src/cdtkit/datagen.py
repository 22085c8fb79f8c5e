"""Synthetic signal classes: mother densities deformed by confound families.

A class member is ``h'(x) * mother(h(x))`` for a monotone differentiable
deformation ``h`` drawn from the family; translations and dilations of the
signal are the affine special cases. Closure of the family under inversion,
convex combination of inverses, and composition is what makes the transformed
classes linearly separable, so a numeric closure audit ships alongside the
samplers.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from . import cdt as cdt_mod
from . import density as dens
from .classify import LabeledDataset
from .density import DiscreteDensity
from .errors import DomainEscape

__all__ = [
    "AffineMap",
    "CustomMap",
    "ConfoundFamily",
    "GenerativeSpec",
    "ClosureReport",
    "pushforward",
    "convolve_noise",
    "sample_class",
    "verify_family_closure",
    "texture_simulation",
    "texture_prototypes",
    "TEXTURE_TRANSLATION_RANGE",
    "TEXTURE_SCALING_RANGE",
]

TEXTURE_TRANSLATION_RANGE = (0.0, 0.5)
TEXTURE_SCALING_RANGE = (0.6, 1.67)


@dataclass(frozen=True)
class AffineMap:
    """Deformation h(x) = a * (x - mu): translation by mu, dilation by a."""

    a: float = 1.0
    mu: float = 0.0

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("slope must be positive")

    def __call__(self, x):
        return self.a * (np.asarray(x, dtype=np.float64) - self.mu)

    def inverse(self, y):
        return np.asarray(y, dtype=np.float64) / self.a + self.mu

    def prime(self, x):
        return np.full_like(np.asarray(x, dtype=np.float64), self.a)

    @property
    def params(self) -> dict:
        return {"a": self.a, "mu": self.mu}


@dataclass(frozen=True)
class CustomMap:
    """User-supplied strictly increasing differentiable deformation."""

    name: str
    fn: callable
    inv: callable
    deriv: callable

    def __call__(self, x):
        return self.fn(np.asarray(x, dtype=np.float64))

    def inverse(self, y):
        return self.inv(np.asarray(y, dtype=np.float64))

    def prime(self, x):
        return self.deriv(np.asarray(x, dtype=np.float64))

    @property
    def params(self) -> dict:
        return {"name": self.name}


@dataclass(frozen=True)
class ConfoundFamily:
    """A distribution over deformations.

    ``kind`` is one of "translation", "scaling", "affine" (parameters drawn
    uniformly from ``parameter_ranges``) or "custom" (uniform choice among
    ``members``). The three affine kinds satisfy the closure conditions by
    construction; custom families are whatever the caller ships and should be
    audited with :func:`verify_family_closure`.
    """

    kind: str
    parameter_ranges: dict = field(default_factory=dict)
    rng_seed: int = 0
    members: tuple = ()

    def __post_init__(self):
        if self.kind not in ("translation", "scaling", "affine", "custom"):
            raise ValueError(f"unknown family kind {self.kind!r}")
        if self.kind == "custom" and not self.members:
            raise ValueError("custom family needs at least one member")
        for key in ("mu", "a"):
            if key in self.parameter_ranges:
                lo, hi = self.parameter_ranges[key]
                if hi < lo:
                    raise ValueError(f"empty range for {key!r}")
        if self.kind in ("scaling", "affine"):
            lo, _ = self.parameter_ranges.get("a", (1.0, 1.0))
            if lo <= 0:
                raise ValueError("scaling range must be positive")

    def _draw(self, rng: np.random.Generator, key: str, default: float) -> float:
        if key not in self.parameter_ranges:
            return default
        lo, hi = self.parameter_ranges[key]
        return float(rng.uniform(lo, hi))

    def sample(self, rng: np.random.Generator):
        if self.kind == "custom":
            return self.members[rng.integers(len(self.members))]
        if self.kind == "translation":
            return AffineMap(1.0, self._draw(rng, "mu", 0.0))
        if self.kind == "scaling":
            return AffineMap(self._draw(rng, "a", 1.0), 0.0)
        return AffineMap(self._draw(rng, "a", 1.0), self._draw(rng, "mu", 0.0))


@dataclass(frozen=True)
class GenerativeSpec:
    """Two mother densities plus the confound family that deforms them."""

    mother_p: DiscreteDensity
    mother_q: DiscreteDensity
    family: ConfoundFamily
    samples_per_class: int
    noise_density: DiscreteDensity | None = None

    def __post_init__(self):
        if self.samples_per_class < 1:
            raise ValueError("samples_per_class must be positive")
        if dens.l1_distance(self.mother_p, self.mother_q) <= 1e-6:
            raise ValueError("mother densities must differ")

    def mother(self, which) -> DiscreteDensity:
        return self.mother_p if which in (0, "p") else self.mother_q


def pushforward(mother: DiscreteDensity, h, grid_start: float, spacing: float, n_bins: int) -> DiscreteDensity:
    """Density ``h'(x) * mother(h(x))`` binned exactly onto a uniform grid.

    Bin masses are CDF differences through the deformation, so no quadrature
    error enters; mass the grid misses is cropped and the rest renormalized.

    Raises
    ------
    DomainEscape
        If the deformation leaves essentially no mass on the grid.
    """
    edges = grid_start + spacing * (np.arange(n_bins + 1) - 0.5)
    c = dens.cdf(mother)
    j = dens.cdf_value(c, h(edges))
    masses = np.clip(np.diff(j), 0.0, None)
    total = masses.sum()
    if total <= 1e-9:
        raise DomainEscape("deformation maps the grid outside the mother's support")
    return DiscreteDensity(masses / (total * spacing), grid_start, spacing)


def convolve_noise(d: DiscreteDensity, noise: DiscreteDensity) -> DiscreteDensity:
    """Blur a density by linear (non-circular) convolution with a noise density."""
    if abs(d.spacing - noise.spacing) > 1e-12 * d.spacing:
        raise ValueError("signal and noise must share bin spacing")
    masses = np.convolve(d.bin_masses, noise.bin_masses)
    start = d.grid_start + noise.grid_start
    total = masses.sum()
    return DiscreteDensity(masses / (total * d.spacing), start, d.spacing)


def sample_class(spec: GenerativeSpec, which) -> list[DiscreteDensity]:
    """Draw class members: independent deformations of the mother density,
    regridded onto the mother's grid (and optionally blurred by noise)."""
    mother = spec.mother(which)
    class_idx = 0 if which in (0, "p") else 1
    out = []
    for i in range(spec.samples_per_class):
        rng = np.random.default_rng(
            np.random.SeedSequence([spec.family.rng_seed, class_idx, i])
        )
        h = spec.family.sample(rng)
        sample = pushforward(mother, h, mother.grid_start, mother.spacing, mother.n_bins)
        if spec.noise_density is not None:
            blurred = convolve_noise(sample, spec.noise_density)
            sample = dens.regrid(blurred, mother.grid_start, mother.spacing, mother.n_bins)
        out.append(sample)
    return out


@dataclass
class ClosureReport:
    """Numeric audit of the closure conditions a confound family must satisfy."""

    kind: str
    trials: int
    violations: dict
    tolerance: float = 1e-8

    @property
    def failed_checks(self) -> list[str]:
        return sorted(k for k, v in self.violations.items() if v > self.tolerance)

    @property
    def zero_violations(self) -> bool:
        return not self.failed_checks


def _probe_grid(lo: float = -2.0, hi: float = 3.0, n: int = 257) -> np.ndarray:
    return np.linspace(lo, hi, n)


def _monotone_violation(values: np.ndarray) -> float:
    return float(max(0.0, -np.min(np.diff(values))))


def _membership_residual(family: ConfoundFamily, xs: np.ndarray, ys: np.ndarray) -> float:
    """Distance from a derived map to the nearest family member.

    Affine kinds fit the admissible line exactly; custom families compare
    against each shipped member pointwise.
    """
    if family.kind == "translation":
        offset = np.mean(ys - xs)
        return float(np.max(np.abs(ys - (xs + offset))))
    if family.kind == "scaling":
        slope = float(np.dot(xs, ys) / np.dot(xs, xs))
        resid = np.max(np.abs(ys - slope * xs))
        return float(resid if slope > 0 else np.inf)
    if family.kind == "affine":
        slope, intercept = np.polyfit(xs, ys, 1)
        resid = np.max(np.abs(ys - (slope * xs + intercept)))
        return float(resid if slope > 0 else np.inf)
    best = np.inf
    for member in family.members:
        best = min(best, float(np.max(np.abs(ys - member(xs)))))
    return best


def verify_family_closure(family: ConfoundFamily, trials: int = 32) -> ClosureReport:
    """Sample pairs of deformations and check the closure conditions numerically.

    Checks, per trial: the inverse is monotone with a positive derivative;
    convex combinations of inverses are monotone; compositions are monotone;
    and each derived map still belongs to the family. Violations are reported,
    not raised.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = np.random.default_rng(np.random.SeedSequence([family.rng_seed, 0xC105]))
    xs = _probe_grid()
    keys = (
        "inverse_monotonicity",
        "inverse_derivative",
        "inverse_membership",
        "mixture_monotonicity",
        "mixture_membership",
        "composition_monotonicity",
        "composition_membership",
    )
    worst = dict.fromkeys(keys, 0.0)
    for _ in range(trials):
        h1 = family.sample(rng)
        h2 = family.sample(rng)
        lam = float(rng.uniform(0.05, 0.95))
        ys = h1(xs)

        inv1 = h1.inverse(ys)
        worst["inverse_monotonicity"] = max(
            worst["inverse_monotonicity"], _monotone_violation(inv1)
        )
        deriv = np.gradient(inv1, ys)
        worst["inverse_derivative"] = max(
            worst["inverse_derivative"], float(max(0.0, -np.min(deriv)))
        )
        worst["inverse_membership"] = max(
            worst["inverse_membership"], _membership_residual(family, ys, inv1)
        )

        mix = lam * h1.inverse(ys) + (1.0 - lam) * h2.inverse(ys)
        worst["mixture_monotonicity"] = max(
            worst["mixture_monotonicity"], _monotone_violation(mix)
        )
        worst["mixture_membership"] = max(
            worst["mixture_membership"], _membership_residual(family, ys, mix)
        )

        comp = h1(h2(xs))
        worst["composition_monotonicity"] = max(
            worst["composition_monotonicity"], _monotone_violation(comp)
        )
        worst["composition_membership"] = max(
            worst["composition_membership"], _membership_residual(family, xs, comp)
        )
    return ClosureReport(kind=family.kind, trials=trials, violations=worst)


def texture_prototypes() -> tuple[DiscreteDensity, DiscreteDensity]:
    """The two bundled prototype histograms the texture simulation deforms."""
    protos = []
    for name in ("texture_prototype_a.csv", "texture_prototype_b.csv"):
        with resources.files("cdtkit.data").joinpath(name).open() as fh:
            row = next(csv.reader(fh))
        values = np.array([float(v) for v in row])
        spacing = 1.0 / values.size
        protos.append(
            dens.from_samples(values, 0.5 * spacing, spacing, epsilon_floor=0.0)
        )
    return protos[0], protos[1]


def texture_simulation(
    seed: int, grid_size: int = 256, cdt_size: int = 256
) -> tuple[LabeledDataset, LabeledDataset]:
    """Histogram classes under random brightness and contrast confounds.

    Per class: 8 brightness translations drawn from [0, 0.5] crossed with 8
    contrast scalings drawn from [0.6, 1.67], yielding 64 samples per class
    on a shared working grid. Returns the raw-histogram feature matrix and
    the transformed feature matrix (uniform reference), both labeled.
    """
    proto_a, proto_b = texture_prototypes()
    # working domain holds every deformed support: [mu, 1/a + mu]
    lo_a = TEXTURE_SCALING_RANGE[0]
    hi_mu = TEXTURE_TRANSLATION_RANGE[1]
    width = 1.0 / lo_a + hi_mu
    spacing = width / grid_size
    grid_start = 0.5 * spacing
    ref = cdt_mod.ReferenceDensity.uniform()

    raw_rows, cdt_rows, labels = [], [], []
    for class_idx, proto in ((0, proto_a), (1, proto_b)):
        rng = np.random.default_rng(np.random.SeedSequence([seed, class_idx]))
        mus = rng.uniform(*TEXTURE_TRANSLATION_RANGE, size=8)
        scales = rng.uniform(*TEXTURE_SCALING_RANGE, size=8)
        for mu in mus:
            for a in scales:
                h = AffineMap(a, mu)
                sample = pushforward(proto, h, grid_start, spacing, grid_size)
                raw_rows.append(sample.values)
                cdt_rows.append(cdt_mod.forward(sample, ref, cdt_size).values)
                labels.append(class_idx)
    labels = np.array(labels)
    return (
        LabeledDataset(np.vstack(raw_rows), labels),
        LabeledDataset(np.vstack(cdt_rows), labels),
    )
