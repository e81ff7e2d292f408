"""Configuration management for chainopuc."""

from dataclasses import dataclass, field
from typing import Optional, Tuple

COMMANDS = (
    "pair2alpha",
    "alpha2pair",
    "polys",
    "zeros",
    "quadrature",
    "cdf",
    "periodic",
    "weight",
    "transform",
    "demo",
    "check",
)


@dataclass
class ChainConfig:
    """Configuration for chain-sequence parameter computations.

    Attributes:
        tol: Convergence tolerance on M_0 between successive tail depths
        initial_depth: First tail depth used by the doubling method
        max_depth: Largest tail depth tried before giving up
        method: "fixed_point" (solve the period map) or "doubling" (truncated backward iteration)
    """

    tol: float = 1e-12
    initial_depth: int = 64
    max_depth: int = 2**20
    method: str = "fixed_point"

    def __post_init__(self):
        """Validate chain configuration parameters."""
        if self.tol <= 0:
            raise ValueError("tol must be > 0")
        if self.initial_depth < 1:
            raise ValueError("initial_depth must be >= 1")
        if self.max_depth < self.initial_depth:
            raise ValueError("max_depth must be >= initial_depth")
        if self.method not in ("fixed_point", "doubling"):
            raise ValueError("method must be one of: fixed_point, doubling")


@dataclass
class BijectionConfig:
    """Configuration for the pair <-> Verblunsky coefficient maps.

    Attributes:
        boundary_eps: Smallest admissible 1 - Re(tau alpha) and 1 - |alpha|
        renormalize_every: Unimodular products are divided by their modulus this often
        round_trip_tol: Agreement required by round-trip cross-checks
    """

    boundary_eps: float = 1e-14
    renormalize_every: int = 64
    round_trip_tol: float = 1e-10

    def __post_init__(self):
        """Validate bijection configuration parameters."""
        if self.boundary_eps <= 0:
            raise ValueError("boundary_eps must be > 0")
        if self.renormalize_every < 1:
            raise ValueError("renormalize_every must be >= 1")
        if self.round_trip_tol <= 0:
            raise ValueError("round_trip_tol must be > 0")


@dataclass
class PolynomialConfig:
    """Configuration for the polynomial families.

    Attributes:
        max_coeff_degree: Largest degree for which coefficient arrays are built
        rescale: Rescale recurrence iterates by powers of two during evaluation
    """

    max_coeff_degree: int = 64
    rescale: bool = True

    def __post_init__(self):
        """Validate polynomial configuration parameters."""
        if not (1 <= self.max_coeff_degree <= 1024):
            raise ValueError("max_coeff_degree must be between 1 and 1024")


@dataclass
class ZeroConfig:
    """Configuration for the interlacing zero finder.

    Attributes:
        tol: Absolute bisection width in x
        cluster_factor: Brackets closer than cluster_factor * tol raise a ClusterWarning
        theta_refine_margin: Zeros with |x| > 1 - margin are refined in theta
        hull_gap: Angular gap (radians) that separates clusters in the zero-arc hull
        collapse_floor: Bracket endpoints with |W_k| below collapse_floor * max |W_k| over the
            level may take the alternating sign (a zero closer than machine precision)
    """

    tol: float = 1e-13
    cluster_factor: float = 10.0
    theta_refine_margin: float = 1e-6
    hull_gap: float = 0.2
    collapse_floor: float = 1e-6

    def __post_init__(self):
        """Validate zero finder configuration parameters."""
        if self.tol <= 0:
            raise ValueError("tol must be > 0")
        if self.cluster_factor < 1:
            raise ValueError("cluster_factor must be >= 1")
        if not (0 < self.theta_refine_margin < 1):
            raise ValueError("theta_refine_margin must be between 0 and 1")
        if self.hull_gap <= 0:
            raise ValueError("hull_gap must be > 0")
        if not (0 <= self.collapse_floor < 1):
            raise ValueError("collapse_floor must be in [0, 1)")


@dataclass
class QuadratureConfig:
    """Configuration for the discrete approximating measures.

    Attributes:
        node_eps: Smallest admissible |R_n(1)| relative to max |R_n| on the unit circle
        weight_floor: Weights at or below this value raise NegativeWeightError
        sum_tol: Allowed deviation of the weight sum from 1
        k_max: Number of moments reported by the CLI
    """

    node_eps: float = 1e-12
    weight_floor: float = -1e-14
    sum_tol: float = 1e-9
    k_max: int = 5

    def __post_init__(self):
        """Validate quadrature configuration parameters."""
        if self.node_eps <= 0:
            raise ValueError("node_eps must be > 0")
        if self.weight_floor > 0:
            raise ValueError("weight_floor must be <= 0")
        if self.sum_tol <= 0:
            raise ValueError("sum_tol must be > 0")
        if self.k_max < 0:
            raise ValueError("k_max must be >= 0")


@dataclass
class PeriodicConfig:
    """Configuration for periodic spectral analysis.

    Attributes:
        grid_per_period: Theta samples per unit of period when scanning for band edges
        root_tol: Absolute tolerance for band-edge and candidate refinement
        touch_tol: A local maximum of discriminant^2 - 4 within this of zero is a closed gap
        imag_tol: Largest admissible imaginary part of the discriminant
        candidate_tol: Largest admissible |phi_p* - phi_p| at a candidate
        tau_tol: Largest admissible |tau_p(w) - 1| at a candidate
        mass_tol: prod(q) >= 1 - mass_tol counts as "no pure point"
        series_terms_per_period: Periods summed by the series mass cross-check
    """

    grid_per_period: int = 4096
    root_tol: float = 1e-14
    touch_tol: float = 1e-8
    imag_tol: float = 1e-10
    candidate_tol: float = 1e-8
    tau_tol: float = 1e-10
    mass_tol: float = 1e-12
    series_terms_per_period: int = 10000

    def __post_init__(self):
        """Validate periodic analysis configuration parameters."""
        if self.grid_per_period < 16:
            raise ValueError("grid_per_period must be >= 16")
        for name in ("root_tol", "touch_tol", "imag_tol", "candidate_tol", "tau_tol", "mass_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        if self.series_terms_per_period < 1:
            raise ValueError("series_terms_per_period must be >= 1")


@dataclass
class OutputConfig:
    """Configuration for emitted artifacts.

    Attributes:
        format: One of json, csv, both
        directory: Directory for files written with format "both"
        samples: Default number of theta samples for sampled CSV outputs
    """

    format: str = "json"
    directory: str = "output"
    samples: int = 512

    def __post_init__(self):
        """Validate output configuration parameters."""
        if self.format not in ("json", "csv", "both"):
            raise ValueError("format must be one of: json, csv, both")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")


@dataclass
class ProcessingConfig:
    """Configuration for the invariant check suite.

    Attributes:
        max_workers: Parallel ThreadPoolExecutor workers (1-16)
        seed: Seed of the random generator that draws test pairs
        check_pairs: Random pairs drawn per check
        check_length: Length of each random pair
    """

    max_workers: int = 4
    seed: int = 20240607
    check_pairs: int = 50
    check_length: int = 40

    def __post_init__(self):
        """Validate processing configuration parameters."""
        if not (1 <= self.max_workers <= 16):
            raise ValueError("max_workers must be between 1 and 16")
        if self.check_pairs < 1:
            raise ValueError("check_pairs must be >= 1")
        if self.check_length < 2:
            raise ValueError("check_length must be >= 2")


@dataclass
class RunConfig:
    """Main configuration container for a single CLI invocation.

    Attributes:
        command: Subcommand to run (one of COMMANDS)
        input_source: Inline JSON, a path to a JSON file, or "-" for stdin
        n: Degree / level requested by polys, zeros, quadrature and cdf
        verbose: Enable detailed DEBUG-level logging
        output_dir: Explicit output directory (overrides output.directory)
        family: Polynomial family for polys ("R" or "Q")
        op: Transformation for transform ("conjugate", "unfold", "rotate")
        beta: Rotation parameter as (re, im)
        example: (c, b1, b2) for demo
        support_gap: Run the alternating-sign gap check in zeros
    """

    command: Optional[str] = None
    input_source: Optional[str] = None
    n: int = 10
    verbose: bool = False
    output_dir: Optional[str] = None
    family: str = "R"
    op: str = "conjugate"
    beta: Optional[Tuple[float, float]] = None
    example: Tuple[float, float, float] = (1.0, 0.3, 0.5)
    support_gap: bool = False

    # Nested configurations
    chain: ChainConfig = field(default_factory=ChainConfig)
    bijection: BijectionConfig = field(default_factory=BijectionConfig)
    polynomial: PolynomialConfig = field(default_factory=PolynomialConfig)
    zeros: ZeroConfig = field(default_factory=ZeroConfig)
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    periodic: PeriodicConfig = field(default_factory=PeriodicConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    processing: ProcessingConfig = field(default_factory=ProcessingConfig)

    def __post_init__(self):
        """Validate configuration parameters."""
        if self.command is not None and self.command not in COMMANDS:
            raise ValueError(f"command must be one of: {', '.join(COMMANDS)}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.family not in ("R", "Q"):
            raise ValueError("family must be one of: R, Q")
        if self.op not in ("conjugate", "unfold", "rotate"):
            raise ValueError("op must be one of: conjugate, unfold, rotate")
