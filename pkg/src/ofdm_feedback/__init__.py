"""Limited-feedback power and bit allocation over point-to-point OFDM links.

Layers, bottom to top: Rayleigh channel synthesis (`channel`), gain
quantization and feedback accounting (`quantizer`), node interpolation
(`interpolation`), power allocators (`power`), greedy QAM loading
(`bitloading`), capacity/BER metrics (`metrics`), and the experiment
harness and CLI that compose them (`harness`, `cli`).
"""

__version__ = "0.1.0"

from .bitloading import (
    BitLoadResult,
    greedy_bitload,
    qfunc,
    qfunc_inv,
    required_power,
    scale_to_budget,
)
from .channel import ChannelRealization, ChannelTaps, frequency_response, sample_taps
from .harness import (
    DEFAULT_SEED,
    SCHEMES,
    ExperimentRecord,
    SchemeConfig,
    figure_bundle,
    run_scheme,
    sweep,
)
from .interpolation import (
    EPS_GAIN,
    NodePlan,
    interpolate_linear,
    interpolate_quadratic,
    make_node_plan,
)
from .metrics import monte_carlo_mean, subcarrier_symbol_error, sum_capacity, system_ber
from .power import (
    PowerAllocation,
    cluster_averages,
    onoff_allocate,
    optimize_threshold,
    uniform_allocate,
    waterfill_allocate,
)
from .quantizer import (
    FeedbackWord,
    InsufficientFeedbackError,
    QuantizerSpec,
    bits_per_node,
    decode,
    encode,
    gain_quantizer,
    quantize,
)
