"""Exact-arithmetic interference-alignment toolkit.

Submodules:

- :mod:`qalign.qfixed`: exact signed base-Q fixed-point numbers.
- :mod:`qalign.detchannel`: the shift-XOR deterministic interference
  channel and the propagation-delay slot model.
- :mod:`qalign.gauss`: the base-Q alignment scheme on the real Gaussian
  interference channel, with exact noise-free verification and Monte Carlo
  decoding under unit AWGN.
- :mod:`qalign.analysis`: exact power accounting, genie rates, and
  degrees-of-freedom estimation.
- :mod:`qalign.cli`: the ``qalign`` command-line harness.
"""

# NB: the qfixed() factory itself is not re-exported here so that the
# qalign.qfixed submodule stays importable under its own name.
from .qfixed import (
    QFixed,
    add,
    decimal_str,
    digit_at,
    quantize_real,
    render,
    scale_by_int,
    scale_by_power,
    sub,
    zero,
)
from .detchannel import (
    DelayReport,
    DetSpec,
    DetSymbol,
    delay_sim,
    det_decode,
    det_encode,
    det_output,
)
from .gauss import (
    ChannelSpec,
    Message,
    TrialStats,
    alphabet_bound,
    channel_output,
    decode_receiver,
    encode_signal,
    noise_free_output,
    run_trials,
    sample_awgn,
    verify_noise_free,
)
from .analysis import (
    DofEstimate,
    PowerReport,
    RateReport,
    SweepRow,
    dof_estimate,
    dof_theory,
    exact_power,
    genie_rate,
    power_scaling_check,
    sweep,
    wilson_interval,
)

__all__ = [name for name in dir() if not name.startswith("_")]
