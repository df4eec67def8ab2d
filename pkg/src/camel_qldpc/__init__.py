"""CSS quantum LDPC codes whose 4-cycles all meet one appended qubit, with a
four-path decimated quaternary BP decoder and a Monte Carlo FER harness."""

__version__ = "0.1.0"

from .bp import DecoderConfig, bp2_decode, bp_decode, camel_decode, decimated_decode
from .codes import PRESETS, build_code, build_fg_code, build_qc_code, preset_code
from .css import CodeValidationError, CssCode, compute_syndrome, residual_in_stabilizer
from .distance import bounded_distance_search
from .io import load_code, save_code
from .sim import ChannelModel, SimulationSpec, run_point, run_sweep, sample_error

__all__ = [
    "ChannelModel",
    "CodeValidationError",
    "CssCode",
    "DecoderConfig",
    "PRESETS",
    "SimulationSpec",
    "bounded_distance_search",
    "bp2_decode",
    "bp_decode",
    "build_code",
    "build_fg_code",
    "build_qc_code",
    "camel_decode",
    "compute_syndrome",
    "decimated_decode",
    "load_code",
    "preset_code",
    "residual_in_stabilizer",
    "run_point",
    "run_sweep",
    "sample_error",
    "save_code",
]
