"""Single-error detection figures of merit for real linear codes."""
from .channel import ChannelParams, InjectionSpec, Verdict, compliance_check, detect, transmit
from .constructions import block_code, divisible_pairs, extremal_vector, problem_b_code, random_code
from .heights import (CodeSpec, HeightReport, applicable_methods, code_h1, code_h1_primal, gamma_threshold,
                      h1_lower_bound, vector_m_height)
from .zonotope import Zonotope

__version__ = "0.1.0"
